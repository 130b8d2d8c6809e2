#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cardinal/common.hpp"
#include "cardinal/util.hpp"

namespace cardinal {

inline constexpr const char* kLibraryVersion = "cardinal 0.1.0";

struct ReportRow {
  double h;
  double error;
  double target_norm;
  double ratio;  // error / (h^k * target_norm)
};

struct QRow {
  double h;
  double q;
};

struct ErrorReport {
  std::string target_id;
  double p = 2.0;
  int k = 0;
  uint64_t seed = 0;
  std::vector<ReportRow> rows;
  double fitted_order = 0.0;
  bool degenerate = false;
  std::vector<QRow> q_factors;
  std::vector<std::pair<std::string, std::string>> config_echo;
};

// Least-squares order over the last four usable dyadic levels.  Rows whose
// error sits at the numerical floor are excluded; a fit needs three.
inline double fit_order(const std::vector<ReportRow>& rows,
                        bool* degenerate = nullptr) {
  std::vector<double> lh, le;
  double scale = 0.0;
  for (const auto& r : rows) scale = std::max(scale, r.target_norm);
  for (const auto& r : rows) {
    if (r.error > 1e-14 * std::max(scale, 1e-300)) {
      lh.push_back(std::log(r.h));
      le.push_back(std::log(r.error));
    }
  }
  if (lh.size() > 4) {
    lh.erase(lh.begin(), lh.end() - 4);
    le.erase(le.begin(), le.end() - 4);
  }
  if (lh.size() < 3) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  if (degenerate) *degenerate = false;
  return linear_fit(lh, le).slope;
}

inline std::string format_p(double p) {
  return std::isinf(p) ? "inf" : format_g17(p);
}

// One row per (h, metric); configuration echoed in the header block.
inline void emit_report_csv(const ErrorReport& report, std::ostream& os) {
  os << "key,value\n";
  os << "target," << report.target_id << "\n";
  os << "p," << format_p(report.p) << "\n";
  os << "k," << report.k << "\n";
  os << "seed," << report.seed << "\n";
  os << "version," << kLibraryVersion << "\n";
  for (const auto& [key, value] : report.config_echo)
    os << "config." << key << "," << value << "\n";
  os << "metric,h,value\n";
  for (const auto& r : report.rows) {
    os << "error," << format_g17(r.h) << "," << format_g17(r.error) << "\n";
    os << "target_norm," << format_g17(r.h) << ","
       << format_g17(r.target_norm) << "\n";
    os << "ratio," << format_g17(r.h) << "," << format_g17(r.ratio) << "\n";
  }
  for (const auto& q : report.q_factors)
    os << "q_factor," << format_g17(q.h) << "," << format_g17(q.q) << "\n";
  os << "fitted_order,," << format_g17(report.fitted_order) << "\n";
  os << "degenerate,," << (report.degenerate ? 1 : 0) << "\n";
}

inline void emit_report_json(const ErrorReport& report, std::ostream& os) {
  nlohmann::ordered_json j;
  j["target"] = report.target_id;
  j["p"] = format_p(report.p);
  j["k"] = report.k;
  j["seed"] = report.seed;
  j["version"] = kLibraryVersion;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.config_echo) cfg[key] = value;
  j["config"] = cfg;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"h", r.h},
                    {"error", r.error},
                    {"target_norm", r.target_norm},
                    {"ratio", r.ratio}});
  j["rows"] = rows;
  nlohmann::ordered_json qs = nlohmann::ordered_json::array();
  for (const auto& q : report.q_factors)
    qs.push_back({{"h", q.h}, {"q", q.q}});
  j["q_factors"] = qs;
  j["fitted_order"] = report.fitted_order;
  j["degenerate"] = report.degenerate;
  os << j.dump(2) << "\n";
}

inline void emit_report(const ErrorReport& report, const std::string& format,
                        const std::string& path) {
  require(format == "csv" || format == "json",
          "emit_report: format must be csv or json");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("emit_report: cannot open " + path);
  if (format == "csv")
    emit_report_csv(report, os);
  else
    emit_report_json(report, os);
  os.flush();
  if (!os) throw IoError("emit_report: write failed for " + path);
}

// Bundled CSV reader used by the round-trip tests and the CLI.
inline std::vector<std::vector<std::string>> read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

inline std::vector<std::vector<std::string>> read_csv_file(
    const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_csv: cannot open " + path);
  return read_csv(is);
}

}  // namespace cardinal
