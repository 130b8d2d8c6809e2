#pragma once

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "cardinal/experiments.hpp"

namespace cardinal {

struct VerifyCheck {
  std::string name;
  std::string value;
  bool pass = false;
};

struct VerifyReport {
  uint64_t seed = 0;
  std::vector<VerifyCheck> checks;
  bool all_pass = true;

  void add(const std::string& name, double value, bool pass) {
    checks.push_back({name, format_g17(value), pass});
    all_pass = all_pass && pass;
  }
};

// Fast cross-module invariant battery; deterministic for a fixed seed and
// thread count.
inline VerifyReport verify_suite(uint64_t seed, int threads = 1) {
  (void)threads;  // all sections below are cheap enough to run serially
  VerifyReport report;
  report.seed = seed;

  // multiplier partition of unity
  {
    std::mt19937_64 rng(splitmix64(seed));
    for (double h : {1.0, 0.5}) {
      const auto ctx = make_multiplier_context(h);
      std::uniform_real_distribution<double> dist(-10.0 * kPi / h,
                                                  10.0 * kPi / h);
      double worst = 0.0;
      for (int t = 0; t < 40; ++t) {
        const double xi = dist(rng);
        const int radius =
            static_cast<int>(std::ceil(std::abs(xi) * h / (2.0 * kPi))) +
            ctx.series_radius + 2;
        worst = std::max(worst, std::abs(alias_sum(ctx, xi, radius) - 1.0));
      }
      report.add("partition_defect_h" + format_g17(h), worst, worst < 1e-10);
    }
  }

  // ||m'||_1 identity
  for (double h : {1.0, 0.5}) {
    const auto ctx = make_multiplier_context(h);
    const double integral =
        2.0 * adaptive_simpson(
                  [&](double xi) {
                    return std::abs(multiplier_prime(ctx, xi));
                  },
                  0.0, kPi / h + 13.0, 1e-11);
    const double expected = 2.0 * multiplier(ctx, 0.0);
    const double rel = std::abs(integral - expected) / expected;
    report.add("mprime_l1_rel_h" + format_g17(h), rel, rel < 1e-6);
  }

  // monotone decrease
  {
    const auto ctx = make_multiplier_context(0.75);
    int violations = 0;
    double prev = log_multiplier(ctx, 0.0);
    for (int i = 1; i <= 4000; ++i) {
      const double cur = log_multiplier(ctx, 4.0 * kPi / 0.75 * i / 4000.0);
      if (cur > prev) ++violations;
      prev = cur;
    }
    report.add("monotone_violations", violations, violations == 0);
  }

  // production vs oracle multiplier
  {
    double worst = 0.0;
    for (double h : {1.0, 0.5, 0.25}) {
      const auto ctx = make_multiplier_context(h);
      for (int i = 0; i <= 200; ++i) {
        const double xi = -8.0 * kPi / h + 16.0 * kPi / h * i / 200.0;
        const double d = std::abs(log_multiplier(ctx, xi) -
                                  oracles::oracle_log_multiplier(h, xi));
        const double scale = std::max(
            1.0, std::abs(oracles::oracle_log_multiplier(h, xi)));
        worst = std::max(worst, d / scale);
      }
    }
    report.add("oracle_log_m_rel", worst, worst < 1e-12);
  }

  // Lagrange cardinality and route equivalence
  for (double h : {1.0, 0.5, 0.25}) {
    const auto table = chi_table(make_grid(h, 1, 32, 20.0 * h), 8);
    double worst = 0.0;
    for (int j = -16; j <= 16; ++j)
      worst = std::max(worst, std::abs(table.sample_axis(8 * j) -
                                       (j == 0 ? 1.0 : 0.0)));
    report.add("cardinality_defect_h" + format_g17(h), worst, worst < 1e-8);
  }
  {
    const auto dense = coefficients_dense(make_grid(1.0, 1, 14, 8.0));
    const auto spectral = coefficients_spectral_axis(1.0, 14);
    double worst = 0.0;
    for (int j = -7; j <= 7; ++j)
      worst = std::max(worst, std::abs(dense[j + 14] - spectral[j + 14]));
    report.add("route_equivalence", worst, worst < 1e-8);
  }

  // cutoff partition and phi cardinality
  {
    const auto spec = build_cutoff(0.3);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double xi = -spec.band + 2.0 * spec.band * i / 400.0;
      double acc = 0.0;
      for (int j = -2; j <= 2; ++j) acc += spec.rho_hat(xi - 2.0 * kPi * j);
      worst = std::max(worst, std::abs(acc - 1.0));
    }
    report.add("cutoff_partition_defect", worst, worst < 1e-12);
    double card = 0.0;
    for (int j = 1; j <= 20; ++j)
      card = std::max(card, std::abs(phi_eval(spec, j)));
    card = std::max(card, std::abs(phi_eval(spec, 0.0) - 1.0));
    report.add("phi_cardinality_defect", card, card < 1e-8);

    // quasi-interpolant lattice interpolation
    const auto target = make_gaussian_target();
    const auto field = sample_target(target, 0.5, 24);
    const auto fine = quasi_eval_fine(field, spec, 8);
    double defect = 0.0;
    for (int j = -20; j <= 20; ++j) {
      const std::vector<int> l{8 * j};
      defect = std::max(defect, std::abs(fine.value(l) -
                                         field.values[j + field.radius]));
    }
    report.add("quasi_lattice_defect", defect, defect < 1e-8);
  }

  // decay envelope constant at h in {1, 1/2}
  for (double h : {1.0, 0.5}) {
    const auto ctx = make_multiplier_context(h);
    const double x_max = 30.0 / h + 10.0;
    const auto prof = inverse_transform_profile(
        ctx, x_max, static_cast<int>(std::ceil(x_max / (h / 4.0))));
    report.add("envelope_c1_h" + format_g17(h), prof.fitted_c1,
               prof.fitted_c1 <= 1.0 + 1e-6);
  }

  // pointwise vs spectral interpolation
  {
    const double h = 0.5;
    const auto target = make_gaussian_target();
    const auto field = sample_target(target, h, 30);
    const auto table = chi_table(make_grid(h, 1, 32, 16.0 * h), 8);
    const auto ctx = make_multiplier_context(h);
    const auto fine = interpolate_grid_spectral(field, ctx, 8, 3);
    std::mt19937_64 rng(splitmix64(seed + 1));
    std::uniform_int_distribution<int> pick(-6 * 8, 6 * 8);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int l = pick(rng);
      const std::vector<int> idx{l};
      const std::vector<double> x{l * fine.spacing};
      worst = std::max(worst, std::abs(fine.value(idx) -
                                       interpolate_point(field, table, x)));
    }
    report.add("route_agreement_interp", worst, worst < 1e-6);
  }

  // small stability probe
  {
    const std::vector<double> hs{0.5, 0.25};
    const auto rep = run_stability(0.4, 2.0, 1, hs, 4,
                                   SweepConfig{12.0, 8, 3, seed, 1});
    const double q0 = rep.q_factors[0].q;
    const double q1 = rep.q_factors[1].q;
    report.add("stability_q_ratio", std::max(q0, q1) / std::min(q0, q1),
               std::max(q0, q1) / std::min(q0, q1) < 2.0);
  }

  return report;
}

inline void emit_verify_csv(const VerifyReport& report, std::ostream& os) {
  os << "key,value\n";
  os << "seed," << report.seed << "\n";
  os << "version," << kLibraryVersion << "\n";
  os << "check,value,pass\n";
  for (const auto& c : report.checks)
    os << c.name << "," << c.value << "," << (c.pass ? 1 : 0) << "\n";
  os << "all_pass,," << (report.all_pass ? 1 : 0) << "\n";
}

inline void emit_verify_json(const VerifyReport& report, std::ostream& os) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["version"] = kLibraryVersion;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"pass", c.pass}});
  j["checks"] = checks;
  j["all_pass"] = report.all_pass;
  os << j.dump(2) << "\n";
}

inline void emit_verify(const VerifyReport& report, const std::string& format,
                        const std::string& path) {
  require(format == "csv" || format == "json",
          "emit_verify: format must be csv or json");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("emit_verify: cannot open " + path);
  if (format == "csv")
    emit_verify_csv(report, os);
  else
    emit_verify_json(report, os);
}

}  // namespace cardinal
