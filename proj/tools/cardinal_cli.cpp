// Command-line front end: multiplier tables, Lagrange synthesis,
// interpolation, cutoff/quasi-interpolant output, multiplier-norm analysis,
// convergence and stability sweeps, and the invariant verify suite.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cardinal/bandlimited_quasi.hpp"
#include "cardinal/experiments.hpp"
#include "cardinal/interpolator.hpp"
#include "cardinal/lagrange_kernel.hpp"
#include "cardinal/multiplier_analysis.hpp"
#include "cardinal/report.hpp"
#include "cardinal/theta_multiplier.hpp"
#include "cardinal/verify.hpp"

namespace {

using namespace cardinal;

struct GlobalOptions {
  uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::string format = "csv";
  std::string config_path;
  std::map<std::string, std::string> config;
};

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// config value wins only where the CLI flag was not passed
template <typename T>
void apply_config(const CLI::Option* opt, const GlobalOptions& g,
                  const std::string& key, T& value) {
  if (opt != nullptr && opt->count() > 0) return;
  const auto it = g.config.find(key);
  if (it == g.config.end()) return;
  std::stringstream ss(it->second);
  ss >> value;
}

class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot open output path " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    if (file_.is_open()) {
      file_.flush();
      if (!file_) throw IoError("write failed");
    }
  }

 private:
  std::ofstream file_;
};

std::vector<double> parse_h_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  require(!out.empty(), "empty h list");
  return out;
}

TargetFunction make_target(const std::string& id, int dim, double width) {
  if (id.rfind("bspline", 0) == 0 && id.size() == 8)
    return make_bspline_target(id[7] - '0', dim);
  if (id == "gauss") return make_gaussian_target(dim, width);
  if (id == "packet") return make_packet_target(3.0, 0.25);
  throw ParameterError("unknown target id: " + id +
                       " (expected bspline1..bspline5, gauss, packet)");
}

SampledField read_field_csv(const std::string& path, double h) {
  const auto rows = read_csv_file(path);
  require(!rows.empty(), "data csv is empty");
  size_t cols = 0;
  std::vector<std::vector<double>> numeric;
  for (const auto& cells : rows) {
    std::vector<double> vals;
    bool ok = true;
    for (const auto& c : cells) {
      try {
        size_t used = 0;
        vals.push_back(std::stod(c, &used));
        ok = ok && used == c.size();
      } catch (...) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;  // header or comment row
    if (cols == 0) cols = vals.size();
    require(vals.size() == cols, "data csv: ragged rows");
    numeric.push_back(std::move(vals));
  }
  require(cols == 2 || cols == 3, "data csv must be j,value or j1,j2,value");
  const int dim = static_cast<int>(cols) - 1;
  int radius = 1;
  for (const auto& v : numeric)
    for (int a = 0; a < dim; ++a)
      radius = std::max(radius,
                        static_cast<int>(std::abs(std::lround(v[a]))));
  const int w = 2 * radius + 1;
  std::vector<double> values(dim == 1 ? w : static_cast<size_t>(w) * w, 0.0);
  for (const auto& v : numeric) {
    const int j1 = static_cast<int>(std::lround(v[0]));
    if (dim == 1)
      values[j1 + radius] = v[1];
    else
      values[static_cast<size_t>(j1 + radius) * w +
             (static_cast<int>(std::lround(v[1])) + radius)] = v[2];
  }
  // boundary shell decides whether the compact-support model applies
  bool decayed = true;
  if (dim == 1) {
    decayed = std::abs(values.front()) < 1e-12 &&
              std::abs(values.back()) < 1e-12;
  } else {
    for (int i = 0; i < w && decayed; ++i)
      for (int j : {0, w - 1})
        decayed = decayed &&
                  std::abs(values[static_cast<size_t>(i) * w + j]) < 1e-12 &&
                  std::abs(values[static_cast<size_t>(j) * w + i]) < 1e-12;
  }
  return make_field(h, dim, radius, std::move(values), decayed);
}

int cmd_multiplier(const GlobalOptions& g, double h,
                   const std::vector<double>& xi, int deriv) {
  const auto ctx = make_multiplier_context(h);
  OutputStream out(g.out);
  out.get() << "xi,value\n";
  for (double x : xi) {
    double v = 0.0;
    if (deriv == 0)
      v = multiplier(ctx, x);
    else if (deriv == 1)
      v = multiplier_prime(ctx, x);
    else
      v = multiplier_second(ctx, x);
    out.get() << format_g17(x) << "," << format_g17(v) << "\n";
  }
  out.finish();
  return 0;
}

int cmd_lagrange(const GlobalOptions& g, double h, int dim, int n, int fine) {
  const double eval_radius = std::max(4.0 * h, (n / 2 + 2) * h);
  const auto table = chi_table(make_grid(h, dim, n, eval_radius), fine);
  OutputStream out(g.out);
  auto& os = out.get();
  if (dim == 1) {
    os << "j,b_j\n";
    for (int j = -n; j <= n; ++j)
      os << j << "," << format_g17(table.coeff_axis(j)) << "\n";
    os << "x,chi\n";
    for (int s = -table.sample_radius; s <= table.sample_radius; ++s)
      os << format_g17(s * h / fine) << ","
         << format_g17(table.sample_axis(s)) << "\n";
  } else {
    os << "j1,j2,b_j\n";
    for (int j1 = -n; j1 <= n; ++j1)
      for (int j2 = -n; j2 <= n; ++j2)
        os << j1 << "," << j2 << ","
           << format_g17(table.coeff_axis(j1) * table.coeff_axis(j2)) << "\n";
    os << "x1,x2,chi\n";
    for (int s1 = -table.sample_radius; s1 <= table.sample_radius; ++s1)
      for (int s2 = -table.sample_radius; s2 <= table.sample_radius; ++s2)
        os << format_g17(s1 * h / fine) << "," << format_g17(s2 * h / fine)
           << ","
           << format_g17(table.sample_axis(s1) * table.sample_axis(s2))
           << "\n";
  }
  out.finish();
  return 0;
}

int cmd_interp(const GlobalOptions& g, double h, const std::string& data_path,
               int fine, const std::string& route, int beta_radius) {
  const auto field = read_field_csv(data_path, h);
  OutputStream out(g.out);
  auto& os = out.get();
  os << (field.dim == 1 ? "x,value\n" : "x1,x2,value\n");
  if (route == "spectral") {
    const auto ctx = make_multiplier_context(h, field.dim);
    const auto fg = interpolate_grid_spectral(field, ctx, fine, beta_radius);
    if (fg.aliasing_warning)
      std::cerr << "warning: beta truncation limited by fine factor; "
                   "aliasing bound "
                << format_g17(fg.aliasing_bound) << "\n";
    if (field.dim == 1) {
      for (int l = -fg.radius; l <= fg.radius; ++l)
        os << format_g17(l * fg.spacing) << ","
           << format_g17(fg.values[l + fg.radius]) << "\n";
    } else {
      const int w = fg.width();
      for (int l1 = -fg.radius; l1 <= fg.radius; ++l1)
        for (int l2 = -fg.radius; l2 <= fg.radius; ++l2)
          os << format_g17(l1 * fg.spacing) << "," << format_g17(l2 * fg.spacing)
             << ","
             << format_g17(fg.values[static_cast<size_t>(l1 + fg.radius) * w +
                                     (l2 + fg.radius)])
             << "\n";
    }
  } else if (route == "point") {
    const int n = std::clamp(field.radius, 8, 32);
    const auto table =
        chi_table(make_grid(h, field.dim, std::max(8, n),
                            std::max(4.0 * h, (n + 2) * h)),
                  fine);
    const double margin = h * field.radius - h * table.grid.coeff_radius / 2.0;
    const int lmax = static_cast<int>(std::floor(margin / (h / fine)));
    if (field.dim == 1) {
      for (int l = -lmax; l <= lmax; ++l) {
        const std::vector<double> x{l * h / fine};
        os << format_g17(x[0]) << ","
           << format_g17(interpolate_point(field, table, x)) << "\n";
      }
    } else {
      for (int l1 = -lmax; l1 <= lmax; ++l1)
        for (int l2 = -lmax; l2 <= lmax; ++l2) {
          const std::vector<double> x{l1 * h / fine, l2 * h / fine};
          os << format_g17(x[0]) << "," << format_g17(x[1]) << ","
             << format_g17(interpolate_point(field, table, x)) << "\n";
        }
    }
  } else {
    throw ParameterError("route must be point or spectral");
  }
  out.finish();
  return 0;
}

int cmd_cutoff(const GlobalOptions& g, double eps) {
  const auto spec = build_cutoff(eps);
  OutputStream out(g.out);
  auto& os = out.get();
  os << "xi,rho_hat\n";
  for (size_t i = 0; i < spec.freq_grid.size(); ++i)
    os << format_g17(spec.freq_grid[i]) << ","
       << format_g17(spec.rho_samples[i]) << "\n";
  os << "t,phi\n";
  const int step = 8;  // emit at 1/16 lattice resolution
  for (long i = 0; i * spec.phi_dt <= spec.r_phi;
       i += step) {
    os << format_g17(i * spec.phi_dt) << ","
       << format_g17(spec.phi_half[i]) << "\n";
  }
  out.finish();
  return 0;
}

int cmd_quasi(const GlobalOptions& g, double h, double eps,
              const std::string& data_path, int fine) {
  const auto spec = build_cutoff(eps);
  const auto field = read_field_csv(data_path, h);
  const auto fg = quasi_eval_fine(field, spec, fine);
  OutputStream out(g.out);
  auto& os = out.get();
  if (field.dim == 1) {
    os << "x,value\n";
    for (int l = -fg.radius; l <= fg.radius; ++l)
      os << format_g17(l * fg.spacing) << ","
         << format_g17(fg.values[l + fg.radius]) << "\n";
  } else {
    os << "x1,x2,value\n";
    const int w = fg.width();
    for (int l1 = -fg.radius; l1 <= fg.radius; ++l1)
      for (int l2 = -fg.radius; l2 <= fg.radius; ++l2)
        os << format_g17(l1 * fg.spacing) << "," << format_g17(l2 * fg.spacing)
           << ","
           << format_g17(fg.values[static_cast<size_t>(l1 + fg.radius) * w +
                                   (l2 + fg.radius)])
           << "\n";
  }
  out.finish();
  return 0;
}

int cmd_analyze(const GlobalOptions& g, const std::string& h_csv,
                const std::string& p_str, int budget) {
  const auto hs = parse_h_list(h_csv);
  const double p = lp_exponent_from_string(p_str);
  OutputStream out(g.out);
  auto& os = out.get();
  os << "h,p,lower,upper\n";
  for (double h : hs) {
    const auto ctx = make_multiplier_context(h);
    const auto est = mp_norm_bounds(ctx, p, budget, g.seed);
    os << format_g17(h) << "," << p_str << "," << format_g17(est.lower) << ","
       << format_g17(est.upper) << "\n";
  }
  out.finish();
  return 0;
}

int cmd_decay(const GlobalOptions& g, double h, double xmax) {
  const auto ctx = make_multiplier_context(h);
  const int n = static_cast<int>(std::ceil(xmax / (h / 4.0)));
  const auto prof = inverse_transform_profile(ctx, xmax, n);
  OutputStream out(g.out);
  auto& os = out.get();
  os << "x,value_raw,value_normalized\n";
  for (size_t i = 0; i < prof.x.size(); ++i)
    os << format_g17(prof.x[i]) << "," << format_g17(prof.value_raw[i]) << ","
       << format_g17(prof.value_normalized[i]) << "\n";
  os << "l1_norm,," << format_g17(prof.l1_norm) << "\n";
  os << "fitted_c1,," << format_g17(prof.fitted_c1) << "\n";
  os << "fitted_c2,," << format_g17(prof.fitted_c2) << "\n";
  out.finish();
  return 0;
}

// the harness restricts p to {1, 2, 4, inf}; the norm routines are general
void require_harness_p(double p) {
  require(p == 1.0 || p == 2.0 || p == 4.0 || std::isinf(p),
          "the harness supports p in {1, 2, 4, inf}");
}

int cmd_sweep(const GlobalOptions& g, const std::string& target_id, int dim,
              double width, const std::string& p_str, int k,
              const std::string& h_csv, SweepConfig cfg, bool probe_log) {
  const auto target = make_target(target_id, dim, width);
  const auto hs = parse_h_list(h_csv);
  const double p = lp_exponent_from_string(p_str);
  require_harness_p(p);
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  ErrorReport report;
  if (probe_log) {
    const auto probe = run_logfactor_probe(target, hs, p, k, cfg);
    report = probe.base;
    report.config_echo.push_back(
        {"trend_slope", format_g17(probe.trend.slope)});
    report.config_echo.push_back(
        {"trend_max_residual", format_g17(probe.trend.max_residual)});
  } else {
    report = run_convergence(target, p, k, hs, cfg);
  }
  if (g.out.empty() || g.out == "-") {
    if (g.format == "csv")
      emit_report_csv(report, std::cout);
    else
      emit_report_json(report, std::cout);
  } else {
    emit_report(report, g.format, g.out);
  }
  return 0;
}

int cmd_stability(const GlobalOptions& g, double eps, const std::string& p_str,
                  int k, const std::string& h_csv, int trials,
                  SweepConfig cfg) {
  const auto hs = parse_h_list(h_csv);
  const double p = lp_exponent_from_string(p_str);
  require_harness_p(p);
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  const auto report = run_stability(eps, p, k, hs, trials, cfg);
  if (g.out.empty() || g.out == "-") {
    if (g.format == "csv")
      emit_report_csv(report, std::cout);
    else
      emit_report_json(report, std::cout);
  } else {
    emit_report(report, g.format, g.out);
  }
  return 0;
}

int cmd_verify(const GlobalOptions& g) {
  const auto report = verify_suite(g.seed, g.threads);
  if (g.out.empty() || g.out == "-") {
    if (g.format == "csv")
      emit_verify_csv(report, std::cout);
    else
      emit_verify_json(report, std::cout);
  } else {
    emit_verify(report, g.format, g.out);
  }
  for (const auto& c : report.checks)
    std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " = "
              << c.value << "\n";
  if (!report.all_pass) throw AccuracyError("verify: invariant check failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cardinal interpolation with Gaussian kernels"};
  app.require_subcommand(1);
  // --h is taken as an option name, so help must not own -h
  app.set_help_flag("--help", "print help");

  GlobalOptions g;
  auto* seed_opt = app.add_option("--seed", g.seed, "random seed");
  auto* threads_opt = app.add_option("--threads", g.threads, "worker threads");
  auto* out_opt = app.add_option("--out", g.out, "output path (- = stdout)");
  auto* format_opt =
      app.add_option("--format", g.format, "report format: csv|json");
  app.add_option("--config", g.config_path, "key=value configuration file");

  double h = 1.0, eps = 0.3, xmax = 40.0, width = 1.0;
  std::vector<double> xi;
  int deriv = 0, dim = 1, n_radius = 32, fine = 8, k = 3, trials = 32,
      budget = 200;
  std::string data_path, route = "spectral", p_str = "2", h_csv, target_id;
  SweepConfig cfg;
  bool probe_log = false;

  auto subcommand = [&](const char* name, const char* desc) {
    auto* s = app.add_subcommand(name, desc);
    s->set_help_flag("--help", "print help");
    s->fallthrough();  // global flags may follow the subcommand
    return s;
  };

  auto* c_mult = subcommand("multiplier", "evaluate m_h and derivatives");
  c_mult->add_option("--h", h)->required();
  c_mult->add_option("--xi", xi, "frequencies")->required()->delimiter(',');
  c_mult->add_option("--deriv", deriv)->check(CLI::Range(0, 2));

  auto* c_lag = subcommand("lagrange", "Lagrange coefficients and table");
  c_lag->add_option("--h", h)->required();
  c_lag->add_option("--dim", dim)->check(CLI::Range(1, 2));
  c_lag->add_option("--n", n_radius);
  c_lag->add_option("--fine", fine);

  auto* c_interp = subcommand("interp", "interpolate sampled data");
  c_interp->add_option("--h", h)->required();
  c_interp->add_option("--data", data_path)->required();
  c_interp->add_option("--fine", fine);
  c_interp->add_option("--route", route);
  c_interp->add_option("--beta", cfg.beta_radius);

  auto* c_cut = subcommand("cutoff", "smooth cutoff tables");
  c_cut->add_option("--eps", eps)->required();

  auto* c_quasi = subcommand("quasi", "band-limited quasi-interpolant");
  c_quasi->add_option("--h", h)->required();
  c_quasi->add_option("--eps", eps)->required();
  c_quasi->add_option("--data", data_path)->required();
  c_quasi->add_option("--fine", fine);

  auto* c_an = subcommand("analyze", "multiplier norm bounds");
  c_an->add_option("--h-list", h_csv)->required();
  c_an->add_option("--p", p_str)->required();
  c_an->add_option("--budget", budget);

  auto* c_decay = subcommand("decay", "inverse-transform decay profile");
  c_decay->add_option("--h", h)->required();
  c_decay->add_option("--xmax", xmax)->required();

  auto* c_sweep = subcommand("sweep", "convergence-rate sweep");
  c_sweep->add_option("--target", target_id)->required();
  c_sweep->add_option("--dim", dim)->check(CLI::Range(1, 2));
  c_sweep->add_option("--width", width);
  c_sweep->add_option("--p", p_str);
  c_sweep->add_option("--k", k);
  c_sweep->add_option("--h-list", h_csv)->required();
  auto* box_opt = c_sweep->add_option("--box", cfg.box_radius);
  auto* fine_sweep_opt = c_sweep->add_option("--fine", cfg.fine_factor);
  c_sweep->add_option("--beta", cfg.beta_radius);
  c_sweep->add_flag("--probe-log", probe_log,
                    "fit ratios against 1+|log h| (p = 1 or inf)");

  auto* c_stab = subcommand("stability", "Q_p(h) stability factors");
  c_stab->add_option("--eps", eps)->required();
  c_stab->add_option("--p", p_str);
  c_stab->add_option("--k", k);
  c_stab->add_option("--h-list", h_csv)->required();
  c_stab->add_option("--trials", trials);
  c_stab->add_option("--fine", cfg.fine_factor);

  auto* c_verify = subcommand("verify", "run the invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!g.config_path.empty()) {
      g.config = parse_config_file(g.config_path);
      apply_config(seed_opt, g, "seed", g.seed);
      apply_config(threads_opt, g, "threads", g.threads);
      apply_config(out_opt, g, "out", g.out);
      apply_config(format_opt, g, "format", g.format);
      apply_config(box_opt, g, "box_radius", cfg.box_radius);
      apply_config(fine_sweep_opt, g, "fine_factor", cfg.fine_factor);
    }
    require(g.format == "csv" || g.format == "json",
            "--format must be csv or json");
    require(g.threads >= 1, "--threads must be >= 1");

    if (c_mult->parsed()) return cmd_multiplier(g, h, xi, deriv);
    if (c_lag->parsed()) return cmd_lagrange(g, h, dim, n_radius, fine);
    if (c_interp->parsed())
      return cmd_interp(g, h, data_path, fine, route, cfg.beta_radius);
    if (c_cut->parsed()) return cmd_cutoff(g, eps);
    if (c_quasi->parsed()) return cmd_quasi(g, h, eps, data_path, fine);
    if (c_an->parsed()) return cmd_analyze(g, h_csv, p_str, budget);
    if (c_decay->parsed()) return cmd_decay(g, h, xmax);
    if (c_sweep->parsed())
      return cmd_sweep(g, target_id, dim, width, p_str, k, h_csv, cfg,
                       probe_log);
    if (c_stab->parsed())
      return cmd_stability(g, eps, p_str, k, h_csv, trials, cfg);
    if (c_verify->parsed()) return cmd_verify(g);
    return 0;
  } catch (const cardinal::HypothesisError& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 2;
  } catch (const cardinal::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const cardinal::AccuracyError& e) {
    std::cerr << "accuracy failure: " << e.what() << "\n";
    return 3;
  } catch (const cardinal::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
