// Command-line driver: experiment runs and single-qubit stability queries.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cptp/config.hpp"
#include "cptp/experiments.hpp"
#include "cptp/io.hpp"
#include "cptp/runtime.hpp"
#include "cptp/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cptp;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigFailure = 2,
  kDivergence = 3,
  kResolutionFailure = 4,
};

#ifndef CPTP_VERSION
#define CPTP_VERSION "0.0.0"
#endif

json versions() {
  return {{"cptp", CPTP_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION},
          {"compiler", __VERSION__}};
}

json section(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) return json::object();
  if (!cfg.at(key).is_object()) throw ConfigError("section '" + key + "' must be an object");
  return cfg.at(key);
}

std::vector<int> positive_steps(const json& j) {
  auto steps = j.is_array() ? j.get<std::vector<int>>() : std::vector<int>{j.get<int>()};
  for (const int n : steps) {
    if (n <= 0) throw ConfigError("step counts must be positive");
  }
  return steps;
}

std::vector<Real> grid_from(const json& j, std::vector<Real> fallback) {
  if (j.is_null()) return fallback;
  if (j.is_array()) return j.get<std::vector<Real>>();
  return uniform_grid(j.at("start").get<Real>(), j.at("stop").get<Real>(), j.at("step").get<Real>());
}

std::vector<std::string> population_header(const std::vector<Index>& dims) {
  std::vector<std::string> h;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    for (Index n = 0; n < dims[k]; ++n) h.push_back("pop_s" + std::to_string(k) + "_l" + std::to_string(n));
  }
  return h;
}

json run_convergence_experiment(const json& cfg, const fs::path& out) {
  const json s = section(cfg, "convergence");
  ConvergenceOptions opts;
  if (s.contains("orders")) opts.orders = s.at("orders").get<std::vector<int>>();
  if (s.contains("families")) {
    opts.families.clear();
    for (const auto& f : s.at("families")) opts.families.push_back(parse_family(f.get<std::string>()));
  }
  if (s.contains("steps")) opts.steps = positive_steps(s.at("steps"));
  opts.t_final = s.value("t_final", opts.t_final);
  opts.coupling = s.value("coupling", opts.coupling);
  opts.t1 = s.value("t1", opts.t1);
  opts.kappa = s.value("kappa", opts.kappa);
  opts.renormalize = s.value("renormalize", opts.renormalize);
  if (s.value("second_order_rule", std::string("midpoint")) == "trapezoid") {
    opts.second_order_rule = SecondOrderRule::Trapezoid;
  }
  for (const int k : opts.orders) {
    if (k < 1 || k > 4) throw ConfigError("convergence orders must lie in 1..4");
  }

  const auto rows = run_convergence(opts);
  CsvTable table{{"order", "implicit", "steps", "dt", "error", "rate", "divergent"}, {}};
  json summary = json::array();
  for (const auto& r : rows) {
    table.add_row({static_cast<Real>(r.order), r.family == FlowFamily::Implicit ? 1.0 : 0.0,
                   static_cast<Real>(r.steps), opts.t_final / r.steps, r.error, r.rate,
                   r.divergent ? 1.0 : 0.0});
    summary.push_back({{"order", r.order}, {"family", to_string(r.family)}, {"steps", r.steps},
                       {"error", r.error}, {"divergent", r.divergent}});
  }
  table.write((out / "convergence.csv").string());
  return {{"files", {"convergence.csv"}}, {"rows", summary}};
}

json run_qudit_cavity_experiment(const json& cfg, const fs::path& out, const fs::path& base) {
  const json s = section(cfg, "qudit-cavity");
  QuditCavityOptions opts;
  if (s.contains("model_file")) {
    opts.model = load_model_config((base / s.at("model_file").get<std::string>()).string());
  } else if (s.contains("model")) {
    opts.model = parse_model_config(s.at("model"));
  } else {
    opts.model = qudit_cavity_config(s.value("cross_kerr", true));
  }
  if (cfg.contains("scheme")) opts.scheme = parse_scheme(cfg.at("scheme"));
  opts.t_final = s.value("t_final", opts.t_final);
  const auto step_list = s.contains("steps") ? positive_steps(s.at("steps")) : std::vector<int>{opts.steps};
  if (s.contains("initial_labels")) opts.initial_labels = s.at("initial_labels").get<std::vector<Index>>();
  opts.reference_substeps = s.value("reference_substeps", 0);
  opts.reference_tolerance = s.value("reference_tolerance", opts.reference_tolerance);
  opts.compute_error = opts.reference_substeps > 0;
  if (opts.compute_error) opts.reference = qudit_cavity_reference(opts);

  json runs = json::array();
  json files = json::array();
  CsvTable errors{{"steps", "dt", "error"}, {}};
  for (const int n : step_list) {
    opts.steps = n;
    const auto result = run_qudit_cavity(opts);
    const auto& traj = result.trajectory;
    const auto dims = opts.model.build().subsystem_dims();
    std::vector<std::string> header{"time", "rank", "trace"};
    for (auto& h : population_header(dims)) header.push_back(std::move(h));
    CsvTable table{header, {}};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      std::vector<Real> row{traj.times[i], static_cast<Real>(traj.ranks[i]), traj.traces[i]};
      for (const auto& p : result.populations[i]) row.insert(row.end(), p.data(), p.data() + p.size());
      table.add_row(std::move(row));
    }
    const std::string name = "trajectory_n" + std::to_string(n) + ".csv";
    table.write((out / name).string());
    files.push_back(name);
    json run{{"steps", n}, {"file", name}, {"final_rank", traj.final_state.rank()}};
    if (result.error) {
      run["error"] = *result.error;
      errors.add_row({static_cast<Real>(n), opts.t_final / n, *result.error});
    }
    if (s.value("dump_final_factor", false)) {
      const std::string fname = "final_factor_n" + std::to_string(n) + ".json";
      write_json((out / fname).string(), factor_to_json(traj.final_state.factor));
      files.push_back(fname);
    }
    runs.push_back(run);
  }
  if (!errors.rows.empty()) {
    errors.write((out / "errors.csv").string());
    files.push_back("errors.csv");
  }
  return {{"files", files}, {"runs", runs}};
}

JcOptions jc_options(const json& s, const json& cfg) {
  JcOptions o;
  o.cavity_levels = s.value("cavity_levels", o.cavity_levels);
  o.coupling = s.value("coupling", o.coupling);
  o.t2 = s.value("t2", o.t2);
  o.amplitude = s.value("amplitude", o.amplitude);
  o.width = s.value("width", o.width);
  o.steps = s.value("steps", o.steps);
  o.horizon = s.value("horizon", o.horizon);
  const std::string drive = s.value("drive", std::string("cavity"));
  if (drive == "qubit") {
    o.drive = JcDrive::Qubit;
  } else if (drive != "cavity") {
    throw ConfigError("drive must be qubit or cavity");
  }
  if (cfg.contains("scheme")) o.scheme = parse_scheme(cfg.at("scheme"));
  if (o.steps <= 0) throw ConfigError("steps must be positive");
  if (o.cavity_levels < 1) throw ConfigError("cavity_levels must be positive");
  return o;
}

json run_jc_revival_experiment(const json& cfg, const fs::path& out) {
  const JcOptions opts = jc_options(section(cfg, "jc-revival"), cfg);
  const JcResult r = run_jc_revival(opts);
  CsvTable table{{"time", "rank", "trace", "excited_population", "ground_population"}, {}};
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    table.add_row({r.times[i], static_cast<Real>(r.ranks[i]), r.traces[i], r.excited[i], r.ground[i]});
  }
  table.write((out / "jc_revival.csv").string());
  return {{"files", {"jc_revival.csv"}}, {"cost", r.cost}, {"revival_time", r.revival_time}};
}

json run_jc_scan_experiment(const json& cfg, const fs::path& out) {
  const json s = section(cfg, "jc-scan");
  const JcOptions base = jc_options(s, cfg);
  const auto a = grid_from(s.value("a", json()), uniform_grid(0.0, 0.39, 0.01));
  const auto b = grid_from(s.value("b", json()), uniform_grid(0.01, 0.60, 0.01));
  const auto r = run_jc_scan(a, b, base, s.value("threads", 0u));
  CsvTable table{{"A", "B", "C", "logC"}, {}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Real c = r.cost(static_cast<Index>(i), static_cast<Index>(j));
      table.add_row({a[i], b[j], c, std::log(c)});
    }
  }
  table.write((out / "jc_scan.csv").string());
  return {{"files", {"jc_scan.csv"}}, {"failures", r.failures}, {"steps", r.steps}};
}

json run_stability_region_experiment(const json& cfg, const fs::path& out) {
  const json s = section(cfg, "stability-region");
  const int order = s.value("order", 4);
  const FlowFamily family = parse_family(s.value("family", std::string("ex")));
  if (order < 1 || order > 4) throw ConfigError("order must lie in 1..4");
  RegionGrid grid;
  grid.re_min = s.value("re_min", grid.re_min);
  grid.re_max = s.value("re_max", grid.re_max);
  grid.im_min = s.value("im_min", grid.im_min);
  grid.im_max = s.value("im_max", grid.im_max);
  grid.nx = s.value("nx", grid.nx);
  grid.ny = s.value("ny", grid.ny);
  if (grid.nx < 2 || grid.ny < 2 || !(grid.re_max > grid.re_min) || !(grid.im_max > grid.im_min)) {
    throw ConfigError("stability grid needs nx, ny >= 2 and non-empty ranges");
  }
  const auto region = stability_region_scan(order, family, grid);
  CsvTable points{{"re_z", "im_z", "spectral_radius", "stable"}, {}};
  for (const auto& p : region.grid) {
    points.add_row({p.z.real(), p.z.imag(), p.spectral_radius, p.stable ? 1.0 : 0.0});
  }
  CsvTable contour{{"re_z", "im_z"}, {}};
  for (const auto& z : region.contour) contour.add_row({z.real(), z.imag()});
  points.write((out / "stability_region.csv").string());
  contour.write((out / "stability_contour.csv").string());
  return {{"files", {"stability_region.csv", "stability_contour.csv"}},
          {"real_axis_intercept", region.real_axis_intercept}};
}

int simulate(const std::string& config_path, const std::string& experiment, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const json cfg = load_json(config_path);
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  const fs::path base = fs::path(config_path).parent_path();

  json result;
  try {
    if (experiment == "convergence") {
      result = run_convergence_experiment(cfg, out);
    } else if (experiment == "qudit-cavity") {
      result = run_qudit_cavity_experiment(cfg, out, base);
    } else if (experiment == "jc-revival") {
      result = run_jc_revival_experiment(cfg, out);
    } else if (experiment == "jc-scan") {
      result = run_jc_scan_experiment(cfg, out);
    } else if (experiment == "stability-region") {
      result = run_stability_region_experiment(cfg, out);
    } else {
      throw ConfigError("unknown experiment '" + experiment + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest{{"experiment", experiment},
                {"config_path", config_path},
                {"config", cfg},
                {"versions", versions()},
                {"wall_time_seconds", wall},
                {"result", result}};
  write_json((out / "manifest.json").string(), manifest);
  std::cout << "wrote " << (out / "manifest.json").string() << " (" << wall << " s)\n";
  return kOk;
}

void print_matrix(const char* title, const AmplificationMatrix& a) {
  std::printf("%s\n", title);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) std::printf("  (%+.6e %+.6ei)", a(r, c).real(), a(r, c).imag());
    std::printf("\n");
  }
}

int stability(int order, const std::string& family_name, const std::string& case_name,
              const TestParameters& p, Real dt, const SchemeIndices& idx_in) {
  const FlowFamily family = parse_family(family_name);
  TestCase test;
  if (case_name == "decay") {
    test = TestCase::Decay;
  } else if (case_name == "dephasing") {
    test = TestCase::DecayDephasing;
  } else {
    throw ConfigError("case must be decay or dephasing");
  }
  if (order < 1 || order > 4) throw ConfigError("order must lie in 1..4");
  SchemeIndices idx = idx_in;
  idx.i = family == FlowFamily::Implicit ? 1 : 0;
  if (order != 2) idx.j = idx.l = 0;
  if (test == TestCase::DecayDephasing && !std::isfinite(p.t2)) {
    throw ConfigError("the dephasing case needs a finite --t2");
  }

  const auto closed = amplification_closed_form(test, order, idx, p, dt);
  const auto numeric = amplification_numeric(test, scheme_for_indices(order, idx), p, dt);
  const Real radius = nonstationary_spectral_radius(numeric);
  const bool condition = stability_condition(test, order, idx, p, dt);
  std::printf("order=%d family=%s case=%s i=%d j=%d l=%d omega=%.6g T1=%.6g T2=%.6g dt=%.6g\n", order,
              to_string(family).c_str(), case_name.c_str(), idx.i, idx.j, idx.l, p.omega, p.t1, p.t2, dt);
  print_matrix("closed-form amplification matrix (rho11, rho12, rho21, rho22):", closed);
  print_matrix("numeric amplification matrix:", numeric);
  std::printf("max entry difference: %.3e\n", (closed - numeric).cwiseAbs().maxCoeff());
  std::printf("spectral radius (non-stationary block): %.12e\n", radius);
  std::printf("closed-form condition: %s\n", condition ? "stable" : "unstable");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  cptp::retain_heap_memory();
  CLI::App app{"Low-rank CPTP integrator for the Lindblad equation"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run an experiment and write CSV tables plus a manifest");
  std::string config_path, experiment, out_dir;
  sim->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  sim->add_option("--experiment", experiment, "Experiment id")
      ->required()
      ->check(CLI::IsMember({"convergence", "qudit-cavity", "jc-revival", "jc-scan", "stability-region"}));
  sim->add_option("--out", out_dir, "Output directory")->required();

  auto* stab = app.add_subcommand("stability", "Single-qubit amplification matrix and stability verdict");
  int order = 1;
  std::string family = "ex", case_name = "decay";
  TestParameters params;
  params.t2 = 20.0;
  Real dt = 0.1;
  SchemeIndices idx;
  stab->add_option("--order", order, "Scheme order (1-4)")->required()->check(CLI::Range(1, 4));
  stab->add_option("--family", family, "Top-level flow family")->required()->check(CLI::IsMember({"ex", "im"}));
  stab->add_option("--case", case_name, "Test equation")->required()->check(CLI::IsMember({"decay", "dephasing"}));
  stab->add_option("--omega", params.omega, "Qubit frequency")->capture_default_str();
  stab->add_option("--t1", params.t1, "Decay time")->capture_default_str()->check(CLI::PositiveNumber);
  stab->add_option("--t2", params.t2, "Dephasing time (dephasing case)")->capture_default_str()->check(CLI::PositiveNumber);
  stab->add_option("--dt", dt, "Step size")->capture_default_str()->check(CLI::PositiveNumber);
  stab->add_option("--j", idx.j, "Order 2: family of the inner half step (0 ex, 1 im)")->check(CLI::Range(0, 1));
  stab->add_option("--l", idx.l, "Order 2: family of the transport flow (0 ex, 1 im)")->check(CLI::Range(0, 1));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (sim->parsed()) return simulate(config_path, experiment, out_dir);
    return stability(order, family, case_name, params, dt, idx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution check failed: " << e.what() << '\n';
    return kResolutionFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
