#include "cptp/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "cptp/oracle.hpp"

namespace cptp {

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi;
const Real kNaN = std::numeric_limits<Real>::quiet_NaN();

}  // namespace

LindbladModel two_qubit_model(Real coupling, Real t1) {
  SubsystemSpec q;
  q.levels = 2;
  q.t1 = t1;
  return build_transmon_model({q, q}, {CouplingSpec{0, 1, coupling, 0.0}},
                              {ControlPair{}, ControlPair{}});
}

std::vector<int> convergence_steps(int order) {
  switch (order) {
    case 1: return {1600, 3200, 6400, 12800};
    case 2: return {200, 400, 800, 1600};
    case 3: return {45, 90, 180, 360};
    case 4: return {32, 64, 128, 256};
    default: throw ConfigError("convergence table exists for orders 1..4");
  }
}

std::vector<ConvergenceRow> run_convergence(const ConvergenceOptions& options) {
  const LindbladModel model = two_qubit_model(options.coupling, options.t1);
  const Matrix v0 = basis_state({2, 2}, {1, 0});
  const Matrix exact = exact_two_qubit_rho(options.coupling, 1.0 / options.t1, options.t_final);

  std::vector<ConvergenceRow> rows;
  for (const int order : options.orders) {
    for (const FlowFamily family : options.families) {
      SchemeConfig cfg = SchemeConfig::uniform(order, family);
      cfg.kappa = options.kappa;
      cfg.renormalize_trace = options.renormalize;
      cfg.second_order_rule = options.second_order_rule;
      const auto steps = options.steps.empty() ? convergence_steps(order) : options.steps;
      Real previous = kNaN;
      for (const int n : steps) {
        ConvergenceRow row{order, family, n, kNaN, kNaN, false};
        try {
          const Trajectory traj = evolve(model, cfg, v0, options.t_final, n);
          row.error = (traj.final_state.density() - exact).norm();
        } catch (const DivergenceError&) {
          row.error = std::numeric_limits<Real>::infinity();
        }
        row.divergent = !(row.error <= kDivergenceError);
        if (!row.divergent && std::isfinite(previous)) row.rate = std::log2(previous / row.error);
        previous = row.divergent ? kNaN : row.error;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

ModelConfig qudit_cavity_config(bool cross_kerr) {
  ModelConfig cfg;
  SubsystemSpec qutrit;
  qutrit.levels = 3;
  qutrit.omega = kTwoPi * 4.41666;
  qutrit.rot_freq = qutrit.omega;
  qutrit.xi = kTwoPi * 0.23056;
  qutrit.t1 = 80.0e3;
  qutrit.t2 = 0.3892e3;
  SubsystemSpec cavity;
  cavity.levels = 20;
  cavity.omega = kTwoPi * 6.84081;
  cavity.rot_freq = cavity.omega;
  cavity.t1 = 26.0e3;
  cfg.subsystems = {qutrit, cavity};
  cfg.couplings = {CouplingSpec{0, 1, 0.0, cross_kerr ? kTwoPi * 1.176e-3 : 0.0}};
  cfg.controls = {
      ControlPair{ControlPulse::tanh_ramp(kTwoPi * 10e-3, -0.05, 2000.0), ControlPulse::zero()},
      ControlPair{ControlPulse::tanh_ramp(kTwoPi * 15e-3, -0.1, 200.0), ControlPulse::zero()}};
  return cfg;
}

namespace {

Matrix qudit_initial_factor(const LindbladModel& model, const QuditCavityOptions& options) {
  std::vector<Index> labels = options.initial_labels;
  if (labels.empty()) labels.assign(model.subsystem_dims().size(), 0);
  return basis_state(model.subsystem_dims(), labels);
}

}  // namespace

Matrix qudit_cavity_reference(const QuditCavityOptions& options) {
  if (options.reference_substeps < 2) throw ConfigError("error computation needs reference substeps");
  const LindbladModel model = options.model.build();
  const Matrix v0 = qudit_initial_factor(model, options);
  return reference_solve(model, v0 * v0.adjoint(), options.t_final, options.reference_substeps,
                         options.reference_tolerance);
}

QuditCavityResult run_qudit_cavity(const QuditCavityOptions& options) {
  const LindbladModel model = options.model.build();
  const auto& dims = model.subsystem_dims();
  const Matrix v0 = qudit_initial_factor(model, options);

  QuditCavityResult result;
  EvolveOptions ev;
  ev.observer = [&](const LowRankState& s) { result.populations.push_back(populations(s.factor, dims)); };
  result.trajectory = evolve(model, options.scheme, v0, options.t_final, options.steps, ev);
  if (options.reference) {
    result.error = (result.trajectory.final_state.density() - *options.reference).norm();
  } else if (options.compute_error) {
    result.error = (result.trajectory.final_state.density() - qudit_cavity_reference(options)).norm();
  }
  return result;
}

Real jc_revival_time(Index cavity_levels, Real coupling) {
  return kTwoPi * std::sqrt(static_cast<Real>(cavity_levels) / 3.0) / coupling;
}

Matrix jc_initial_factor(Index cavity_levels) {
  const Vector cav = coherent_state_vector(cavity_levels, std::sqrt(static_cast<Real>(cavity_levels) / 3.0));
  Matrix v = Matrix::Zero(2 * cavity_levels, 1);
  v.col(0).tail(cavity_levels) = cav;  // qubit in |1>
  return v;
}

Real jc_cost(const std::vector<Real>& times, const std::vector<Real>& excited, Real revival_time) {
  if (times.size() != excited.size()) throw Error("cost needs matching time and population samples");
  auto integrand = [&](std::size_t i) {
    const Real w = (times[i] / revival_time - 1.0) / 0.6;
    const Real dev = excited[i] - 0.5;
    return std::exp(-std::pow(w, 10)) * dev * dev;
  };
  Real sum = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    sum += 0.5 * (times[i] - times[i - 1]) * (integrand(i) + integrand(i - 1));
  }
  return sum;
}

JcResult run_jc_revival(const JcOptions& options) {
  JcResult r;
  r.revival_time = jc_revival_time(options.cavity_levels, options.coupling);
  const ControlPulse control = options.amplitude == 0.0
                                   ? ControlPulse::zero()
                                   : ControlPulse::super_gaussian(options.amplitude, options.width,
                                                                  r.revival_time);
  const LindbladModel model =
      build_jaynes_cummings_model(options.cavity_levels, options.coupling, options.t2, control, options.drive);
  const auto dims = model.subsystem_dims();
  EvolveOptions ev;
  ev.observer = [&](const LowRankState& s) {
    const auto pops = populations(s.factor, dims);
    r.times.push_back(s.time);
    r.ground.push_back(pops[0](0));
    r.excited.push_back(pops[0](1));
  };
  const Trajectory traj = evolve(model, options.scheme, jc_initial_factor(options.cavity_levels),
                                 options.horizon * r.revival_time, options.steps, ev);
  r.ranks = traj.ranks;
  r.traces = traj.traces;
  r.cost = jc_cost(r.times, r.excited, r.revival_time);
  return r;
}

std::vector<Real> uniform_grid(Real start, Real stop, Real step) {
  if (!(step > 0.0) || stop < start) throw ConfigError("grid needs step > 0 and stop >= start");
  const auto n = static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
  std::vector<Real> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = start + static_cast<Real>(i) * step;
  return g;
}

CostScanResult run_jc_scan(const std::vector<Real>& a_values, const std::vector<Real>& b_values,
                           const JcOptions& base, unsigned threads) {
  CostScanResult out;
  out.a_values = a_values;
  out.b_values = b_values;
  out.steps = base.steps;
  out.cost = RealMatrix::Constant(static_cast<Index>(a_values.size()),
                                  static_cast<Index>(b_values.size()), kNaN);
  const std::size_t total = a_values.size() * b_values.size();
  std::atomic<std::size_t> next{0};
  std::mutex failures_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t ia = k / b_values.size(), ib = k % b_values.size();
      JcOptions opts = base;
      opts.amplitude = a_values[ia];
      opts.width = b_values[ib];
      try {
        out.cost(static_cast<Index>(ia), static_cast<Index>(ib)) = run_jc_revival(opts).cost;
      } catch (const std::exception& e) {
        std::lock_guard lock(failures_mutex);
        out.failures.push_back("A=" + std::to_string(opts.amplitude) + " B=" +
                               std::to_string(opts.width) + ": " + e.what());
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace cptp
