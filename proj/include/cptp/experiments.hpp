#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cptp/config.hpp"
#include "cptp/npi.hpp"

namespace cptp {

// ---------------------------------------------------------------------------
// Two-qubit convergence study

/// Two resonant qubits with hopping J and decay T1 on both, rotating frame at
/// the qubit frequency.
LindbladModel two_qubit_model(Real coupling, Real t1 = 50.0);

/// Coupling used for the published error table: 0.2 read as a linear
/// frequency, i.e. J = 2 pi * 0.2 rad per unit time.
inline constexpr Real kTwoQubitCoupling = 2.0 * 3.14159265358979323846 * 0.2;

/// Step counts of the published convergence table for each order.
std::vector<int> convergence_steps(int order);

struct ConvergenceRow {
  int order = 1;
  FlowFamily family = FlowFamily::Explicit;
  int steps = 0;
  Real error = 0.0;
  Real rate = 0.0;  // NaN on the first row of each block
  bool divergent = false;
};

struct ConvergenceOptions {
  std::vector<int> orders{1, 2, 3, 4};
  std::vector<FlowFamily> families{FlowFamily::Explicit, FlowFamily::Implicit};
  /// Empty: use convergence_steps(order).
  std::vector<int> steps;
  Real t_final = 6.0;
  Real coupling = kTwoQubitCoupling;
  Real t1 = 50.0;
  Real kappa = 0.5;
  bool renormalize = true;
  SecondOrderRule second_order_rule = SecondOrderRule::Midpoint;
};

/// Divergence threshold on the Frobenius error.
inline constexpr Real kDivergenceError = 1e6;

std::vector<ConvergenceRow> run_convergence(const ConvergenceOptions& options = {});

// ---------------------------------------------------------------------------
// Qudit-cavity

/// Qutrit (3 levels) coupled to a 20-level cavity with the published parameters,
/// in ns and rad/ns. `cross_kerr = false` sets xi_01 = 0.
ModelConfig qudit_cavity_config(bool cross_kerr = true);

struct QuditCavityOptions {
  ModelConfig model = qudit_cavity_config();
  SchemeConfig scheme = SchemeConfig::uniform(4, FlowFamily::Implicit);
  int steps = 1000;
  Real t_final = 2500.0;  // ns
  std::vector<Index> initial_labels;  // empty: ground state
  bool compute_error = false;
  int reference_substeps = 0;  // 0: no reference
  Real reference_tolerance = 1e-6;
  /// Precomputed reference density at t_final; takes precedence over reference_substeps.
  std::optional<Matrix> reference;
};

struct QuditCavityResult {
  Trajectory trajectory;
  std::vector<std::vector<RealVector>> populations;  // per recorded time, per subsystem
  std::optional<Real> error;                          // Frobenius, vs reference
};

QuditCavityResult run_qudit_cavity(const QuditCavityOptions& options);

/// Validated RK4 reference density at t_final for the configured model and initial state.
Matrix qudit_cavity_reference(const QuditCavityOptions& options);

// ---------------------------------------------------------------------------
// Jaynes-Cummings revival

struct JcOptions {
  Index cavity_levels = 150;
  Real coupling = 1.0;
  Real t2 = 4500.0;
  Real amplitude = 0.0;  // A
  Real width = 0.4;      // B
  JcDrive drive = JcDrive::Cavity;
  int steps = 6400;
  Real horizon = 1.5;  // in units of the revival time
  SchemeConfig scheme = SchemeConfig::uniform(4, FlowFamily::Explicit);
};

/// 2 pi |v| / lambda with v = sqrt(m / 3) and lambda = coupling.
Real jc_revival_time(Index cavity_levels, Real coupling);

/// Initial factor: qubit excited (x) normalized coherent cavity state.
Matrix jc_initial_factor(Index cavity_levels);

/// Trapezoid rule of exp(-((t/t_r - 1)/0.6)^10) (P(t) - 1/2)^2 on the sample grid.
Real jc_cost(const std::vector<Real>& times, const std::vector<Real>& excited, Real revival_time);

struct JcResult {
  std::vector<Real> times;
  std::vector<Real> excited;  // qubit excited-state population
  std::vector<Real> ground;
  std::vector<Index> ranks;
  std::vector<Real> traces;
  Real cost = 0.0;
  Real revival_time = 0.0;
};

JcResult run_jc_revival(const JcOptions& options);

struct CostScanResult {
  std::vector<Real> a_values;
  std::vector<Real> b_values;
  RealMatrix cost;  // a x b, NaN where a run failed
  std::vector<std::string> failures;
  int steps = 0;
};

/// Grid {start, start+step, ..., stop} (inclusive, rounded to the nearest count).
std::vector<Real> uniform_grid(Real start, Real stop, Real step);

/// C(A, B) over the grid; pairs run concurrently on `threads` workers (0: hardware).
CostScanResult run_jc_scan(const std::vector<Real>& a_values, const std::vector<Real>& b_values,
                           const JcOptions& base, unsigned threads = 0);

}  // namespace cptp
