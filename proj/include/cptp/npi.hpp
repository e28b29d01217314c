#pragma once

#include <array>
#include <functional>
#include <limits>
#include <vector>

#include "cptp/flow.hpp"
#include "cptp/model.hpp"

namespace cptp {

enum class SecondOrderRule { Midpoint, Trapezoid };

/// Positive-weight quadrature on [0, 1] used by one NPI level.
struct QuadratureRule {
  int order = 1;
  std::vector<Real> nodes;
  std::vector<Real> weights;

  /// Level 1: left endpoint (transport over the full step). Level 2: midpoint
  /// or trapezoid. Level 3: Gauss-Radau {0, 2/3}. Level 4: Gauss-Legendre.
  static QuadratureRule for_level(int level, SecondOrderRule rule = SecondOrderRule::Midpoint);
};

/// Scheme settings. Flow families are chosen per level and per role:
/// `main_family[k]` is used for U^(k) in the leading term of a level-k step,
/// `integrand_family[k]` for U^(k) inside the quadrature sum of a level-(k+1)
/// step. Index 0 is unused.
struct SchemeConfig {
  int order = 4;
  std::array<FlowFamily, 5> main_family{};
  std::array<FlowFamily, 5> integrand_family{};
  SecondOrderRule second_order_rule = SecondOrderRule::Midpoint;
  Real kappa = 0.5;
  bool renormalize_trace = true;
  Index max_rank = std::numeric_limits<Index>::max();

  /// Every flow of every level uses `family`; kappa 0.5 (explicit) or 0.1 (implicit).
  static SchemeConfig uniform(int order, FlowFamily family);
  /// Only the top-level flow uses `family`, lower levels are explicit.
  static SchemeConfig top_level(int order, FlowFamily family);

  FlowKind main_flow(int level) const { return {level, main_family[level]}; }
  FlowKind integrand_flow(int level) const { return {level, integrand_family[level]}; }
  /// Truncation tolerance (kappa dt)^(level+1) for a level-`level` output.
  Real truncation_tolerance(Real dt, int level) const;
  void validate() const;
};

/// rho = V V^dag at time t.
struct LowRankState {
  Real time = 0.0;
  Matrix factor;

  Index rank() const { return factor.cols(); }
  Real trace() const { return factor.squaredNorm(); }
  Matrix density() const { return factor * factor.adjoint(); }
};

/// Horizontal concatenation of blocks, each scaled by sqrt(weight).
template <typename Derived>
Matrix assemble_kraus_columns(const std::vector<Derived>& blocks, const std::vector<Real>& weights) {
  if (blocks.size() != weights.size()) throw ModelError("one weight per block is required");
  Index cols = 0;
  const Index rows = blocks.empty() ? 0 : blocks.front().rows();
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw ModelError("Kraus blocks must have equal row counts");
    cols += b.cols();
  }
  Matrix out(rows, cols);
  Index c = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (weights[i] < 0.0) throw ModelError("Kraus weights must be non-negative");
    out.middleCols(c, blocks[i].cols()) = std::sqrt(weights[i]) * blocks[i];
    c += blocks[i].cols();
  }
  return out;
}

struct TruncationOptions {
  Index max_rank = std::numeric_limits<Index>::max();
  /// Hierarchical grouping kicks in when columns > group_threshold * d.
  Index group_threshold = 4;
  /// Group width in multiples of d.
  Index group_width = 2;
};

/// Best rank-r factor U_r Sigma_r of v with sum_{i>r} sigma_i^2 <= tol.
/// Always keeps at least one column. Throws RankLimitError when the kept rank
/// exceeds options.max_rank.
Matrix truncate_svd(const Eigen::Ref<const Matrix>& v, Real tol, const TruncationOptions& options = {});

/// V / ||V||_F so that Tr(V V^dag) = 1. Throws DivergenceError on a zero or
/// non-finite factor.
template <typename Derived>
Matrix renormalize_trace(const Eigen::MatrixBase<Derived>& v) {
  const Real norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DivergenceError("cannot renormalize a zero or non-finite state factor");
  }
  return v / norm;
}

/// One NPI step of the given level (<= config.order) from state.time with step dt.
/// The returned factor is truncated; trace renormalization is not applied here.
LowRankState npi_step(const LindbladModel& model, const SchemeConfig& config,
                      const LowRankState& state, Real dt, int level);

/// The same Kraus map applied to an arbitrary dense d x d matrix, without
/// truncation or renormalization. Linear in rho.
Matrix npi_step_dense(const LindbladModel& model, const SchemeConfig& config,
                      const Eigen::Ref<const Matrix>& rho, Real t, Real dt, int level);

struct Trajectory {
  std::vector<Real> times;
  std::vector<Index> ranks;
  std::vector<Real> traces;  // after renormalization (if enabled)
  std::vector<Real> raw_traces;  // before renormalization
  LowRankState final_state;
  std::vector<Matrix> states;  // filled only when requested
};

struct EvolveOptions {
  bool keep_states = false;
  /// Called with the state after every outer step (and once with the initial state).
  std::function<void(const LowRankState&)> observer;
};

/// N top-level steps with dt = t_final / N, renormalizing once per outer step
/// when enabled. Throws DivergenceError when the factor blows up.
Trajectory evolve(const LindbladModel& model, const SchemeConfig& config,
                  const Eigen::Ref<const Matrix>& v0, Real t_final, int steps,
                  const EvolveOptions& options = {});

}  // namespace cptp
