#include "cptp/npi.hpp"

#include <cmath>

namespace cptp {

namespace {

// U X U^dag for an arbitrary (not necessarily Hermitian) X.
Matrix conjugate_by_flow(const LindbladModel& m, FlowKind kind, Real t0, Real t1,
                         const Eigen::Ref<const Matrix>& x) {
  const Matrix ux = apply_flow(m, kind, t0, t1, x);
  return apply_flow(m, kind, t0, t1, ux.adjoint()).adjoint();
}

Matrix jump_sum(const LindbladModel& m, const Eigen::Ref<const Matrix>& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& l : m.jump_operators()) {
    const Matrix lr = l * rho;
    out.noalias() += (l * lr.adjoint()).adjoint();
  }
  return out;
}

Matrix step_factor(const LindbladModel& m, const SchemeConfig& cfg, Real t,
                   const Eigen::Ref<const Matrix>& v, Real h, int level) {
  const Real t1 = t + h;
  Matrix columns;
  if (level == 1) {
    const Index r = v.cols();
    Matrix x(v.rows(), r * static_cast<Index>(1 + m.num_jumps()));
    x.leftCols(r) = v;
    if (m.num_jumps() > 0) x.rightCols(x.cols() - r) = m.apply_jumps(v);
    columns = apply_flow(m, cfg.main_flow(1), t, t1, x);
    columns.rightCols(columns.cols() - r) *= std::sqrt(h);
  } else {
    const QuadratureRule rule = QuadratureRule::for_level(level, cfg.second_order_rule);
    std::vector<Matrix> blocks;
    std::vector<Real> weights;
    blocks.push_back(apply_flow(m, cfg.main_flow(level), t, t1, v));
    weights.push_back(1.0);
    if (m.num_jumps() > 0) {
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const Real c = rule.nodes[j];
        const Matrix inner = c == 0.0 ? Matrix(v) : step_factor(m, cfg, t, v, c * h, level - 1);
        const Matrix jumped = m.apply_jumps(inner);
        blocks.push_back(c == 1.0 ? jumped
                                  : apply_flow(m, cfg.integrand_flow(level - 1), t + c * h, t1, jumped));
        weights.push_back(rule.weights[j] * h);
      }
    }
    columns = assemble_kraus_columns(blocks, weights);
  }
  TruncationOptions opts;
  opts.max_rank = cfg.max_rank;
  return truncate_svd(columns, cfg.truncation_tolerance(h, level), opts);
}

Matrix step_dense(const LindbladModel& m, const SchemeConfig& cfg, Real t,
                  const Eigen::Ref<const Matrix>& rho, Real h, int level) {
  const Real t1 = t + h;
  if (level == 1) {
    return conjugate_by_flow(m, cfg.main_flow(1), t, t1, rho + h * jump_sum(m, rho));
  }
  const QuadratureRule rule = QuadratureRule::for_level(level, cfg.second_order_rule);
  Matrix out = conjugate_by_flow(m, cfg.main_flow(level), t, t1, rho);
  if (m.num_jumps() == 0) return out;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const Real c = rule.nodes[j];
    const Matrix inner = c == 0.0 ? Matrix(rho) : step_dense(m, cfg, t, rho, c * h, level - 1);
    const Matrix jumped = jump_sum(m, inner);
    out += (rule.weights[j] * h) *
           (c == 1.0 ? jumped : conjugate_by_flow(m, cfg.integrand_flow(level - 1), t + c * h, t1, jumped));
  }
  return out;
}

// cols > multiple * d without overflowing for large multiples.
bool wider_than(Index cols, Index multiple, Index d) { return d > 0 && cols > 0 && (cols - 1) / d >= multiple; }

void check_level(const SchemeConfig& cfg, int level) {
  if (level < 1 || level > cfg.order) throw ModelError("NPI level must be in 1..order");
}

}  // namespace

QuadratureRule QuadratureRule::for_level(int level, SecondOrderRule rule) {
  switch (level) {
    case 1:
      return {1, {0.0}, {1.0}};
    case 2:
      if (rule == SecondOrderRule::Trapezoid) return {2, {0.0, 1.0}, {0.5, 0.5}};
      return {2, {0.5}, {1.0}};
    case 3:
      return {3, {0.0, 2.0 / 3.0}, {0.25, 0.75}};
    case 4: {
      const Real s = std::sqrt(3.0) / 6.0;
      return {4, {0.5 - s, 0.5 + s}, {0.5, 0.5}};
    }
    default:
      throw ModelError("quadrature rules are provided for levels 1..4");
  }
}

SchemeConfig SchemeConfig::uniform(int order, FlowFamily family) {
  SchemeConfig c;
  c.order = order;
  c.main_family.fill(family);
  c.integrand_family.fill(family);
  c.kappa = family == FlowFamily::Explicit ? 0.5 : 0.1;
  return c;
}

SchemeConfig SchemeConfig::top_level(int order, FlowFamily family) {
  SchemeConfig c = uniform(order, FlowFamily::Explicit);
  c.main_family[static_cast<std::size_t>(order)] = family;
  c.kappa = family == FlowFamily::Explicit ? 0.5 : 0.1;
  return c;
}

Real SchemeConfig::truncation_tolerance(Real dt, int level) const {
  return std::pow(kappa * dt, level + 1);
}

void SchemeConfig::validate() const {
  if (order < 1 || order > 4) throw ConfigError("scheme order must be 1..4");
  if (!(kappa > 0.0)) throw ConfigError("truncation constant kappa must be positive");
  if (max_rank < 1) throw ConfigError("max_rank must be positive");
}

Matrix truncate_svd(const Eigen::Ref<const Matrix>& v, Real tol, const TruncationOptions& options) {
  if (tol < 0.0) throw ModelError("truncation tolerance must be non-negative");
  if (!v.allFinite()) throw DivergenceError("non-finite Kraus columns");
  const Index d = v.rows();
  Matrix work;
  // Hierarchical pass: compress groups of columns, then the concatenation.
  if (wider_than(v.cols(), options.group_threshold, d)) {
    const Index width = std::max<Index>(1, options.group_width * d);
    std::vector<Matrix> parts;
    Index total = 0;
    for (Index c = 0; c < v.cols(); c += width) {
      const Index w = std::min(width, v.cols() - c);
      TruncationOptions inner = options;
      inner.max_rank = std::numeric_limits<Index>::max();
      inner.group_threshold = std::numeric_limits<Index>::max();
      parts.push_back(truncate_svd(v.middleCols(c, w), tol, inner));
      total += parts.back().cols();
    }
    work.resize(d, total);
    Index c = 0;
    for (const auto& p : parts) {
      work.middleCols(c, p.cols()) = p;
      c += p.cols();
    }
    if (wider_than(work.cols(), options.group_threshold, d)) {
      TruncationOptions next = options;
      return truncate_svd(work, tol, next);
    }
  } else {
    work = v;
  }

  // Singular values from the Hermitian Gram matrix on the smaller side.
  const bool tall = work.cols() <= d;
  Matrix gram(tall ? work.cols() : d, tall ? work.cols() : d);
  if (tall) {
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(work.adjoint());
  } else {
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(work);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw Error("eigensolver failed to converge");
  const RealVector lambda = eig.eigenvalues().cwiseMax(0.0);  // ascending
  const Index n = lambda.size();
  Index drop = 0;
  Real tail = 0.0;
  while (drop + 1 < n && tail + lambda(drop) <= tol) {
    tail += lambda(drop);
    ++drop;
  }
  const Index r = n - drop;
  if (r > options.max_rank) {
    throw RankLimitError("truncated rank " + std::to_string(r) + " exceeds max_rank " +
                         std::to_string(options.max_rank));
  }
  const Matrix basis = eig.eigenvectors().rightCols(r).rowwise().reverse();
  if (tall) return work * basis;
  return basis * lambda.tail(r).reverse().cwiseSqrt().asDiagonal();
}

LowRankState npi_step(const LindbladModel& model, const SchemeConfig& config,
                      const LowRankState& state, Real dt, int level) {
  check_level(config, level);
  if (!(dt > 0.0)) throw ModelError("time step must be positive");
  return {state.time + dt, step_factor(model, config, state.time, state.factor, dt, level)};
}

Matrix npi_step_dense(const LindbladModel& model, const SchemeConfig& config,
                      const Eigen::Ref<const Matrix>& rho, Real t, Real dt, int level) {
  check_level(config, level);
  if (!(dt > 0.0)) throw ModelError("time step must be positive");
  return step_dense(model, config, t, rho, dt, level);
}

Trajectory evolve(const LindbladModel& model, const SchemeConfig& config,
                  const Eigen::Ref<const Matrix>& v0, Real t_final, int steps,
                  const EvolveOptions& options) {
  config.validate();
  if (steps < 1) throw ConfigError("number of time steps must be positive");
  if (v0.rows() != model.dim()) throw ModelError("initial factor does not match the model");
  const Real dt = t_final / steps;
  Trajectory traj;
  LowRankState state{0.0, v0};
  auto record = [&](Real raw) {
    traj.times.push_back(state.time);
    traj.ranks.push_back(state.rank());
    traj.traces.push_back(state.trace());
    traj.raw_traces.push_back(raw);
    if (options.keep_states) traj.states.push_back(state.factor);
    if (options.observer) options.observer(state);
  };
  record(state.trace());
  for (int n = 0; n < steps; ++n) {
    const Real t = n * dt;
    state.factor = step_factor(model, config, t, state.factor, dt, config.order);
    state.time = (n + 1) * dt;
    const Real raw = state.trace();
    if (!std::isfinite(raw)) {
      throw DivergenceError("state diverged at step " + std::to_string(n + 1));
    }
    if (config.renormalize_trace) state.factor = renormalize_trace(state.factor);
    record(raw);
  }
  traj.final_state = state;
  return traj;
}

}  // namespace cptp
