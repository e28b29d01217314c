#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "cptp/types.hpp"

namespace cptp {

/// Value of a scalar time function together with its first two derivatives.
struct TimeSample {
  Real value = 0.0;
  Real d1 = 0.0;
  Real d2 = 0.0;
};

/// Real scalar coefficient c(t) multiplying a Hamiltonian term.
///
/// `analytic` is false when the derivatives are not exact (tabulated data);
/// the fourth-order implicit flow refuses to run on such models.
struct Coefficient {
  std::function<TimeSample(Real)> eval;
  bool analytic = true;

  TimeSample operator()(Real t) const { return eval(t); }

  static Coefficient constant(Real c);
  static Coefficient cosine(Real amplitude, Real frequency, Real phase = 0.0);
  /// c(t) = sum_k coeffs[k] t^k
  static Coefficient polynomial(std::vector<Real> coeffs);
};

/// Control pulse p(t) or q(t) in the rotating frame.
class ControlPulse {
 public:
  enum class Kind { Zero, TanhRamp, SuperGaussian, Tabulated };

  ControlPulse() = default;

  static ControlPulse zero() { return {}; }
  /// p(t) = A/2 (1 + tanh(steepness (t - center)))
  static ControlPulse tanh_ramp(Real amplitude, Real steepness, Real center);
  /// f(t) = A exp(-((t/t_ref - 1)/width)^10)
  static ControlPulse super_gaussian(Real amplitude, Real width, Real t_ref);
  /// Piecewise-linear interpolation of samples; derivatives are not analytic.
  static ControlPulse tabulated(std::vector<Real> times, std::vector<Real> values);

  TimeSample operator()(Real t) const;

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool has_analytic_derivatives() const { return kind_ != Kind::Tabulated; }
  Coefficient as_coefficient() const;

 private:
  Kind kind_ = Kind::Zero;
  Real a_ = 0.0, b_ = 0.0, c_ = 0.0;
  std::vector<Real> times_, values_;
};

struct SubsystemSpec {
  Index levels = 2;
  Real omega = 0.0;      // transition frequency (rad / time)
  Real xi = 0.0;         // self-Kerr
  Real rot_freq = 0.0;   // rotating-frame frequency
  Real t1 = std::numeric_limits<Real>::infinity();
  Real t2 = std::numeric_limits<Real>::infinity();
};

struct CouplingSpec {
  Index k = 0;
  Index l = 1;
  Real j = 0.0;    // dipole coupling
  Real xi = 0.0;   // cross-Kerr
};

/// (p^k, q^k) for one subsystem.
using ControlPair = std::pair<ControlPulse, ControlPulse>;

/// H(t) = H_static + sum_m c_m(t) K_m with Hermitian K_m.
struct HamiltonianTerm {
  SparseMatrix op;
  Coefficient coef;
};

/// Lindblad model in jump-operator form.
///
/// Stores operators sparsely; J(t) = -i H(t) - 1/2 sum L^dag L is available
/// densely or as a matrix-free product with a block of columns. Immutable
/// after construction.
class LindbladModel {
 public:
  LindbladModel() = default;
  LindbladModel(const Matrix& h_static, std::vector<HamiltonianTerm> terms,
                std::vector<Matrix> jumps);
  LindbladModel(SparseMatrix h_static, std::vector<HamiltonianTerm> terms,
                std::vector<SparseMatrix> jumps);

  Index dim() const { return dim_; }
  std::size_t num_jumps() const { return jumps_.size(); }
  const std::vector<SparseMatrix>& jump_operators() const { return jumps_; }
  Matrix jump_operator(std::size_t alpha) const { return Matrix(jumps_[alpha]); }
  /// Subsystem level counts when the model is a tensor product (else {d}).
  const std::vector<Index>& subsystem_dims() const { return dims_; }
  void set_subsystem_dims(std::vector<Index> dims);

  Matrix hamiltonian(Real t) const;
  SparseMatrix hamiltonian_sparse(Real t) const;
  Matrix generator(Real t) const;
  Matrix generator_d1(Real t) const;
  Matrix generator_d2(Real t) const;
  /// -1/2 sum_alpha L^dag L
  const SparseMatrix& dissipative_part() const { return damping_; }

  /// J(t) * V without forming J densely.
  Matrix apply_generator(Real t, const Eigen::Ref<const Matrix>& v) const;
  /// [L_1 V | L_2 V | ...]
  Matrix apply_jumps(const Eigen::Ref<const Matrix>& v) const;

  bool has_analytic_derivatives() const;
  bool time_independent() const { return terms_.empty(); }

 private:
  Index dim_ = 0;
  SparseMatrix h_static_;
  SparseMatrix static_generator_;  // -i H_static + damping
  SparseMatrix damping_;
  std::vector<HamiltonianTerm> terms_;
  std::vector<SparseMatrix> jumps_;
  std::vector<Index> dims_;
};

/// Lowering operator a on n levels: a[j-1, j] = sqrt(j).
Matrix lowering_operator(Index n);

/// Largest Hilbert-space dimension accepted by the model builders.
inline constexpr Index kMaxModelDimension = 4096;

/// Rotating-frame transmon / cavity network. Subsystem 0 is the leftmost
/// Kronecker factor.
LindbladModel build_transmon_model(const std::vector<SubsystemSpec>& subsystems,
                                   const std::vector<CouplingSpec>& couplings,
                                   const std::vector<ControlPair>& controls);

enum class JcDrive { Qubit, Cavity };

/// Qubit (subsystem 0) coupled to an m-level cavity. The control enters as
/// p(t) (a + a^dag) on the subsystem selected by `drive`.
LindbladModel build_jaynes_cummings_model(Index cavity_levels, Real coupling, Real t2_qubit,
                                          const ControlPulse& control, JcDrive drive = JcDrive::Cavity);

/// Normalized coherent state truncated to m levels, components ~ |v|^n / sqrt(n!).
Vector coherent_state_vector(Index levels, Real amplitude);

/// Diagonal of each subsystem's reduced density matrix for rho = V V^dag.
std::vector<RealVector> populations(const Eigen::Ref<const Matrix>& factor,
                                    const std::vector<Index>& subsystem_dims);

/// Basis ket for a tensor-product index, e.g. basis_state({2,2}, {1,0}) = |10>.
Vector basis_state(const std::vector<Index>& dims, const std::vector<Index>& labels);

}  // namespace cptp
