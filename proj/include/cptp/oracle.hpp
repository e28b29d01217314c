#pragma once

#include "cptp/model.hpp"

namespace cptp {

// Dense brute-force references. Vectorization is column-major throughout:
// vec(A X B) = (B^T (x) A) vec(X).

/// d^2 x d^2 matrix of rho -> -i[H(t), rho] + sum L rho L^dag - 1/2 {L^dag L, rho}.
Matrix lindblad_superoperator(const LindbladModel& model, Real t);

/// Column-major vec / unvec.
Vector vectorize(const Eigen::Ref<const Matrix>& rho);
Matrix unvectorize(const Eigen::Ref<const Vector>& v, Index d);

/// Right-hand side of the master equation evaluated in matrix form.
Matrix lindblad_rhs(const LindbladModel& model, Real t, const Eigen::Ref<const Matrix>& rho);

/// Classical RK4 with `substeps` uniform steps, returning the Hermitian part.
Matrix rk4_solve(const LindbladModel& model, const Eigen::Ref<const Matrix>& rho0, Real t_final,
                 int substeps);

/// RK4 reference with a resolution self-check: the run with substeps/2 must
/// agree with the full run to within tolerance / 10, else ResolutionError.
Matrix reference_solve(const LindbladModel& model, const Eigen::Ref<const Matrix>& rho0,
                       Real t_final, int substeps, Real tolerance);

/// exp(dt * J) for a constant generator.
Matrix exact_flow_constant(const Eigen::Ref<const Matrix>& generator, Real dt);

/// Closed-form density matrix of two resonant qubits with hopping J and
/// equal decay rate gamma, started in |10><10| (qubit 0 is the left factor).
Matrix exact_two_qubit_rho(Real coupling, Real gamma, Real t);

}  // namespace cptp
