#include "cptp/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace cptp {

Matrix lindblad_superoperator(const LindbladModel& model, Real t) {
  const Index d = model.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix h = model.hamiltonian(t);
  Matrix s = -kI * Matrix(Eigen::kroneckerProduct(id, h)) +
             kI * Matrix(Eigen::kroneckerProduct(h.transpose(), id));
  for (std::size_t a = 0; a < model.num_jumps(); ++a) {
    const Matrix l = model.jump_operator(a);
    const Matrix ldl = l.adjoint() * l;
    s += Matrix(Eigen::kroneckerProduct(l.conjugate(), l));
    s -= 0.5 * Matrix(Eigen::kroneckerProduct(id, ldl));
    s -= 0.5 * Matrix(Eigen::kroneckerProduct(ldl.transpose(), id));
  }
  return s;
}

Vector vectorize(const Eigen::Ref<const Matrix>& rho) {
  return Eigen::Map<const Vector>(Matrix(rho).data(), rho.size());
}

Matrix unvectorize(const Eigen::Ref<const Vector>& v, Index d) {
  return Eigen::Map<const Matrix>(Vector(v).data(), d, d);
}

Matrix lindblad_rhs(const LindbladModel& model, Real t, const Eigen::Ref<const Matrix>& rho) {
  const SparseMatrix h = model.hamiltonian_sparse(t);
  const Matrix hr = h * rho;
  // -i(H rho - rho H) with rho H = (H rho^dag)^dag for Hermitian H.
  Matrix out = -kI * (hr - Matrix((h * rho.adjoint()).adjoint()));
  for (const auto& l : model.jump_operators()) {
    const Matrix lr = l * rho;
    out.noalias() += (l * lr.adjoint()).adjoint();
  }
  const SparseMatrix& damp = model.dissipative_part();  // -1/2 sum L^dag L
  out.noalias() += damp * rho;
  out.noalias() += (damp * rho.adjoint()).adjoint();
  return out;
}

Matrix rk4_solve(const LindbladModel& model, const Eigen::Ref<const Matrix>& rho0, Real t_final,
                 int substeps) {
  if (substeps < 1) throw ResolutionError("reference solve needs at least one substep");
  const Real h = t_final / substeps;
  Matrix rho = rho0;
  for (int n = 0; n < substeps; ++n) {
    const Real t = n * h;
    const Matrix k1 = lindblad_rhs(model, t, rho);
    const Matrix k2 = lindblad_rhs(model, t + 0.5 * h, rho + (0.5 * h) * k1);
    const Matrix k3 = lindblad_rhs(model, t + 0.5 * h, rho + (0.5 * h) * k2);
    const Matrix k4 = lindblad_rhs(model, t + h, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return 0.5 * (rho + rho.adjoint());
}

Matrix reference_solve(const LindbladModel& model, const Eigen::Ref<const Matrix>& rho0,
                       Real t_final, int substeps, Real tolerance) {
  if (substeps < 2) throw ResolutionError("reference solve needs at least two substeps");
  const Matrix fine = rk4_solve(model, rho0, t_final, substeps);
  const Matrix coarse = rk4_solve(model, rho0, t_final, substeps / 2);
  const Real change = (fine - coarse).norm();
  if (!(change < tolerance / 10.0)) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "reference resolution check failed: halving changes the result by %.3e (limit %.3e)",
                  change, tolerance / 10.0);
    throw ResolutionError(msg);
  }
  return fine;
}

Matrix exact_flow_constant(const Eigen::Ref<const Matrix>& generator, Real dt) {
  return Matrix(dt * generator).exp();
}

Matrix exact_two_qubit_rho(Real coupling, Real gamma, Real t) {
  const Real decay = std::exp(-gamma * t);
  const Real c = std::cos(2.0 * coupling * t);
  const Real s = std::sin(2.0 * coupling * t);
  Matrix rho = Matrix::Zero(4, 4);
  rho(0, 0) = 1.0 - decay;
  rho(1, 1) = 0.5 * decay * (1.0 - c);
  rho(2, 2) = 0.5 * decay * (1.0 + c);
  rho(1, 2) = Complex(0.0, -0.5 * decay * s);
  rho(2, 1) = Complex(0.0, 0.5 * decay * s);
  return rho;
}

}  // namespace cptp
