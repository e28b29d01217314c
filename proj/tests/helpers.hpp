#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "cptp/model.hpp"

namespace cptp::test {

using Rng = std::mt19937_64;

inline Matrix random_matrix(Rng& rng, Index rows, Index cols, Real scale = 1.0) {
  std::normal_distribution<Real> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = scale * Complex(n(rng), n(rng));
  }
  return m;
}

inline Matrix random_hermitian(Rng& rng, Index d, Real scale = 1.0) {
  const Matrix a = random_matrix(rng, d, d, scale);
  return 0.5 * (a + a.adjoint());
}

inline Real uniform(Rng& rng, Real lo, Real hi) {
  return std::uniform_real_distribution<Real>(lo, hi)(rng);
}

/// Generic model: random static H, two smooth time-dependent terms, random jumps.
inline LindbladModel random_model(Rng& rng, Index d, int jumps, Real h_scale = 1.0,
                                  Real jump_scale = 0.3) {
  std::vector<HamiltonianTerm> terms;
  terms.push_back({random_hermitian(rng, d, h_scale).sparseView(),
                   Coefficient::polynomial({uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)})});
  terms.push_back({random_hermitian(rng, d, h_scale).sparseView(),
                   Coefficient::cosine(uniform(rng, 0.2, 1.0), uniform(rng, 0.5, 3.0), uniform(rng, 0, 6))});
  std::vector<Matrix> ls;
  for (int a = 0; a < jumps; ++a) ls.push_back(random_matrix(rng, d, d, jump_scale));
  return LindbladModel(random_hermitian(rng, d, h_scale), std::move(terms), std::move(ls));
}

/// Random PSD density matrix factor of the given rank with unit trace.
inline Matrix random_factor(Rng& rng, Index d, Index rank) {
  Matrix v = random_matrix(rng, d, rank);
  return v / v.norm();
}

inline Real min_eigenvalue(const Matrix& rho) {
  const Matrix h = 0.5 * (rho + rho.adjoint());
  return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

/// Least-squares slope of log(y) against log(x).
inline Real loglog_slope(const std::vector<Real>& x, const std::vector<Real>& y) {
  const std::size_t n = x.size();
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  Real sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

/// Reference integration of dV/dt = J(t) V with classical RK4 on a fine grid.
template <typename Model>
Matrix flow_reference(const Model& m, Real t0, Real t1, const Matrix& v, int substeps) {
  const Real h = (t1 - t0) / substeps;
  Matrix x = v;
  for (int n = 0; n < substeps; ++n) {
    const Real t = t0 + n * h;
    const Matrix k1 = m.generator(t) * x;
    const Matrix k2 = m.generator(t + h / 2) * (x + h / 2 * k1);
    const Matrix k3 = m.generator(t + h / 2) * (x + h / 2 * k2);
    const Matrix k4 = m.generator(t + h) * (x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

}  // namespace cptp::test
