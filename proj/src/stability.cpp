#include "cptp/stability.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace cptp {

namespace {

constexpr Real kRadiusSlack = 1e-12;

const Real kGaussC1 = 0.5 - std::sqrt(3.0) / 6.0;
const Real kGaussC2 = 0.5 + std::sqrt(3.0) / 6.0;

Real abs2(Complex z) { return std::norm(z); }

// Shape shared by every test-equation amplification matrix.
AmplificationMatrix shaped(Complex coupling, Complex multiplier, Complex corner) {
  AmplificationMatrix a = AmplificationMatrix::Zero();
  a(0, 0) = 1.0;
  a(0, 3) = coupling;
  a(1, 1) = std::conj(multiplier);
  a(2, 2) = multiplier;
  a(3, 3) = corner;
  return a;
}

Complex top_multiplier(const HelperScalars& h, int order, int i) {
  switch (order) {
    case 1: return h.alpha(i, 1.0);
    case 2: return h.beta(i, 1.0);
    case 3: return h.gamma(i, 1.0);
    case 4: return h.delta(i, 1.0);
    default: throw ModelError("amplification matrices exist for orders 1..4");
  }
}

AmplificationMatrix decay_matrix(const HelperScalars& h, int order, const SchemeIndices& idx,
                                 Real t1) {
  const Real dt = h.dt();
  const Complex m = top_multiplier(h, order, idx.i);
  Real coupling = 0.0;
  switch (order) {
    case 1: coupling = dt / t1; break;
    case 2: coupling = dt / t1 * abs2(h.alpha(idx.j, 0.5)); break;
    case 3: coupling = dt / (4.0 * t1) + 3.0 * dt / (4.0 * t1) * abs2(h.beta(0, 2.0 / 3.0)); break;
    case 4:
      coupling = dt / (2.0 * t1) * (abs2(h.gamma(0, kGaussC1)) + abs2(h.gamma(0, kGaussC2)));
      break;
  }
  return shaped(coupling, m, abs2(m));
}

// Y^(3) evaluated for a step dt with the given helper table.
Real y3(const HelperScalars& h, Real t2, Real scale, int i) {
  const Real dt = h.dt() * scale;
  const Real s = scale;
  return dt / (4.0 * t2) * abs2(h.beta(0, s)) +
         dt * dt * (dt + 3.0 * t2) / (6.0 * t2 * t2 * t2) * std::pow(abs2(h.alpha(0, s / 3.0)), 2) *
             abs2(h.beta(0, s / 3.0)) +
         3.0 * dt / (4.0 * t2) * abs2(h.beta(0, s / 3.0)) * abs2(h.beta(0, 2.0 * s / 3.0)) +
         abs2(h.gamma(i, s));
}

AmplificationMatrix dephasing_matrix(const HelperScalars& h, int order, const SchemeIndices& idx,
                                     Real t1, Real t2) {
  const Real dt = h.dt();
  const Complex m = top_multiplier(h, order, idx.i);
  switch (order) {
    case 1:
      return shaped(dt / t1, m, (dt + t2) / t2 * abs2(m));
    case 2: {
      const Real f = dt * (dt + 2.0 * t2);
      const Real aj = abs2(h.alpha(idx.j, 0.5));
      const Real al = abs2(h.alpha(idx.l, 0.5));
      return shaped(f / (2.0 * t1 * t2) * aj, m, f / (2.0 * t2 * t2) * aj * al + abs2(m));
    }
    case 3: {
      const Real coupling =
          2.0 * dt * dt * (dt + 3.0 * t2) / (12.0 * t1 * t2 * t2) * std::pow(abs2(h.alpha(0, 1.0 / 3.0)), 2) +
          dt / (4.0 * t1) * (1.0 + 3.0 * abs2(h.beta(0, 2.0 / 3.0)));
      return shaped(coupling, m, y3(h, t2, 1.0, idx.i));
    }
    case 4: {
      Real x = 0.0, y = 0.0;
      for (const Real c : {kGaussC1, kGaussC2}) {
        const Real a4 = std::pow(abs2(h.alpha(0, c / 3.0)), 2);
        const Real b13 = abs2(h.beta(0, c / 3.0));
        const Real b23 = abs2(h.beta(0, 2.0 * c / 3.0));
        const Real bc = abs2(h.beta(0, c));
        const Real gc = abs2(h.gamma(0, c));
        const Real g1c = abs2(h.gamma(0, 1.0 - c));
        x += 3.0 * dt * t2 * t2 * c * bc + 2.0 * dt * dt * c * c * (dt * c + 3.0 * t2) * a4 * b13 +
             9.0 * dt * t2 * t2 * c * b13 * b23 + 12.0 * t2 * t2 * t2 * gc;
        y += 3.0 * dt * c * bc * g1c + 2.0 * dt * dt / (t2 * t2) * c * c * (c * dt + 3.0 * t2) * a4 * b13 * g1c +
             9.0 * dt * c * b13 * b23 * g1c + 12.0 * t2 * gc * g1c;
      }
      return shaped(dt / (24.0 * t1 * t2 * t2 * t2) * x, m, abs2(m) + dt / (24.0 * t2 * t2) * y);
    }
    default:
      throw ModelError("amplification matrices exist for orders 1..4");
  }
}

void check_indices(const SchemeIndices& idx) {
  for (const int v : {idx.i, idx.j, idx.l}) {
    if (v != 0 && v != 1) throw ModelError("scheme indices must be 0 or 1");
  }
}

FlowFamily family_of(int index) { return index == 0 ? FlowFamily::Explicit : FlowFamily::Implicit; }

}  // namespace

Complex test_generator_eigenvalue(TestCase test, const TestParameters& p) {
  Complex a(-0.5 / p.t1, -p.omega);
  if (test == TestCase::DecayDephasing) a -= 0.5 / p.t2;
  return a;
}

LindbladModel build_test_model(TestCase test, const TestParameters& p) {
  if (!(p.t1 > 0.0) || (test == TestCase::DecayDephasing && !(p.t2 > 0.0))) {
    throw ModelError("test-equation decay times must be positive");
  }
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = p.omega;
  std::vector<Matrix> jumps{lowering_operator(2) / std::sqrt(p.t1)};
  if (test == TestCase::DecayDephasing && std::isfinite(p.t2)) {
    Matrix l2 = Matrix::Zero(2, 2);
    l2(1, 1) = 1.0 / std::sqrt(p.t2);
    jumps.push_back(l2);
  }
  return LindbladModel(h, {}, jumps);
}

Complex flow_multiplier(int order, FlowFamily family, Complex z) {
  if (family == FlowFamily::Explicit) {
    Complex term = 1.0, sum = 1.0;
    for (int k = 1; k <= order; ++k) {
      term *= z / static_cast<Real>(k);
      sum += term;
    }
    return sum;
  }
  switch (order) {
    case 1: return 1.0 / (1.0 - z);
    case 2: return (1.0 + 0.5 * z) / (1.0 - 0.5 * z);
    case 3:
    case 4: {
      const Complex d = kImplicitFlowD, db = std::conj(kImplicitFlowD);
      return (1.0 + kI * 0.25 * d * z) * (1.0 - kI * 0.25 * db * z) /
             ((1.0 + kI * 0.25 * db * z) * (1.0 - kI * 0.25 * d * z));
    }
    default: throw ModelError("flow order must be 1..4");
  }
}

Complex HelperScalars::alpha(int i, Real s) const { return flow_multiplier(1, family_of(i), s * dt_ * alpha_); }
Complex HelperScalars::beta(int i, Real s) const { return flow_multiplier(2, family_of(i), s * dt_ * alpha_); }
Complex HelperScalars::gamma(int i, Real s) const { return flow_multiplier(3, family_of(i), s * dt_ * alpha_); }
Complex HelperScalars::delta(int i, Real s) const { return flow_multiplier(4, family_of(i), s * dt_ * alpha_); }

SchemeConfig scheme_for_indices(int order, const SchemeIndices& idx) {
  check_indices(idx);
  SchemeConfig c = SchemeConfig::uniform(order, FlowFamily::Explicit);
  c.second_order_rule = SecondOrderRule::Midpoint;
  c.renormalize_trace = false;
  c.main_family[static_cast<std::size_t>(order)] = family_of(idx.i);
  if (order == 2) {
    c.main_family[1] = family_of(idx.j);
    c.integrand_family[1] = family_of(idx.l);
  }
  return c;
}

std::vector<SchemeIndices> enumerate_indices(TestCase, int order) {
  std::vector<SchemeIndices> out;
  if (order == 2) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) out.push_back({i, j, l});
  } else {
    out.push_back({0, 0, 0});
    out.push_back({1, 0, 0});
  }
  return out;
}

AmplificationMatrix amplification_closed_form(TestCase test, int order, const SchemeIndices& idx,
                                              const TestParameters& p, Real dt) {
  check_indices(idx);
  const HelperScalars h(dt, test_generator_eigenvalue(test, p));
  return test == TestCase::Decay ? decay_matrix(h, order, idx, p.t1)
                                 : dephasing_matrix(h, order, idx, p.t1, p.t2);
}

AmplificationMatrix amplification_numeric(TestCase test, const SchemeConfig& config,
                                          const TestParameters& p, Real dt) {
  const LindbladModel model = build_test_model(test, p);
  AmplificationMatrix a;
  for (int b = 0; b < 4; ++b) {
    Matrix e = Matrix::Zero(2, 2);
    e(b / 2, b % 2) = 1.0;
    const Matrix out = npi_step_dense(model, config, e, 0.0, dt, config.order);
    a.col(b) << out(0, 0), out(0, 1), out(1, 0), out(1, 1);
  }
  return a;
}

Real nonstationary_spectral_radius(const AmplificationMatrix& a) {
  const Eigen::Matrix<Complex, 3, 3> block = a.block<3, 3>(1, 1);
  Eigen::ComplexEigenSolver<Eigen::Matrix<Complex, 3, 3>> es(block, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool stability_condition(TestCase test, int order, const SchemeIndices& idx,
                         const TestParameters& p, Real dt) {
  check_indices(idx);
  const Complex aj = test_generator_eigenvalue(test, p);
  const HelperScalars h(dt, aj);
  if (test == TestCase::Decay) {
    if (idx.i == 1) return true;  // implicit top flow: unconditionally stable
    const Complex z = -dt * p.omega * kI - dt / (2.0 * p.t1);
    switch (order) {
      case 1: {
        const Real a = 1.0 - dt / (2.0 * p.t1);
        return a * a + std::pow(p.omega * dt, 2) <= 1.0;
      }
      case 2: return std::abs(0.5 * (z + 1.0) * (z + 1.0) + 0.5) <= 1.0;
      case 3: return std::abs(1.0 + z + z * z / 2.0 + z * z * z / 6.0) <= 1.0;
      case 4: return std::abs(1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0) <= 1.0;
      default: throw ModelError("stability conditions exist for orders 1..4");
    }
  }
  const Real t2 = p.t2;
  switch (order) {
    case 1:
      return std::abs(h.alpha(idx.i, 1.0)) <= std::sqrt(t2 / (dt + t2));
    case 2:
      return std::abs(dt * (dt + 2.0 * t2) / (2.0 * t2 * t2) * abs2(h.alpha(idx.j, 0.5)) *
                          abs2(h.alpha(idx.l, 0.5)) +
                      abs2(h.beta(idx.i, 1.0))) <= 1.0;
    case 3:
      return std::abs(y3(h, t2, 1.0, idx.i)) <= 1.0;
    case 4:
      return std::abs(dephasing_matrix(h, 4, idx, p.t1, t2)(3, 3)) <= 1.0;
    default:
      throw ModelError("stability conditions exist for orders 1..4");
  }
}

StabilityRegion stability_region_scan(int order, FlowFamily family, const RegionGrid& grid) {
  const SchemeIndices idx{family == FlowFamily::Explicit ? 0 : 1, 0, 0};
  auto radius = [&](Complex z) {
    return nonstationary_spectral_radius(decay_matrix(HelperScalars(1.0, z), order, idx, 1.0));
  };
  auto stable = [&](Complex z) { return radius(z) <= 1.0 + kRadiusSlack; };
  auto bisect = [&](Complex a, Complex b) {
    // a stable, b unstable
    for (int it = 0; it < 60; ++it) {
      const Complex m = 0.5 * (a + b);
      (stable(m) ? a : b) = m;
    }
    return 0.5 * (a + b);
  };

  StabilityRegion out;
  const Index nx = std::max<Index>(grid.nx, 2), ny = std::max<Index>(grid.ny, 2);
  const Real dx = (grid.re_max - grid.re_min) / static_cast<Real>(nx - 1);
  const Real dy = (grid.im_max - grid.im_min) / static_cast<Real>(ny - 1);
  out.grid.reserve(static_cast<std::size_t>(nx * ny));
  for (Index iy = 0; iy < ny; ++iy) {
    for (Index ix = 0; ix < nx; ++ix) {
      const Complex z(grid.re_min + ix * dx, grid.im_min + iy * dy);
      const Real r = radius(z);
      out.grid.push_back({z, r, r <= 1.0 + kRadiusSlack});
    }
  }
  auto at = [&](Index ix, Index iy) -> const RegionPoint& {
    return out.grid[static_cast<std::size_t>(iy * nx + ix)];
  };
  for (Index iy = 0; iy < ny; ++iy) {
    for (Index ix = 0; ix < nx; ++ix) {
      const RegionPoint& p = at(ix, iy);
      for (const auto& q : {ix + 1 < nx ? &at(ix + 1, iy) : nullptr,
                            iy + 1 < ny ? &at(ix, iy + 1) : nullptr}) {
        if (q == nullptr || q->stable == p.stable) continue;
        out.contour.push_back(p.stable ? bisect(p.z, q->z) : bisect(q->z, p.z));
      }
    }
  }
  // Walk left along the real axis from the origin to the first unstable sample.
  Real x = 0.0;
  out.real_axis_intercept = grid.re_min;
  while (x - dx >= grid.re_min) {
    if (!stable(Complex(x - dx, 0.0))) {
      out.real_axis_intercept = bisect(Complex(x, 0.0), Complex(x - dx, 0.0)).real();
      break;
    }
    x -= dx;
  }
  return out;
}

}  // namespace cptp
