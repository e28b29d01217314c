#include "cptp/flow.hpp"

#include <cmath>
#include <string>

namespace cptp {

namespace {

constexpr Real kSingularRcond = 1e-14;

Matrix solve_checked(const Matrix& a, const Matrix& rhs) {
  Eigen::PartialPivLU<Matrix> lu(a);
  const Real rcond = lu.rcond();
  if (!(rcond > kSingularRcond)) {
    throw SingularSystemError("implicit flow system is singular (rcond = " +
                              std::to_string(rcond) + "); reduce the time step");
  }
  return lu.solve(rhs);
}

Matrix explicit_step(const LindbladModel& m, int order, Real t, Real h,
                     const Eigen::Ref<const Matrix>& v) {
  switch (order) {
    case 1:
      return v + h * m.apply_generator(t, v);
    case 2: {
      const Matrix k1 = m.apply_generator(t, v);
      return v + h * m.apply_generator(t + 0.5 * h, v + (0.5 * h) * k1);
    }
    case 3: {
      const Matrix k1 = m.apply_generator(t, v);
      const Matrix k2 = m.apply_generator(t + 0.5 * h, v + (0.5 * h) * k1);
      const Matrix k3 = m.apply_generator(t + h, v + h * (2.0 * k2 - k1));
      return v + (h / 6.0) * (k1 + 4.0 * k2 + k3);
    }
    case 4: {
      const Matrix k1 = m.apply_generator(t, v);
      const Matrix k2 = m.apply_generator(t + 0.5 * h, v + (0.5 * h) * k1);
      const Matrix k3 = m.apply_generator(t + 0.5 * h, v + (0.5 * h) * k2);
      const Matrix k4 = m.apply_generator(t + h, v + h * k3);
      return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    default:
      throw ModelError("flow order must be 1..4");
  }
}

Matrix implicit_step(const LindbladModel& m, int order, Real t, Real h,
                     const Eigen::Ref<const Matrix>& v) {
  const Index d = m.dim();
  const Matrix id = Matrix::Identity(d, d);
  switch (order) {
    case 1:
      return solve_checked(id - h * m.generator(t + h), v);
    case 2: {
      const Matrix j = m.generator(t + 0.5 * h);
      return solve_checked(id - (0.5 * h) * j, v + (0.5 * h) * m.apply_generator(t + 0.5 * h, v));
    }
    case 3:
    case 4: {
      if (!m.has_analytic_derivatives()) {
        throw ModelError("fourth-order implicit flow needs analytic control derivatives");
      }
      const Real tm = t + 0.5 * h;
      const Matrix j = m.generator(tm);
      const Matrix j1 = m.generator_d1(tm);
      const Matrix j2 = m.generator_d2(tm);
      const Matrix f = kI * j + (h * h / 24.0) * kI * j2 + (h * h / 12.0) * kI * (j1 * j - j * j1);
      const Complex dd = kImplicitFlowD;
      const Complex db = std::conj(dd);
      const Matrix half = solve_checked(id - (0.25 * dd * h) * f, v - (0.25 * db * h) * (f * v));
      return solve_checked(id + (0.25 * db * h) * f, half + (0.25 * dd * h) * (f * half));
    }
    default:
      throw ModelError("flow order must be 1..4");
  }
}

}  // namespace

Matrix apply_flow(const LindbladModel& model, FlowKind kind, Real t_from, Real t_to,
                  const Eigen::Ref<const Matrix>& v) {
  if (v.rows() != model.dim()) throw ModelError("factor row count does not match the model");
  if (t_to < t_from) throw ModelError("flow interval must satisfy t_to >= t_from");
  const Real h = t_to - t_from;
  if (h == 0.0 || v.cols() == 0) return v;
  return kind.family == FlowFamily::Explicit ? explicit_step(model, kind.order, t_from, h, v)
                                             : implicit_step(model, kind.order, t_from, h, v);
}

}  // namespace cptp
