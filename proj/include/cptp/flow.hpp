#pragma once

#include "cptp/model.hpp"

namespace cptp {

enum class FlowFamily { Explicit, Implicit };

/// Approximate flow operator U^(k) for dV/dt = J(t) V.
///
/// Explicit: forward Euler, explicit midpoint, Kutta's third-order method,
/// classical RK4. Implicit: backward Euler, implicit midpoint, and for orders
/// 3 and 4 the same fourth-order two-half-step Magnus-type scheme.
struct FlowKind {
  int order = 1;
  FlowFamily family = FlowFamily::Explicit;

  friend bool operator==(const FlowKind&, const FlowKind&) = default;
};

/// One step of the chosen method over [t_from, t_to], applied to every column of v.
/// Throws SingularSystemError if an implicit system is numerically singular and
/// ModelError if the implicit fourth-order flow meets non-analytic coefficients.
Matrix apply_flow(const LindbladModel& model, FlowKind kind, Real t_from, Real t_to,
                  const Eigen::Ref<const Matrix>& v);

/// Coefficient d = 1/sqrt(3) - i of the fourth-order implicit flow.
inline const Complex kImplicitFlowD{0.57735026918962576451, -1.0};

}  // namespace cptp
