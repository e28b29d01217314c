#pragma once

#include <limits>
#include <vector>

#include "cptp/npi.hpp"

namespace cptp {

/// Single-qubit test equations: H = omega |1><1|, decay L1 = sigma^- / sqrt(T1),
/// and optionally dephasing L2 = |1><1| / sqrt(T2).
enum class TestCase { Decay, DecayDephasing };

struct TestParameters {
  Real omega = 1.0;
  Real t1 = 10.0;
  Real t2 = std::numeric_limits<Real>::infinity();  // ignored for TestCase::Decay
};

/// alpha_J = -i omega - 1/(2 T1) [- 1/(2 T2)]
Complex test_generator_eigenvalue(TestCase test, const TestParameters& p);

LindbladModel build_test_model(TestCase test, const TestParameters& p);

/// Flow multipliers on the eigenvalue alpha_J for a sub-step s * dt.
/// Index 0 is the explicit flow, index 1 the implicit one.
class HelperScalars {
 public:
  HelperScalars(Real dt, Complex alpha_j) : dt_(dt), alpha_(alpha_j) {}

  Complex alpha(int i, Real s) const;  // first order
  Complex beta(int i, Real s) const;   // second order
  Complex gamma(int i, Real s) const;  // third order (implicit: fourth-order scheme)
  Complex delta(int i, Real s) const;  // fourth order

  Real dt() const { return dt_; }
  Complex alpha_j() const { return alpha_; }

 private:
  Real dt_;
  Complex alpha_;
};

/// Explicit (0) / implicit (1) choices. Order 1 and 3, 4 use only i (the top
/// flow); order 2 uses i for U^(2), j for the inner half-step state and l for
/// the U^(1) transporting the quadrature term.
struct SchemeIndices {
  int i = 0;
  int j = 0;
  int l = 0;
};

/// Scheme configuration whose flows realize the given indices (midpoint rule
/// at level 2, explicit lower levels for orders 3 and 4).
SchemeConfig scheme_for_indices(int order, const SchemeIndices& idx);

/// Index combinations analysed in closed form for the given test case and order.
std::vector<SchemeIndices> enumerate_indices(TestCase test, int order);

/// One-step map on (rho11, rho12, rho21, rho22).
using AmplificationMatrix = Eigen::Matrix<Complex, 4, 4>;

AmplificationMatrix amplification_closed_form(TestCase test, int order, const SchemeIndices& idx,
                                              const TestParameters& p, Real dt);

/// Images of E11, E12, E21, E22 under npi_step_dense (no truncation).
AmplificationMatrix amplification_numeric(TestCase test, const SchemeConfig& config,
                                          const TestParameters& p, Real dt);

/// max(|A22|, |A33|, |A44|)-type spectral radius of the block acting on
/// (rho12, rho21, rho22); the stationary row/column and the (1,4) coupling are excluded.
Real nonstationary_spectral_radius(const AmplificationMatrix& a);

/// Closed-form stability inequality for the selected scheme.
bool stability_condition(TestCase test, int order, const SchemeIndices& idx,
                         const TestParameters& p, Real dt);

/// Multiplier of the order-k flow on z = dt * alpha_J.
Complex flow_multiplier(int order, FlowFamily family, Complex z);

struct RegionGrid {
  Real re_min = -5.0, re_max = 1.0;
  Real im_min = -4.0, im_max = 4.0;
  Index nx = 800, ny = 800;
};

struct RegionPoint {
  Complex z;
  Real spectral_radius;
  bool stable;
};

struct StabilityRegion {
  std::vector<RegionPoint> grid;     // row-major over (im, re)
  std::vector<Complex> contour;      // boundary points refined by bisection
  Real real_axis_intercept = 0.0;    // leftmost stable point on the negative real axis
};

/// Decay-only amplification spectral radius over the z = dt * alpha_J plane.
StabilityRegion stability_region_scan(int order, FlowFamily family, const RegionGrid& grid = {});

}  // namespace cptp
