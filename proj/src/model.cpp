#include "cptp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cptp {

namespace {

SparseMatrix to_sparse(const Matrix& m) { return m.sparseView(0.0, 0.0); }

// Kronecker embedding I_{<k} (x) op (x) I_{>k}.
SparseMatrix embed(const SparseMatrix& op, std::size_t k, const std::vector<Index>& dims) {
  Index pre = 1, post = 1;
  for (std::size_t i = 0; i < k; ++i) pre *= dims[i];
  for (std::size_t i = k + 1; i < dims.size(); ++i) post *= dims[i];
  const Index n = dims[k];
  const Index d = pre * n * post;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(op.nonZeros() * pre * post));
  for (Index col = 0; col < op.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(op, col); it; ++it) {
      for (Index p = 0; p < pre; ++p) {
        for (Index q = 0; q < post; ++q) {
          trips.emplace_back((p * n + it.row()) * post + q, (p * n + it.col()) * post + q,
                             it.value());
        }
      }
    }
  }
  SparseMatrix out(d, d);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

void check_time(Real t, const char* what) {
  if (std::isnan(t) || t <= 0.0) {
    throw ModelError(std::string(what) + " must be positive or infinite");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficients and pulses

Coefficient Coefficient::constant(Real c) {
  return {[c](Real) { return TimeSample{c, 0.0, 0.0}; }, true};
}

Coefficient Coefficient::cosine(Real amplitude, Real frequency, Real phase) {
  return {[=](Real t) {
            const Real arg = frequency * t + phase;
            const Real c = std::cos(arg), s = std::sin(arg);
            return TimeSample{amplitude * c, -amplitude * frequency * s,
                              -amplitude * frequency * frequency * c};
          },
          true};
}

Coefficient Coefficient::polynomial(std::vector<Real> coeffs) {
  return {[coeffs = std::move(coeffs)](Real t) {
            TimeSample s;
            // Horner for p, p', p''.
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
              s.d2 = s.d2 * t + 2.0 * s.d1;
              s.d1 = s.d1 * t + s.value;
              s.value = s.value * t + *it;
            }
            return s;
          },
          true};
}

ControlPulse ControlPulse::tanh_ramp(Real amplitude, Real steepness, Real center) {
  ControlPulse p;
  p.kind_ = Kind::TanhRamp;
  p.a_ = amplitude;
  p.b_ = steepness;
  p.c_ = center;
  return p;
}

ControlPulse ControlPulse::super_gaussian(Real amplitude, Real width, Real t_ref) {
  if (!(width > 0.0) || !(t_ref > 0.0)) {
    throw ModelError("super-Gaussian pulse needs positive width and reference time");
  }
  ControlPulse p;
  p.kind_ = Kind::SuperGaussian;
  p.a_ = amplitude;
  p.b_ = width;
  p.c_ = t_ref;
  return p;
}

ControlPulse ControlPulse::tabulated(std::vector<Real> times, std::vector<Real> values) {
  if (times.size() != values.size() || times.size() < 2) {
    throw ModelError("tabulated pulse needs at least two (time, value) samples");
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw ModelError("tabulated pulse times must be increasing");
  }
  ControlPulse p;
  p.kind_ = Kind::Tabulated;
  p.times_ = std::move(times);
  p.values_ = std::move(values);
  return p;
}

TimeSample ControlPulse::operator()(Real t) const {
  switch (kind_) {
    case Kind::Zero:
      return {};
    case Kind::TanhRamp: {
      const Real th = std::tanh(b_ * (t - c_));
      const Real sech2 = 1.0 - th * th;
      return {0.5 * a_ * (1.0 + th), 0.5 * a_ * b_ * sech2, -a_ * b_ * b_ * th * sech2};
    }
    case Kind::SuperGaussian: {
      const Real w = (t / c_ - 1.0) / b_;
      const Real dw = 1.0 / (c_ * b_);
      const Real w2 = w * w, w4 = w2 * w2, w8 = w4 * w4;
      const Real f = a_ * std::exp(-w8 * w2);
      const Real g1 = -10.0 * w8 * w * dw;  // d/dt of the exponent
      const Real g2 = -90.0 * w8 * dw * dw;
      return {f, f * g1, f * (g1 * g1 + g2)};
    }
    case Kind::Tabulated: {
      if (t <= times_.front()) return {values_.front(), 0.0, 0.0};
      if (t >= times_.back()) return {values_.back(), 0.0, 0.0};
      const auto hi = std::upper_bound(times_.begin(), times_.end(), t);
      const auto i = static_cast<std::size_t>(hi - times_.begin());
      const Real slope = (values_[i] - values_[i - 1]) / (times_[i] - times_[i - 1]);
      return {values_[i - 1] + slope * (t - times_[i - 1]), slope, 0.0};
    }
  }
  return {};
}

Coefficient ControlPulse::as_coefficient() const {
  return {[p = *this](Real t) { return p(t); }, has_analytic_derivatives()};
}

// ---------------------------------------------------------------------------
// LindbladModel

LindbladModel::LindbladModel(const Matrix& h_static, std::vector<HamiltonianTerm> terms,
                             std::vector<Matrix> jumps)
    : LindbladModel(to_sparse(h_static), std::move(terms), [&] {
        std::vector<SparseMatrix> s;
        s.reserve(jumps.size());
        for (const auto& l : jumps) s.push_back(to_sparse(l));
        return s;
      }()) {}

LindbladModel::LindbladModel(SparseMatrix h_static, std::vector<HamiltonianTerm> terms,
                             std::vector<SparseMatrix> jumps)
    : dim_(h_static.rows()),
      h_static_(std::move(h_static)),
      terms_(std::move(terms)),
      jumps_(std::move(jumps)),
      dims_{h_static_.rows()} {
  if (h_static_.rows() != h_static_.cols()) throw ModelError("Hamiltonian must be square");
  for (const auto& term : terms_) {
    if (term.op.rows() != dim_ || term.op.cols() != dim_) {
      throw ModelError("Hamiltonian term dimension mismatch");
    }
  }
  damping_ = SparseMatrix(dim_, dim_);
  for (const auto& l : jumps_) {
    if (l.rows() != dim_ || l.cols() != dim_) throw ModelError("jump operator dimension mismatch");
    damping_ += SparseMatrix(l.adjoint()) * l;
  }
  damping_ *= Complex(-0.5);
  static_generator_ = Complex(0.0, -1.0) * h_static_ + damping_;
  static_generator_.prune(Complex(0.0));
}

void LindbladModel::set_subsystem_dims(std::vector<Index> dims) {
  const Index prod = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  if (prod != dim_) throw ModelError("subsystem dimensions do not multiply to d");
  dims_ = std::move(dims);
}

SparseMatrix LindbladModel::hamiltonian_sparse(Real t) const {
  SparseMatrix h = h_static_;
  for (const auto& term : terms_) {
    const Real c = term.coef(t).value;
    if (c != 0.0) h += c * term.op;
  }
  return h;
}

Matrix LindbladModel::hamiltonian(Real t) const { return Matrix(hamiltonian_sparse(t)); }

Matrix LindbladModel::generator(Real t) const {
  Matrix j = Matrix(static_generator_);
  for (const auto& term : terms_) {
    const Real c = term.coef(t).value;
    if (c != 0.0) j += Complex(0.0, -c) * Matrix(term.op);
  }
  return j;
}

Matrix LindbladModel::generator_d1(Real t) const {
  Matrix j = Matrix::Zero(dim_, dim_);
  for (const auto& term : terms_) {
    const Real c = term.coef(t).d1;
    if (c != 0.0) j += Complex(0.0, -c) * Matrix(term.op);
  }
  return j;
}

Matrix LindbladModel::generator_d2(Real t) const {
  Matrix j = Matrix::Zero(dim_, dim_);
  for (const auto& term : terms_) {
    const Real c = term.coef(t).d2;
    if (c != 0.0) j += Complex(0.0, -c) * Matrix(term.op);
  }
  return j;
}

Matrix LindbladModel::apply_generator(Real t, const Eigen::Ref<const Matrix>& v) const {
  Matrix out = static_generator_ * v;
  for (const auto& term : terms_) {
    const Real c = term.coef(t).value;
    if (c != 0.0) out.noalias() += Complex(0.0, -c) * (term.op * v);
  }
  return out;
}

Matrix LindbladModel::apply_jumps(const Eigen::Ref<const Matrix>& v) const {
  Matrix out(dim_, v.cols() * static_cast<Index>(jumps_.size()));
  for (std::size_t a = 0; a < jumps_.size(); ++a) {
    out.middleCols(static_cast<Index>(a) * v.cols(), v.cols()).noalias() = jumps_[a] * v;
  }
  return out;
}

bool LindbladModel::has_analytic_derivatives() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const HamiltonianTerm& t) { return t.coef.analytic; });
}

// ---------------------------------------------------------------------------
// Builders

Matrix lowering_operator(Index n) {
  if (n < 1) throw ModelError("lowering operator needs n >= 1");
  Matrix a = Matrix::Zero(n, n);
  for (Index j = 1; j < n; ++j) a(j - 1, j) = std::sqrt(static_cast<Real>(j));
  return a;
}

LindbladModel build_transmon_model(const std::vector<SubsystemSpec>& subsystems,
                                   const std::vector<CouplingSpec>& couplings,
                                   const std::vector<ControlPair>& controls) {
  if (subsystems.empty()) throw ModelError("at least one subsystem is required");
  if (controls.size() != subsystems.size()) {
    throw ModelError("one control pair per subsystem is required");
  }
  std::vector<Index> dims;
  Real dim_real = 1.0;
  for (const auto& s : subsystems) {
    if (s.levels < 2) throw ModelError("each subsystem needs at least two levels");
    check_time(s.t1, "T1");
    check_time(s.t2, "T2");
    dims.push_back(s.levels);
    dim_real *= static_cast<Real>(s.levels);
  }
  if (dim_real > static_cast<Real>(kMaxModelDimension)) {
    throw ModelError("model dimension exceeds the supported maximum");
  }
  const Index d = static_cast<Index>(dim_real);

  std::vector<SparseMatrix> a(subsystems.size()), n(subsystems.size());
  for (std::size_t k = 0; k < subsystems.size(); ++k) {
    a[k] = embed(to_sparse(lowering_operator(subsystems[k].levels)), k, dims);
    n[k] = SparseMatrix(a[k].adjoint()) * a[k];
  }

  SparseMatrix h(d, d);
  std::vector<HamiltonianTerm> terms;
  for (std::size_t k = 0; k < subsystems.size(); ++k) {
    const auto& s = subsystems[k];
    const SparseMatrix ad = a[k].adjoint();
    if (s.omega - s.rot_freq != 0.0) h += (s.omega - s.rot_freq) * n[k];
    if (s.xi != 0.0) h += (-0.5 * s.xi) * SparseMatrix(ad * ad * a[k] * a[k]);
  }
  for (const auto& c : couplings) {
    if (c.k >= c.l || c.l >= static_cast<Index>(subsystems.size()) || c.k < 0) {
      throw ModelError("coupling indices must satisfy 0 <= k < l < Q");
    }
    const auto k = static_cast<std::size_t>(c.k), l = static_cast<std::size_t>(c.l);
    if (c.xi != 0.0) h += (-c.xi) * SparseMatrix(n[k] * n[l]);
    if (c.j == 0.0) continue;
    const SparseMatrix akd = a[k].adjoint(), ald = a[l].adjoint();
    const SparseMatrix hop_x = SparseMatrix(akd * a[l]) + SparseMatrix(a[k] * ald);
    const SparseMatrix hop_y = kI * (SparseMatrix(akd * a[l]) - SparseMatrix(a[k] * ald));
    const Real eta = subsystems[k].rot_freq - subsystems[l].rot_freq;
    if (eta == 0.0) {
      h += c.j * hop_x;
    } else {
      terms.push_back({hop_x, Coefficient::cosine(c.j, eta)});
      terms.push_back({hop_y, Coefficient::cosine(c.j, eta, -0.5 * M_PI)});  // J sin(eta t)
    }
  }
  for (std::size_t k = 0; k < subsystems.size(); ++k) {
    const SparseMatrix ad = a[k].adjoint();
    if (!controls[k].first.is_zero()) {
      terms.push_back({SparseMatrix(a[k] + ad), controls[k].first.as_coefficient()});
    }
    if (!controls[k].second.is_zero()) {
      terms.push_back({SparseMatrix(kI * (a[k] - ad)), controls[k].second.as_coefficient()});
    }
  }

  std::vector<SparseMatrix> jumps;
  for (std::size_t k = 0; k < subsystems.size(); ++k) {
    const auto& s = subsystems[k];
    if (std::isfinite(s.t1)) jumps.push_back((1.0 / std::sqrt(s.t1)) * a[k]);
    if (std::isfinite(s.t2)) jumps.push_back((1.0 / std::sqrt(s.t2)) * n[k]);
  }
  h.prune(Complex(0.0));
  LindbladModel model(std::move(h), std::move(terms), std::move(jumps));
  model.set_subsystem_dims(dims);
  return model;
}

LindbladModel build_jaynes_cummings_model(Index cavity_levels, Real coupling, Real t2_qubit,
                                          const ControlPulse& control, JcDrive drive) {
  if (cavity_levels < 2) throw ModelError("cavity needs at least two levels");
  SubsystemSpec qubit;
  qubit.levels = 2;
  qubit.t2 = t2_qubit;
  SubsystemSpec cavity;
  cavity.levels = cavity_levels;
  return build_transmon_model({qubit, cavity}, {CouplingSpec{0, 1, coupling, 0.0}},
                              {ControlPair{drive == JcDrive::Qubit ? control : ControlPulse::zero(), ControlPulse::zero()},
                               ControlPair{drive == JcDrive::Cavity ? control : ControlPulse::zero(), ControlPulse::zero()}});
}

Vector coherent_state_vector(Index levels, Real amplitude) {
  if (levels < 1) throw ModelError("coherent state needs at least one level");
  Vector v = Vector::Zero(levels);
  const Real mag = std::abs(amplitude);
  if (mag == 0.0) {
    v(0) = 1.0;
    return v;
  }
  // log|c_n| = n log|v| - lgamma(n+1)/2, shifted by the maximum before exponentiating.
  RealVector logc(levels);
  for (Index n = 0; n < levels; ++n) {
    logc(n) = static_cast<Real>(n) * std::log(mag) - 0.5 * std::lgamma(static_cast<Real>(n) + 1.0);
  }
  const Real shift = logc.maxCoeff();
  for (Index n = 0; n < levels; ++n) v(n) = std::exp(logc(n) - shift);
  v /= v.norm();
  return v;
}

std::vector<RealVector> populations(const Eigen::Ref<const Matrix>& factor,
                                    const std::vector<Index>& subsystem_dims) {
  const Index d = std::accumulate(subsystem_dims.begin(), subsystem_dims.end(), Index{1},
                                  std::multiplies<>());
  if (d != factor.rows()) throw ModelError("subsystem dimensions do not match the factor");
  const RealVector diag = factor.rowwise().squaredNorm();
  std::vector<RealVector> out;
  Index post = d;
  for (const Index n : subsystem_dims) {
    post /= n;
    RealVector p = RealVector::Zero(n);
    for (Index i = 0; i < d; ++i) p((i / post) % n) += diag(i);
    out.push_back(std::move(p));
  }
  return out;
}

Vector basis_state(const std::vector<Index>& dims, const std::vector<Index>& labels) {
  if (dims.size() != labels.size()) throw ModelError("basis label count mismatch");
  Index idx = 0, d = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (labels[k] < 0 || labels[k] >= dims[k]) throw ModelError("basis label out of range");
    idx = idx * dims[k] + labels[k];
    d *= dims[k];
  }
  Vector v = Vector::Zero(d);
  v(idx) = 1.0;
  return v;
}

}  // namespace cptp
