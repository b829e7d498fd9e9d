#include "oqsim/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oqsim/errors.hpp"

namespace oqsim {

// ---------------------------------------------------------------------------
// KrausChannel / ChoiMatrix

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators) : operators_(std::move(operators)) {
  if (operators_.empty()) throw ArgumentError("Kraus channel needs at least one operator");
  dim_ = static_cast<std::size_t>(operators_.front().rows());
  for (const auto& k : operators_) {
    if (static_cast<std::size_t>(k.rows()) != dim_ || static_cast<std::size_t>(k.cols()) != dim_)
      throw ArgumentError("Kraus operators must all be square of the same size");
    if (!k.allFinite()) throw ArgumentError("Kraus operator has non-finite entries");
  }
  const double err = completeness_error();
  if (err > 1e-10)
    throw ArgumentError("Kraus operators are not trace preserving (error " + std::to_string(err) + ")");
}

double KrausChannel::completeness_error() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : operators_) sum += k.adjoint() * k;
  return (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& m) const {
  if (static_cast<std::size_t>(m.rows()) != dim_) throw ArgumentError("channel: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (const auto& k : operators_) out += k * m * k.adjoint();
  return out;
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix::unchecked(apply(rho.matrix()));
}

ChoiMatrix::ChoiMatrix(std::size_t system_dim, ComplexMatrix matrix)
    : system_dim_(system_dim), matrix_(std::move(matrix)) {
  const auto d2 = static_cast<Eigen::Index>(system_dim_ * system_dim_);
  if (system_dim_ == 0 || matrix_.rows() != d2 || matrix_.cols() != d2)
    throw ArgumentError("Choi matrix must be dim² × dim²");
}

ComplexMatrix ChoiMatrix::apply(const ComplexMatrix& m) const {
  const auto d = static_cast<Eigen::Index>(system_dim_);
  if (m.rows() != d || m.cols() != d) throw ArgumentError("Choi apply: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      if (m(i, j) == cplx(0.0)) continue;
      out += m(i, j) * matrix_.block(i * d, j * d, d, d);
    }
  return out;
}

DensityMatrix ChoiMatrix::apply(const DensityMatrix& rho) const {
  return DensityMatrix::unchecked(apply(rho.matrix()));
}

KrausChannel identity_channel(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return KrausChannel({ComplexMatrix::Identity(d, d)});
}

KrausChannel unitary_channel(const ComplexMatrix& u) { return KrausChannel({u}); }

KrausChannel compose(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim() != b.dim()) throw ArgumentError("compose: dimension mismatch");
  std::vector<ComplexMatrix> ops;
  for (const auto& ka : a.operators())
    for (const auto& kb : b.operators()) {
      ComplexMatrix k = ka * kb;
      if (k.cwiseAbs().maxCoeff() > 0.0) ops.push_back(std::move(k));
    }
  return KrausChannel(std::move(ops));
}

ChoiMatrix choi(const KrausChannel& channel) {
  const auto d = static_cast<Eigen::Index>(channel.dim());
  ComplexMatrix c = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& k : channel.operators()) {
    // column block i of vec: K|i⟩
    ComplexVector v(d * d);
    for (Eigen::Index i = 0; i < d; ++i) v.segment(i * d, d) = k.col(i);
    c += v * v.adjoint();
  }
  return ChoiMatrix(channel.dim(), std::move(c));
}

bool is_cptp(const ChoiMatrix& c, double tol) {
  const auto d = static_cast<Eigen::Index>(c.system_dim());
  const ComplexMatrix& m = c.matrix();
  if (!m.allFinite()) return false;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (hermitian_eigenvalues(0.5 * (m + m.adjoint())).minCoeff() < -tol) return false;
  ComplexMatrix reduced = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) reduced(i, j) = m.block(i * d, j * d, d, d).trace();
  return (reduced - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
}

double choi_distance(const ChoiMatrix& a, const ChoiMatrix& b) {
  if (a.system_dim() != b.system_dim()) throw ArgumentError("choi_distance: dimension mismatch");
  const double d = static_cast<double>(a.system_dim());
  return trace_norm_distance(a.matrix() / d, b.matrix() / d);
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  return choi_distance(choi(a), choi(b));
}

ComplexMatrix superoperator(const ChoiMatrix& c) {
  const auto d = static_cast<Eigen::Index>(c.system_dim());
  const ComplexMatrix& m = c.matrix();
  ComplexMatrix s(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) s(a + d * b, i + d * j) = m(i * d + a, j * d + b);
  return s;
}

ChoiMatrix choi_from_superoperator(const ComplexMatrix& s) {
  if (s.rows() != s.cols()) throw ArgumentError("superoperator must be square");
  const auto d2 = static_cast<std::size_t>(s.rows());
  std::size_t dim = 1;
  while (dim * dim < d2) ++dim;
  if (dim * dim != d2) throw ArgumentError("superoperator size is not a square");
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) m(i * d + a, j * d + b) = s(a + d * b, i + d * j);
  return ChoiMatrix(dim, std::move(m));
}

// ---------------------------------------------------------------------------
// Pumping

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ArgumentError(std::string(what) + ": parameter must lie in [0, 1], got " + std::to_string(p));
}

std::vector<ComplexMatrix> drop_zero(std::vector<ComplexMatrix> ops) {
  std::erase_if(ops, [](const ComplexMatrix& k) { return k.cwiseAbs().maxCoeff() == 0.0; });
  return ops;
}

KrausChannel stabilizer_pump(double p, const ComplexMatrix& stabilizer, const ComplexMatrix& flip) {
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const ComplexMatrix plus = 0.5 * (id + stabilizer);
  const ComplexMatrix minus = 0.5 * (id - stabilizer);
  return KrausChannel(drop_zero({std::sqrt(p) * flip * plus, minus + std::sqrt(1.0 - p) * plus}));
}

}  // namespace

KrausChannel pump_zz(double p) {
  check_probability(p, "pump_zz");
  return stabilizer_pump(p, tensor(pauli::Z(), pauli::Z()), tensor(pauli::I(), pauli::X()));
}

KrausChannel pump_xx(double p) {
  check_probability(p, "pump_xx");
  return stabilizer_pump(p, tensor(pauli::X(), pauli::X()), tensor(pauli::I(), pauli::Z()));
}

// ---------------------------------------------------------------------------
// Collisional dephasing

double collisional_correlated_weight(double n, double g_tau) {
  const double c = std::cos(n * g_tau);
  return c * c;
}

double collisional_separable_weight(double n, double g_tau) {
  return 0.5 * (1.0 + std::pow(std::cos(2.0 * g_tau), n));
}

KrausChannel dephasing(double identity_weight) {
  if (!(identity_weight >= -1e-12 && identity_weight <= 1.0 + 1e-12))
    throw ArgumentError("dephasing weight must lie in [0, 1]");
  const double w = std::clamp(identity_weight, 0.0, 1.0);
  return KrausChannel(drop_zero({std::sqrt(w) * pauli::I(), std::sqrt(1.0 - w) * pauli::Z()}));
}

KrausChannel collisional_correlated(int n, double g_tau) {
  if (n < 0) throw ArgumentError("collision count must be non-negative");
  return dephasing(collisional_correlated_weight(n, g_tau));
}

KrausChannel collisional_separable(int n, double g_tau) {
  if (n < 0) throw ArgumentError("collision count must be non-negative");
  return dephasing(collisional_separable_weight(n, g_tau));
}

// ---------------------------------------------------------------------------
// Amplitude damping

ADParams::ADParams(double gamma0_, double lambda_, double omega0_)
    : gamma0(gamma0_), lambda(lambda_), omega0(omega0_) {
  if (!(gamma0 > 0.0) || !(lambda > 0.0))
    throw ArgumentError("amplitude damping needs gamma0 > 0 and lambda > 0");
}

ADParams ADParams::from_ratio(double ratio, double lambda_) {
  return ADParams(ratio * lambda_, lambda_);
}

namespace {

// sinh(w)/w, regular at w = 0
cplx sinhc(cplx w) {
  if (std::abs(w) < 1e-4) {
    const cplx w2 = w * w;
    return 1.0 + w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sinh(w) / w;
}

}  // namespace

// c₁(t) = e^{−λt/2}[cosh(λtd/2) + sinh(λtd/2)/d], d = √(1 − 2R). Writing the
// second term as (λt/2)·sinhc(λtd/2) keeps one expression valid on both
// sides of R = ½ and at R = ½ itself.
cplx c1_complex(cplx t, const ADParams& params) {
  const double lam = params.lambda;
  const cplx d = std::sqrt(cplx(1.0 - 2.0 * params.ratio(), 0.0));
  const cplx half = lam * t / 2.0;
  const cplx w = half * d;
  return std::exp(-half) * (std::cosh(w) + half * sinhc(w));
}

cplx c1_derivative_complex(cplx t, const ADParams& params) {
  const double lam = params.lambda;
  const double one_minus_2r = 1.0 - 2.0 * params.ratio();
  const cplx d = std::sqrt(cplx(one_minus_2r, 0.0));
  const cplx half = lam * t / 2.0;
  const cplx w = half * d;
  const cplx envelope = std::exp(-half);
  const cplx c = envelope * (std::cosh(w) + half * sinhc(w));
  return -0.5 * lam * c + envelope * 0.5 * lam * (half * one_minus_2r * sinhc(w) + std::cosh(w));
}

double c1(double t, const ADParams& params) {
  if (t < 0.0) throw ArgumentError("c1: time must be non-negative");
  if (t == 0.0) return 1.0;
  return std::clamp(c1_complex(cplx(t, 0.0), params).real(), -1.0, 1.0);
}

double gamma_ad(double t, const ADParams& params) {
  if (t < 0.0) throw ArgumentError("gamma_ad: time must be non-negative");
  const cplx c = c1_complex(cplx(t, 0.0), params);
  if (std::abs(c) < 1e-12)
    throw SingularityError("decay rate diverges at a zero of c1 (t = " + std::to_string(t) + ")", t);
  return -2.0 * (c1_derivative_complex(cplx(t, 0.0), params) / c).real();
}

cplx gamma_ad_complex(cplx t, const ADParams& params) {
  return -2.0 * c1_derivative_complex(t, params) / c1_complex(t, params);
}

KrausChannel amplitude_damping_from_amplitude(double amplitude) {
  const double a = std::clamp(amplitude, -1.0, 1.0);
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = a;
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(std::max(0.0, 1.0 - a * a));
  return KrausChannel(drop_zero({k0, k1}));
}

KrausChannel amplitude_damping_channel(double t, const ADParams& params) {
  return amplitude_damping_from_amplitude(c1(t, params));
}

// ---------------------------------------------------------------------------
// Pauli channels

KrausChannel depolarizing(double p) {
  check_probability(p, "depolarizing");
  return pauli_channel(1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p);
}

KrausChannel pauli_channel(double p0, double p1, double p2, double p3) {
  return pauli_channel(std::array<double, 4>{p0, p1, p2, p3});
}

KrausChannel pauli_channel(const std::array<double, 4>& p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw ArgumentError("Pauli probabilities must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw ArgumentError("Pauli probabilities must sum to 1 (sum " + std::to_string(sum) + ")");
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < 4; ++k) ops.push_back(std::sqrt(p[static_cast<std::size_t>(k)]) * pauli::by_index(k));
  return KrausChannel(drop_zero(std::move(ops)));
}

std::array<double, 3> pauli_eigenvalues(const std::array<double, 4>& p) {
  return {p[0] + p[1] - p[2] - p[3], p[0] - p[1] + p[2] - p[3], p[0] - p[1] - p[2] + p[3]};
}

std::array<double, 4> pauli_probabilities(const std::array<double, 3>& l) {
  return {(1.0 + l[0] + l[1] + l[2]) / 4.0, (1.0 + l[0] - l[1] - l[2]) / 4.0,
          (1.0 - l[0] + l[1] - l[2]) / 4.0, (1.0 - l[0] - l[1] + l[2]) / 4.0};
}

// ---------------------------------------------------------------------------
// Time-dependent rates

RateFunction RateFunction::constant(double a) { return {Kind::Constant, a, 0.0, {}}; }
RateFunction RateFunction::tanh(double a, double omega) { return {Kind::Tanh, a, omega, {}}; }
RateFunction RateFunction::tan(double a, double omega) { return {Kind::Tan, a, omega, {}}; }
RateFunction RateFunction::from_function(std::function<double(double)> f) {
  return {Kind::Custom, 0.0, 0.0, std::move(f)};
}

double RateFunction::operator()(double t) const {
  switch (kind) {
    case Kind::Constant: return amplitude;
    case Kind::Tanh: return amplitude * std::tanh(omega * t);
    case Kind::Tan: return amplitude * std::tan(omega * t);
    case Kind::Custom: return custom(t);
  }
  return 0.0;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double RateFunction::integral(double t) const {
  switch (kind) {
    case Kind::Constant: return amplitude * t;
    case Kind::Tanh: return amplitude / omega * std::log(std::cosh(omega * t));
    // −ln|cos ωt|/ω is the antiderivative on every branch between the poles,
    // which continues the map continuously through them.
    case Kind::Tan: return -amplitude / omega * std::log(std::abs(std::cos(omega * t)));
    case Kind::Custom: {
      if (t == 0.0) return 0.0;
      const double fa = custom(0.0);
      const double fm = custom(0.5 * t);
      const double fb = custom(t);
      return adaptive_simpson(custom, 0.0, t, fa, fm, fb, simpson(0.0, t, fa, fm, fb), 1e-10,
                              50);
    }
  }
  return 0.0;
}

PauliRates PauliRates::eternal(double lambda, double omega) {
  return {RateFunction::constant(lambda / 2.0), RateFunction::constant(lambda / 2.0),
          RateFunction::tanh(-omega / 2.0, omega)};
}

PauliRates PauliRates::tan_model(double lambda, double omega) {
  return {RateFunction::constant(lambda / 2.0), RateFunction::constant(lambda / 2.0),
          RateFunction::tan(omega / 2.0, omega)};
}

std::array<double, 3> integrated_rates(const PauliRates& rates, double t) {
  return {rates.gamma_x.integral(t), rates.gamma_y.integral(t), rates.gamma_z.integral(t)};
}

std::array<double, 3> pauli_map_eigenvalues(const PauliRates& rates, double t) {
  const auto g = integrated_rates(rates, t);
  return {std::exp(-g[1] - g[2]), std::exp(-g[0] - g[2]), std::exp(-g[0] - g[1])};
}

std::array<double, 4> pauli_rates_to_probabilities(const PauliRates& rates, double t) {
  if (t < 0.0) throw ArgumentError("time must be non-negative");
  auto p = pauli_probabilities(pauli_map_eigenvalues(rates, t));
  double sum = 0.0;
  for (double& v : p) {
    if (!std::isfinite(v)) throw ModelError("Pauli probabilities are not finite", t);
    if (v < -1e-6)
      throw ModelError("Pauli map is not completely positive at t = " + std::to_string(t), t);
    v = std::max(v, 0.0);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace oqsim
