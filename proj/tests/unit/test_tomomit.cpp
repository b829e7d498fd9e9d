#include "doctest.h"
#include "support.hpp"

#include "oqsim/errors.hpp"
#include "oqsim/tomomit.hpp"

using namespace oqsim;
using namespace testing;

namespace {

RealMatrix conf(double a00, double a01, double a10, double a11) {
  RealMatrix m(2, 2);
  m << a00, a01, a10, a11;
  return m;
}

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

bool on_simplex(const RealVector& x) { return x.minCoeff() >= 0.0 && std::abs(x.sum() - 1.0) <= 1e-10; }

}  // namespace

TEST_CASE("simplex projection") {
  CHECK(project_to_simplex(vec({0.2, 0.3, 0.5})).isApprox(vec({0.2, 0.3, 0.5})));
  CHECK(project_to_simplex(vec({1.2, -0.2})).isApprox(vec({1.0, 0.0})));
  CHECK(project_to_simplex(vec({0.0, 0.0})).isApprox(vec({0.5, 0.5})));

  // Optimality against a grid search over the 2-simplex.
  std::mt19937_64 rng(51);
  std::normal_distribution<double> n(0.3, 0.8);
  for (int k = 0; k < 20; ++k) {
    const RealVector v = vec({n(rng), n(rng), n(rng)});
    const RealVector x = project_to_simplex(v);
    CHECK(on_simplex(x));
    double best = 1e300;
    for (int i = 0; i <= 400; ++i)
      for (int j = 0; i + j <= 400; ++j) {
        const RealVector y = vec({i / 400.0, j / 400.0, (400 - i - j) / 400.0});
        best = std::min(best, (y - v).norm());
      }
    CHECK((x - v).norm() <= best + 1e-12);
    CHECK((x - v).norm() >= best - 5e-3);
  }
}

TEST_CASE("calibration matrices") {
  const auto a = conf(0.9, 0.1, 0.1, 0.9), b = conf(0.97, 0.08, 0.03, 0.92);
  NoiseModel m = NoiseModel::none();
  CHECK(exact_calibration(m, 2).a.isApprox(RealMatrix::Identity(4, 4)));
  CHECK(measure_calibration(m, 2, 1000, 3).a.isApprox(RealMatrix::Identity(4, 4)));
  m.readout = {a};
  CHECK(exact_calibration(m, 1).a.isApprox(a));
  m.readout = {a, b};
  const auto cal = exact_calibration(m, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(cal.a(i, j) == doctest::Approx(a(i >> 1, j >> 1) * b(i & 1, j & 1)));
  const auto measured = measure_calibration(m, 2, 200000, 4);
  CHECK((measured.a - cal.a).cwiseAbs().maxCoeff() < 5 * std::sqrt(0.25 / 200000));
  for (int j = 0; j < 4; ++j) CHECK(measured.a.col(j).sum() == doctest::Approx(1.0));
  CHECK(calibration_to_csv(cal).find('\n') != std::string::npos);

  CalibrationMatrix bad{1, conf(0.9, 0.2, 0.2, 0.9)};
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("mitigation examples") {
  const CalibrationMatrix ident{1, RealMatrix::Identity(2, 2)};
  CHECK(mitigate_probabilities(vec({0.3, 0.7}), ident).probabilities.isApprox(vec({0.3, 0.7})));

  const CalibrationMatrix a{1, conf(0.9, 0.1, 0.1, 0.9)};
  const auto r = mitigate_probabilities(vec({0.9, 0.1}), a);
  CHECK(std::abs(r.probabilities(0) - 1.0) < 1e-9);
  CHECK(r.converged);
  CHECK(r.residual < 1e-9);

  // y outside the image: the answer is the boundary point of the grid search.
  const RealVector y = vec({1.0, 0.0});
  const auto b = mitigate_probabilities(y, a);
  double best = 1e300, best_x = -1;
  for (int i = 0; i <= 100000; ++i) {
    const double x = i / 100000.0;
    const double res = (a.a * vec({x, 1 - x}) - y).norm();
    if (res < best) {
      best = res;
      best_x = x;
    }
  }
  CHECK(b.probabilities(0) == doctest::Approx(best_x).epsilon(1e-6));
  CHECK(b.residual == doctest::Approx(best).epsilon(1e-9));
  CHECK(b.residual > 0.09);
  CHECK_THROWS_AS(mitigate_probabilities(vec({0.5, 0.25, 0.25}), a), ArgumentError);
}

TEST_CASE("property: mitigated vectors lie on the simplex and converge to diag(rho)") {
  std::mt19937_64 rng(52);
  const std::vector<RealMatrix> ro{conf(0.98, 0.05, 0.02, 0.95), conf(0.95, 0.1, 0.05, 0.9)};
  NoiseModel m = NoiseModel::none();
  m.readout = ro;
  const auto cal = exact_calibration(m, 2);
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix rho(random_density(4, rng, 1 + k % 4));
    const std::uint64_t shots = k == 0 ? 1'000'000 : 2000;
    const Counts c = sample_counts(rho, shots, ro, 100 + k);
    const auto r = mitigate_counts(c, cal);
    CHECK(on_simplex(r.probabilities));
    if (k == 0)
      for (int i = 0; i < 4; ++i) {
        const double p = rho.matrix()(i, i).real();
        // Inverting A amplifies the binomial spread by at most ‖A⁻¹‖; 3σ of
        // the raw estimate times that factor.
        const double amp = cal.a.inverse().cwiseAbs().rowwise().sum().maxCoeff();
        CHECK(std::abs(r.probabilities(i) - p) <= amp * 3 * std::sqrt(std::max(p * (1 - p), 1e-6) / shots));
      }
  }
}

TEST_CASE("tomography settings and basis changes") {
  const auto s = tomography_settings(2);
  REQUIRE(s.size() == 9);
  CHECK(s[0] == std::vector<Basis>{Basis::X, Basis::X});
  CHECK(s[1] == std::vector<Basis>{Basis::X, Basis::Y});
  CHECK(s[3] == std::vector<Basis>{Basis::Y, Basis::X});
  CHECK(s[8] == std::vector<Basis>{Basis::Z, Basis::Z});
  CHECK(basis_from_label('Y') == Basis::Y);
  CHECK(basis_label(Basis::Z) == 'Z');
  CHECK_THROWS_AS(basis_from_label('Q'), ArgumentError);

  // U maps the +1 eigenvector of the Pauli onto |0⟩.
  const ComplexMatrix ps[] = {X2(), Y2(), Z2()};
  const Basis bs[] = {Basis::X, Basis::Y, Basis::Z};
  for (int k = 0; k < 3; ++k) {
    const ComplexMatrix u = basis_change_unitary(bs[k]);
    CHECK((u * ps[k] * u.adjoint() - Z2()).cwiseAbs().maxCoeff() < 1e-14);
    Circuit c(1);
    append_basis_change(c, 0, bs[k]);
    ComplexMatrix prod = ComplexMatrix::Identity(2, 2);
    for (const auto& g : c.gates()) prod = g.matrix() * prod;
    CHECK((prod * ps[k] * prod.adjoint() - Z2()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("eigenvalue projection") {
  CHECK(project_eigenvalues(vec({1.2, -0.2})).isApprox(vec({1.0, 0.0})));
  // Negative mass is spread over the remaining eigenvalues.
  const RealVector p = project_eigenvalues(vec({0.6, 0.5, -0.1}));
  CHECK(p.isApprox(vec({0.55, 0.45, 0.0})));
  const RealVector q = project_eigenvalues(vec({-0.05, 0.7, 0.4, -0.05}));
  CHECK(q.isApprox(vec({0.0, 0.65, 0.35, 0.0})));

  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m.diagonal() << 1.2, -0.2;
  const DensityMatrix d = project_to_density(m);
  CHECK(d.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(d.matrix()(1, 1).real() == doctest::Approx(0.0));
}

TEST_CASE("property: projection is idempotent on valid states") {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 30; ++k) {
    const ComplexMatrix rho = random_density(2 << (k % 3), rng, 1 + k % 3);
    CHECK((project_to_density(rho).matrix() - rho).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("property: single-qubit projection matches a Bloch-ball grid search") {
  std::mt19937_64 rng(54);
  std::normal_distribution<double> n(0.0, 0.9);
  for (int k = 0; k < 5; ++k) {
    const double x = n(rng), y = n(rng), z = n(rng);
    const ComplexMatrix m = 0.5 * (I2() + x * X2() + y * Y2() + z * Z2());
    const ComplexMatrix proj = project_to_density(m).matrix();
    auto dist = [&](const ComplexMatrix& a) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a - m);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    };
    double best = 1e300;
    const int g = 60;
    for (int i = -g; i <= g; ++i)
      for (int j = -g; j <= g; ++j)
        for (int l = -g; l <= g; ++l) {
          const double a = double(i) / g, b = double(j) / g, c = double(l) / g;
          if (a * a + b * b + c * c > 1.0) continue;
          best = std::min(best, dist(0.5 * (I2() + a * X2() + b * Y2() + c * Z2())));
        }
    // The grid resolution bounds how close it can get.
    CHECK(dist(proj) <= best + 1e-12);
    CHECK(dist(proj) >= best - 2.0 / g);
  }
}

TEST_CASE("tomography from exact data reproduces the state") {
  std::mt19937_64 rng(55);
  for (int nq = 1; nq <= 3; ++nq) {
    const DensityMatrix rho(random_density(1 << nq, rng));
    const auto data = exact_tomography_data(rho);
    CHECK(data.size() == static_cast<std::size_t>(std::pow(3, nq)));
    CHECK((linear_inversion(data) - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((tomography(data).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("sampled tomography with mitigation") {
  const ComplexVector psi0 = ket({std::cos(kPi / 8), std::sin(kPi / 8) * std::exp(cplx(0, kPi / 4))});
  const DensityMatrix in = DensityMatrix::from_pure(PureState(psi0));
  const NoiseModel noise = NoiseModel::default_model();
  const auto cal = exact_calibration(noise, 1);
  for (int k = 0; k <= 10; ++k) {
    const double p = k / 10.0;
    const DensityMatrix expect = depolarizing(p).apply(in);
    const auto records = simulate_tomography(expect, 8192, noise.readout, 1000 + k);
    CHECK(records.size() == 3);
    const DensityMatrix est = tomography(records, true, cal);
    CHECK(check_density(est.matrix()).valid(1e-10, 1e-10, 1e-10));
    CHECK(fidelity(est, expect) >= 0.99);
  }
  const auto records = simulate_tomography(in, 100, {}, 1);
  CHECK_THROWS_AS(tomography(records, true), ArgumentError);
  CHECK(counts_to_csv(records[0].counts).find(',') != std::string::npos);
}
