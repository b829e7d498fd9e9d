#include "doctest.h"
#include "support.hpp"

#include "oqsim/divisibility.hpp"
#include "oqsim/errors.hpp"
#include "oqsim/master_equation.hpp"

using namespace oqsim;
using namespace testing;

namespace {

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
  return g;
}

DensityMatrix excited() { return DensityMatrix::basis(1, 1); }

}  // namespace

TEST_CASE("zero generator keeps the state") {
  std::mt19937_64 rng(21);
  const DensityMatrix rho(random_density(2, rng));
  Generator gen{ComplexMatrix(), {pauli::Z()}, {TimeDependentRate::constant(0.0)}};
  const auto g = grid(0, 2, 5);
  for (const auto& r : integrate_master_equation(gen, rho, g))
    CHECK((r.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Hamiltonian part rotates") {
  // H = ω/2 Z on |+⟩: ⟨X⟩ = cos ωt.
  Generator gen{0.5 * 1.3 * pauli::Z(), {}, {}};
  const auto g = grid(0, 3, 7);
  const auto states = integrate_master_equation(gen, DensityMatrix::from_pure(PureState::plus()), g,
                                                IntegrationOptions{1e-3, 5'000'000, 1e-8});
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(expectation(states[i], pauli::X()) == doctest::Approx(std::cos(1.3 * g[i])).epsilon(1e-8));
}

TEST_CASE("constant-rate amplitude damping decays exponentially") {
  const double gamma = 0.8;
  ComplexMatrix sm = ComplexMatrix::Zero(2, 2);
  sm(0, 1) = 1.0;
  Generator gen{ComplexMatrix(), {sm}, {TimeDependentRate::constant(gamma)}};
  const auto g = grid(0, 5, 11);
  const auto states = integrate_master_equation(gen, excited(), g);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(states[i].matrix()(1, 1).real() - std::exp(-gamma * g[i])) < 1e-8);
}

TEST_CASE("time-dependent amplitude damping matches the analytic map") {
  for (double R : {0.2, 100.0}) {
    const ADParams par = ADParams::from_ratio(R);
    const auto g = grid(0, R < 0.5 ? 10.0 : 4.0, 41);
    const DensityMatrix rho0 = DensityMatrix::from_pure(PureState(ket({std::sqrt(0.3), std::sqrt(0.7)})));
    const auto states = integrate_master_equation(amplitude_damping_generator(par), rho0, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::abs(c1(g[i], par)) <= 0.05) continue;
      const DensityMatrix expect = amplitude_damping_channel(g[i], par).apply(rho0);
      CHECK(trace_distance(states[i], expect) < 1e-6);
    }
  }
}

TEST_CASE("Pauli generator matches the closed-form probabilities") {
  for (const auto& rates : {PauliRates::eternal(1, 0.5), PauliRates::tan_model(0.1, 2)}) {
    const double t_end = rates.gamma_z.kind == RateFunction::Kind::Tan ? 0.7 : 3.0;
    const auto g = grid(0, t_end, 15);
    std::mt19937_64 rng(22);
    const DensityMatrix rho0(random_density(2, rng));
    const auto states = integrate_master_equation(pauli_generator(rates), rho0, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const DensityMatrix expect = pauli_channel(pauli_rates_to_probabilities(rates, g[i])).apply(rho0);
      CHECK(trace_distance(states[i], expect) < 1e-6);
    }
  }
}

TEST_CASE("integration across a pole without continuation fails") {
  // tan(2t) has a pole at π/4.
  const auto rates = PauliRates::tan_model(0.1, 2);
  const double g[] = {0.0, 1.0};
  CHECK_THROWS_AS(integrate_master_equation(pauli_generator(rates), DensityMatrix::basis(1, 0), g), IntegrationError);
}

TEST_CASE("integrator argument checks") {
  Generator gen{ComplexMatrix(), {pauli::Z()}, {}};
  const double g[] = {0.0, 1.0};
  CHECK_THROWS_AS(integrate_master_equation(gen, DensityMatrix::basis(1, 0), g), ArgumentError);
  Generator ok{ComplexMatrix(), {pauli::Z()}, {TimeDependentRate::constant(1)}};
  const double bad[] = {1.0, 0.5};
  CHECK_THROWS_AS(integrate_master_equation(ok, DensityMatrix::basis(1, 0), bad), ArgumentError);
  CHECK_THROWS_AS(integrate_master_equation(ok, DensityMatrix::basis(2, 0), g), ArgumentError);
}

TEST_CASE("CP divisibility of amplitude damping") {
  const auto g = grid(0, 10, 101);
  const ADParams mark = ADParams::from_ratio(0.2);
  const auto scan = cp_divisibility_scan([&](double t) { return choi(amplitude_damping_channel(t, mark)); }, g);
  REQUIRE(scan.size() == 100);
  for (const auto& iv : scan) {
    CHECK(iv.status == CpInterval::Status::CP);
    CHECK(iv.min_eigenvalue >= -1e-8);
  }

  const ADParams nm = ADParams::from_ratio(100);
  const auto g2 = grid(0, 4, 201);
  const auto scan2 = cp_divisibility_scan([&](double t) { return choi(amplitude_damping_channel(t, nm)); }, g2);
  int flagged = 0;
  for (const auto& iv : scan2) {
    if (iv.status == CpInterval::Status::NonCP) ++flagged;
    if (iv.status == CpInterval::Status::Indeterminate) continue;
    // Where γ stays non-negative on a fine sub-grid, the interval is CP.
    bool nonneg = true;
    for (int k = 0; k <= 20; ++k) {
      try {
        if (gamma_ad(iv.s + (iv.t - iv.s) * k / 20.0, nm) < 0) nonneg = false;
      } catch (const SingularityError&) {
        nonneg = false;
      }
    }
    if (nonneg) CHECK(iv.status == CpInterval::Status::CP);
  }
  CHECK(flagged >= 1);
}

TEST_CASE("eternal Pauli channel is never CP divisible") {
  const auto rates = PauliRates::eternal(1, 0.5);
  const auto g = grid(0, 3, 31);
  const auto scan = cp_divisibility_scan([&](double t) { return choi(pauli_channel(pauli_rates_to_probabilities(rates, t))); }, g);
  // From s = 0 the intermediate map is Φ_t itself, hence CP.
  CHECK(scan.front().status == CpInterval::Status::CP);
  for (std::size_t i = 1; i < scan.size(); ++i) CHECK(scan[i].status == CpInterval::Status::NonCP);
}

TEST_CASE("near-singular maps are indeterminate") {
  // Fully depolarizing at s: no inverse.
  const double g[] = {0.0, 1.0, 2.0};
  const auto scan = cp_divisibility_scan(
      [](double t) { return choi(depolarizing(t >= 1.0 ? 1.0 : 0.0)); }, g);
  CHECK(scan[0].status == CpInterval::Status::CP);
  CHECK(scan[1].status == CpInterval::Status::Indeterminate);
  CHECK(std::isnan(scan[1].min_eigenvalue));
}

TEST_CASE("P divisibility of collisional dephasing") {
  const double gt = kPi / 6;
  std::vector<double> ns;
  for (int n = 0; n <= 12; ++n) ns.push_back(n);
  auto corr = [&](double n) {
    const double l = 2 * collisional_correlated_weight(n, gt) - 1;
    return std::array<double, 3>{l, l, 1.0};
  };
  auto sep = [&](double n) {
    const double l = 2 * collisional_separable_weight(n, gt) - 1;
    return std::array<double, 3>{l, l, 1.0};
  };
  const auto flagged = p_divisibility_scan_pauli(corr, ns);
  // |cos(2nπ/6)| grows exactly on steps ending with ngτ in (π/4, π/2) mod π/2.
  std::vector<std::size_t> expect;
  for (std::size_t i = 0; i + 1 < ns.size(); ++i)
    if (std::abs(std::cos(2 * ns[i + 1] * gt)) > std::abs(std::cos(2 * ns[i] * gt)) + 1e-10) expect.push_back(i);
  REQUIRE(flagged.size() == expect.size());
  for (std::size_t k = 0; k < expect.size(); ++k) {
    CHECK(flagged[k].index == expect[k]);
    // The interval's midpoint sits in the band (π/4, π/2) mod π/2.
    const double x = std::fmod((ns[expect[k]] + 0.5) * gt, kPi / 2);
    CHECK(x > kPi / 4 + 1e-9);
  }
  CHECK(p_divisibility_scan_pauli(sep, ns).empty());
  CHECK(p_divisibility_scan_pauli([](double) { return std::array<double, 3>{0.3, -0.2, 0.9}; }, ns).empty());
}
