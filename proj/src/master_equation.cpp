#include "oqsim/master_equation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oqsim/errors.hpp"

namespace oqsim {

TimeDependentRate TimeDependentRate::from(const RateFunction& rate) {
  return {[rate](double t) { return rate(t); }, {}};
}

TimeDependentRate TimeDependentRate::constant(double gamma) {
  return {[gamma](double) { return gamma; }, [gamma](cplx) { return cplx(gamma); }};
}

TimeDependentRate TimeDependentRate::amplitude_damping(const ADParams& params) {
  auto rate = [params](cplx t) {
    const cplx c = c1_complex(t, params);
    if (c == cplx(0.0)) return cplx(std::numeric_limits<double>::infinity());
    return -2.0 * c1_derivative_complex(t, params) / c;
  };
  return {[rate](double t) { return rate(cplx(t, 0.0)).real(); }, rate};
}

std::size_t Generator::dim() const {
  if (hamiltonian.size() > 0) return static_cast<std::size_t>(hamiltonian.rows());
  if (!jump_operators.empty()) return static_cast<std::size_t>(jump_operators.front().rows());
  return 0;
}

Generator pauli_generator(const PauliRates& rates) {
  Generator g;
  g.jump_operators = {pauli::X(), pauli::Y(), pauli::Z()};
  for (const RateFunction* r : {&rates.gamma_x, &rates.gamma_y, &rates.gamma_z}) {
    RateFunction half = *r;
    g.rates.push_back({[half](double t) { return 0.5 * half(t); }, {}});
  }
  return g;
}

Generator amplitude_damping_generator(const ADParams& params) {
  Generator g;
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  g.jump_operators = {lower};
  g.rates = {TimeDependentRate::amplitude_damping(params)};
  return g;
}

namespace {

class Integrator {
 public:
  Integrator(const Generator& g, const IntegrationOptions& options) : g_(g), options_(options) {
    if (g_.jump_operators.size() != g_.rates.size())
      throw ArgumentError("master equation: one rate per jump operator required");
    const auto d = static_cast<Eigen::Index>(g_.dim());
    for (const auto& v : g_.jump_operators) {
      if (v.rows() != d || v.cols() != d) throw ArgumentError("master equation: operator shape mismatch");
      vdag_v_.push_back(v.adjoint() * v);
    }
    if (g_.hamiltonian.size() > 0 && (g_.hamiltonian.rows() != d || g_.hamiltonian.cols() != d))
      throw ArgumentError("master equation: Hamiltonian shape mismatch");
    for (const auto& r : g_.rates)
      if (!r.continuation) can_detour_ = false;
  }

  bool can_detour() const { return can_detour_ && !g_.rates.empty(); }

  // Straight leg z0 → z1; false when the step size collapses.
  bool leg(cplx z0, cplx z1, bool complex_time, ComplexMatrix& rho) const {
    const double length = std::abs(z1 - z0);
    if (length == 0.0) return true;
    const cplx dir = (z1 - z0) / length;
    double s = 0.0;
    std::size_t steps = 0;
    std::vector<cplx> rates(g_.rates.size());
    while (s < length) {
      const cplx z = z0 + s * dir;
      double max_rate = 0.0;
      for (std::size_t k = 0; k < g_.rates.size(); ++k) {
        rates[k] = rate(k, z, complex_time);
        max_rate = std::max(max_rate, std::abs(rates[k]));
      }
      if (!std::isfinite(max_rate)) return false;
      double h = std::min(length - s, options_.max_step);
      if (max_rate > 0.0) h = std::min(h, options_.rate_step / max_rate);
      // Shrink while the rate at the far end of the step is larger.
      for (int tries = 0; tries < 8; ++tries) {
        double ahead = 0.0;
        for (std::size_t k = 0; k < g_.rates.size(); ++k) ahead = std::max(ahead, std::abs(rate(k, z + h * dir, complex_time)));
        if (!std::isfinite(ahead) || ahead * h <= options_.rate_step) break;
        h = options_.rate_step / ahead;
      }
      if (h < 1e-13 * (1.0 + std::abs(z)) && h < length - s) return false;
      if (++steps > options_.max_steps) return false;

      const cplx dz = h * dir;
      const ComplexMatrix k1 = rhs(rates, rho);
      const ComplexMatrix k2 = rhs(rates_at(z + 0.5 * dz, complex_time), rho + 0.5 * dz * k1);
      const ComplexMatrix k3 = rhs(rates_at(z + 0.5 * dz, complex_time), rho + 0.5 * dz * k2);
      const ComplexMatrix k4 = rhs(rates_at(z + dz, complex_time), rho + dz * k3);
      rho += dz / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!rho.allFinite()) return false;
      s = (length - s == h) ? length : s + h;
    }
    return true;
  }

 private:
  cplx rate(std::size_t k, cplx z, bool complex_time) const {
    if (complex_time) return g_.rates[k].continuation(z);
    return cplx(g_.rates[k].value(z.real()), 0.0);
  }

  std::vector<cplx> rates_at(cplx z, bool complex_time) const {
    std::vector<cplx> out(g_.rates.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = rate(k, z, complex_time);
    return out;
  }

  ComplexMatrix rhs(const std::vector<cplx>& rates, const ComplexMatrix& rho) const {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    if (g_.hamiltonian.size() > 0) out += cplx(0.0, -1.0) * (g_.hamiltonian * rho - rho * g_.hamiltonian);
    for (std::size_t k = 0; k < rates.size(); ++k) {
      if (rates[k] == cplx(0.0)) continue;
      const ComplexMatrix& v = g_.jump_operators[k];
      out += rates[k] * (v * rho * v.adjoint() - 0.5 * (vdag_v_[k] * rho + rho * vdag_v_[k]));
    }
    return out;
  }

  const Generator& g_;
  const IntegrationOptions& options_;
  std::vector<ComplexMatrix> vdag_v_;
  bool can_detour_ = true;
};

}  // namespace

std::vector<DensityMatrix> integrate_master_equation(const Generator& generator, const DensityMatrix& rho0,
                                                     std::span<const double> t_grid,
                                                     const IntegrationOptions& options) {
  if (t_grid.empty()) throw ArgumentError("master equation: empty time grid");
  if (generator.dim() != rho0.dim()) throw ArgumentError("master equation: dimension mismatch");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i])) throw ArgumentError("master equation: non-finite time");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ArgumentError("master equation: time grid must increase");
  }

  Integrator integrator(generator, options);
  std::vector<DensityMatrix> out;
  out.reserve(t_grid.size());
  out.push_back(rho0);
  ComplexMatrix rho = rho0.matrix();

  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double a = t_grid[i - 1];
    const double b = t_grid[i];
    ComplexMatrix next = rho;
    if (!integrator.leg(a, b, false, next)) {
      if (!integrator.can_detour())
        throw IntegrationError("master equation: step size underflow on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]");
      // Go around the real-axis pole through the upper half plane.
      const double eta = std::min(0.5 * (b - a), 0.25);
      next = rho;
      const cplx up_a(a, eta);
      const cplx up_b(b, eta);
      if (!integrator.leg(a, up_a, true, next) || !integrator.leg(up_a, up_b, true, next) ||
          !integrator.leg(up_b, b, true, next))
        throw IntegrationError("master equation: complex detour failed on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]");
    }
    rho = next;
    const double trace_error = std::abs(rho.trace() - 1.0);
    if (!(trace_error <= options.trace_tol))
      throw IntegrationError("master equation: trace drifted by " + std::to_string(trace_error) + " at t = " +
                             std::to_string(b));
    rho = 0.5 * (rho + rho.adjoint()).eval();
    out.push_back(DensityMatrix::unchecked(rho));
  }
  return out;
}

}  // namespace oqsim
