#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "oqsim/channels.hpp"
#include "oqsim/qstate.hpp"

namespace oqsim {

/// A decay rate γ(t). `continuation` is an optional holomorphic extension to
/// complex time; when present the integrator may route around real-axis poles
/// through the upper half plane. Only supply it when the resulting dynamical
/// map is single valued there (true for amplitude damping, whose map is
/// entire in t).
struct TimeDependentRate {
  std::function<double(double)> value;
  std::function<cplx(cplx)> continuation;

  static TimeDependentRate from(const RateFunction& rate);
  static TimeDependentRate constant(double gamma);
  static TimeDependentRate amplitude_damping(const ADParams& params);
};

/// dρ/dt = −i[H, ρ] + Σ_k γ_k(t) (V_k ρ V_k† − ½{V_k†V_k, ρ}).
struct Generator {
  ComplexMatrix hamiltonian;  // empty means H = 0
  std::vector<ComplexMatrix> jump_operators;
  std::vector<TimeDependentRate> rates;

  std::size_t dim() const;
};

/// Time-local generator of the Pauli channel family with the given rates.
Generator pauli_generator(const PauliRates& rates);
/// Amplitude-damping generator with V = σ₋ = |0⟩⟨1| and rate gamma_ad.
Generator amplitude_damping_generator(const ADParams& params);

struct IntegrationOptions {
  /// Step bound: h·max_k|γ_k| ≤ rate_step.
  double rate_step = 1e-3;
  /// Maximum RK4 steps per grid interval before giving up.
  std::size_t max_steps = 5'000'000;
  double trace_tol = 1e-8;
  /// Upper bound on any single step.
  double max_step = 1e-2;
};

/// Classical RK4 integration. rho0 is the state at t_grid.front(); returns
/// one state per grid point.
std::vector<DensityMatrix> integrate_master_equation(const Generator& generator, const DensityMatrix& rho0,
                                                     std::span<const double> t_grid,
                                                     const IntegrationOptions& options = {});

}  // namespace oqsim
