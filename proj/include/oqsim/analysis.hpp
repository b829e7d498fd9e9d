#pragma once

#include <span>
#include <string>
#include <vector>

#include "oqsim/channels.hpp"
#include "oqsim/qstate.hpp"

namespace oqsim {

/// Fidelity ⟨φ+|(𝕀 ⊗ Φ)(|φ+⟩⟨φ+|)|φ+⟩ of a single-qubit channel. Computed
/// directly and from the XX, YY, ZZ correlators; throws NumericalError if the
/// two disagree by more than 1e-10.
double witness_f(const ChoiMatrix& channel);
double witness_f(const KrausChannel& channel);
/// (1 + ⟨XX⟩ − ⟨YY⟩ + ⟨ZZ⟩) / 4.
double witness_from_correlators(double xx, double yy, double zz);

double binary_entropy(double x);

/// H₂(ηp) − H₂((1 − η)p).
double capacity_objective(double eta, double p);
/// Quantum capacity of amplitude damping with transmissivity η = |c₁|².
double channel_capacity_ad(double eta);
/// η estimated as the ratio of excited populations at t and at 0, clamped to [0, 1].
double eta_from_populations(double excited_t, double excited_0);

/// [1 − S(ρ_S) + I(S:M)]·kT·ln 2 for a system qubit 0 and memory qubit 1.
double extractable_work(const DensityMatrix& rho_sm, double kT = 1.0);

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;

  void validate() const;
};

struct Revival {
  std::size_t index = 0;  // rise between index and index + 1
  double magnitude = 0.0;
};

/// Rises value[i+1] > value[i] + tol that follow an earlier drop of more than tol.
std::vector<Revival> detect_revivals(std::span<const double> values, double tol);
std::vector<Revival> detect_revivals(const TimeSeries& series, double tol);

/// "t,value,label" with 15 significant digits.
std::string to_csv(std::span<const TimeSeries> series);
std::vector<TimeSeries> time_series_from_csv(const std::string& text);

}  // namespace oqsim
