#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oqsim/circuit.hpp"
#include "oqsim/qstate.hpp"

namespace oqsim {

/// A[i][j] = P(read bitstring i | prepared basis state j).
struct CalibrationMatrix {
  int num_qubits = 0;
  RealMatrix a;

  void validate(double tol = 1e-10) const;
  /// Kronecker product of per-qubit confusion matrices (qubit 0 first).
  static CalibrationMatrix from_confusions(std::span<const RealMatrix> confusions);
};

/// Infinite-shot calibration implied by the noise model's readout.
CalibrationMatrix exact_calibration(const NoiseModel& noise, int num_qubits);

/// Prepares every basis state (no gate noise) and samples it through the
/// readout model. Column j uses sub-seed splitmix64(seed ^ j).
CalibrationMatrix measure_calibration(const NoiseModel& noise, int num_qubits, std::uint64_t shots,
                                      std::uint64_t seed);

struct MitigationResult {
  RealVector probabilities;
  double residual = 0.0;  // ‖A x − y‖₂
  bool converged = false;
  std::size_t iterations = 0;
};

/// Euclidean projection onto the probability simplex.
RealVector project_to_simplex(const RealVector& v);

/// min ‖A x − y‖₂ over the simplex by projected gradient descent.
MitigationResult mitigate_probabilities(const RealVector& y, const CalibrationMatrix& cal);
MitigationResult mitigate_counts(const Counts& counts, const CalibrationMatrix& cal);

enum class Basis { X, Y, Z };

char basis_label(Basis b);
Basis basis_from_label(char c);

/// Gates rotating the eigenbasis of `basis` onto Z: X → H, Y → S† then H.
void append_basis_change(Circuit& circuit, int qubit, Basis basis);
ComplexMatrix basis_change_unitary(Basis basis);

/// All 3ⁿ settings, qubit 0 varying slowest, each factor in X, Y, Z order.
std::vector<std::vector<Basis>> tomography_settings(int num_qubits);

struct TomographyRecord {
  std::vector<Basis> bases;
  Counts counts;
};

/// Outcome distribution for one measurement setting.
struct TomographyData {
  std::vector<Basis> bases;
  RealVector probabilities;
};

/// Samples every setting of ρ. Setting k uses sub-seed splitmix64(seed + k).
std::vector<TomographyRecord> simulate_tomography(const DensityMatrix& rho, std::uint64_t shots,
                                                  std::span<const RealMatrix> readout, std::uint64_t seed);

/// Exact outcome distributions of ρ for every setting.
std::vector<TomographyData> exact_tomography_data(const DensityMatrix& rho);

/// Σ_s ⟨σ_s⟩ σ_s / 2ⁿ, each ⟨σ_s⟩ averaged over all settings compatible with s.
ComplexMatrix linear_inversion(std::span<const TomographyData> data);

/// Eigenvalues (any order) → closest probability vector in the
/// redistribute-negative-mass sense; returned in the input order.
RealVector project_eigenvalues(const RealVector& eigenvalues);
/// Closest unit-trace PSD matrix to a unit-trace Hermitian matrix (2-norm).
DensityMatrix project_to_density(const ComplexMatrix& m);

DensityMatrix tomography(std::span<const TomographyData> data);
/// With `mitigated`, each setting's counts go through mitigate_counts first.
DensityMatrix tomography(std::span<const TomographyRecord> records, bool mitigated,
                         const std::optional<CalibrationMatrix>& cal = std::nullopt);

/// "bitstring,count" rows.
std::string counts_to_csv(const Counts& counts);
/// Dense matrix, one row per line.
std::string calibration_to_csv(const CalibrationMatrix& cal);

}  // namespace oqsim
