#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oqsim {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Qubit ordering used everywhere in this library: qubit 0 is the most
// significant bit of a computational-basis index, so for n qubits the bit of
// qubit q sits at position (n - 1 - q).

namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
/// σ_0..σ_3 = I, X, Y, Z.
ComplexMatrix by_index(int k);
/// Tensor product of single-qubit Paulis given as indices 0..3 (qubit 0 first).
ComplexMatrix string(std::span<const int> indices);
}  // namespace pauli

/// Number of qubits for a power-of-two dimension; throws ArgumentError otherwise.
int qubits_for_dim(std::size_t dim);

/// Bit of `qubit` in basis index `index` of an n-qubit register.
inline std::size_t qubit_bit(std::size_t index, int qubit, int num_qubits) {
  return (index >> (num_qubits - 1 - qubit)) & 1u;
}

class PureState {
 public:
  /// Validates unit norm within 1e-12.
  explicit PureState(ComplexVector amplitudes);

  static PureState basis(int num_qubits, std::size_t index);
  static PureState zeros(int num_qubits) { return basis(num_qubits, 0); }
  static PureState plus();
  static PureState phi_plus();
  static PureState phi_minus();
  static PureState psi_plus();
  static PureState psi_minus();
  static PureState ghz(int num_qubits);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  int num_qubits() const { return qubits_for_dim(dim()); }

 private:
  ComplexVector amplitudes_;
};

/// Summary of how far a matrix is from being a valid density matrix.
struct DensityCheck {
  double hermiticity_error = 0.0;  // max |M - M†|
  double trace_error = 0.0;        // |tr M - 1|
  double min_eigenvalue = 0.0;
  bool finite = true;

  bool valid(double herm_tol = 1e-12, double trace_tol = 1e-12, double eig_tol = 1e-10) const {
    return finite && hermiticity_error <= herm_tol && trace_error <= trace_tol &&
           min_eigenvalue >= -eig_tol;
  }
};

DensityCheck check_density(const ComplexMatrix& m);

class DensityMatrix {
 public:
  /// Validates: square power-of-two, Hermitian (1e-12), unit trace (1e-12),
  /// min eigenvalue >= -1e-10.
  explicit DensityMatrix(ComplexMatrix m);

  /// Wraps the output of a trusted, state-preserving computation. The matrix
  /// is symmetrized to remove round-off anti-Hermitian parts but not
  /// otherwise checked.
  static DensityMatrix unchecked(ComplexMatrix m);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int num_qubits);
  static DensityMatrix basis(int num_qubits, std::size_t index);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  int num_qubits() const { return qubits_for_dim(dim()); }

  double purity() const;

 private:
  struct NoCheck {};
  DensityMatrix(ComplexMatrix m, NoCheck);
  ComplexMatrix matrix_;
};

/// Kronecker product; the left factor occupies the leading (most significant) qubits.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on `keep`, in ascending qubit order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep);

/// Same contraction on an arbitrary square matrix (used for Choi matrices).
ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, std::span<const int> keep);

/// ⟨ψ|ρ|ψ⟩.
double overlap(const DensityMatrix& rho, const PureState& psi);

/// Eigenvalues of a Hermitian matrix in ascending order.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// Von Neumann entropy in bits. Eigenvalues are clamped to [0, 1].
double vn_entropy(const DensityMatrix& rho);

/// Entropy in bits of a probability vector (0 log 0 = 0).
double shannon_entropy(std::span<const double> probabilities);

/// S(A) + S(B) - S(AB) in bits, where A is `subsystem_a` and B its complement.
double mutual_information(const DensityMatrix& rho, std::span<const int> subsystem_a);
double mutual_information(const DensityMatrix& rho, std::initializer_list<int> subsystem_a);

/// ½‖a − b‖₁ for Hermitian a, b.
double trace_norm_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Uhlmann fidelity (tr √(√a b √a))².
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Bloch vector (⟨X⟩, ⟨Y⟩, ⟨Z⟩) of a single-qubit state.
Eigen::Vector3d bloch_vector(const DensityMatrix& rho);

/// Expectation value tr(ρ O), real part.
double expectation(const DensityMatrix& rho, const ComplexMatrix& observable);

}  // namespace oqsim
