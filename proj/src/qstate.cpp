#include "oqsim/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "oqsim/errors.hpp"

namespace oqsim {

namespace pauli {

ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix by_index(int k) {
  switch (k) {
    case 0: return I();
    case 1: return X();
    case 2: return Y();
    case 3: return Z();
    default: throw ArgumentError("Pauli index must be in 0..3, got " + std::to_string(k));
  }
}

ComplexMatrix string(std::span<const int> indices) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k : indices) out = tensor(out, by_index(k));
  return out;
}

}  // namespace pauli

int qubits_for_dim(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw ArgumentError("dimension " + std::to_string(dim) + " is not a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  qubits_for_dim(static_cast<std::size_t>(amplitudes_.size()));
  if (!amplitudes_.allFinite()) throw ArgumentError("state amplitudes must be finite");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12)
    throw ArgumentError("state is not normalized (norm " + std::to_string(norm) + ")");
}

PureState PureState::basis(int num_qubits, std::size_t index) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) throw ArgumentError("basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::plus() {
  ComplexVector v(2);
  v << M_SQRT1_2, M_SQRT1_2;
  return PureState(std::move(v));
}

namespace {
PureState two_qubit(double a00, double a01, double a10, double a11) {
  ComplexVector v(4);
  v << a00, a01, a10, a11;
  return PureState(std::move(v));
}
}  // namespace

PureState PureState::phi_plus() { return two_qubit(M_SQRT1_2, 0, 0, M_SQRT1_2); }
PureState PureState::phi_minus() { return two_qubit(M_SQRT1_2, 0, 0, -M_SQRT1_2); }
PureState PureState::psi_plus() { return two_qubit(0, M_SQRT1_2, M_SQRT1_2, 0); }
PureState PureState::psi_minus() { return two_qubit(0, M_SQRT1_2, -M_SQRT1_2, 0); }

PureState PureState::ghz(int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(0) = M_SQRT1_2;
  v(static_cast<Eigen::Index>(dim - 1)) = M_SQRT1_2;
  return PureState(std::move(v));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityCheck check_density(const ComplexMatrix& m) {
  DensityCheck c;
  if (m.rows() != m.cols() || m.rows() == 0) {
    c.finite = false;
    return c;
  }
  c.finite = m.allFinite();
  if (!c.finite) return c;
  c.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(m.trace() - cplx(1.0, 0.0));
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  c.min_eigenvalue = hermitian_eigenvalues(h).minCoeff();
  return c;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols())
    throw ArgumentError("density matrix must be square");
  qubits_for_dim(dim());
  const DensityCheck c = check_density(matrix_);
  if (!c.finite) throw ArgumentError("density matrix has non-finite entries");
  if (c.hermiticity_error > 1e-12)
    throw ArgumentError("density matrix is not Hermitian (error " +
                        std::to_string(c.hermiticity_error) + ")");
  if (c.trace_error > 1e-12)
    throw ArgumentError("density matrix trace deviates from 1 by " + std::to_string(c.trace_error));
  if (c.min_eigenvalue < -1e-10)
    throw ArgumentError("density matrix has negative eigenvalue " +
                        std::to_string(c.min_eigenvalue));
}

DensityMatrix::DensityMatrix(ComplexMatrix m, NoCheck) : matrix_(std::move(m)) {}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return DensityMatrix(std::move(h), NoCheck{});
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const ComplexVector& v = psi.amplitudes();
  return unchecked(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), NoCheck{});
}

DensityMatrix DensityMatrix::basis(int num_qubits, std::size_t index) {
  return from_pure(PureState::basis(num_qubits, index));
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

// ---------------------------------------------------------------------------
// Linear algebra

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::unchecked(tensor(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, std::span<const int> keep) {
  if (m.rows() != m.cols()) throw ArgumentError("partial trace needs a square matrix");
  const int n = qubits_for_dim(static_cast<std::size_t>(m.rows()));
  if (keep.empty()) throw ArgumentError("partial trace: keep list is empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] < 0 || kept[i] >= n)
      throw ArgumentError("partial trace: qubit index " + std::to_string(kept[i]) + " out of range");
    if (i > 0 && kept[i] == kept[i - 1])
      throw ArgumentError("partial trace: duplicate qubit index " + std::to_string(kept[i]));
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

  const int k = static_cast<int>(kept.size());
  const int t = static_cast<int>(traced.size());
  const std::size_t dk = std::size_t{1} << k;
  const std::size_t dt = std::size_t{1} << t;

  // full index of (kept value a, traced value e)
  auto place = [n](std::size_t value, const std::vector<int>& qubits) {
    std::size_t idx = 0;
    const int w = static_cast<int>(qubits.size());
    for (int j = 0; j < w; ++j)
      if ((value >> (w - 1 - j)) & 1u) idx |= std::size_t{1} << (n - 1 - qubits[j]);
    return idx;
  };
  std::vector<std::size_t> kept_idx(dk), traced_idx(dt);
  for (std::size_t a = 0; a < dk; ++a) kept_idx[a] = place(a, kept);
  for (std::size_t e = 0; e < dt; ++e) traced_idx[e] = place(e, traced);

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t a = 0; a < dk; ++a)
    for (std::size_t b = 0; b < dk; ++b) {
      cplx s = 0.0;
      for (std::size_t e = 0; e < dt; ++e)
        s += m(static_cast<Eigen::Index>(kept_idx[a] | traced_idx[e]),
               static_cast<Eigen::Index>(kept_idx[b] | traced_idx[e]));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  return DensityMatrix::unchecked(partial_trace_matrix(rho.matrix(), keep));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

double overlap(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw ArgumentError("overlap: dimension mismatch");
  const ComplexVector& v = psi.amplitudes();
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double shannon_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    const double q = std::clamp(p, 0.0, 1.0);
    if (q > 0.0) s -= q * std::log2(q);
  }
  return s;
}

double vn_entropy(const DensityMatrix& rho) {
  const RealVector ev = hermitian_eigenvalues(rho.matrix());
  return std::max(0.0, shannon_entropy(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size()))));
}

double mutual_information(const DensityMatrix& rho, std::span<const int> subsystem_a) {
  const int n = rho.num_qubits();
  std::vector<int> a(subsystem_a.begin(), subsystem_a.end());
  std::sort(a.begin(), a.end());
  std::vector<int> b;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(a.begin(), a.end(), q)) b.push_back(q);
  if (a.empty() || b.empty()) throw ArgumentError("mutual information needs a proper bipartition");
  const double value = vn_entropy(partial_trace(rho, a)) + vn_entropy(partial_trace(rho, b)) -
                       vn_entropy(rho);
  return std::abs(value) < 1e-10 ? 0.0 : value;
}

double mutual_information(const DensityMatrix& rho, std::initializer_list<int> subsystem_a) {
  return mutual_information(rho, std::span<const int>(subsystem_a.begin(), subsystem_a.size()));
}

double trace_norm_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ArgumentError("trace distance: dimension mismatch");
  const ComplexMatrix d = a - b;
  const RealVector ev = hermitian_eigenvalues(0.5 * (d + d.adjoint()));
  return 0.5 * ev.cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_norm_distance(a.matrix(), b.matrix());
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ArgumentError("fidelity: dimension mismatch");
  // Work on the support of a; round-off eigenvalues would otherwise enter
  // through two square roots.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  const RealVector& lam = es.eigenvalues();
  const double cut = 1e-13 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > cut) support.push_back(i);
  ComplexMatrix v(lam.size(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k)
    v.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(support[k]) * std::sqrt(lam(support[k]));
  const ComplexMatrix inner = v.adjoint() * b.matrix() * v;
  const RealVector ev = hermitian_eigenvalues(0.5 * (inner + inner.adjoint()));
  double root = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) root += std::sqrt(ev(i));
  return std::min(1.0, root * root);
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& observable) {
  if (observable.rows() != static_cast<Eigen::Index>(rho.dim()))
    throw ArgumentError("expectation: dimension mismatch");
  return (rho.matrix() * observable).trace().real();
}

Eigen::Vector3d bloch_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw ArgumentError("Bloch vector needs a single-qubit state");
  return {expectation(rho, pauli::X()), expectation(rho, pauli::Y()), expectation(rho, pauli::Z())};
}

}  // namespace oqsim
