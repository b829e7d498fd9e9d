#pragma once

// Independent oracles and random generators shared by the unit tests. Nothing
// here calls into the library except for wrapping results in library types.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "oqsim/channels.hpp"
#include "oqsim/qstate.hpp"

namespace testing {

using oqsim::cplx;
using oqsim::ComplexMatrix;
using oqsim::ComplexVector;

inline constexpr double kPi = 3.14159265358979323846;

// Elementwise Kronecker product.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline ComplexMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline ComplexMatrix I2() { return ComplexMatrix::Identity(2, 2); }
inline ComplexMatrix X2() { return mat2(0, 1, 1, 0); }
inline ComplexMatrix Y2() { return mat2(0, cplx(0, -1), cplx(0, 1), 0); }
inline ComplexMatrix Z2() { return mat2(1, 0, 0, -1); }
inline ComplexMatrix H2() { return mat2(1, 1, 1, -1) / std::sqrt(2.0); }

inline ComplexMatrix ket_bra(const ComplexVector& a, const ComplexVector& b) { return a * b.adjoint(); }

inline ComplexVector ket(std::initializer_list<cplx> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (cplx a : amps) v(i++) = a;
  return v;
}

inline ComplexVector bell(int which) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 0: return ket({s, 0, 0, s});   // φ+
    case 1: return ket({s, 0, 0, -s});  // φ−
    case 2: return ket({0, s, s, 0});   // ψ+
    default: return ket({0, s, -s, 0}); // ψ−
  }
}

// Channel output computed straight from Kraus operators.
inline ComplexMatrix apply_kraus(const std::vector<ComplexMatrix>& ks, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

// Choi matrix Σ |i⟩⟨j| ⊗ Φ(|i⟩⟨j|) built from its definition.
inline ComplexMatrix choi_oracle(const std::vector<ComplexMatrix>& ks) {
  const Eigen::Index d = ks.front().rows();
  ComplexMatrix c = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      c += kron(e, apply_kraus(ks, e));
    }
  return c;
}

inline double trace_norm(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  return es.eigenvalues().cwiseAbs().sum();
}

// Ginibre-distributed random density matrix.
inline ComplexMatrix random_density(int dim, std::mt19937_64& rng, int rank = 0) {
  std::normal_distribution<double> n(0.0, 1.0);
  const int r = rank > 0 ? rank : dim;
  ComplexMatrix g(dim, r);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = cplx(n(rng), n(rng));
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline ComplexVector random_pure(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(n(rng), n(rng));
  return v / v.norm();
}

inline ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(n(rng), n(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

// Random CPTP map from truncating a random isometry into `kraus` blocks.
inline std::vector<ComplexMatrix> random_kraus(int dim, int kraus, std::mt19937_64& rng) {
  const ComplexMatrix u = random_unitary(dim * kraus, rng);
  std::vector<ComplexMatrix> ks;
  for (int k = 0; k < kraus; ++k) ks.push_back(u.block(k * dim, 0, dim, dim));
  return ks;
}

inline double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace testing
