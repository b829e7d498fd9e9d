#include "oqsim/tomomit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "oqsim/errors.hpp"

namespace oqsim {

void CalibrationMatrix::validate(double tol) const {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (num_qubits < 1 || a.rows() != dim || a.cols() != dim)
    throw ArgumentError("calibration matrix must be 2^n x 2^n");
  if (a.minCoeff() < 0.0) throw ArgumentError("calibration matrix entries must be non-negative");
  for (Eigen::Index j = 0; j < dim; ++j)
    if (std::abs(a.col(j).sum() - 1.0) > tol) throw ArgumentError("calibration matrix columns must sum to 1");
}

CalibrationMatrix CalibrationMatrix::from_confusions(std::span<const RealMatrix> confusions) {
  if (confusions.empty()) throw ArgumentError("need at least one confusion matrix");
  RealMatrix a = RealMatrix::Ones(1, 1);
  for (const auto& c : confusions) {
    validate_confusion(c);
    RealMatrix next(a.rows() * 2, a.cols() * 2);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = a(i, j) * c;
    a = std::move(next);
  }
  return {static_cast<int>(confusions.size()), std::move(a)};
}

CalibrationMatrix exact_calibration(const NoiseModel& noise, int num_qubits) {
  if (num_qubits < 1) throw ArgumentError("calibration needs at least one qubit");
  auto readout = noise.readout_for(num_qubits);
  if (readout.empty()) readout.assign(static_cast<std::size_t>(num_qubits), RealMatrix::Identity(2, 2));
  return CalibrationMatrix::from_confusions(readout);
}

CalibrationMatrix measure_calibration(const NoiseModel& noise, int num_qubits, std::uint64_t shots,
                                      std::uint64_t seed) {
  if (num_qubits < 1) throw ArgumentError("calibration needs at least one qubit");
  if (shots == 0) throw ArgumentError("shots must be positive");
  noise.validate();
  const auto readout = noise.readout_for(num_qubits);
  const std::size_t dim = std::size_t{1} << num_qubits;
  CalibrationMatrix cal{num_qubits, RealMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))};
  for (std::size_t j = 0; j < dim; ++j) {
    const Counts counts = sample_counts(DensityMatrix::basis(num_qubits, j), shots, readout, splitmix64(seed ^ j));
    cal.a.col(static_cast<Eigen::Index>(j)) = counts.probabilities();
  }
  return cal;
}

// ---------------------------------------------------------------------------
// Mitigation

RealVector project_to_simplex(const RealVector& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw ArgumentError("cannot project an empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += u[static_cast<std::size_t>(k)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - candidate > 0.0) shift = candidate;
  }
  return (v.array() - shift).max(0.0).matrix();
}

MitigationResult mitigate_probabilities(const RealVector& y, const CalibrationMatrix& cal) {
  cal.validate();
  if (y.size() != cal.a.rows()) throw ArgumentError("mitigation: dimension mismatch");
  const RealMatrix& a = cal.a;
  const double l = std::pow(Eigen::JacobiSVD<RealMatrix>(a).singularValues()(0), 2);
  const RealMatrix ata = a.transpose() * a;
  const RealVector aty = a.transpose() * y;

  MitigationResult result;
  RealVector x = project_to_simplex(y);
  constexpr std::size_t kMaxIterations = 100000;
  for (std::size_t it = 1; it <= kMaxIterations; ++it) {
    const RealVector next = project_to_simplex(x - (ata * x - aty) / l);
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = next;
    result.iterations = it;
    if (change < 1e-12) {
      result.converged = true;
      break;
    }
  }
  result.probabilities = x;
  result.residual = (a * x - y).norm();
  return result;
}

MitigationResult mitigate_counts(const Counts& counts, const CalibrationMatrix& cal) {
  if (counts.num_bits != cal.num_qubits) throw ArgumentError("mitigation: qubit count mismatch");
  return mitigate_probabilities(counts.probabilities(), cal);
}

// ---------------------------------------------------------------------------
// Tomography

char basis_label(Basis b) {
  switch (b) {
    case Basis::X: return 'X';
    case Basis::Y: return 'Y';
    case Basis::Z: return 'Z';
  }
  return 'Z';
}

Basis basis_from_label(char c) {
  switch (c) {
    case 'X': case 'x': return Basis::X;
    case 'Y': case 'y': return Basis::Y;
    case 'Z': case 'z': return Basis::Z;
    default: throw ArgumentError(std::string("unknown measurement basis '") + c + "'");
  }
}

void append_basis_change(Circuit& circuit, int qubit, Basis basis) {
  switch (basis) {
    case Basis::X: circuit.h(qubit); break;
    case Basis::Y: circuit.sdg(qubit).h(qubit); break;
    case Basis::Z: break;
  }
}

ComplexMatrix basis_change_unitary(Basis basis) {
  Circuit c(1);
  append_basis_change(c, 0, basis);
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  for (const auto& g : c.gates()) u = g.matrix() * u;
  return u;
}

std::vector<std::vector<Basis>> tomography_settings(int num_qubits) {
  if (num_qubits < 1) throw ArgumentError("tomography needs at least one qubit");
  std::size_t total = 1;
  for (int q = 0; q < num_qubits; ++q) total *= 3;
  std::vector<std::vector<Basis>> out;
  out.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<Basis> s(static_cast<std::size_t>(num_qubits));
    std::size_t rest = k;
    for (int q = num_qubits - 1; q >= 0; --q) {
      s[static_cast<std::size_t>(q)] = static_cast<Basis>(rest % 3);
      rest /= 3;
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

ComplexMatrix setting_unitary(std::span<const Basis> bases) {
  ComplexMatrix u = ComplexMatrix::Ones(1, 1);
  for (Basis b : bases) u = tensor(u, basis_change_unitary(b));
  return u;
}

DensityMatrix rotate(const DensityMatrix& rho, std::span<const Basis> bases) {
  const ComplexMatrix u = setting_unitary(bases);
  return DensityMatrix::unchecked(u * rho.matrix() * u.adjoint());
}

int pauli_of(Basis b) { return b == Basis::X ? 1 : b == Basis::Y ? 2 : 3; }

}  // namespace

std::vector<TomographyRecord> simulate_tomography(const DensityMatrix& rho, std::uint64_t shots,
                                                  std::span<const RealMatrix> readout, std::uint64_t seed) {
  const auto settings = tomography_settings(rho.num_qubits());
  std::vector<TomographyRecord> out;
  out.reserve(settings.size());
  for (std::size_t k = 0; k < settings.size(); ++k)
    out.push_back({settings[k], sample_counts(rotate(rho, settings[k]), shots, readout, splitmix64(seed + k))});
  return out;
}

std::vector<TomographyData> exact_tomography_data(const DensityMatrix& rho) {
  std::vector<TomographyData> out;
  for (const auto& s : tomography_settings(rho.num_qubits())) {
    const DensityMatrix r = rotate(rho, s);
    out.push_back({s, r.matrix().diagonal().real()});
  }
  return out;
}

ComplexMatrix linear_inversion(std::span<const TomographyData> data) {
  if (data.empty()) throw ArgumentError("tomography: no data");
  const int n = static_cast<int>(data.front().bases.size());
  const std::size_t dim = std::size_t{1} << n;
  for (const auto& d : data) {
    if (static_cast<int>(d.bases.size()) != n || static_cast<std::size_t>(d.probabilities.size()) != dim)
      throw ArgumentError("tomography: inconsistent record shapes");
  }
  // Completeness: every setting must be present.
  for (const auto& s : tomography_settings(n)) {
    const bool found = std::any_of(data.begin(), data.end(), [&](const TomographyData& d) { return d.bases == s; });
    if (!found) throw ArgumentError("tomography: incomplete measurement settings");
  }

  ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::size_t strings = 1;
  for (int q = 0; q < n; ++q) strings *= 4;
  std::vector<int> indices(static_cast<std::size_t>(n));
  for (std::size_t code = 0; code < strings; ++code) {
    std::size_t rest = code;
    for (int q = n - 1; q >= 0; --q) {
      indices[static_cast<std::size_t>(q)] = static_cast<int>(rest % 4);
      rest /= 4;
    }
    double sum = 0.0;
    int matches = 0;
    for (const auto& d : data) {
      bool compatible = true;
      for (int q = 0; q < n && compatible; ++q) {
        const int idx = indices[static_cast<std::size_t>(q)];
        compatible = idx == 0 || idx == pauli_of(d.bases[static_cast<std::size_t>(q)]);
      }
      if (!compatible) continue;
      double e = 0.0;
      for (std::size_t b = 0; b < dim; ++b) {
        int parity = 0;
        for (int q = 0; q < n; ++q)
          if (indices[static_cast<std::size_t>(q)] != 0) parity ^= static_cast<int>(qubit_bit(b, q, n));
        e += (parity ? -1.0 : 1.0) * d.probabilities(static_cast<Eigen::Index>(b));
      }
      sum += e;
      ++matches;
    }
    rho += (sum / matches) * pauli::string(indices);
  }
  return rho / static_cast<double>(dim);
}

RealVector project_eigenvalues(const RealVector& eigenvalues) {
  const Eigen::Index n = eigenvalues.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return eigenvalues(a) > eigenvalues(b); });

  RealVector sorted(n);
  for (Eigen::Index k = 0; k < n; ++k) sorted(k) = eigenvalues(order[static_cast<std::size_t>(k)]);
  Eigen::Index i = n;
  double accumulated = 0.0;
  while (i > 0 && sorted(i - 1) + accumulated / static_cast<double>(i) < 0.0) {
    accumulated += sorted(i - 1);
    sorted(i - 1) = 0.0;
    --i;
  }
  for (Eigen::Index k = 0; k < i; ++k) sorted(k) += accumulated / static_cast<double>(i);

  RealVector out(n);
  for (Eigen::Index k = 0; k < n; ++k) out(order[static_cast<std::size_t>(k)]) = sorted(k);
  return out;
}

DensityMatrix project_to_density(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("projection needs a square matrix");
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > 1e-8) throw ArgumentError("projection needs a unit-trace matrix");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  const RealVector values = project_eigenvalues(eig.eigenvalues() / trace);
  const ComplexMatrix& v = eig.eigenvectors();
  return DensityMatrix::unchecked(v * values.cast<cplx>().asDiagonal() * v.adjoint());
}

DensityMatrix tomography(std::span<const TomographyData> data) { return project_to_density(linear_inversion(data)); }

DensityMatrix tomography(std::span<const TomographyRecord> records, bool mitigated,
                         const std::optional<CalibrationMatrix>& cal) {
  if (mitigated && !cal) throw ArgumentError("tomography: mitigation requested without calibration");
  std::vector<TomographyData> data;
  data.reserve(records.size());
  for (const auto& r : records) {
    RealVector p = mitigated ? mitigate_counts(r.counts, *cal).probabilities : r.counts.probabilities();
    data.push_back({r.bases, std::move(p)});
  }
  return tomography(data);
}

// ---------------------------------------------------------------------------
// CSV

std::string counts_to_csv(const Counts& counts) {
  std::ostringstream os;
  os << "bitstring,count\n";
  for (const auto& [bits, n] : counts.table) os << bits << ',' << n << '\n';
  return os.str();
}

std::string calibration_to_csv(const CalibrationMatrix& cal) {
  std::ostringstream os;
  char buf[64];
  for (Eigen::Index i = 0; i < cal.a.rows(); ++i) {
    for (Eigen::Index j = 0; j < cal.a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.15g", cal.a(i, j));
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace oqsim
