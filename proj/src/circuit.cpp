#include "oqsim/circuit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

#include "json.hpp"

#include "oqsim/errors.hpp"

namespace oqsim {

namespace {

constexpr std::array<std::string_view, 13> kGateNames = {"H",  "X",  "Y",    "Z",  "S",  "Sdg", "RX",
                                                         "RY", "RZ", "CNOT", "CY", "CZ", "CRY"};

ComplexMatrix controlled(const ComplexMatrix& u) {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  m.block(2, 2, 2, 2) = u;
  return m;
}

ComplexMatrix ry_matrix(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  ComplexMatrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

// Applies the local unitary u on `qubits` to the rows of m (m ← U m).
void apply_left(ComplexMatrix& m, const ComplexMatrix& u, std::span<const int> qubits, int num_qubits) {
  const auto k = qubits.size();
  const std::size_t sub = std::size_t{1} << k;
  std::vector<std::size_t> offsets(sub, 0);
  std::size_t target_mask = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t mask = std::size_t{1} << (num_qubits - 1 - qubits[j]);
    target_mask |= mask;
    for (std::size_t r = 0; r < sub; ++r)
      if ((r >> (k - 1 - j)) & 1u) offsets[r] |= mask;
  }
  const auto dim = static_cast<std::size_t>(m.rows());
  std::vector<cplx> buf(sub);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & target_mask) continue;
      for (std::size_t r = 0; r < sub; ++r) buf[r] = m(static_cast<Eigen::Index>(base | offsets[r]), c);
      for (std::size_t r = 0; r < sub; ++r) {
        cplx acc = 0.0;
        for (std::size_t q = 0; q < sub; ++q)
          acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q)) * buf[q];
        m(static_cast<Eigen::Index>(base | offsets[r]), c) = acc;
      }
    }
  }
}

void conjugate(ComplexMatrix& rho, const ComplexMatrix& u, std::span<const int> qubits, int num_qubits) {
  apply_left(rho, u, qubits, num_qubits);
  rho = rho.adjoint().eval();
  apply_left(rho, u, qubits, num_qubits);
  rho = rho.adjoint().eval();
}

void depolarize_one(ComplexMatrix& rho, int qubit, double p, int num_qubits) {
  if (p == 0.0) return;
  const std::array<int, 1> q{qubit};
  ComplexMatrix acc = (1.0 - 0.75 * p) * rho;
  for (int k = 1; k < 4; ++k) {
    ComplexMatrix term = rho;
    conjugate(term, pauli::by_index(k), q, num_qubits);
    acc += 0.25 * p * term;
  }
  rho = std::move(acc);
}

void depolarize_two(ComplexMatrix& rho, int q0, int q1, double p, int num_qubits) {
  if (p == 0.0) return;
  const std::array<int, 2> q{q0, q1};
  ComplexMatrix acc = (1.0 - p) * rho;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      ComplexMatrix term = rho;
      conjugate(term, tensor(pauli::by_index(a), pauli::by_index(b)), q, num_qubits);
      acc += (p / 15.0) * term;
    }
  rho = std::move(acc);
}

void check_dims(const Circuit& circuit, std::size_t dim) {
  if (dim != (std::size_t{1} << circuit.num_qubits()))
    throw ArgumentError("circuit has " + std::to_string(circuit.num_qubits()) +
                        " qubits but the state has dimension " + std::to_string(dim));
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

std::string_view gate_name(GateKind kind) { return kGateNames[static_cast<std::size_t>(kind)]; }

GateKind gate_kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kGateNames.size(); ++i)
    if (kGateNames[i] == name) return static_cast<GateKind>(i);
  throw ArgumentError("unknown gate '" + std::string(name) + "'");
}

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::CY:
    case GateKind::CZ:
    case GateKind::CRY: return 2;
    default: return 1;
  }
}

bool gate_has_angle(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ || kind == GateKind::CRY;
}

ComplexMatrix Gate::matrix() const {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const cplx i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  switch (kind) {
    case GateKind::H: m << 1.0, 1.0, 1.0, -1.0; return m / std::sqrt(2.0);
    case GateKind::X: return pauli::X();
    case GateKind::Y: return pauli::Y();
    case GateKind::Z: return pauli::Z();
    case GateKind::S: m << 1.0, 0.0, 0.0, i; return m;
    case GateKind::Sdg: m << 1.0, 0.0, 0.0, -i; return m;
    case GateKind::RX: m << c, -i * s, -i * s, c; return m;
    case GateKind::RY: return ry_matrix(angle);
    case GateKind::RZ: m << std::exp(-i * (angle / 2.0)), 0.0, 0.0, std::exp(i * (angle / 2.0)); return m;
    case GateKind::CNOT: return controlled(pauli::X());
    case GateKind::CY: return controlled(pauli::Y());
    case GateKind::CZ: return controlled(pauli::Z());
    case GateKind::CRY: return controlled(ry_matrix(angle));
  }
  throw ArgumentError("invalid gate kind");
}

std::string_view prep_label(Prep p) {
  switch (p) {
    case Prep::Zero: return "0";
    case Prep::One: return "1";
    case Prep::Plus: return "+";
  }
  return "0";
}

Prep prep_from_label(std::string_view label) {
  if (label == "0") return Prep::Zero;
  if (label == "1") return Prep::One;
  if (label == "+") return Prep::Plus;
  throw ArgumentError("unknown preparation label '" + std::string(label) + "'");
}

// ---------------------------------------------------------------------------
// Circuit

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits), prep_(static_cast<std::size_t>(std::max(num_qubits, 0)), Prep::Zero) {
  if (num_qubits <= 0 || num_qubits > 20) throw ArgumentError("circuit needs between 1 and 20 qubits");
}

Circuit& Circuit::add(Gate gate) {
  if (static_cast<int>(gate.qubits.size()) != gate_arity(gate.kind))
    throw ArgumentError("gate " + std::string(gate_name(gate.kind)) + " expects " +
                        std::to_string(gate_arity(gate.kind)) + " qubit(s)");
  for (int q : gate.qubits)
    if (q < 0 || q >= num_qubits_) throw ArgumentError("gate qubit index " + std::to_string(q) + " out of range");
  if (gate.qubits.size() == 2 && gate.qubits[0] == gate.qubits[1])
    throw ArgumentError("control and target must differ");
  if (!std::isfinite(gate.angle)) throw ArgumentError("gate angle must be finite");
  if (!gate_has_angle(gate.kind)) gate.angle = 0.0;
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::add(GateKind kind, std::vector<int> qubits, double angle) {
  return add(Gate{kind, std::move(qubits), angle});
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.num_qubits() != num_qubits_) throw ArgumentError("append: qubit count mismatch");
  for (const auto& g : other.gates()) add(g);
  return *this;
}

Circuit& Circuit::set_prep(int q, Prep p) {
  if (q < 0 || q >= num_qubits_) throw ArgumentError("prep qubit index out of range");
  prep_[static_cast<std::size_t>(q)] = p;
  has_prep_ = true;
  return *this;
}

PureState Circuit::initial_pure_state() const {
  ComplexVector v = ComplexVector::Ones(1);
  for (Prep p : prep_) {
    ComplexVector q(2);
    switch (p) {
      case Prep::Zero: q << 1.0, 0.0; break;
      case Prep::One: q << 0.0, 1.0; break;
      case Prep::Plus: q << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0); break;
    }
    ComplexVector next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(2 * i, 2) = v(i) * q;
    v = std::move(next);
  }
  return PureState(v);
}

DensityMatrix Circuit::initial_state() const { return DensityMatrix::from_pure(initial_pure_state()); }

Circuit Circuit::shifted(int offset, int total_qubits) const {
  if (offset < 0 || offset + num_qubits_ > total_qubits) throw ArgumentError("shifted: register too small");
  Circuit out(total_qubits);
  for (const auto& g : gates_) {
    Gate moved = g;
    for (int& q : moved.qubits) q += offset;
    out.add(std::move(moved));
  }
  if (has_prep_)
    for (int q = 0; q < num_qubits_; ++q) out.set_prep(q + offset, prep_[static_cast<std::size_t>(q)]);
  return out;
}

std::size_t Circuit::two_qubit_gate_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return g.qubits.size() == 2; }));
}

// ---------------------------------------------------------------------------
// Noise

RealMatrix confusion_matrix(double p1_given_0, double p0_given_1) {
  RealMatrix a(2, 2);
  a << 1.0 - p1_given_0, p0_given_1, p1_given_0, 1.0 - p0_given_1;
  validate_confusion(a);
  return a;
}

void validate_confusion(const RealMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw ArgumentError("confusion matrix must be 2x2");
  for (Eigen::Index j = 0; j < 2; ++j) {
    if (!(a(0, j) >= 0.0) || !(a(1, j) >= 0.0)) throw ArgumentError("confusion matrix entries must be >= 0");
    if (std::abs(a.col(j).sum() - 1.0) > 1e-12) throw ArgumentError("confusion matrix columns must sum to 1");
  }
}

NoiseModel NoiseModel::default_model() {
  NoiseModel m;
  m.readout = {confusion_matrix(0.02, 0.05)};
  return m;
}

NoiseModel NoiseModel::none() {
  NoiseModel m;
  m.eps1 = 0.0;
  m.eps2 = 0.0;
  return m;
}

void NoiseModel::validate() const {
  if (!(eps1 >= 0.0 && eps1 <= 1.0)) throw ArgumentError("eps1 must lie in [0, 1]");
  if (!(eps2 >= 0.0 && eps2 <= 1.0)) throw ArgumentError("eps2 must lie in [0, 1]");
  for (const auto& a : readout) validate_confusion(a);
}

std::vector<RealMatrix> NoiseModel::readout_for(int num_qubits) const {
  if (readout.empty()) return {};
  if (readout.size() == 1) return std::vector<RealMatrix>(static_cast<std::size_t>(num_qubits), readout.front());
  if (static_cast<int>(readout.size()) < num_qubits)
    throw ArgumentError("noise model has " + std::to_string(readout.size()) + " readout matrices for " +
                        std::to_string(num_qubits) + " qubits");
  return {readout.begin(), readout.begin() + num_qubits};
}

// ---------------------------------------------------------------------------
// Counts

std::string bitstring(std::size_t index, int num_bits) {
  std::string s(static_cast<std::size_t>(num_bits), '0');
  for (int q = 0; q < num_bits; ++q)
    if (qubit_bit(index, q, num_bits)) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

RealVector Counts::probabilities() const {
  if (shots == 0) throw ArgumentError("counts with zero shots");
  RealVector p = RealVector::Zero(Eigen::Index{1} << num_bits);
  for (const auto& [bits, n] : table) {
    if (static_cast<int>(bits.size()) != num_bits) throw ArgumentError("bitstring length mismatch: " + bits);
    std::size_t index = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw ArgumentError("invalid bitstring: " + bits);
      index = (index << 1) | static_cast<std::size_t>(ch == '1');
    }
    p(static_cast<Eigen::Index>(index)) += static_cast<double>(n);
  }
  return p / static_cast<double>(shots);
}

std::uint64_t Counts::get(const std::string& bits) const {
  auto it = table.find(bits);
  return it == table.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// Execution

DensityMatrix run_exact(const Circuit& circuit, const DensityMatrix& initial) {
  check_dims(circuit, initial.dim());
  ComplexMatrix rho = initial.matrix();
  for (const auto& g : circuit.gates()) conjugate(rho, g.matrix(), g.qubits, circuit.num_qubits());
  return DensityMatrix::unchecked(std::move(rho));
}

DensityMatrix run_exact(const Circuit& circuit) { return run_exact(circuit, circuit.initial_state()); }

PureState run_statevector(const Circuit& circuit, const PureState& initial) {
  check_dims(circuit, initial.dim());
  ComplexMatrix psi = initial.amplitudes();
  for (const auto& g : circuit.gates()) apply_left(psi, g.matrix(), g.qubits, circuit.num_qubits());
  ComplexVector v = psi.col(0);
  return PureState(v / v.norm());
}

DensityMatrix run_noisy(const Circuit& circuit, const DensityMatrix& initial, const NoiseModel& noise) {
  noise.validate();
  check_dims(circuit, initial.dim());
  const int n = circuit.num_qubits();
  ComplexMatrix rho = initial.matrix();
  for (const auto& g : circuit.gates()) {
    conjugate(rho, g.matrix(), g.qubits, n);
    if (g.qubits.size() == 1)
      depolarize_one(rho, g.qubits[0], noise.eps1, n);
    else
      depolarize_two(rho, g.qubits[0], g.qubits[1], noise.eps2, n);
  }
  return DensityMatrix::unchecked(std::move(rho));
}

DensityMatrix run_noisy(const Circuit& circuit, const NoiseModel& noise) {
  return run_noisy(circuit, circuit.initial_state(), noise);
}

Counts sample_counts(const DensityMatrix& rho, std::uint64_t shots, std::span<const RealMatrix> readout,
                     std::uint64_t seed) {
  if (shots == 0) throw ArgumentError("shots must be positive");
  const int n = rho.num_qubits();
  if (!readout.empty() && readout.size() != 1 && static_cast<int>(readout.size()) != n)
    throw ArgumentError("readout list must be empty, a single matrix, or one per qubit");
  for (const auto& a : readout) validate_confusion(a);

  const auto dim = static_cast<Eigen::Index>(rho.dim());
  std::vector<double> cdf(static_cast<std::size_t>(dim));
  double total = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    total += std::max(0.0, rho.matrix()(i, i).real());
    cdf[static_cast<std::size_t>(i)] = total;
  }
  if (!(total > 0.0)) throw ArgumentError("state has no probability mass on the computational basis");

  std::mt19937_64 gen(seed);
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(dim), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = uniform01(gen) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t index = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), dim - 1));
    if (!readout.empty()) {
      std::size_t read = 0;
      for (int q = 0; q < n; ++q) {
        const RealMatrix& a = readout.size() == 1 ? readout[0] : readout[static_cast<std::size_t>(q)];
        const auto bit = static_cast<Eigen::Index>(qubit_bit(index, q, n));
        const bool one = uniform01(gen) < a(1, bit);
        read = (read << 1) | static_cast<std::size_t>(one);
      }
      index = read;
    }
    ++hist[index];
  }

  Counts counts;
  counts.num_bits = n;
  counts.shots = shots;
  for (std::size_t i = 0; i < hist.size(); ++i)
    if (hist[i] > 0) counts.table.emplace(bitstring(i, n), hist[i]);
  return counts;
}

// ---------------------------------------------------------------------------
// Channel extraction

ChoiMatrix circuit_to_channel(const Circuit& circuit, std::span<const int> system_qubits,
                              const PureState& ancilla_prep) {
  const int n = circuit.num_qubits();
  std::vector<int> system(system_qubits.begin(), system_qubits.end());
  std::sort(system.begin(), system.end());
  if (system.empty()) throw ArgumentError("circuit_to_channel: no system qubits");
  if (std::adjacent_find(system.begin(), system.end()) != system.end())
    throw ArgumentError("circuit_to_channel: repeated system qubit");
  for (int q : system)
    if (q < 0 || q >= n) throw ArgumentError("circuit_to_channel: system qubit out of range");
  std::vector<int> ancillae;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(system.begin(), system.end(), q)) ancillae.push_back(q);
  if (ancilla_prep.dim() != (std::size_t{1} << ancillae.size()))
    throw ArgumentError("circuit_to_channel: ancilla preparation has the wrong dimension");

  const int k = static_cast<int>(system.size());
  const int total = n + k;
  const std::size_t d = std::size_t{1} << k;
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));

  // Reference copies occupy qubits 0..k-1, the circuit qubits are shifted by k.
  ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << total);
  const auto num_anc = static_cast<int>(ancillae.size());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t a = 0; a < (std::size_t{1} << num_anc); ++a) {
      std::size_t index = i << n;
      for (int j = 0; j < k; ++j)
        if (qubit_bit(i, j, k)) index |= std::size_t{1} << (n - 1 - system[static_cast<std::size_t>(j)]);
      for (int j = 0; j < num_anc; ++j)
        if (qubit_bit(a, j, num_anc)) index |= std::size_t{1} << (n - 1 - ancillae[static_cast<std::size_t>(j)]);
      psi(static_cast<Eigen::Index>(index)) = norm * ancilla_prep.amplitudes()(static_cast<Eigen::Index>(a));
    }

  const PureState out = run_statevector(circuit.shifted(k, total), PureState(psi));
  std::vector<int> keep;
  for (int j = 0; j < k; ++j) keep.push_back(j);
  for (int q : system) keep.push_back(q + k);
  const DensityMatrix reduced = partial_trace(DensityMatrix::from_pure(out), keep);
  return ChoiMatrix(d, static_cast<double>(d) * reduced.matrix());
}

ChoiMatrix circuit_to_channel(const Circuit& circuit, std::span<const int> system_qubits) {
  const int anc = circuit.num_qubits() - static_cast<int>(system_qubits.size());
  if (anc < 0) throw ArgumentError("circuit_to_channel: too many system qubits");
  return circuit_to_channel(circuit, system_qubits, PureState::zeros(anc));
}

ChoiMatrix circuit_to_channel(const Circuit& circuit, std::initializer_list<int> system_qubits) {
  return circuit_to_channel(circuit, std::span<const int>(system_qubits.begin(), system_qubits.size()));
}

// ---------------------------------------------------------------------------
// JSON

std::string circuit_to_json(const Circuit& circuit, int indent) {
  nlohmann::json j;
  j["num_qubits"] = circuit.num_qubits();
  auto gates = nlohmann::json::array();
  for (const auto& g : circuit.gates()) {
    nlohmann::json jg;
    jg["kind"] = std::string(gate_name(g.kind));
    jg["qubits"] = g.qubits;
    if (gate_has_angle(g.kind)) jg["angle"] = g.angle;
    gates.push_back(std::move(jg));
  }
  j["gates"] = std::move(gates);
  auto prep = nlohmann::json::array();
  for (Prep p : circuit.prep()) prep.push_back(std::string(prep_label(p)));
  j["prep"] = std::move(prep);
  return j.dump(indent);
}

Circuit circuit_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    Circuit c(j.at("num_qubits").get<int>());
    for (const auto& jg : j.at("gates")) {
      const GateKind kind = gate_kind_from_name(jg.at("kind").get<std::string>());
      const double angle = jg.contains("angle") ? jg.at("angle").get<double>() : 0.0;
      if (gate_has_angle(kind) && !jg.contains("angle"))
        throw ArgumentError("gate " + std::string(gate_name(kind)) + " needs an angle");
      c.add(kind, jg.at("qubits").get<std::vector<int>>(), angle);
    }
    if (j.contains("prep")) {
      const auto labels = j.at("prep").get<std::vector<std::string>>();
      if (static_cast<int>(labels.size()) != c.num_qubits()) throw ArgumentError("prep list length mismatch");
      for (std::size_t q = 0; q < labels.size(); ++q) c.set_prep(static_cast<int>(q), prep_from_label(labels[q]));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("invalid circuit JSON: ") + e.what());
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace oqsim
