#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oqsim/channels.hpp"
#include "oqsim/qstate.hpp"

namespace oqsim {

enum class GateKind { H, X, Y, Z, S, Sdg, RX, RY, RZ, CNOT, CY, CZ, CRY };

std::string_view gate_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);
int gate_arity(GateKind kind);
bool gate_has_angle(GateKind kind);

/// RZ(θ) = diag(e^{−iθ/2}, e^{iθ/2}); RY(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩.
/// Controlled gates list the control first.
struct Gate {
  GateKind kind = GateKind::H;
  std::vector<int> qubits;
  double angle = 0.0;

  /// Local unitary; for two-qubit gates the first listed qubit is the high bit.
  ComplexMatrix matrix() const;
};

enum class Prep { Zero, One, Plus };

std::string_view prep_label(Prep p);
Prep prep_from_label(std::string_view label);

class Circuit {
 public:
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  /// Appends after checking arity, indices and the angle.
  Circuit& add(Gate gate);
  Circuit& add(GateKind kind, std::vector<int> qubits, double angle = 0.0);
  Circuit& append(const Circuit& other);

  Circuit& h(int q) { return add(GateKind::H, {q}); }
  Circuit& x(int q) { return add(GateKind::X, {q}); }
  Circuit& y(int q) { return add(GateKind::Y, {q}); }
  Circuit& z(int q) { return add(GateKind::Z, {q}); }
  Circuit& s(int q) { return add(GateKind::S, {q}); }
  Circuit& sdg(int q) { return add(GateKind::Sdg, {q}); }
  Circuit& rx(int q, double angle) { return add(GateKind::RX, {q}, angle); }
  Circuit& ry(int q, double angle) { return add(GateKind::RY, {q}, angle); }
  Circuit& rz(int q, double angle) { return add(GateKind::RZ, {q}, angle); }
  Circuit& cnot(int c, int t) { return add(GateKind::CNOT, {c, t}); }
  Circuit& cy(int c, int t) { return add(GateKind::CY, {c, t}); }
  Circuit& cz(int c, int t) { return add(GateKind::CZ, {c, t}); }
  Circuit& cry(int c, int t, double angle) { return add(GateKind::CRY, {c, t}, angle); }

  /// Optional input labels; unlabeled qubits start in |0⟩.
  Circuit& set_prep(int q, Prep p);
  const std::vector<Prep>& prep() const { return prep_; }
  bool has_prep() const { return has_prep_; }
  DensityMatrix initial_state() const;
  PureState initial_pure_state() const;

  /// Same gates acting on qubit q + offset of a register of total_qubits.
  Circuit shifted(int offset, int total_qubits) const;

  std::size_t two_qubit_gate_count() const;

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
  std::vector<Prep> prep_;
  bool has_prep_ = false;
};

/// 2×2 column-stochastic confusion matrix A[i][j] = P(read i | true j).
RealMatrix confusion_matrix(double p1_given_0, double p0_given_1);
void validate_confusion(const RealMatrix& a);

struct NoiseModel {
  double eps1 = 0.001;
  double eps2 = 0.01;
  /// Empty: ideal readout. One entry: used for every qubit. Otherwise per qubit.
  std::vector<RealMatrix> readout;

  /// eps1 = 0.001, eps2 = 0.01, readout P(1|0) = 0.02, P(0|1) = 0.05.
  static NoiseModel default_model();
  static NoiseModel none();

  void validate() const;
  bool noiseless_gates() const { return eps1 == 0.0 && eps2 == 0.0; }
  /// Per-qubit confusion list expanded to num_qubits entries (empty if ideal).
  std::vector<RealMatrix> readout_for(int num_qubits) const;
};

struct Counts {
  int num_bits = 0;
  std::uint64_t shots = 0;
  /// Bitstring with qubit 0 leftmost → occurrences.
  std::map<std::string, std::uint64_t> table;

  /// Relative frequencies indexed by basis state.
  RealVector probabilities() const;
  std::uint64_t get(const std::string& bits) const;
};

std::string bitstring(std::size_t index, int num_bits);

/// Noiseless evolution ρ → UρU† gate by gate.
DensityMatrix run_exact(const Circuit& circuit, const DensityMatrix& initial);
DensityMatrix run_exact(const Circuit& circuit);
PureState run_statevector(const Circuit& circuit, const PureState& initial);

/// Evolution with depolarizing noise after every gate.
DensityMatrix run_noisy(const Circuit& circuit, const DensityMatrix& initial, const NoiseModel& noise);
DensityMatrix run_noisy(const Circuit& circuit, const NoiseModel& noise);

/// Draws `shots` computational-basis outcomes from diag(ρ), then flips each bit
/// through its confusion matrix. `readout` may be empty, hold one matrix for
/// all qubits, or one per qubit.
Counts sample_counts(const DensityMatrix& rho, std::uint64_t shots, std::span<const RealMatrix> readout,
                     std::uint64_t seed);

/// Choi matrix of the map the circuit induces on `system_qubits` (ascending
/// order), ancillae starting in `ancilla_prep` (ascending ancilla order).
ChoiMatrix circuit_to_channel(const Circuit& circuit, std::span<const int> system_qubits,
                              const PureState& ancilla_prep);
/// Ancillae start in |0…0⟩.
ChoiMatrix circuit_to_channel(const Circuit& circuit, std::span<const int> system_qubits);
ChoiMatrix circuit_to_channel(const Circuit& circuit, std::initializer_list<int> system_qubits);

/// JSON {num_qubits, gates:[{kind, qubits, angle?}], prep:[labels]}.
std::string circuit_to_json(const Circuit& circuit, int indent = 2);
Circuit circuit_from_json(const std::string& text);

/// splitmix64 step; used to derive independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace oqsim
