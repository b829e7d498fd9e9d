#pragma once

#include <array>

#include "oqsim/channels.hpp"
#include "oqsim/circuit.hpp"

namespace oqsim {

// Stabilizer pumping: qubits s1 = 0, s2 = 1 (system), a_zz = 2, a_xx = 3.
namespace pump_qubits {
inline constexpr int s1 = 0;
inline constexpr int s2 = 1;
inline constexpr int a_zz = 2;
inline constexpr int a_xx = 3;
}  // namespace pump_qubits

/// Controlled-rotation angle 2·arcsin√p used by both pumps.
double pump_angle(double p);

Circuit build_pump_zz_circuit(double p);
Circuit build_pump_xx_circuit(double p);
/// ZZ pump followed by XX pump, with the back-to-back CNOT(s1→s2) pair removed.
Circuit build_composed_pump_circuit(double p);

/// Rotates the Bell basis of (a, b) onto the computational basis:
/// 00 → φ+, 10 → φ−, 01 → ψ+, 11 → ψ− (bits listed a then b).
void append_bell_measurement(Circuit& circuit, int a, int b);

/// System qubit 0 starts in |+⟩. Correlated: three GHZ ancillae, the system
/// collides alternately with the first two. Separable: n ancillae in |+⟩.
/// With readout_rotation a final H on the system maps ⟨σx⟩ onto ⟨σz⟩.
Circuit build_collisional_circuit(int n, double g_tau, bool correlated, bool readout_rotation = true);

enum class WitnessBasis { XX, YY, ZZ };

/// Qubits: system 0, environment 1, witness 2 (only with_witness). Without the
/// witness the system starts in |1⟩; with it (witness, system) start in |φ+⟩
/// and the requested basis change is appended.
Circuit build_amplitude_damping_circuit(double t, const ADParams& params, bool with_witness = false,
                                        WitnessBasis basis = WitnessBasis::ZZ);
/// Same circuit for a given surviving amplitude c₁ ∈ [−1, 1].
Circuit build_amplitude_damping_circuit_from_amplitude(double amplitude, bool with_witness = false,
                                                       WitnessBasis basis = WitnessBasis::ZZ);

/// θ(p) = ½ arccos(1 − 2p): each ancilla fires with probability sin²(θ/2).
double depolarizing_angle(double p);
/// Total error probability 4q(1 − q) = sin²θ induced by ancilla angle θ.
double depolarizing_error_from_angle(double theta);
/// System 0, ancillae 1..3 controlling X, Y and Z on the system.
Circuit build_depolarizing_circuit(double p);

struct PauliAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  double norm() const;
};

/// Probabilities (I, X, Y, Z) produced by the ancilla state of the angles.
/// Ancilla outcome (a1 a2): 00 → I, 10 → X, 01 → Y, 11 → Z.
std::array<double, 4> pauli_angles_forward(const PauliAngles& angles);

/// Solves for angles reproducing p within 1e-9; throws SolverError otherwise.
PauliAngles solve_pauli_angles(const std::array<double, 4>& p);
PauliAngles solve_pauli_angles(double p0, double p1, double p2, double p3);

/// System 0, ancillae 1 and 2.
Circuit build_pauli_circuit(const PauliAngles& angles);

}  // namespace oqsim
