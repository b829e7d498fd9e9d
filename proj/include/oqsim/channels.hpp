#pragma once

#include <array>
#include <functional>
#include <vector>

#include "oqsim/qstate.hpp"

namespace oqsim {

/// Operator-sum representation ρ → Σ K ρ K†.
class KrausChannel {
 public:
  /// Checks shapes and completeness Σ K†K = I within 1e-10.
  explicit KrausChannel(std::vector<ComplexMatrix> operators);

  std::size_t dim() const { return dim_; }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  ComplexMatrix apply(const ComplexMatrix& m) const;

  /// Largest entry of |Σ K†K − I|.
  double completeness_error() const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> operators_;
};

/// Choi matrix C = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|), input factor first, tr C = dim.
///
/// Any Hermiticity-preserving map can be stored, including the non-CP
/// intermediate maps met in divisibility scans; use is_cptp to test validity.
class ChoiMatrix {
 public:
  ChoiMatrix(std::size_t system_dim, ComplexMatrix matrix);

  std::size_t system_dim() const { return system_dim_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  ComplexMatrix apply(const ComplexMatrix& m) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  std::size_t system_dim_;
  ComplexMatrix matrix_;
};

KrausChannel identity_channel(std::size_t dim);
KrausChannel unitary_channel(const ComplexMatrix& u);

/// a ∘ b: apply b first.
KrausChannel compose(const KrausChannel& a, const KrausChannel& b);

ChoiMatrix choi(const KrausChannel& channel);
bool is_cptp(const ChoiMatrix& c, double tol = 1e-10);
/// Trace distance between the unit-trace normalized Choi matrices.
double choi_distance(const ChoiMatrix& a, const ChoiMatrix& b);
double choi_distance(const KrausChannel& a, const KrausChannel& b);

/// Column-stacking superoperator: vec(Φ(ρ)) = S vec(ρ), vec index = row + d·col.
ComplexMatrix superoperator(const ChoiMatrix& c);
ChoiMatrix choi_from_superoperator(const ComplexMatrix& s);

// ---------------------------------------------------------------------------
// Stabilizer pumping on two qubits

/// Pumps the +1 eigenspace of Z⊗Z into the −1 eigenspace with efficiency p.
KrausChannel pump_zz(double p);
/// Same for X⊗X, with the corrective flip Z on the second qubit.
KrausChannel pump_xx(double p);

// ---------------------------------------------------------------------------
// Collisional dephasing

/// Weight w of the identity branch; the channel is w ρ + (1 − w) ZρZ.
double collisional_correlated_weight(double n, double g_tau);
double collisional_separable_weight(double n, double g_tau);
/// Dephasing after n collisions with classically correlated ancillae.
KrausChannel collisional_correlated(int n, double g_tau);
/// Dephasing after n collisions with fresh |+⟩ ancillae.
KrausChannel collisional_separable(int n, double g_tau);
/// Dephasing channel {√w I, √(1−w) Z}.
KrausChannel dephasing(double identity_weight);

// ---------------------------------------------------------------------------
// Amplitude damping with a Lorentzian reservoir

struct ADParams {
  double gamma0 = 1.0;
  double lambda = 1.0;
  /// Qubit frequency. Only a rotating-frame phase; no output depends on it.
  double omega0 = 0.0;

  ADParams() = default;
  ADParams(double gamma0_, double lambda_, double omega0_ = 0.0);
  static ADParams from_ratio(double ratio, double lambda_ = 1.0);
  double ratio() const { return gamma0 / lambda; }
};

/// Excited-state amplitude c₁ at complex time (c₁(0) = 1).
cplx c1_complex(cplx t, const ADParams& params);
/// dc₁/dt at complex time.
cplx c1_derivative_complex(cplx t, const ADParams& params);

/// c₁(t) on the real axis, clamped to [−1, 1].
double c1(double t, const ADParams& params);
/// Decay rate −2 Re(ċ₁/c₁). Throws SingularityError where |c₁| < 1e-12.
double gamma_ad(double t, const ADParams& params);
/// Analytic continuation −2 ċ₁/c₁ of the rate to complex time.
cplx gamma_ad_complex(cplx t, const ADParams& params);

/// Kraus pair {diag(1, c₁), √(1−c₁²)|0⟩⟨1|}; |1⟩ is the excited state.
KrausChannel amplitude_damping_channel(double t, const ADParams& params);
/// Same map parametrized directly by the surviving amplitude.
KrausChannel amplitude_damping_from_amplitude(double amplitude);

// ---------------------------------------------------------------------------
// Pauli channels

KrausChannel depolarizing(double p);
KrausChannel pauli_channel(double p0, double p1, double p2, double p3);
KrausChannel pauli_channel(const std::array<double, 4>& p);

/// Pauli-map eigenvalues (λx, λy, λz) from probabilities and back.
std::array<double, 3> pauli_eigenvalues(const std::array<double, 4>& p);
std::array<double, 4> pauli_probabilities(const std::array<double, 3>& lambda);

/// One rate γ(t). The closed-form families integrate exactly; Custom uses
/// adaptive Simpson quadrature.
struct RateFunction {
  enum class Kind { Constant, Tanh, Tan, Custom };
  Kind kind = Kind::Constant;
  double amplitude = 0.0;  // γ = a, a·tanh(ωt) or a·tan(ωt)
  double omega = 0.0;
  std::function<double(double)> custom;

  static RateFunction constant(double a);
  static RateFunction tanh(double a, double omega);
  static RateFunction tan(double a, double omega);
  static RateFunction from_function(std::function<double(double)> f);

  double operator()(double t) const;
  /// ∫₀ᵗ γ(τ) dτ.
  double integral(double t) const;
};

struct PauliRates {
  RateFunction gamma_x;
  RateFunction gamma_y;
  RateFunction gamma_z;

  /// γx = γy = λ/2, γz = −ω tanh(ωt)/2: non-CP-divisible at every t > 0.
  static PauliRates eternal(double lambda, double omega);
  /// γx = γy = λ/2, γz = ω tan(ωt)/2.
  static PauliRates tan_model(double lambda, double omega);
};

/// Γ_x, Γ_y, Γ_z at time t.
std::array<double, 3> integrated_rates(const PauliRates& rates, double t);

/// Map eigenvalues λ_j(t) = exp(−Γ_k − Γ_l).
std::array<double, 3> pauli_map_eigenvalues(const PauliRates& rates, double t);

/// Probabilities (p0, p1, p2, p3) of I, X, Y, Z at time t. Throws ModelError
/// when a probability falls below −1e-6; smaller negatives are clamped.
std::array<double, 4> pauli_rates_to_probabilities(const PauliRates& rates, double t);

}  // namespace oqsim
