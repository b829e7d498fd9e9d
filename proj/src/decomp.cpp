#include "oqsim/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "oqsim/errors.hpp"

namespace oqsim {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ArgumentError(std::string(what) + ": p must lie in [0, 1], got " + std::to_string(p));
}

using namespace pump_qubits;

void zz_core(Circuit& c, double theta, bool uncompute_tail) {
  c.cnot(s1, s2);
  c.cnot(s2, a_zz);
  c.cry(a_zz, s2, theta);
  c.cnot(s2, a_zz);
  if (uncompute_tail) c.cnot(s1, s2);
}

// Maps the XX parity onto s1 with a Hadamard. The CZ pair turns the
// conditional flip of s1 into Z on s2 in the original frame.
void xx_core(Circuit& c, double theta, bool compute_head) {
  if (compute_head) c.cnot(s1, s2);
  c.h(s1);
  c.cnot(s1, a_xx);
  c.cz(s1, s2);
  c.cry(a_xx, s1, theta);
  c.cz(s1, s2);
  c.cnot(s1, a_xx);
  c.h(s1);
  c.cnot(s1, s2);
}

// Rotation sandwich for one collision between ancilla a and the system.
void collide(Circuit& c, int ancilla, double g_tau) {
  c.cnot(ancilla, 0);
  c.rz(0, 2.0 * g_tau);
  c.cnot(ancilla, 0);
}

void append_witness_basis(Circuit& c, WitnessBasis basis, int system, int witness) {
  switch (basis) {
    case WitnessBasis::XX:
      c.h(system).h(witness);
      break;
    case WitnessBasis::YY:
      c.sdg(system).h(system).sdg(witness).h(witness);
      break;
    case WitnessBasis::ZZ:
      break;
  }
}

// Real 2×2 M = R(φ) diag(σ1, σ2) R(ψ), σ1 ≥ |σ2|.
struct RotationSvd {
  double phi, sigma1, sigma2, psi;
};

RotationSvd rotation_svd(double a, double b, double c, double d) {
  const double e = 0.5 * (a + d);
  const double f = 0.5 * (a - d);
  const double g = 0.5 * (c + b);
  const double h = 0.5 * (c - b);
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  const double a1 = std::atan2(g, f);
  const double a2 = std::atan2(h, e);
  return {0.5 * (a2 + a1), q + r, q - r, 0.5 * (a2 - a1)};
}

double wrap(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  if (x <= -std::numbers::pi) x += 2.0 * std::numbers::pi;
  return x;
}

// Ancilla amplitudes M[a1][a2] = (R(θ2) diag(cos θ1, sin θ1) R(θ3)ᵀ)[a1][a2].
std::array<double, 4> amplitudes(const PauliAngles& t) {
  const double c1 = std::cos(t.theta1), s1 = std::sin(t.theta1);
  const double c2 = std::cos(t.theta2), s2 = std::sin(t.theta2);
  const double c3 = std::cos(t.theta3), s3 = std::sin(t.theta3);
  // R(θ2) D = [[c2 c1, −s2 s1], [s2 c1, c2 s1]], then times R(θ3)ᵀ = [[c3, s3], [−s3, c3]].
  const double m00 = c2 * c1 * c3 + s2 * s1 * s3;
  const double m01 = c2 * c1 * s3 - s2 * s1 * c3;
  const double m10 = s2 * c1 * c3 - c2 * s1 * s3;
  const double m11 = s2 * c1 * s3 + c2 * s1 * c3;
  // Outcome order (I, X, Y, Z) = (00, 10, 01, 11).
  return {m00, m10, m01, m11};
}

double residual(const PauliAngles& t, const std::array<double, 4>& p) {
  const auto a = amplitudes(t);
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] * a[i] - p[i]));
  return worst;
}

// Damped Gauss-Newton on r_i(θ) = amp_i(θ)² − p_i.
PauliAngles newton(PauliAngles t, const std::array<double, 4>& p, int iterations) {
  constexpr double h = 1e-7;
  for (int it = 0; it < iterations; ++it) {
    const auto a = amplitudes(t);
    Eigen::Vector4d r;
    for (int i = 0; i < 4; ++i) r(i) = a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i)];
    const double base = r.norm();
    if (base < 1e-15) break;
    Eigen::Matrix<double, 4, 3> jac;
    for (int k = 0; k < 3; ++k) {
      PauliAngles tp = t, tm = t;
      double* xp = k == 0 ? &tp.theta1 : k == 1 ? &tp.theta2 : &tp.theta3;
      double* xm = k == 0 ? &tm.theta1 : k == 1 ? &tm.theta2 : &tm.theta3;
      *xp += h;
      *xm -= h;
      const auto ap = amplitudes(tp);
      const auto am = amplitudes(tm);
      for (int i = 0; i < 4; ++i) {
        const auto u = static_cast<std::size_t>(i);
        jac(i, k) = (ap[u] * ap[u] - am[u] * am[u]) / (2.0 * h);
      }
    }
    const Eigen::Vector3d step = jac.completeOrthogonalDecomposition().solve(-r);
    double damping = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls) {
      PauliAngles trial{t.theta1 + damping * step(0), t.theta2 + damping * step(1), t.theta3 + damping * step(2)};
      const auto at = amplitudes(trial);
      Eigen::Vector4d rt;
      for (int i = 0; i < 4; ++i) rt(i) = at[static_cast<std::size_t>(i)] * at[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i)];
      if (rt.norm() < base) {
        t = trial;
        improved = true;
        break;
      }
      damping *= 0.5;
    }
    if (!improved) break;
  }
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pumps

double pump_angle(double p) {
  check_probability(p, "pump_angle");
  return 2.0 * std::asin(std::sqrt(p));
}

Circuit build_pump_zz_circuit(double p) {
  const double theta = pump_angle(p);
  Circuit c(4);
  c.x(a_zz);
  zz_core(c, theta, true);
  return c;
}

Circuit build_pump_xx_circuit(double p) {
  const double theta = pump_angle(p);
  Circuit c(4);
  c.x(a_xx);
  xx_core(c, theta, true);
  return c;
}

Circuit build_composed_pump_circuit(double p) {
  const double theta = pump_angle(p);
  Circuit c(4);
  c.x(a_zz).x(a_xx);
  zz_core(c, theta, false);
  xx_core(c, theta, false);
  return c;
}

void append_bell_measurement(Circuit& circuit, int a, int b) { circuit.cnot(a, b).h(a); }

// ---------------------------------------------------------------------------
// Collisional model

Circuit build_collisional_circuit(int n, double g_tau, bool correlated, bool readout_rotation) {
  if (n < 1) throw ArgumentError("collisional circuit needs at least one collision");
  if (!std::isfinite(g_tau)) throw ArgumentError("g_tau must be finite");
  Circuit c(correlated ? 4 : n + 1);
  c.set_prep(0, Prep::Plus);
  if (correlated) {
    c.h(1).cnot(1, 2).cnot(2, 3);
    for (int k = 0; k < n; ++k) collide(c, k % 2 == 0 ? 1 : 2, g_tau);
  } else {
    for (int k = 1; k <= n; ++k) c.h(k);
    for (int k = 1; k <= n; ++k) collide(c, k, g_tau);
  }
  if (readout_rotation) c.h(0);
  return c;
}

// ---------------------------------------------------------------------------
// Amplitude damping

Circuit build_amplitude_damping_circuit_from_amplitude(double amplitude, bool with_witness, WitnessBasis basis) {
  if (!(amplitude >= -1.0 - 1e-12 && amplitude <= 1.0 + 1e-12))
    throw ArgumentError("amplitude must lie in [-1, 1]");
  const double theta = std::acos(std::clamp(amplitude, -1.0, 1.0));
  constexpr int system = 0, env = 1, witness = 2;
  Circuit c(with_witness ? 3 : 2);
  if (with_witness)
    c.h(witness).cnot(witness, system);
  else
    c.set_prep(system, Prep::One);
  c.cry(system, env, 2.0 * theta);
  c.cnot(env, system);
  if (with_witness) append_witness_basis(c, basis, system, witness);
  return c;
}

Circuit build_amplitude_damping_circuit(double t, const ADParams& params, bool with_witness, WitnessBasis basis) {
  return build_amplitude_damping_circuit_from_amplitude(c1(t, params), with_witness, basis);
}

// ---------------------------------------------------------------------------
// Depolarizing

double depolarizing_angle(double p) {
  check_probability(p, "depolarizing_angle");
  return 0.5 * std::acos(1.0 - 2.0 * p);
}

double depolarizing_error_from_angle(double theta) {
  const double q = std::pow(std::sin(theta / 2.0), 2);
  return 4.0 * q * (1.0 - q);
}

Circuit build_depolarizing_circuit(double p) {
  const double theta = depolarizing_angle(p);
  Circuit c(4);
  c.ry(1, theta).ry(2, theta).ry(3, theta);
  c.cnot(1, 0).cy(2, 0).cz(3, 0);
  return c;
}

// ---------------------------------------------------------------------------
// General Pauli channel

double PauliAngles::norm() const { return std::sqrt(theta1 * theta1 + theta2 * theta2 + theta3 * theta3); }

std::array<double, 4> pauli_angles_forward(const PauliAngles& angles) {
  auto a = amplitudes(angles);
  for (double& v : a) v *= v;
  return a;
}

PauliAngles solve_pauli_angles(const std::array<double, 4>& p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw ArgumentError("Pauli probabilities must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw ArgumentError("Pauli probabilities must sum to 1");

  constexpr double kTol = 1e-9;
  const double r00 = std::sqrt(p[0]), r10 = std::sqrt(p[1]), r01 = std::sqrt(p[2]), r11 = std::sqrt(p[3]);

  // Every sign pattern of the amplitude matrix (up to a global sign) has a
  // rotation-SVD giving the angles in closed form; Newton only polishes.
  std::optional<PauliAngles> best;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int pattern = 0; pattern < 8; ++pattern) {
    const double sb = (pattern & 1) ? -1.0 : 1.0;
    const double sc = (pattern & 2) ? -1.0 : 1.0;
    const double sd = (pattern & 4) ? -1.0 : 1.0;
    const RotationSvd svd = rotation_svd(r00, sb * r01, sc * r10, sd * r11);
    PauliAngles t{wrap(std::atan2(svd.sigma2, svd.sigma1)), wrap(svd.phi), wrap(-svd.psi)};
    t = newton(t, p, 5);
    const double res = residual(t, p);
    best_residual = std::min(best_residual, res);
    if (res <= kTol && (!best || t.norm() < best->norm() - 1e-12)) best = t;
  }
  if (best) return *best;

  // Fallback: multi-start damped Newton over [0, π/2]³.
  const double grid[3] = {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0};
  int starts = 0;
  for (int i = 0; i < 3 && starts < 25; ++i)
    for (int j = 0; j < 3 && starts < 25; ++j)
      for (int k = 0; k < 3 && starts < 25; ++k, ++starts) {
        const PauliAngles t = newton({grid[i], grid[j], grid[k]}, p, 200);
        const double res = residual(t, p);
        best_residual = std::min(best_residual, res);
        if (res <= kTol && (!best || t.norm() < best->norm() - 1e-12)) best = t;
      }
  if (best) return *best;
  throw SolverError("no Pauli angles reproduce the probabilities", best_residual);
}

PauliAngles solve_pauli_angles(double p0, double p1, double p2, double p3) {
  return solve_pauli_angles(std::array<double, 4>{p0, p1, p2, p3});
}

Circuit build_pauli_circuit(const PauliAngles& angles) {
  for (double v : {angles.theta1, angles.theta2, angles.theta3})
    if (!std::isfinite(v)) throw ArgumentError("Pauli angles must be finite");
  Circuit c(3);
  c.ry(1, 2.0 * angles.theta1);
  c.cnot(1, 2);
  c.ry(1, 2.0 * angles.theta2);
  c.ry(2, 2.0 * angles.theta3);
  c.cnot(1, 0);
  c.cy(2, 0);
  return c;
}

}  // namespace oqsim
