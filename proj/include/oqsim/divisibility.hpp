#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "oqsim/channels.hpp"

namespace oqsim {

struct CpInterval {
  enum class Status { CP, NonCP, Indeterminate };
  double s = 0.0;
  double t = 0.0;
  /// Smallest eigenvalue of the intermediate Choi matrix (NaN when indeterminate).
  double min_eigenvalue = 0.0;
  /// 2-norm condition number of the superoperator of Φ_s.
  double condition_number = 1.0;
  Status status = Status::CP;
};

/// For consecutive grid points s < t, builds Φ_{t,s} = Φ_t ∘ Φ_s⁻¹ and checks
/// its Choi matrix for positivity. Intervals whose Φ_s has condition number
/// above max_condition are reported as indeterminate.
std::vector<CpInterval> cp_divisibility_scan(const std::function<ChoiMatrix(double)>& family,
                                             std::span<const double> t_grid, double tol = 1e-8,
                                             double max_condition = 1e8);

struct PInterval {
  std::size_t index = 0;  // interval [t_grid[index], t_grid[index + 1]]
  double s = 0.0;
  double t = 0.0;
};

/// Flags intervals where some |λ_j| grows by more than tol (Pauli-diagonal maps only).
std::vector<PInterval> p_divisibility_scan_pauli(
    const std::function<std::array<double, 3>(double)>& eigenvalues, std::span<const double> t_grid,
    double tol = 1e-10);

}  // namespace oqsim
