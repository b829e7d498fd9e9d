#include "oqsim/divisibility.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "oqsim/errors.hpp"

namespace oqsim {

namespace {

void check_grid(std::span<const double> t_grid) {
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw ArgumentError("divisibility scan: time grid must increase");
}

}  // namespace

std::vector<CpInterval> cp_divisibility_scan(const std::function<ChoiMatrix(double)>& family,
                                             std::span<const double> t_grid, double tol,
                                             double max_condition) {
  check_grid(t_grid);
  std::vector<CpInterval> out;
  if (t_grid.size() < 2) return out;

  ComplexMatrix s_prev = superoperator(family(t_grid[0]));
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const ComplexMatrix s_next = superoperator(family(t_grid[i]));
    CpInterval interval;
    interval.s = t_grid[i - 1];
    interval.t = t_grid[i];

    Eigen::JacobiSVD<ComplexMatrix> svd(s_prev, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    interval.condition_number =
        smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();

    if (!(interval.condition_number <= max_condition)) {
      interval.status = CpInterval::Status::Indeterminate;
      interval.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    } else {
      const ComplexMatrix inverse =
          svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
      const ChoiMatrix intermediate = choi_from_superoperator(s_next * inverse);
      const ComplexMatrix& c = intermediate.matrix();
      interval.min_eigenvalue = hermitian_eigenvalues(0.5 * (c + c.adjoint())).minCoeff();
      interval.status =
          interval.min_eigenvalue < -tol ? CpInterval::Status::NonCP : CpInterval::Status::CP;
    }
    out.push_back(interval);
    s_prev = s_next;
  }
  return out;
}

std::vector<PInterval> p_divisibility_scan_pauli(
    const std::function<std::array<double, 3>(double)>& eigenvalues, std::span<const double> t_grid,
    double tol) {
  check_grid(t_grid);
  std::vector<PInterval> out;
  if (t_grid.empty()) return out;
  auto prev = eigenvalues(t_grid[0]);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const auto next = eigenvalues(t_grid[i]);
    for (int j = 0; j < 3; ++j) {
      if (std::abs(next[j]) > std::abs(prev[j]) + tol) {
        out.push_back({i - 1, t_grid[i - 1], t_grid[i]});
        break;
      }
    }
    prev = next;
  }
  return out;
}

}  // namespace oqsim
