#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace onebit::detail {

struct LpSolution {
  double value = 0.0;
  std::vector<double> x;
};

/// Dense tableau simplex for
///
///   maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0,
///
/// so the all-slack basis is feasible from the start. A is row-major with
/// rows = b.size() and cols = c.size(). Bland's rule rules out cycling.
/// Returns nullopt if the objective is unbounded.
class DenseSimplex {
public:
  static constexpr double kPivotTol = 1e-12;

  static std::optional<LpSolution> maximize(std::span<const double> c, std::span<const double> A,
                                            std::span<const double> b) {
    const std::size_t rows = b.size();
    const std::size_t vars = c.size();
    if (A.size() != rows * vars) throw std::invalid_argument("DenseSimplex: A has the wrong shape");
    for (double v : b)
      if (v < 0.0) throw std::invalid_argument("DenseSimplex: b must be nonnegative");

    // Columns: decision vars, slacks, rhs. Last row holds -c (reduced costs).
    const std::size_t width = vars + rows + 1;
    std::vector<double> t((rows + 1) * width, 0.0);
    auto at = [&](std::size_t r, std::size_t col) -> double& { return t[r * width + col]; };
    std::vector<std::size_t> basis(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < vars; ++j) at(r, j) = A[r * vars + j];
      at(r, vars + r) = 1.0;
      at(r, width - 1) = b[r];
      basis[r] = vars + r;
    }
    for (std::size_t j = 0; j < vars; ++j) at(rows, j) = -c[j];

    const std::size_t max_iter = 50 * (rows + vars + 1);
    for (std::size_t iter = 0;; ++iter) {
      if (iter > max_iter) throw std::runtime_error("DenseSimplex: iteration limit exceeded");
      std::size_t enter = width;
      for (std::size_t j = 0; j + 1 < width; ++j) {
        if (at(rows, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter == width) break;

      std::size_t leave = rows;
      double best = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = at(r, width - 1) / a;
        if (leave == rows || ratio < best - kPivotTol ||
            (std::abs(ratio - best) <= kPivotTol && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows) return std::nullopt;

      const double piv = at(leave, enter);
      for (std::size_t col = 0; col < width; ++col) at(leave, col) /= piv;
      for (std::size_t r = 0; r <= rows; ++r) {
        if (r == leave) continue;
        const double f = at(r, enter);
        if (f == 0.0) continue;
        for (std::size_t col = 0; col < width; ++col) at(r, col) -= f * at(leave, col);
      }
      basis[leave] = enter;
    }

    LpSolution sol;
    sol.x.assign(vars, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
      if (basis[r] < vars) sol.x[basis[r]] = at(r, width - 1);
    sol.value = at(rows, width - 1);
    return sol;
  }
};

} // namespace onebit::detail
