#pragma once

#include <cstddef>
#include <vector>

namespace sdrcpm::region {

/// One inequality  sum_i coeffs[i] * x[i] <= rhs.
struct Inequality {
    std::vector<double> coeffs;
    double rhs = 0.0;
};

/// Small dense system of linear inequalities over real unknowns, decided by
/// Fourier-Motzkin elimination. Sized for a handful of unknowns; the number of
/// derived rows grows quadratically per eliminated variable.
class InequalitySystem {
public:
    explicit InequalitySystem(std::size_t unknowns) : unknowns_(unknowns) {}

    void add(std::vector<double> coeffs, double rhs);
    void add_nonnegative(std::size_t var);

    [[nodiscard]] std::size_t unknowns() const { return unknowns_; }
    [[nodiscard]] const std::vector<Inequality>& rows() const { return rows_; }

    /// Eliminates every unknown and returns the constant residuals rhs that the
    /// projected system requires to be >= 0.
    [[nodiscard]] std::vector<double> projected_residuals() const;

    /// True iff every projected residual is >= -tol.
    [[nodiscard]] bool feasible(double tol) const;

private:
    std::size_t unknowns_;
    std::vector<Inequality> rows_;
};

/// Eliminates unknown `var` from `rows` (all rows must have the same width).
[[nodiscard]] std::vector<Inequality> eliminate(const std::vector<Inequality>& rows, std::size_t var);

}  // namespace sdrcpm::region
