#include "sdrcpm/linear_feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdrcpm::region {

namespace {

constexpr double kZero = 1e-14;

bool same_row(const Inequality& a, const Inequality& b) {
    if (std::abs(a.rhs - b.rhs) > kZero * (1.0 + std::abs(a.rhs))) {
        return false;
    }
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (std::abs(a.coeffs[i] - b.coeffs[i]) > kZero) {
            return false;
        }
    }
    return true;
}

void push_unique(std::vector<Inequality>& rows, Inequality row) {
    for (auto& c : row.coeffs) {
        if (std::abs(c) <= kZero) {
            c = 0.0;
        }
    }
    for (const auto& existing : rows) {
        if (same_row(existing, row)) {
            return;
        }
    }
    rows.push_back(std::move(row));
}

}  // namespace

void InequalitySystem::add(std::vector<double> coeffs, double rhs) {
    if (coeffs.size() != unknowns_) {
        throw std::invalid_argument("inequality width does not match the number of unknowns");
    }
    rows_.push_back(Inequality{std::move(coeffs), rhs});
}

void InequalitySystem::add_nonnegative(std::size_t var) {
    std::vector<double> coeffs(unknowns_, 0.0);
    coeffs.at(var) = -1.0;
    add(std::move(coeffs), 0.0);
}

std::vector<Inequality> eliminate(const std::vector<Inequality>& rows, std::size_t var) {
    std::vector<Inequality> upper;  // coefficient > 0: bounds var from above
    std::vector<Inequality> lower;  // coefficient < 0: bounds var from below
    std::vector<Inequality> out;
    for (const auto& row : rows) {
        const double c = row.coeffs.at(var);
        if (c > kZero) {
            upper.push_back(row);
        } else if (c < -kZero) {
            lower.push_back(row);
        } else {
            push_unique(out, row);
        }
    }
    for (const auto& up : upper) {
        const double cu = up.coeffs[var];
        for (const auto& lo : lower) {
            const double cl = -lo.coeffs[var];
            Inequality combined;
            combined.coeffs.resize(up.coeffs.size());
            for (std::size_t i = 0; i < combined.coeffs.size(); ++i) {
                combined.coeffs[i] = up.coeffs[i] / cu + lo.coeffs[i] / cl;
            }
            combined.coeffs[var] = 0.0;
            combined.rhs = up.rhs / cu + lo.rhs / cl;
            push_unique(out, std::move(combined));
        }
    }
    return out;
}

std::vector<double> InequalitySystem::projected_residuals() const {
    std::vector<Inequality> rows = rows_;
    for (std::size_t var = 0; var < unknowns_; ++var) {
        rows = eliminate(rows, var);
    }
    std::vector<double> residuals;
    residuals.reserve(rows.size());
    for (const auto& row : rows) {
        residuals.push_back(row.rhs);
    }
    return residuals;
}

bool InequalitySystem::feasible(double tol) const {
    const auto residuals = projected_residuals();
    return std::all_of(residuals.begin(), residuals.end(), [tol](double r) { return r >= -tol; });
}

}  // namespace sdrcpm::region
