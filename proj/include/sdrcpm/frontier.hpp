#pragma once

#include "sdrcpm/gauss_core.hpp"
#include "sdrcpm/region_eval.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace sdrcpm::frontier {

/// Evenly spaced values from min to max inclusive. One step means {min}.
struct Axis {
    double min = 0.0;
    double max = 0.0;
    int steps = 1;

    void validate(const std::string& name) const;
    [[nodiscard]] std::vector<double> values() const;
};

/// Parameter grid. Cells are enumerated with f varying fastest and rho
/// slowest, in the order of the fields below, so a smaller cell index is a
/// lexicographically smaller parameter vector.
struct GridSpec {
    Axis rho{-1.0, 1.0, 9};
    Axis gamma{0.0, 1.0, 11};
    Axis alpha1{0.0, 1.2, 13};
    Axis alpha2{0.0, 1.2, 13};
    Axis rho_u1s{-1.0, 1.0, 9};
    Axis theta{0.0, 1.0, 11};
    Axis beta{0.0, 1.0, 11};
    Axis f{-1.0, 1.0, 3};
    double rho_u2s = 0.0;

    void validate() const;
    [[nodiscard]] std::size_t cells() const;
    [[nodiscard]] GridSpec with_theta(double theta) const;
};

/// One grid point with nhat set by solve_nhat, or the reason it was skipped.
struct CellResult {
    std::size_t index = 0;
    gauss::SchemeParams params;
    region::RateBounds bounds;
    bool valid = false;
    std::string error;
};

/// Solves nhat for `params` and evaluates the region. Parameter, conditioning
/// and constraint errors come back as an invalid cell rather than a throw.
[[nodiscard]] CellResult evaluate_cell(const gauss::PowerConfig& power, const gauss::SchemeParams& params);

/// Every cell of the grid, in index order. Results do not depend on `workers`.
[[nodiscard]] std::vector<CellResult> sweep(const gauss::PowerConfig& power, const GridSpec& grid,
                                            unsigned workers = 1);
/// Same grid with theta pinned.
[[nodiscard]] std::vector<CellResult> sweep(const gauss::PowerConfig& power, const GridSpec& grid,
                                            double theta, unsigned workers = 1);

struct FrontierPoint {
    double r12 = 0.0;
    double r13 = 0.0;
    gauss::SchemeParams params;
    region::RateBounds bounds;  // bounds.r23_max is the common-message rate of this point
};

struct FrontierCurve {
    double theta = 0.0;
    std::vector<FrontierPoint> points;  // r12 strictly increasing, r13 non-increasing
    std::vector<double> omitted_targets;  // targets no feasible cell reaches
    std::size_t cells = 0;
    std::size_t feasible_cells = 0;
    std::size_t invalid_cells = 0;
};

struct TradeoffOptions {
    std::vector<double> targets;  // empty: 40 points up to the relay's point-to-point capacity
    unsigned workers = 1;
    bool refine = false;
};

/// Upper envelope of (R12, R13) over the grid at fixed theta. Each target t
/// gets the largest min(r13_max, sum_max - t) among feasible cells with
/// r12_max >= t. A final point at the largest r12_max closes the curve.
/// Ties go to the smallest cell index.
[[nodiscard]] FrontierCurve tradeoff_curve(const gauss::PowerConfig& power, double theta, const GridSpec& grid,
                                           const TradeoffOptions& options = {});

[[nodiscard]] std::vector<double> default_targets(const gauss::PowerConfig& power, int count = 40);

/// Score of a cell; return -infinity to reject it.
using Objective = std::function<double(const region::RateBounds&)>;

[[nodiscard]] Objective r13_at_target(double r12_target);

struct RefineOptions {
    double initial_step = 0.05;  // fraction of each coordinate's range
    double min_step = 1e-6;
    std::size_t max_evaluations = 20000;
    bool free_gamma = true;
    bool free_rho = true;
};

struct RefineResult {
    gauss::SchemeParams params;
    region::RateBounds bounds;
    double score = 0.0;
    std::size_t evaluations = 0;
};

/// Deterministic coordinate search from `start` over rho, gamma, alpha1,
/// alpha2, rho_u1s, beta and f, with theta and rho_u2s held fixed. Each probe
/// re-solves nhat. Infeasible or invalid probes score -infinity.
[[nodiscard]] RefineResult refine(const gauss::PowerConfig& power, const gauss::SchemeParams& start,
                                  const Objective& objective, const RefineOptions& options = {});

struct SdrcResult {
    double rate = 0.0;
    gauss::SchemeParams params;
    std::size_t cells = 0;
};

/// Best R13 with no private message to the relay and no common message from
/// it: gamma and theta pinned to zero, grid search then refinement.
[[nodiscard]] SdrcResult sdrc_scalar(const gauss::PowerConfig& power, const GridSpec& grid, unsigned workers = 1);

}  // namespace sdrcpm::frontier
