#pragma once

#include "sdrcpm/gauss_core.hpp"

namespace sdrcpm::region {

/// Every information term the rate region is built from, in bits.
///
/// Names follow the role of each term. K2/Q2 are the relay's private-message
/// and compression-bin codewords; S1/S2 are the state side information at the
/// source and relay.
struct MIValues {
    double i_t1_out = 0.0;        // I(T1; Yhat2, Y3 | K2, Q2)
    double i_t1_s = 0.0;          // I(T1; S1)
    double i_t2_relay = 0.0;      // I(T2; Y2, S2 | K2, Q2)
    double i_t2_s = 0.0;          // I(T2; S1)
    double i_t1_t2_s = 0.0;       // I(T1; T2 | S1)
    double i_k2_y3 = 0.0;         // I(K2; Y3)
    double i_k2_s2 = 0.0;         // I(K2; S2)
    double i_q2_y3 = 0.0;         // I(Q2; Y3 | K2)
    double i_q2_s2 = 0.0;         // I(Q2; S2 | K2)
    double i_yhat_src = 0.0;      // I(Yhat2; Y2, S2, T2 | K2, Q2)
    double i_yhat_y3 = 0.0;       // I(Yhat2; Y3 | Q2, K2)
    double i_yhat_cond_y3 = 0.0;  // I(Yhat2; Y2, S2, T2 | K2, Q2, Y3)
};

struct RateBounds {
    double r13_max = 0.0;
    double r12_max = 0.0;
    double r13_plus_r12_max = 0.0;
    double r23_max = 0.0;
    bool feasible = false;  // compression constraint holds
    bool clamped = false;   // at least one right-hand side was negative and clamped to 0
};

struct RatePoint {
    double r12 = 0.0;
    double r23 = 0.0;
    double r13 = 0.0;
};

inline constexpr double kRateTolerance = 1e-9;

/// Rate bounds from information terms. Negative right-hand sides clamp to 0
/// and set `clamped`.
[[nodiscard]] RateBounds bounds_from_mi(const MIValues& mi);

/// Information terms for the Gaussian channel with the state known
/// non-causally at the source only (S1 = S, S2 empty, K2 = V, Q2 = X2).
[[nodiscard]] MIValues mi_values_gaussian(const gauss::PowerConfig& power, const gauss::SchemeParams& params);

[[nodiscard]] RateBounds evaluate_gaussian_region(const gauss::PowerConfig& power,
                                                  const gauss::SchemeParams& params);

/// Smallest compression-noise variance meeting the compression constraint,
/// by bisection over log(nhat) to 1e-6 relative width. The nhat field of
/// `params` is ignored. When nothing is compressed (beta * Y2 + f * T2 has zero
/// variance) every nhat works and 1.0 is returned. Throws ConstraintInfeasible
/// when the constraint right-hand side is not positive.
[[nodiscard]] double solve_nhat(const gauss::PowerConfig& power, const gauss::SchemeParams& params);

/// Whether auxiliary binning rates exist that satisfy the covering, packing
/// and Wyner-Ziv conditions of the coding scheme for `point`. The system is
/// projected onto the rates by Fourier-Motzkin elimination; `tol` is the
/// slack allowed on each projected inequality.
[[nodiscard]] bool aux_rate_feasible(const MIValues& mi, const RatePoint& point, double tol = kRateTolerance);

[[nodiscard]] bool region_contains(const RateBounds& bounds, const RatePoint& point);

}  // namespace sdrcpm::region
