#include "sdrcpm/region_eval.hpp"

#include "sdrcpm/errors.hpp"
#include "sdrcpm/linear_feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace sdrcpm::region {

using gauss::VariableId;
using gauss::VarSet;

namespace {

constexpr double kNhatRelativeWidth = 1e-6;
constexpr double kNhatFloor = 1e-9;    // times the compressed-signal variance
constexpr double kNhatCeiling = 1e15;  // times the compressed-signal variance

const VarSet kK2Q2{VariableId::V, VariableId::X2};

double clamp_rate(double raw, bool& clamped) {
    if (raw < 0.0) {
        clamped = true;
        return 0.0;
    }
    return raw;
}

// I(Yhat2; Y2, T2 | V, X2, Y3) as a function of nhat. Yhat2 is W + Zhat with
// W = beta Y2 + f T2 and Zhat independent of everything else, so the Gaussian
// log-det ratio collapses to the two conditional variances of W below.
struct CompressionProfile {
    double residual_outer = 0.0;  // Var(W | V, X2, Y3)
    double residual_inner = 0.0;  // Var(W | Y2, T2, V, X2, Y3)

    [[nodiscard]] double lhs(double nhat) const {
        return std::max(0.0, 0.5 * std::log2((residual_outer + nhat) / (residual_inner + nhat)));
    }
};

CompressionProfile compression_profile(const gauss::GaussianJoint& joint, double probe_nhat) {
    const VarSet outer{VariableId::V, VariableId::X2, VariableId::Y3};
    const VarSet inner = outer | VarSet{VariableId::Y2, VariableId::T2};
    CompressionProfile p;
    p.residual_outer = std::max(0.0, gauss::conditional_variance(joint, VariableId::YHAT2, outer) - probe_nhat);
    p.residual_inner = std::max(0.0, gauss::conditional_variance(joint, VariableId::YHAT2, inner) - probe_nhat);
    return p;
}

}  // namespace

RateBounds bounds_from_mi(const MIValues& mi) {
    RateBounds b;
    b.r13_max = clamp_rate(mi.i_t1_out - mi.i_t1_s, b.clamped);
    b.r12_max = clamp_rate(mi.i_t2_relay - mi.i_t2_s, b.clamped);
    b.r13_plus_r12_max =
        clamp_rate(mi.i_t1_out + mi.i_t2_relay - mi.i_t1_s - mi.i_t2_s - mi.i_t1_t2_s, b.clamped);
    b.r23_max = clamp_rate(mi.i_k2_y3 - mi.i_k2_s2, b.clamped);
    b.feasible = mi.i_yhat_cond_y3 <= mi.i_q2_y3 - mi.i_q2_s2 + kRateTolerance;
    return b;
}

MIValues mi_values_gaussian(const gauss::PowerConfig& power, const gauss::SchemeParams& params) {
    const auto joint = gauss::assemble_covariance(power, params);
    gauss::MiEvaluator eval(joint);

    const VarSet s{VariableId::S};
    const VarSet t1{VariableId::T1};
    const VarSet t2{VariableId::T2};
    const VarSet y3{VariableId::Y3};
    const VarSet yhat{VariableId::YHAT2};

    // The relay has no state information, so S2 drops out of every term.
    MIValues mi;
    mi.i_t1_s = eval.mi(t1, s);
    mi.i_t2_s = eval.mi(t2, s);
    mi.i_t1_t2_s = eval.mi(t1, t2, s);
    mi.i_t1_out = eval.mi(t1, yhat | y3, kK2Q2);
    mi.i_t2_relay = eval.mi(t2, {VariableId::Y2}, kK2Q2);
    mi.i_k2_y3 = eval.mi({VariableId::V}, y3);
    mi.i_k2_s2 = 0.0;
    mi.i_q2_y3 = eval.mi({VariableId::X2}, y3, {VariableId::V});
    mi.i_q2_s2 = 0.0;
    mi.i_yhat_src = eval.mi(yhat, {VariableId::Y2, VariableId::T2}, kK2Q2);
    mi.i_yhat_y3 = eval.mi(yhat, y3, kK2Q2);
    mi.i_yhat_cond_y3 = eval.mi(yhat, {VariableId::Y2, VariableId::T2}, kK2Q2 | y3);

    if (mi.i_yhat_cond_y3 > mi.i_yhat_src + kRateTolerance) {
        throw NumericalConditioning("conditioning on Y3 increased the compression residual");
    }
    return mi;
}

RateBounds evaluate_gaussian_region(const gauss::PowerConfig& power, const gauss::SchemeParams& params) {
    return bounds_from_mi(mi_values_gaussian(power, params));
}

double solve_nhat(const gauss::PowerConfig& power, const gauss::SchemeParams& params) {
    gauss::SchemeParams probe = params;
    probe.nhat = 1.0;
    const auto joint = gauss::assemble_covariance(power, probe);

    const double signal = joint.variance(VariableId::YHAT2) - probe.nhat;
    if (signal <= 1e-12 * joint.trace()) {
        return 1.0;
    }

    const double rhs = gauss::conditional_mi(joint, {VariableId::X2}, {VariableId::Y3}, {VariableId::V});
    if (rhs <= kRateTolerance) {
        throw ConstraintInfeasible("relay has no compression-index capacity (I(Q2;Y3|K2) <= 0)");
    }

    const CompressionProfile profile = compression_profile(joint, probe.nhat);
    double lo = kNhatFloor * signal;
    if (profile.lhs(lo) <= rhs) {
        return lo;
    }
    double hi = signal;
    while (profile.lhs(hi) > rhs) {
        lo = hi;
        hi *= 16.0;
        if (hi > kNhatCeiling * signal) {
            throw ConstraintInfeasible("no compression noise level meets the constraint");
        }
    }
    while (hi > lo * (1.0 + kNhatRelativeWidth)) {
        const double mid = std::sqrt(lo * hi);
        if (profile.lhs(mid) <= rhs) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

bool aux_rate_feasible(const MIValues& mi, const RatePoint& point, double tol) {
    for (double r : {point.r12, point.r23, point.r13}) {
        if (!std::isfinite(r) || r < 0.0) {
            return false;
        }
    }

    // Unknowns: binning rates of T1, T2, K2, the bin index and in-bin index of
    // Q2, and the compression-index rate.
    enum : std::size_t { kR13b, kR12b, kR23b, kR2, kR2b, kRhat, kCount };
    InequalitySystem sys(kCount);
    auto row = [&](std::initializer_list<std::pair<std::size_t, double>> terms, double rhs) {
        std::vector<double> coeffs(kCount, 0.0);
        for (auto [var, c] : terms) {
            coeffs[var] = c;
        }
        sys.add(std::move(coeffs), rhs);
    };

    // Covering at the source (mutual covering) and at the relay.
    row({{kR13b, -1.0}}, -mi.i_t1_s);
    row({{kR12b, -1.0}}, -mi.i_t2_s);
    row({{kR13b, -1.0}, {kR12b, -1.0}}, -(mi.i_t1_s + mi.i_t2_s + mi.i_t1_t2_s));
    row({{kR23b, -1.0}}, -mi.i_k2_s2);
    row({{kR2b, -1.0}}, -mi.i_q2_s2);
    // Packing at the relay decoder.
    row({{kR12b, 1.0}}, mi.i_t2_relay - point.r12);
    // Wyner-Ziv covering of the compression codebook.
    row({{kRhat, -1.0}}, -mi.i_yhat_src);
    // Packing at the destination for K2, then Q2.
    row({{kR23b, 1.0}}, mi.i_k2_y3 - point.r23);
    row({{kR2, 1.0}, {kR2b, 1.0}}, mi.i_q2_y3);
    // List decoding of the compression index.
    row({{kRhat, 1.0}, {kR2, -1.0}}, mi.i_yhat_y3);
    // Final decoding of T1 with Y3 and Yhat2.
    row({{kR13b, 1.0}}, mi.i_t1_out - point.r13);
    for (std::size_t v = 0; v < kCount; ++v) {
        sys.add_nonnegative(v);
    }
    return sys.feasible(tol);
}

bool region_contains(const RateBounds& bounds, const RatePoint& point) {
    if (!bounds.feasible) {
        return false;
    }
    if (point.r12 < 0.0 || point.r13 < 0.0 || point.r23 < 0.0) {
        return false;
    }
    return point.r13 <= bounds.r13_max && point.r12 <= bounds.r12_max &&
           point.r13 + point.r12 <= bounds.r13_plus_r12_max && point.r23 <= bounds.r23_max;
}

}  // namespace sdrcpm::region
