#include "sdrcpm/gauss_core.hpp"

#include "sdrcpm/errors.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <string>

namespace sdrcpm::gauss {

namespace {

constexpr double kPsdTolerance = 1e-9;
constexpr double kRankTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-12;

using BlockMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kVariableCount, kVariableCount>;
using BlockVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kVariableCount, 1>;

constexpr int idx(VariableId id) { return static_cast<int>(id); }

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ParameterInfeasible(message);
    }
}

bool in_range(double x, double lo, double hi) { return std::isfinite(x) && x >= lo && x <= hi; }

double min_eigenvalue_3x3(const Eigen::Matrix3d& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

}  // namespace

std::string_view to_string(VariableId id) {
    switch (id) {
        case VariableId::S: return "S";
        case VariableId::U1: return "U1";
        case VariableId::U2: return "U2";
        case VariableId::V: return "V";
        case VariableId::X2P: return "X2P";
        case VariableId::Z2: return "Z2";
        case VariableId::Z3: return "Z3";
        case VariableId::ZHAT: return "ZHAT";
        case VariableId::X1: return "X1";
        case VariableId::X2: return "X2";
        case VariableId::Y2: return "Y2";
        case VariableId::Y3: return "Y3";
        case VariableId::T1: return "T1";
        case VariableId::T2: return "T2";
        case VariableId::YHAT2: return "YHAT2";
    }
    return "?";
}

int VarSet::size() const { return std::popcount(bits_); }

void PowerConfig::validate() const {
    require(std::isfinite(p1) && p1 > 0.0, "p1 must be finite and positive");
    require(std::isfinite(p2) && p2 > 0.0, "p2 must be finite and positive");
    require(std::isfinite(n2) && n2 > 0.0, "n2 must be finite and positive");
    require(std::isfinite(n3) && n3 > 0.0, "n3 must be finite and positive");
    require(std::isfinite(q) && q > 0.0, "q must be finite and positive");
}

PowerConfig PowerConfig::scaled(double lambda) const {
    return PowerConfig{p1 * lambda, p2 * lambda, n2 * lambda, n3 * lambda, q * lambda};
}

void SchemeParams::validate() const {
    require(in_range(rho, -1.0, 1.0), "rho must lie in [-1, 1]");
    require(in_range(gamma, 0.0, 1.0), "gamma must lie in [0, 1]");
    require(std::isfinite(alpha1), "alpha1 must be finite");
    require(std::isfinite(alpha2), "alpha2 must be finite");
    require(in_range(rho_u1s, -1.0, 1.0), "rho_u1s must lie in [-1, 1]");
    require(in_range(rho_u2s, -1.0, 1.0), "rho_u2s must lie in [-1, 1]");
    require(in_range(theta, 0.0, 1.0), "theta must lie in [0, 1]");
    require(in_range(beta, 0.0, 1.0), "beta must lie in [0, 1]");
    require(in_range(f, -1.0, 1.0), "f must lie in [-1, 1]");
    require(std::isfinite(nhat) && nhat > 0.0, "nhat must be finite and positive");

    Eigen::Matrix3d corr;
    corr << 1.0, rho_u1s, rho_u2s,
            rho_u1s, 1.0, rho,
            rho_u2s, rho, 1.0;
    require(min_eigenvalue_3x3(corr) >= -kPsdTolerance * 3.0,
            "correlation matrix of (S, U1, U2) is not positive semidefinite");
}

std::array<double, 10> SchemeParams::as_array() const {
    return {rho, gamma, alpha1, alpha2, rho_u1s, rho_u2s, theta, beta, f, nhat};
}

GaussianJoint::GaussianJoint(const JointMatrix& cov) : cov_(cov), trace_(cov.trace()) {
    for (int i = 0; i < kVariableCount; ++i) {
        index_[static_cast<std::size_t>(i)] = i;
    }
}

GaussianJoint GaussianJoint::from_covariance(const JointMatrix& cov) {
    if (!cov.allFinite()) {
        throw ParameterInfeasible("covariance has non-finite entries");
    }
    const double scale = cov.cwiseAbs().maxCoeff();
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
        throw ParameterInfeasible("covariance is not symmetric");
    }
    const JointMatrix sym = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<JointMatrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()(0) < -kPsdTolerance * sym.trace()) {
        throw ParameterInfeasible("covariance is not positive semidefinite");
    }
    return GaussianJoint(sym);
}

double solve_pu1(double gamma, double rho, double p1) {
    require(in_range(gamma, 0.0, 1.0), "gamma must lie in [0, 1]");
    require(in_range(rho, -1.0, 1.0), "rho must lie in [-1, 1]");
    require(std::isfinite(p1) && p1 > 0.0, "p1 must be finite and positive");

    // sqrt(Pu1) is the nonnegative root of x^2 + 2 rho sqrt(gamma P1) x - (1 - gamma) P1 = 0.
    const double pu2 = gamma * p1;
    const double b = rho * std::sqrt(pu2);
    const double root = -b + std::sqrt(b * b + (1.0 - gamma) * p1);
    if (!(root >= 0.0)) {
        throw ParameterInfeasible("no nonnegative U1 power satisfies the source power identity");
    }
    return root * root;
}

GaussianJoint assemble_covariance(const PowerConfig& power, const SchemeParams& params) {
    power.validate();
    params.validate();

    const double pu1 = solve_pu1(params.gamma, params.rho, power.p1);
    const double pu2 = params.gamma * power.p1;

    // Independent sources: (S, U1, U2) correlated block, then V, X2', Z2, Z3, Zhat.
    constexpr int kBase = 8;
    Eigen::Matrix<double, kBase, kBase> base = Eigen::Matrix<double, kBase, kBase>::Zero();
    base(0, 0) = power.q;
    base(1, 1) = pu1;
    base(2, 2) = pu2;
    base(0, 1) = base(1, 0) = params.rho_u1s * std::sqrt(pu1 * power.q);
    base(0, 2) = base(2, 0) = params.rho_u2s * std::sqrt(pu2 * power.q);
    base(1, 2) = base(2, 1) = params.rho * std::sqrt(pu1 * pu2);
    base(3, 3) = params.theta * power.p2;
    base(4, 4) = (1.0 - params.theta) * power.p2;
    base(5, 5) = power.n2;
    base(6, 6) = power.n3;
    base(7, 7) = params.nhat;

    // Every joint variable is a linear combination of the sources.
    Eigen::Matrix<double, kVariableCount, kBase> mix = Eigen::Matrix<double, kVariableCount, kBase>::Zero();
    for (int i = 0; i < kBase; ++i) {
        mix(i, i) = 1.0;
    }
    constexpr int s = 0, u1 = 1, u2 = 2, v = 3, x2p = 4, z2 = 5, z3 = 6, zhat = 7;
    mix.row(idx(VariableId::X1))(u1) = 1.0;
    mix.row(idx(VariableId::X1))(u2) = 1.0;
    mix.row(idx(VariableId::X2))(v) = 1.0;
    mix.row(idx(VariableId::X2))(x2p) = 1.0;
    mix.row(idx(VariableId::Y2)) = mix.row(idx(VariableId::X1));
    mix.row(idx(VariableId::Y2))(z2) = 1.0;
    mix.row(idx(VariableId::Y2))(s) = 1.0;
    mix.row(idx(VariableId::Y3)) = mix.row(idx(VariableId::X1)) + mix.row(idx(VariableId::X2));
    mix.row(idx(VariableId::Y3))(z3) = 1.0;
    mix.row(idx(VariableId::Y3))(s) = 1.0;
    mix.row(idx(VariableId::T1))(u1) = 1.0;
    mix.row(idx(VariableId::T1))(s) = params.alpha1;
    mix.row(idx(VariableId::T2))(u2) = 1.0;
    mix.row(idx(VariableId::T2))(s) = params.alpha2;
    mix.row(idx(VariableId::YHAT2)) =
        params.beta * mix.row(idx(VariableId::Y2)) + params.f * mix.row(idx(VariableId::T2));
    mix.row(idx(VariableId::YHAT2))(zhat) = 1.0;

    JointMatrix cov = mix * base * mix.transpose();
    cov = 0.5 * (cov + cov.transpose()).eval();
    return GaussianJoint(cov);
}

LogPdet log_pdet(const GaussianJoint& joint, VarSet vars) {
    LogPdet out;
    if (vars.empty()) {
        return out;
    }
    const auto& cov = joint.cov();

    // Variables with negligible variance drop out; the rest are normalised to
    // unit variance so the result does not depend on how each one is scaled.
    std::array<int, kVariableCount> rows{};
    std::array<double, kVariableCount> scale{};
    int n = 0;
    const double tol = kRankTolerance * joint.trace();
    for (int i = 0; i < kVariableCount; ++i) {
        if (!vars.contains(static_cast<VariableId>(i))) {
            continue;
        }
        const int r = joint.index(static_cast<VariableId>(i));
        const double var = cov(r, r);
        if (var > tol) {
            rows[static_cast<std::size_t>(n)] = r;
            scale[static_cast<std::size_t>(n)] = 1.0 / std::sqrt(var);
            ++n;
            ++out.rank;
            out.log2_value += std::log2(var);
        }
    }
    if (n < 2) {
        return out;
    }

    auto keep = [&](double mu) {
        if (mu > kRankTolerance) {
            out.log2_value += std::log2(mu);
        } else {
            --out.rank;
        }
    };

    if (n == 2) {
        const double r = cov(rows[0], rows[1]) * scale[0] * scale[1];
        keep((1.0 - r) * (1.0 + r));
        return out;
    }

    BlockMatrix block(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto si = static_cast<std::size_t>(i);
            const auto sj = static_cast<std::size_t>(j);
            block(i, j) = i == j ? 1.0 : cov(rows[si], rows[sj]) * scale[si] * scale[sj];
        }
    }
    Eigen::SelfAdjointEigenSolver<BlockMatrix> solver(block, Eigen::EigenvaluesOnly);
    const BlockVector& eig = solver.eigenvalues();
    for (int i = 0; i < n; ++i) {
        keep(eig(i));
    }
    return out;
}

double conditional_variance(const GaussianJoint& joint, VariableId x, VarSet given) {
    if (given.contains(x)) {
        return 0.0;
    }
    const LogPdet with = log_pdet(joint, given | VarSet{x});
    const LogPdet without = log_pdet(joint, given);
    if (with.rank == without.rank) {
        return 0.0;
    }
    return std::exp2(with.log2_value - without.log2_value);
}

namespace {

void check_disjoint(VarSet a, VarSet b, VarSet c) {
    if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) {
        throw std::invalid_argument("conditional_mi requires disjoint variable sets");
    }
}

double combine(const LogPdet& ac, const LogPdet& bc, const LogPdet& c, const LogPdet& abc) {
    if (ac.rank + bc.rank > c.rank + abc.rank) {
        throw NumericalConditioning("mutual information is unbounded: degenerate shared component");
    }
    return 0.5 * (ac.log2_value + bc.log2_value - c.log2_value - abc.log2_value);
}

}  // namespace

double conditional_mi_unclamped(const GaussianJoint& joint, VarSet a, VarSet b, VarSet c) {
    check_disjoint(a, b, c);
    if (a.empty() || b.empty()) {
        return 0.0;
    }
    return combine(log_pdet(joint, a | c), log_pdet(joint, b | c), log_pdet(joint, c), log_pdet(joint, a | b | c));
}

double conditional_mi(const GaussianJoint& joint, VarSet a, VarSet b, VarSet c) {
    return std::max(0.0, conditional_mi_unclamped(joint, a, b, c));
}

const LogPdet& MiEvaluator::block(VarSet vars) {
    for (std::size_t i = 0; i < used_; ++i) {
        if (cache_[i].bits == vars.bits()) {
            return cache_[i].value;
        }
    }
    if (used_ == cache_.size()) {
        used_ = 0;
    }
    cache_[used_] = Entry{vars.bits(), log_pdet(joint_, vars)};
    return cache_[used_++].value;
}

double MiEvaluator::mi(VarSet a, VarSet b, VarSet c) {
    check_disjoint(a, b, c);
    if (a.empty() || b.empty()) {
        return 0.0;
    }
    // Copies: block() may overwrite cache slots when it wraps.
    const LogPdet ac = block(a | c);
    const LogPdet bc = block(b | c);
    const LogPdet cc = block(c);
    const LogPdet abc = block(a | b | c);
    return std::max(0.0, combine(ac, bc, cc, abc));
}

}  // namespace sdrcpm::gauss
