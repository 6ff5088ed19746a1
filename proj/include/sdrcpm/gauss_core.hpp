#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace sdrcpm::gauss {

/// Channel powers and noise variances, all in linear units.
struct PowerConfig {
    double p1 = 1.0;  // source power
    double p2 = 1.0;  // relay power
    double n2 = 1.0;  // relay noise variance
    double n3 = 1.0;  // destination noise variance
    double q = 1.0;   // state variance

    /// Throws ParameterInfeasible unless every field is finite and strictly positive.
    void validate() const;
    [[nodiscard]] PowerConfig scaled(double lambda) const;
};

/// Knobs of the generalized dirty-paper / compress-and-forward scheme.
///
/// The source splits its codeword as X1 = U1 + U2 with Var(U2) = gamma * P1
/// and correlation rho between U1 and U2. Auxiliaries are T1 = U1 + alpha1 S
/// and T2 = U2 + alpha2 S. The relay sends X2 = V + X2' with Var(V) = theta * P2
/// and compresses Yhat2 = beta * Y2 + f * T2 + Zhat, Var(Zhat) = nhat.
struct SchemeParams {
    double rho = 0.0;
    double gamma = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double rho_u1s = 0.0;
    double rho_u2s = 0.0;
    double theta = 0.0;
    double beta = 0.0;
    double f = 0.0;
    double nhat = 1.0;

    /// Range checks plus the PSD gate on the (S, U1, U2) correlation block.
    void validate() const;
    [[nodiscard]] std::array<double, 10> as_array() const;
};

enum class VariableId : std::uint8_t {
    S,
    U1,
    U2,
    V,
    X2P,
    Z2,
    Z3,
    ZHAT,
    X1,
    X2,
    Y2,
    Y3,
    T1,
    T2,
    YHAT2,
};

inline constexpr int kVariableCount = 15;

[[nodiscard]] std::string_view to_string(VariableId id);

/// Set of joint variables, stored as a bitmask over VariableId.
class VarSet {
public:
    constexpr VarSet() = default;
    constexpr VarSet(std::initializer_list<VariableId> ids) {
        for (auto id : ids) {
            bits_ |= bit(id);
        }
    }

    [[nodiscard]] static constexpr VarSet from_bits(std::uint32_t bits) {
        VarSet s;
        s.bits_ = bits & ((1u << kVariableCount) - 1u);
        return s;
    }

    [[nodiscard]] constexpr std::uint32_t bits() const { return bits_; }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr bool contains(VariableId id) const { return (bits_ & bit(id)) != 0; }
    [[nodiscard]] constexpr bool disjoint(VarSet other) const { return (bits_ & other.bits_) == 0; }
    [[nodiscard]] int size() const;

    constexpr VarSet operator|(VarSet other) const { return from_bits(bits_ | other.bits_); }
    constexpr bool operator==(const VarSet&) const = default;

private:
    static constexpr std::uint32_t bit(VariableId id) { return 1u << static_cast<unsigned>(id); }
    std::uint32_t bits_ = 0;
};

using JointMatrix = Eigen::Matrix<double, kVariableCount, kVariableCount>;

/// Second moments of every scheme variable (all zero-mean).
class GaussianJoint {
public:
    /// Wraps an arbitrary covariance; checks symmetry (1e-12 relative) and
    /// the PSD gate (smallest eigenvalue >= -1e-9 * trace).
    static GaussianJoint from_covariance(const JointMatrix& cov);

    [[nodiscard]] const JointMatrix& cov() const { return cov_; }
    [[nodiscard]] int index(VariableId id) const { return index_[static_cast<std::size_t>(id)]; }
    [[nodiscard]] double covariance(VariableId a, VariableId b) const { return cov_(index(a), index(b)); }
    [[nodiscard]] double variance(VariableId a) const { return covariance(a, a); }
    [[nodiscard]] double trace() const { return trace_; }

private:
    friend GaussianJoint assemble_covariance(const PowerConfig&, const SchemeParams&);
    GaussianJoint(const JointMatrix& cov);

    JointMatrix cov_;
    std::array<int, kVariableCount> index_{};
    double trace_ = 0.0;
};

/// Power of U1 such that Var(U1 + U2) = P1 when Var(U2) = gamma * P1.
[[nodiscard]] double solve_pu1(double gamma, double rho, double p1);

[[nodiscard]] GaussianJoint assemble_covariance(const PowerConfig& power, const SchemeParams& params);

struct LogPdet {
    int rank = 0;
    double log2_value = 0.0;  // log2 of the product of the eigenvalues kept
};

/// Log pseudo-determinant of the covariance block of `vars`. Variances at or
/// below 1e-12 * trace(joint) drop out, and eigenvalues of the remaining
/// correlation block at or below 1e-12 are treated as exact zeros, which is the
/// limit of a vanishing ridge added to the block.
[[nodiscard]] LogPdet log_pdet(const GaussianJoint& joint, VarSet vars);

/// Var(x | given): the Schur complement of `given` in the block of {x} + given,
/// or 0 when x is a deterministic linear function of `given`.
[[nodiscard]] double conditional_variance(const GaussianJoint& joint, VariableId x, VarSet given);

/// I(A; B | C) in bits before clamping. May be slightly negative from rounding.
[[nodiscard]] double conditional_mi_unclamped(const GaussianJoint& joint, VarSet a, VarSet b, VarSet c);

/// I(A; B | C) in bits, clamped below at zero. Throws NumericalConditioning
/// when the information is unbounded (A and B share a deterministic component
/// given C) and std::invalid_argument when the sets overlap.
[[nodiscard]] double conditional_mi(const GaussianJoint& joint, VarSet a, VarSet b, VarSet c = {});

/// Evaluates many conditional MIs on one joint, reusing log-determinants of
/// repeated variable blocks. Not thread-safe; make one per worker.
class MiEvaluator {
public:
    explicit MiEvaluator(const GaussianJoint& joint) : joint_(joint) {}

    [[nodiscard]] double mi(VarSet a, VarSet b, VarSet c = {});
    [[nodiscard]] const GaussianJoint& joint() const { return joint_; }

private:
    const LogPdet& block(VarSet vars);

    const GaussianJoint& joint_;
    struct Entry {
        std::uint32_t bits;
        LogPdet value;
    };
    std::array<Entry, 48> cache_{};
    std::size_t used_ = 0;
};

}  // namespace sdrcpm::gauss
