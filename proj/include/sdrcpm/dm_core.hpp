#pragma once

#include "sdrcpm/region_eval.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace sdrcpm::dm {

/// Variables of the discrete memoryless model, in joint-table order
/// (last one varies fastest).
enum class DmVar : std::uint8_t { S, S1, S2, K2, Q2, T1, T2, X1, X2, YHAT2, Y2, Y3 };

inline constexpr int kDmVarCount = 12;

[[nodiscard]] std::string_view to_string(DmVar v);

class DmVarSet {
public:
    constexpr DmVarSet() = default;
    constexpr DmVarSet(std::initializer_list<DmVar> vars) {
        for (auto v : vars) {
            bits_ |= 1u << static_cast<unsigned>(v);
        }
    }
    [[nodiscard]] constexpr std::uint32_t bits() const { return bits_; }
    [[nodiscard]] constexpr bool contains(DmVar v) const { return (bits_ >> static_cast<unsigned>(v)) & 1u; }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr bool disjoint(DmVarSet o) const { return (bits_ & o.bits_) == 0; }
    constexpr DmVarSet operator|(DmVarSet o) const {
        DmVarSet r;
        r.bits_ = bits_ | o.bits_;
        return r;
    }

private:
    std::uint32_t bits_ = 0;
};

/// Alphabet sizes per variable. A size of 1 encodes an absent (constant) variable.
struct AlphabetSpec {
    std::array<int, kDmVarCount> sizes{};
    std::size_t cell_cap = 10'000'000;

    AlphabetSpec() { sizes.fill(1); }

    [[nodiscard]] int size(DmVar v) const { return sizes[static_cast<std::size_t>(v)]; }
    int& size(DmVar v) { return sizes[static_cast<std::size_t>(v)]; }
    /// Number of joint cells; throws CapacityExceeded above `cell_cap`.
    [[nodiscard]] std::size_t cells() const;
    void validate() const;
};

/// Conditional probability table p(children | parents), stored row-major with
/// the parent digits outermost.
class Cpt {
public:
    Cpt() = default;
    Cpt(std::vector<int> parent_sizes, std::vector<int> child_sizes, std::vector<double> probs);

    static Cpt from_function(std::vector<int> parent_sizes, std::vector<int> child_sizes,
                             const std::function<double(std::span<const int>)>& fn);
    /// Deterministic kernel: child = map(parents).
    static Cpt point_mass(std::vector<int> parent_sizes, int child_size,
                          const std::function<int(std::span<const int>)>& map);
    static Cpt uniform(std::vector<int> parent_sizes, std::vector<int> child_sizes);

    [[nodiscard]] const std::vector<int>& parent_sizes() const { return parent_sizes_; }
    [[nodiscard]] const std::vector<int>& child_sizes() const { return child_sizes_; }
    [[nodiscard]] const std::vector<double>& probs() const { return probs_; }
    [[nodiscard]] std::size_t rows() const;
    [[nodiscard]] std::size_t row_size() const;

    /// Entry at digits (parents..., children...).
    [[nodiscard]] double at(std::span<const int> digits) const;
    [[nodiscard]] double at(std::initializer_list<int> digits) const {
        return at(std::span<const int>(digits.begin(), digits.size()));
    }

    /// Throws MalformedKernel on negative entries, rows off by more than 1e-12,
    /// or a shape different from the expected one.
    void validate(std::string_view name, const std::vector<int>& parent_sizes,
                  const std::vector<int>& child_sizes) const;

private:
    std::vector<int> parent_sizes_;
    std::vector<int> child_sizes_;
    std::vector<double> probs_;
};

/// Random kernel with every row drawn uniformly from the simplex.
[[nodiscard]] Cpt random_cpt(std::vector<int> parent_sizes, std::vector<int> child_sizes, std::mt19937_64& rng);

/// Kernels of the non-causal joint distribution
///   p(s,s1,s2) p(k2|s2) p(q2|k2,s2) p(x2|q2,k2,s2) p(t1,t2|s1)
///   p(x1|t1,t2,s1) p(y2,y3|x1,x2,s) p(yhat2|y2,q2,k2,s2,t2).
struct DmFactorization {
    AlphabetSpec alphabet;
    Cpt p_state;  // p(s, s1, s2)
    Cpt p_k2;     // p(k2 | s2)
    Cpt p_q2;     // p(q2 | k2, s2)
    Cpt p_x2;     // p(x2 | q2, k2, s2)
    Cpt p_t1t2;   // p(t1, t2 | s1)
    Cpt p_x1;     // p(x1 | t1, t2, s1)
    Cpt channel;  // p(y2, y3 | x1, x2, s)
    Cpt p_yhat;   // p(yhat2 | y2, q2, k2, s2, t2)

    void validate() const;
};

/// Causal-CSI variant: auxiliaries independent of the state side information
/// and inputs formed by deterministic maps x1 = f1(t1,t2,s1), x2 = f2(q2,k2,s2).
struct CausalFactorization {
    AlphabetSpec alphabet;
    Cpt p_state;  // p(s, s1, s2)
    Cpt p_k2;     // p(k2)
    Cpt p_q2;     // p(q2 | k2)
    Cpt p_t1t2;   // p(t1, t2)
    Cpt channel;  // p(y2, y3 | x1, x2, s)
    Cpt p_yhat;   // p(yhat2 | y2, q2, k2, s2, t2)
    std::vector<int> f1;  // indexed [t1][t2][s1] -> x1
    std::vector<int> f2;  // indexed [q2][k2][s2] -> x2

    void validate() const;
};

/// Rewrites a causal factorization as a non-causal one: auxiliary kernels
/// ignore the state and the input maps become point-mass kernels.
[[nodiscard]] DmFactorization lift(const CausalFactorization& fact);

/// Dense joint probability table over all twelve variables.
class JointPmf {
public:
    JointPmf(AlphabetSpec alphabet, std::vector<double> probs);

    [[nodiscard]] const AlphabetSpec& alphabet() const { return alphabet_; }
    [[nodiscard]] const std::vector<double>& probs() const { return probs_; }
    [[nodiscard]] double total_mass() const;

    /// Marginal table over `vars`, in joint order with the last variable fastest.
    [[nodiscard]] std::vector<double> marginal(DmVarSet vars) const;
    /// Entropy in bits of the marginal over `vars` (cached).
    [[nodiscard]] double entropy(DmVarSet vars) const;

private:
    struct Cache;

    AlphabetSpec alphabet_;
    std::vector<double> probs_;
    std::shared_ptr<Cache> cache_;
};

[[nodiscard]] JointPmf build_joint(const DmFactorization& fact);
[[nodiscard]] JointPmf build_joint(const CausalFactorization& fact);

/// I(A; B | C) in bits.
[[nodiscard]] double pmf_conditional_mi(const JointPmf& joint, DmVarSet a, DmVarSet b, DmVarSet c = {});

/// All non-causal information terms, S2 and T2 included where they appear.
[[nodiscard]] region::MIValues mi_values_theorem1(const JointPmf& joint);
/// Causal information terms: no state-subtraction terms and I(T1;T2) in the sum bound.
[[nodiscard]] region::MIValues mi_values_theorem2(const JointPmf& joint);

[[nodiscard]] region::RateBounds evaluate_theorem1(const DmFactorization& fact);
[[nodiscard]] region::RateBounds evaluate_theorem2(const CausalFactorization& fact);

/// True iff the non-causal bounds of the lifted factorization dominate the
/// causal bounds coordinatewise (within 1e-9) and feasibility is preserved.
[[nodiscard]] bool causal_subset_check(const CausalFactorization& fact);

}  // namespace sdrcpm::dm
