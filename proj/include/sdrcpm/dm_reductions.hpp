#pragma once

#include "sdrcpm/dm_core.hpp"

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sdrcpm::dm {

/// Joint distribution over a few named variables, enumerated tuple by tuple.
/// Used to evaluate the reduced region formulas of special cases directly,
/// without going through the twelve-variable table.
class TupleJoint {
public:
    TupleJoint(std::vector<std::string> names, std::vector<int> sizes,
               const std::function<double(std::span<const int>)>& prob);

    /// I(A; B | C) in bits, variables given by name.
    [[nodiscard]] double mi(const std::vector<std::string>& a, const std::vector<std::string>& b,
                            const std::vector<std::string>& c = {}) const;
    [[nodiscard]] double entropy(const std::vector<std::string>& vars) const;

private:
    std::vector<std::string> names_;
    std::vector<int> sizes_;
    std::vector<std::vector<int>> tuples_;
    std::vector<double> probs_;
};

/// State-independent relay channel with private messages. Codewords U1, U2
/// at the source, V and X2 at the relay.
struct RcpmModel {
    Cpt p_v;       // p(v)
    Cpt p_x2;      // p(x2 | v)
    Cpt p_u1u2;    // p(u1, u2)
    Cpt p_x1;      // p(x1 | u1, u2)
    Cpt channel;   // p(y2, y3 | x1, x2)
    Cpt p_yhat;    // p(yhat2 | y2, x2, v, u2)

    static RcpmModel random(std::mt19937_64& rng, int k = 2);
    [[nodiscard]] DmFactorization factorization() const;
    [[nodiscard]] region::RateBounds reduced_bounds() const;
};

/// Broadcast channel with non-causal state at the transmitter (relay disabled).
struct BcCsitModel {
    Cpt p_state;   // p(s, s1)
    Cpt p_t1t2;    // p(t1, t2 | s1)
    Cpt p_x1;      // p(x1 | t1, t2, s1)
    Cpt channel;   // p(y2, y3 | x1, s)

    static BcCsitModel random(std::mt19937_64& rng, int k = 2);
    [[nodiscard]] DmFactorization factorization() const;
    [[nodiscard]] region::RateBounds reduced_bounds() const;
};

/// State-dependent relay channel, perfect state at the source only, no
/// private messages: only W13 is sent and the relay input X2 plays Q2.
struct SdrcSourceModel {
    Cpt p_s;       // p(s)
    Cpt p_x2;      // p(x2)
    Cpt p_t1;      // p(t1 | s)
    Cpt p_x1;      // p(x1 | t1, s)
    Cpt channel;   // p(y2, y3 | x1, x2, s)
    Cpt p_yhat;    // p(yhat2 | y2, x2)

    static SdrcSourceModel random(std::mt19937_64& rng, int k = 2);
    [[nodiscard]] DmFactorization factorization() const;
    [[nodiscard]] region::RateBounds reduced_bounds() const;
};

/// Private-message relay channel with perfect state at the source only
/// (S1 = S, S2 empty, K2 = V, Q2 = X2); the discrete analogue of the Gaussian scheme.
struct InformedSourceModel {
    Cpt p_s;       // p(s)
    Cpt p_v;       // p(v)
    Cpt p_x2;      // p(x2 | v)
    Cpt p_t1t2;    // p(t1, t2 | s)
    Cpt p_x1;      // p(x1 | t1, t2, s)
    Cpt channel;   // p(y2, y3 | x1, x2, s)
    Cpt p_yhat;    // p(yhat2 | y2, x2, v, t2)

    static InformedSourceModel random(std::mt19937_64& rng, int k = 2);
    [[nodiscard]] DmFactorization factorization() const;
    [[nodiscard]] region::RateBounds reduced_bounds() const;
};

/// Random causal instance with every alphabet of size k and random input maps.
[[nodiscard]] CausalFactorization random_causal(std::mt19937_64& rng, int k = 2);
/// Random non-causal instance with every alphabet of size k.
[[nodiscard]] DmFactorization random_factorization(std::mt19937_64& rng, int k = 2);

}  // namespace sdrcpm::dm
