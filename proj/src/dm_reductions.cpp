#include "sdrcpm/dm_reductions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sdrcpm::dm {

namespace {

int child(const Cpt& c, std::size_t i = 0) { return c.child_sizes().at(i); }

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

// --- TupleJoint --------------------------------------------------------------

TupleJoint::TupleJoint(std::vector<std::string> names, std::vector<int> sizes,
                       const std::function<double(std::span<const int>)>& prob)
    : names_(std::move(names)), sizes_(std::move(sizes)) {
    if (names_.size() != sizes_.size()) {
        throw std::invalid_argument("TupleJoint needs one size per name");
    }
    std::vector<int> digits(sizes_.size(), 0);
    bool done = false;
    while (!done) {
        tuples_.push_back(digits);
        probs_.push_back(prob(digits));
        done = true;
        for (std::size_t d = digits.size(); d-- > 0;) {
            if (++digits[d] < sizes_[d]) {
                done = false;
                break;
            }
            digits[d] = 0;
        }
    }
}

double TupleJoint::entropy(const std::vector<std::string>& vars) const {
    std::vector<std::size_t> cols;
    for (const auto& name : vars) {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) {
            throw std::invalid_argument("unknown variable " + name);
        }
        cols.push_back(static_cast<std::size_t>(it - names_.begin()));
    }
    std::map<std::vector<int>, double> marginal;
    for (std::size_t i = 0; i < tuples_.size(); ++i) {
        std::vector<int> key;
        key.reserve(cols.size());
        for (auto c : cols) {
            key.push_back(tuples_[i][c]);
        }
        marginal[key] += probs_[i];
    }
    double h = 0.0;
    for (const auto& [key, p] : marginal) {
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

double TupleJoint::mi(const std::vector<std::string>& a, const std::vector<std::string>& b,
                      const std::vector<std::string>& c) const {
    auto join = [](std::vector<std::string> x, const std::vector<std::string>& y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    const double value = entropy(join(a, c)) + entropy(join(b, c)) - entropy(c) - entropy(join(join(a, b), c));
    return std::max(0.0, value);
}

// --- Remark: state-independent channel ------------------------------------------

RcpmModel RcpmModel::random(std::mt19937_64& rng, int k) {
    RcpmModel m;
    m.p_v = random_cpt({}, {k}, rng);
    m.p_x2 = random_cpt({k}, {k}, rng);
    m.p_u1u2 = random_cpt({}, {k, k}, rng);
    m.p_x1 = random_cpt({k, k}, {k}, rng);
    m.channel = random_cpt({k, k}, {k, k}, rng);
    m.p_yhat = random_cpt({k, k, k, k}, {k}, rng);
    return m;
}

DmFactorization RcpmModel::factorization() const {
    using enum DmVar;
    DmFactorization f;
    auto& a = f.alphabet;
    a.size(K2) = child(p_v);
    a.size(Q2) = a.size(X2) = child(p_x2);
    a.size(T1) = child(p_u1u2, 0);
    a.size(T2) = child(p_u1u2, 1);
    a.size(X1) = child(p_x1);
    a.size(Y2) = child(channel, 0);
    a.size(Y3) = child(channel, 1);
    a.size(YHAT2) = child(p_yhat);

    f.p_state = Cpt({}, {1, 1, 1}, {1.0});
    f.p_k2 = Cpt::from_function({1}, {a.size(K2)}, [&](std::span<const int> d) { return p_v.at({d[1]}); });
    f.p_q2 = Cpt::from_function({a.size(K2), 1}, {a.size(Q2)},
                                [&](std::span<const int> d) { return p_x2.at({d[0], d[2]}); });
    f.p_x2 = Cpt::point_mass({a.size(Q2), a.size(K2), 1}, a.size(X2), [](std::span<const int> d) { return d[0]; });
    f.p_t1t2 = Cpt::from_function({1}, {a.size(T1), a.size(T2)},
                                  [&](std::span<const int> d) { return p_u1u2.at({d[1], d[2]}); });
    f.p_x1 = Cpt::from_function({a.size(T1), a.size(T2), 1}, {a.size(X1)},
                                [&](std::span<const int> d) { return p_x1.at({d[0], d[1], d[3]}); });
    f.channel = Cpt::from_function({a.size(X1), a.size(X2), 1}, {a.size(Y2), a.size(Y3)},
                                   [&](std::span<const int> d) { return channel.at({d[0], d[1], d[3], d[4]}); });
    f.p_yhat = Cpt::from_function({a.size(Y2), a.size(Q2), a.size(K2), 1, a.size(T2)}, {a.size(YHAT2)},
                                  [&](std::span<const int> d) { return p_yhat.at({d[0], d[1], d[2], d[4], d[5]}); });
    return f;
}

region::RateBounds RcpmModel::reduced_bounds() const {
    const TupleJoint j({"V", "X2", "U1", "U2", "X1", "Y2", "Y3", "YH"},
                       {child(p_v), child(p_x2), child(p_u1u2, 0), child(p_u1u2, 1), child(p_x1), child(channel, 0),
                        child(channel, 1), child(p_yhat)},
                       [&](std::span<const int> d) {
                           return p_v.at({d[0]}) * p_x2.at({d[0], d[1]}) * p_u1u2.at({d[2], d[3]}) *
                                  p_x1.at({d[2], d[3], d[4]}) * channel.at({d[4], d[1], d[5], d[6]}) *
                                  p_yhat.at({d[5], d[1], d[0], d[3], d[7]});
                       });
    region::MIValues mi;
    mi.i_t1_out = j.mi({"U1"}, {"YH", "Y3"}, {"V", "X2"});
    mi.i_t2_relay = j.mi({"U2"}, {"Y2"}, {"V", "X2"});
    mi.i_t1_t2_s = j.mi({"U1"}, {"U2"});
    mi.i_k2_y3 = j.mi({"V"}, {"Y3"});
    mi.i_q2_y3 = j.mi({"X2"}, {"Y3"}, {"V"});
    mi.i_yhat_src = j.mi({"YH"}, {"Y2", "U2"}, {"V", "X2"});
    mi.i_yhat_y3 = j.mi({"YH"}, {"Y3"}, {"V", "X2"});
    mi.i_yhat_cond_y3 = j.mi({"YH"}, {"Y2", "U2"}, {"V", "X2", "Y3"});
    return region::bounds_from_mi(mi);
}

// --- Remark: relaying disabled ------------------------------------------------

BcCsitModel BcCsitModel::random(std::mt19937_64& rng, int k) {
    BcCsitModel m;
    m.p_state = random_cpt({}, {k, k}, rng);
    m.p_t1t2 = random_cpt({k}, {k, k}, rng);
    m.p_x1 = random_cpt({k, k, k}, {k}, rng);
    m.channel = random_cpt({k, k}, {k, k}, rng);
    return m;
}

DmFactorization BcCsitModel::factorization() const {
    using enum DmVar;
    DmFactorization f;
    auto& a = f.alphabet;
    a.size(S) = child(p_state, 0);
    a.size(S1) = child(p_state, 1);
    a.size(T1) = child(p_t1t2, 0);
    a.size(T2) = child(p_t1t2, 1);
    a.size(X1) = child(p_x1);
    a.size(Y2) = child(channel, 0);
    a.size(Y3) = child(channel, 1);

    f.p_state = Cpt::from_function({}, {a.size(S), a.size(S1), 1},
                                   [&](std::span<const int> d) { return p_state.at({d[0], d[1]}); });
    f.p_k2 = Cpt::uniform({1}, {1});
    f.p_q2 = Cpt::uniform({1, 1}, {1});
    f.p_x2 = Cpt::uniform({1, 1, 1}, {1});
    f.p_t1t2 = p_t1t2;
    f.p_x1 = p_x1;
    f.channel = Cpt::from_function({a.size(X1), 1, a.size(S)}, {a.size(Y2), a.size(Y3)},
                                   [&](std::span<const int> d) { return channel.at({d[0], d[2], d[3], d[4]}); });
    f.p_yhat = Cpt::uniform({a.size(Y2), 1, 1, 1, a.size(T2)}, {1});
    return f;
}

region::RateBounds BcCsitModel::reduced_bounds() const {
    const TupleJoint j({"S", "S1", "T1", "T2", "X1", "Y2", "Y3"},
                       {child(p_state, 0), child(p_state, 1), child(p_t1t2, 0), child(p_t1t2, 1), child(p_x1),
                        child(channel, 0), child(channel, 1)},
                       [&](std::span<const int> d) {
                           return p_state.at({d[0], d[1]}) * p_t1t2.at({d[1], d[2], d[3]}) *
                                  p_x1.at({d[2], d[3], d[1], d[4]}) * channel.at({d[4], d[0], d[5], d[6]});
                       });
    region::MIValues mi;
    mi.i_t1_out = j.mi({"T1"}, {"Y3"});
    mi.i_t1_s = j.mi({"T1"}, {"S1"});
    mi.i_t2_relay = j.mi({"T2"}, {"Y2"});
    mi.i_t2_s = j.mi({"T2"}, {"S1"});
    mi.i_t1_t2_s = j.mi({"T1"}, {"T2"}, {"S1"});
    return region::bounds_from_mi(mi);
}

// --- Remark: single-message relay channel, informed source ---------------------------

SdrcSourceModel SdrcSourceModel::random(std::mt19937_64& rng, int k) {
    SdrcSourceModel m;
    m.p_s = random_cpt({}, {k}, rng);
    m.p_x2 = random_cpt({}, {k}, rng);
    m.p_t1 = random_cpt({k}, {k}, rng);
    m.p_x1 = random_cpt({k, k}, {k}, rng);
    m.channel = random_cpt({k, k, k}, {k, k}, rng);
    m.p_yhat = random_cpt({k, k}, {k}, rng);
    return m;
}

DmFactorization SdrcSourceModel::factorization() const {
    using enum DmVar;
    DmFactorization f;
    auto& a = f.alphabet;
    a.size(S) = a.size(S1) = child(p_s);
    a.size(Q2) = a.size(X2) = child(p_x2);
    a.size(T1) = child(p_t1);
    a.size(X1) = child(p_x1);
    a.size(Y2) = child(channel, 0);
    a.size(Y3) = child(channel, 1);
    a.size(YHAT2) = child(p_yhat);

    f.p_state = Cpt::from_function({}, {a.size(S), a.size(S1), 1},
                                   [&](std::span<const int> d) { return p_s.at({d[0]}) * delta(d[0], d[1]); });
    f.p_k2 = Cpt::uniform({1}, {1});
    f.p_q2 = Cpt::from_function({1, 1}, {a.size(Q2)}, [&](std::span<const int> d) { return p_x2.at({d[2]}); });
    f.p_x2 = Cpt::point_mass({a.size(Q2), 1, 1}, a.size(X2), [](std::span<const int> d) { return d[0]; });
    f.p_t1t2 = Cpt::from_function({a.size(S1)}, {a.size(T1), 1},
                                  [&](std::span<const int> d) { return p_t1.at({d[0], d[1]}); });
    f.p_x1 = Cpt::from_function({a.size(T1), 1, a.size(S1)}, {a.size(X1)},
                                [&](std::span<const int> d) { return p_x1.at({d[0], d[2], d[3]}); });
    f.channel = channel;
    f.p_yhat = Cpt::from_function({a.size(Y2), a.size(Q2), 1, 1, 1}, {a.size(YHAT2)},
                                  [&](std::span<const int> d) { return p_yhat.at({d[0], d[1], d[5]}); });
    return f;
}

region::RateBounds SdrcSourceModel::reduced_bounds() const {
    const TupleJoint j({"S", "X2", "T1", "X1", "Y2", "Y3", "YH"},
                       {child(p_s), child(p_x2), child(p_t1), child(p_x1), child(channel, 0), child(channel, 1),
                        child(p_yhat)},
                       [&](std::span<const int> d) {
                           return p_s.at({d[0]}) * p_x2.at({d[1]}) * p_t1.at({d[0], d[2]}) *
                                  p_x1.at({d[2], d[0], d[3]}) * channel.at({d[3], d[1], d[0], d[4], d[5]}) *
                                  p_yhat.at({d[4], d[1], d[6]});
                       });
    region::MIValues mi;
    mi.i_t1_out = j.mi({"T1"}, {"YH", "Y3"}, {"X2"});
    mi.i_t1_s = j.mi({"T1"}, {"S"});
    mi.i_q2_y3 = j.mi({"X2"}, {"Y3"});
    mi.i_yhat_src = j.mi({"YH"}, {"Y2"}, {"X2"});
    mi.i_yhat_y3 = j.mi({"YH"}, {"Y3"}, {"X2"});
    mi.i_yhat_cond_y3 = j.mi({"YH"}, {"Y2"}, {"X2", "Y3"});
    return region::bounds_from_mi(mi);
}

// --- Corollary: informed source, uninformed relay --------------------------------

InformedSourceModel InformedSourceModel::random(std::mt19937_64& rng, int k) {
    InformedSourceModel m;
    m.p_s = random_cpt({}, {k}, rng);
    m.p_v = random_cpt({}, {k}, rng);
    m.p_x2 = random_cpt({k}, {k}, rng);
    m.p_t1t2 = random_cpt({k}, {k, k}, rng);
    m.p_x1 = random_cpt({k, k, k}, {k}, rng);
    m.channel = random_cpt({k, k, k}, {k, k}, rng);
    m.p_yhat = random_cpt({k, k, k, k}, {k}, rng);
    return m;
}

DmFactorization InformedSourceModel::factorization() const {
    using enum DmVar;
    DmFactorization f;
    auto& a = f.alphabet;
    a.size(S) = a.size(S1) = child(p_s);
    a.size(K2) = child(p_v);
    a.size(Q2) = a.size(X2) = child(p_x2);
    a.size(T1) = child(p_t1t2, 0);
    a.size(T2) = child(p_t1t2, 1);
    a.size(X1) = child(p_x1);
    a.size(Y2) = child(channel, 0);
    a.size(Y3) = child(channel, 1);
    a.size(YHAT2) = child(p_yhat);

    f.p_state = Cpt::from_function({}, {a.size(S), a.size(S1), 1},
                                   [&](std::span<const int> d) { return p_s.at({d[0]}) * delta(d[0], d[1]); });
    f.p_k2 = Cpt::from_function({1}, {a.size(K2)}, [&](std::span<const int> d) { return p_v.at({d[1]}); });
    f.p_q2 = Cpt::from_function({a.size(K2), 1}, {a.size(Q2)},
                                [&](std::span<const int> d) { return p_x2.at({d[0], d[2]}); });
    f.p_x2 = Cpt::point_mass({a.size(Q2), a.size(K2), 1}, a.size(X2), [](std::span<const int> d) { return d[0]; });
    f.p_t1t2 = p_t1t2;
    f.p_x1 = p_x1;
    f.channel = channel;
    f.p_yhat = Cpt::from_function({a.size(Y2), a.size(Q2), a.size(K2), 1, a.size(T2)}, {a.size(YHAT2)},
                                  [&](std::span<const int> d) { return p_yhat.at({d[0], d[1], d[2], d[4], d[5]}); });
    return f;
}

region::RateBounds InformedSourceModel::reduced_bounds() const {
    const TupleJoint j({"S", "V", "X2", "T1", "T2", "X1", "Y2", "Y3", "YH"},
                       {child(p_s), child(p_v), child(p_x2), child(p_t1t2, 0), child(p_t1t2, 1), child(p_x1),
                        child(channel, 0), child(channel, 1), child(p_yhat)},
                       [&](std::span<const int> d) {
                           return p_s.at({d[0]}) * p_v.at({d[1]}) * p_x2.at({d[1], d[2]}) *
                                  p_t1t2.at({d[0], d[3], d[4]}) * p_x1.at({d[3], d[4], d[0], d[5]}) *
                                  channel.at({d[5], d[2], d[0], d[6], d[7]}) *
                                  p_yhat.at({d[6], d[2], d[1], d[4], d[8]});
                       });
    region::MIValues mi;
    mi.i_t1_out = j.mi({"T1"}, {"YH", "Y3"}, {"V", "X2"});
    mi.i_t1_s = j.mi({"T1"}, {"S"});
    mi.i_t2_relay = j.mi({"T2"}, {"Y2"}, {"V", "X2"});
    mi.i_t2_s = j.mi({"T2"}, {"S"});
    mi.i_t1_t2_s = j.mi({"T1"}, {"T2"}, {"S"});
    mi.i_k2_y3 = j.mi({"V"}, {"Y3"});
    mi.i_q2_y3 = j.mi({"X2"}, {"Y3"}, {"V"});
    mi.i_yhat_src = j.mi({"YH"}, {"Y2", "T2"}, {"V", "X2"});
    mi.i_yhat_y3 = j.mi({"YH"}, {"Y3"}, {"V", "X2"});
    mi.i_yhat_cond_y3 = j.mi({"YH"}, {"Y2", "T2"}, {"V", "X2", "Y3"});
    return region::bounds_from_mi(mi);
}

// --- random instances ------------------------------------------------------------

CausalFactorization random_causal(std::mt19937_64& rng, int k) {
    CausalFactorization c;
    c.alphabet.sizes.fill(k);
    c.p_state = random_cpt({}, {k, k, k}, rng);
    c.p_k2 = random_cpt({}, {k}, rng);
    c.p_q2 = random_cpt({k}, {k}, rng);
    c.p_t1t2 = random_cpt({}, {k, k}, rng);
    c.channel = random_cpt({k, k, k}, {k, k}, rng);
    c.p_yhat = random_cpt({k, k, k, k, k}, {k}, rng);
    std::uniform_int_distribution<int> pick(0, k - 1);
    c.f1.resize(static_cast<std::size_t>(k * k * k));
    c.f2.resize(static_cast<std::size_t>(k * k * k));
    for (auto& x : c.f1) x = pick(rng);
    for (auto& x : c.f2) x = pick(rng);
    return c;
}

DmFactorization random_factorization(std::mt19937_64& rng, int k) {
    DmFactorization f;
    f.alphabet.sizes.fill(k);
    f.p_state = random_cpt({}, {k, k, k}, rng);
    f.p_k2 = random_cpt({k}, {k}, rng);
    f.p_q2 = random_cpt({k, k}, {k}, rng);
    f.p_x2 = random_cpt({k, k, k}, {k}, rng);
    f.p_t1t2 = random_cpt({k}, {k, k}, rng);
    f.p_x1 = random_cpt({k, k, k}, {k}, rng);
    f.channel = random_cpt({k, k, k}, {k, k}, rng);
    f.p_yhat = random_cpt({k, k, k, k, k}, {k}, rng);
    return f;
}

}  // namespace sdrcpm::dm
