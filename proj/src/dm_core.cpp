#include "sdrcpm/dm_core.hpp"

#include "sdrcpm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>
#include <unordered_map>

namespace sdrcpm::dm {

namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kMassTolerance = 1e-10;
constexpr double kDominanceTolerance = 1e-9;

std::size_t product(const std::vector<int>& sizes) {
    std::size_t n = 1;
    for (int s : sizes) {
        n *= static_cast<std::size_t>(s);
    }
    return n;
}

std::vector<int> sizes_of(const AlphabetSpec& a, std::initializer_list<DmVar> vars) {
    std::vector<int> out;
    for (auto v : vars) {
        out.push_back(a.size(v));
    }
    return out;
}

std::size_t var_index(DmVar v) { return static_cast<std::size_t>(v); }

}  // namespace

std::string_view to_string(DmVar v) {
    switch (v) {
        case DmVar::S: return "S";
        case DmVar::S1: return "S1";
        case DmVar::S2: return "S2";
        case DmVar::K2: return "K2";
        case DmVar::Q2: return "Q2";
        case DmVar::T1: return "T1";
        case DmVar::T2: return "T2";
        case DmVar::X1: return "X1";
        case DmVar::X2: return "X2";
        case DmVar::YHAT2: return "YHAT2";
        case DmVar::Y2: return "Y2";
        case DmVar::Y3: return "Y3";
    }
    return "?";
}

void AlphabetSpec::validate() const {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) {
            throw std::invalid_argument("alphabet size of " + std::string(to_string(static_cast<DmVar>(i))) +
                                        " must be at least 1");
        }
    }
}

std::size_t AlphabetSpec::cells() const {
    validate();
    std::size_t n = 1;
    for (int s : sizes) {
        n *= static_cast<std::size_t>(s);
        if (n > cell_cap) {
            throw CapacityExceeded("joint table exceeds the cell cap of " + std::to_string(cell_cap));
        }
    }
    return n;
}

// --- Cpt -------------------------------------------------------------------

Cpt::Cpt(std::vector<int> parent_sizes, std::vector<int> child_sizes, std::vector<double> probs)
    : parent_sizes_(std::move(parent_sizes)), child_sizes_(std::move(child_sizes)), probs_(std::move(probs)) {
    for (int s : parent_sizes_) {
        if (s < 1) throw MalformedKernel("kernel dimension must be at least 1");
    }
    for (int s : child_sizes_) {
        if (s < 1) throw MalformedKernel("kernel dimension must be at least 1");
    }
    if (probs_.size() != rows() * row_size()) {
        throw MalformedKernel("kernel has " + std::to_string(probs_.size()) + " entries, expected " +
                              std::to_string(rows() * row_size()));
    }
}

std::size_t Cpt::rows() const { return product(parent_sizes_); }
std::size_t Cpt::row_size() const { return product(child_sizes_); }

Cpt Cpt::from_function(std::vector<int> parent_sizes, std::vector<int> child_sizes,
                       const std::function<double(std::span<const int>)>& fn) {
    std::vector<int> dims = parent_sizes;
    dims.insert(dims.end(), child_sizes.begin(), child_sizes.end());
    const std::size_t n = product(dims);
    std::vector<double> probs(n);
    std::vector<int> digits(dims.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        probs[i] = fn(digits);
        for (std::size_t d = dims.size(); d-- > 0;) {
            if (++digits[d] < dims[d]) break;
            digits[d] = 0;
        }
    }
    return Cpt(std::move(parent_sizes), std::move(child_sizes), std::move(probs));
}

Cpt Cpt::point_mass(std::vector<int> parent_sizes, int child_size,
                    const std::function<int(std::span<const int>)>& map) {
    const std::size_t np = parent_sizes.size();
    return from_function(std::move(parent_sizes), {child_size}, [&](std::span<const int> d) {
        return map(d.first(np)) == d[np] ? 1.0 : 0.0;
    });
}

Cpt Cpt::uniform(std::vector<int> parent_sizes, std::vector<int> child_sizes) {
    const double w = 1.0 / static_cast<double>(product(child_sizes));
    return from_function(std::move(parent_sizes), std::move(child_sizes), [w](std::span<const int>) { return w; });
}

double Cpt::at(std::span<const int> digits) const {
    const std::size_t np = parent_sizes_.size();
    std::size_t flat = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const int size = i < np ? parent_sizes_[i] : child_sizes_[i - np];
        flat = flat * static_cast<std::size_t>(size) + static_cast<std::size_t>(digits[i]);
    }
    return probs_[flat];
}

void Cpt::validate(std::string_view name, const std::vector<int>& parent_sizes,
                   const std::vector<int>& child_sizes) const {
    const std::string label(name);
    if (parent_sizes_ != parent_sizes || child_sizes_ != child_sizes) {
        throw MalformedKernel(label + ": shape does not match the alphabet");
    }
    const std::size_t width = row_size();
    for (std::size_t r = 0; r < rows(); ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < width; ++c) {
            const double p = probs_[r * width + c];
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw MalformedKernel(label + ": negative or non-finite entry");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowTolerance) {
            throw MalformedKernel(label + ": row " + std::to_string(r) + " sums to " + std::to_string(sum));
        }
    }
}

Cpt random_cpt(std::vector<int> parent_sizes, std::vector<int> child_sizes, std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    const std::size_t rows = product(parent_sizes);
    const std::size_t width = product(child_sizes);
    std::vector<double> probs(rows * width);
    for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < width; ++c) {
            probs[r * width + c] = expo(rng);
            sum += probs[r * width + c];
        }
        for (std::size_t c = 0; c < width; ++c) {
            probs[r * width + c] /= sum;
        }
    }
    return Cpt(std::move(parent_sizes), std::move(child_sizes), std::move(probs));
}

// --- factorizations ----------------------------------------------------------

void DmFactorization::validate() const {
    using enum DmVar;
    const auto& a = alphabet;
    a.validate();
    p_state.validate("p(s,s1,s2)", {}, sizes_of(a, {S, S1, S2}));
    p_k2.validate("p(k2|s2)", sizes_of(a, {S2}), sizes_of(a, {K2}));
    p_q2.validate("p(q2|k2,s2)", sizes_of(a, {K2, S2}), sizes_of(a, {Q2}));
    p_x2.validate("p(x2|q2,k2,s2)", sizes_of(a, {Q2, K2, S2}), sizes_of(a, {X2}));
    p_t1t2.validate("p(t1,t2|s1)", sizes_of(a, {S1}), sizes_of(a, {T1, T2}));
    p_x1.validate("p(x1|t1,t2,s1)", sizes_of(a, {T1, T2, S1}), sizes_of(a, {X1}));
    channel.validate("p(y2,y3|x1,x2,s)", sizes_of(a, {X1, X2, S}), sizes_of(a, {Y2, Y3}));
    p_yhat.validate("p(yhat2|y2,q2,k2,s2,t2)", sizes_of(a, {Y2, Q2, K2, S2, T2}), sizes_of(a, {YHAT2}));
}

void CausalFactorization::validate() const {
    using enum DmVar;
    const auto& a = alphabet;
    a.validate();
    p_state.validate("p(s,s1,s2)", {}, sizes_of(a, {S, S1, S2}));
    p_k2.validate("p(k2)", {}, sizes_of(a, {K2}));
    p_q2.validate("p(q2|k2)", sizes_of(a, {K2}), sizes_of(a, {Q2}));
    p_t1t2.validate("p(t1,t2)", {}, sizes_of(a, {T1, T2}));
    channel.validate("p(y2,y3|x1,x2,s)", sizes_of(a, {X1, X2, S}), sizes_of(a, {Y2, Y3}));
    p_yhat.validate("p(yhat2|y2,q2,k2,s2,t2)", sizes_of(a, {Y2, Q2, K2, S2, T2}), sizes_of(a, {YHAT2}));

    auto check_map = [](const std::vector<int>& map, std::size_t domain, int range, const char* name) {
        if (map.size() != domain) {
            throw MalformedKernel(std::string(name) + ": map must have one entry per domain point");
        }
        for (int x : map) {
            if (x < 0 || x >= range) {
                throw MalformedKernel(std::string(name) + ": map value outside the input alphabet");
            }
        }
    };
    check_map(f1, product(sizes_of(a, {T1, T2, S1})), a.size(X1), "f1");
    check_map(f2, product(sizes_of(a, {Q2, K2, S2})), a.size(X2), "f2");
}

DmFactorization lift(const CausalFactorization& fact) {
    using enum DmVar;
    fact.validate();
    const auto& a = fact.alphabet;
    DmFactorization out;
    out.alphabet = a;
    out.p_state = fact.p_state;
    out.p_k2 = Cpt::from_function(sizes_of(a, {S2}), sizes_of(a, {K2}),
                                  [&](std::span<const int> d) { return fact.p_k2.at({d[1]}); });
    out.p_q2 = Cpt::from_function(sizes_of(a, {K2, S2}), sizes_of(a, {Q2}),
                                  [&](std::span<const int> d) { return fact.p_q2.at({d[0], d[2]}); });
    out.p_x2 = Cpt::point_mass(sizes_of(a, {Q2, K2, S2}), a.size(X2), [&](std::span<const int> d) {
        return fact.f2[static_cast<std::size_t>((d[0] * a.size(K2) + d[1]) * a.size(S2) + d[2])];
    });
    out.p_t1t2 = Cpt::from_function(sizes_of(a, {S1}), sizes_of(a, {T1, T2}),
                                    [&](std::span<const int> d) { return fact.p_t1t2.at({d[1], d[2]}); });
    out.p_x1 = Cpt::point_mass(sizes_of(a, {T1, T2, S1}), a.size(X1), [&](std::span<const int> d) {
        return fact.f1[static_cast<std::size_t>((d[0] * a.size(T2) + d[1]) * a.size(S1) + d[2])];
    });
    out.channel = fact.channel;
    out.p_yhat = fact.p_yhat;
    return out;
}

// --- joint table -------------------------------------------------------------

struct JointPmf::Cache {
    std::mutex mutex;
    std::unordered_map<std::uint32_t, double> entropy;
};

JointPmf::JointPmf(AlphabetSpec alphabet, std::vector<double> probs)
    : alphabet_(alphabet), probs_(std::move(probs)), cache_(std::make_shared<Cache>()) {
    if (probs_.size() != alphabet_.cells()) {
        throw std::invalid_argument("joint table size does not match the alphabet");
    }
    for (double p : probs_) {
        if (!(p >= 0.0)) {
            throw MalformedKernel("joint table has a negative entry");
        }
    }
    if (std::abs(total_mass() - 1.0) > kMassTolerance) {
        throw MalformedKernel("joint table mass is " + std::to_string(total_mass()));
    }
}

double JointPmf::total_mass() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

std::vector<double> JointPmf::marginal(DmVarSet vars) const {
    std::array<std::size_t, kDmVarCount> sub_stride{};
    std::size_t sub_cells = 1;
    for (int v = kDmVarCount; v-- > 0;) {
        if (vars.contains(static_cast<DmVar>(v))) {
            sub_stride[static_cast<std::size_t>(v)] = sub_cells;
            sub_cells *= static_cast<std::size_t>(alphabet_.sizes[static_cast<std::size_t>(v)]);
        }
    }
    std::vector<double> out(sub_cells, 0.0);
    std::array<int, kDmVarCount> digits{};
    std::size_t sub = 0;
    for (double p : probs_) {
        out[sub] += p;
        for (std::size_t v = kDmVarCount; v-- > 0;) {
            if (++digits[v] < alphabet_.sizes[v]) {
                sub += sub_stride[v];
                break;
            }
            sub -= static_cast<std::size_t>(digits[v] - 1) * sub_stride[v];
            digits[v] = 0;
        }
    }
    return out;
}

double JointPmf::entropy(DmVarSet vars) const {
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->entropy.find(vars.bits()); it != cache_->entropy.end()) {
            return it->second;
        }
    }
    double h = 0.0;
    for (double p : marginal(vars)) {
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    std::lock_guard lock(cache_->mutex);
    cache_->entropy.emplace(vars.bits(), h);
    return h;
}

JointPmf build_joint(const DmFactorization& fact) {
    fact.validate();
    const auto& a = fact.alphabet;
    const std::size_t cells = a.cells();
    std::vector<double> probs(cells);

    std::array<int, kDmVarCount> d{};
    auto at = [&d](DmVar v) { return d[var_index(v)]; };
    using enum DmVar;
    for (std::size_t i = 0; i < cells; ++i) {
        const double p = fact.p_state.at({at(S), at(S1), at(S2)}) *
                         fact.p_k2.at({at(S2), at(K2)}) *
                         fact.p_q2.at({at(K2), at(S2), at(Q2)}) *
                         fact.p_x2.at({at(Q2), at(K2), at(S2), at(X2)}) *
                         fact.p_t1t2.at({at(S1), at(T1), at(T2)}) *
                         fact.p_x1.at({at(T1), at(T2), at(S1), at(X1)}) *
                         fact.channel.at({at(X1), at(X2), at(S), at(Y2), at(Y3)}) *
                         fact.p_yhat.at({at(Y2), at(Q2), at(K2), at(S2), at(T2), at(YHAT2)});
        probs[i] = p;
        for (std::size_t v = kDmVarCount; v-- > 0;) {
            if (++d[v] < a.sizes[v]) break;
            d[v] = 0;
        }
    }
    return JointPmf(a, std::move(probs));
}

JointPmf build_joint(const CausalFactorization& fact) { return build_joint(lift(fact)); }

double pmf_conditional_mi(const JointPmf& joint, DmVarSet a, DmVarSet b, DmVarSet c) {
    if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) {
        throw std::invalid_argument("pmf_conditional_mi requires disjoint variable sets");
    }
    if (a.empty() || b.empty()) {
        return 0.0;
    }
    const double value = joint.entropy(a | c) + joint.entropy(b | c) - joint.entropy(c) - joint.entropy(a | b | c);
    return std::max(0.0, value);
}

// --- region evaluation ---------------------------------------------------------

region::MIValues mi_values_theorem1(const JointPmf& joint) {
    using enum DmVar;
    const DmVarSet k2q2{K2, Q2};
    const DmVarSet relay_obs{Y2, S2, T2};
    region::MIValues mi;
    mi.i_t1_out = pmf_conditional_mi(joint, {T1}, {YHAT2, Y3}, k2q2);
    mi.i_t1_s = pmf_conditional_mi(joint, {T1}, {S1});
    mi.i_t2_relay = pmf_conditional_mi(joint, {T2}, {Y2, S2}, k2q2);
    mi.i_t2_s = pmf_conditional_mi(joint, {T2}, {S1});
    mi.i_t1_t2_s = pmf_conditional_mi(joint, {T1}, {T2}, {S1});
    mi.i_k2_y3 = pmf_conditional_mi(joint, {K2}, {Y3});
    mi.i_k2_s2 = pmf_conditional_mi(joint, {K2}, {S2});
    mi.i_q2_y3 = pmf_conditional_mi(joint, {Q2}, {Y3}, {K2});
    mi.i_q2_s2 = pmf_conditional_mi(joint, {Q2}, {S2}, {K2});
    mi.i_yhat_src = pmf_conditional_mi(joint, {YHAT2}, relay_obs, k2q2);
    mi.i_yhat_y3 = pmf_conditional_mi(joint, {YHAT2}, {Y3}, k2q2);
    mi.i_yhat_cond_y3 = pmf_conditional_mi(joint, {YHAT2}, relay_obs, k2q2 | DmVarSet{Y3});
    return mi;
}

region::MIValues mi_values_theorem2(const JointPmf& joint) {
    using enum DmVar;
    region::MIValues mi = mi_values_theorem1(joint);
    mi.i_t1_s = 0.0;
    mi.i_t2_s = 0.0;
    mi.i_k2_s2 = 0.0;
    mi.i_q2_s2 = 0.0;
    mi.i_t1_t2_s = pmf_conditional_mi(joint, {T1}, {T2});
    return mi;
}

region::RateBounds evaluate_theorem1(const DmFactorization& fact) {
    return region::bounds_from_mi(mi_values_theorem1(build_joint(fact)));
}

region::RateBounds evaluate_theorem2(const CausalFactorization& fact) {
    return region::bounds_from_mi(mi_values_theorem2(build_joint(fact)));
}

bool causal_subset_check(const CausalFactorization& fact) {
    const auto causal = evaluate_theorem2(fact);
    const auto lifted = evaluate_theorem1(lift(fact));
    const double tol = kDominanceTolerance;
    return lifted.r13_max >= causal.r13_max - tol && lifted.r12_max >= causal.r12_max - tol &&
           lifted.r13_plus_r12_max >= causal.r13_plus_r12_max - tol && lifted.r23_max >= causal.r23_max - tol &&
           (lifted.feasible || !causal.feasible);
}

}  // namespace sdrcpm::dm
