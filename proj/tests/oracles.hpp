#pragma once

// Reference computations used by the tests. Nothing here calls into the
// library's numerical code; inputs are plain matrices, kernels and numbers.

#include "sdrcpm/dm_core.hpp"
#include "sdrcpm/region_eval.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace oracle {

inline double awgn(double p, double n) { return 0.5 * std::log2(1.0 + p / n); }

inline double h2(double p) {
    if (p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Covariance of the scheme variables by explicit bilinear expansion. Each
// variable is written out as its coefficients on (S, U1, U2, V, X2', Z2, Z3, Zhat).
struct SchemeCovariance {
    std::map<std::string, std::vector<double>> coeff;
    Eigen::Matrix<double, 8, 8> base = Eigen::Matrix<double, 8, 8>::Zero();

    SchemeCovariance(double p1, double p2, double n2, double n3, double q, double rho, double gamma, double a1,
                     double a2, double rus1, double rus2, double theta, double beta, double f, double nhat) {
        const double pu2 = gamma * p1;
        // Solve Pu1 + Pu2 + 2 rho sqrt(Pu1 Pu2) = P1 as a quadratic in sqrt(Pu1).
        const double b = 2.0 * rho * std::sqrt(pu2);
        const double c = pu2 - p1;
        const double r = (-b + std::sqrt(b * b - 4.0 * c)) / 2.0;
        const double pu1 = r * r;
        const double sd[8] = {std::sqrt(q), std::sqrt(pu1), std::sqrt(pu2), std::sqrt(theta * p2),
                              std::sqrt((1 - theta) * p2), std::sqrt(n2), std::sqrt(n3), std::sqrt(nhat)};
        Eigen::Matrix<double, 8, 8> corr = Eigen::Matrix<double, 8, 8>::Identity();
        corr(0, 1) = corr(1, 0) = rus1;
        corr(0, 2) = corr(2, 0) = rus2;
        corr(1, 2) = corr(2, 1) = rho;
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                base(i, j) = corr(i, j) * sd[i] * sd[j];
            }
        }
        auto unit = [](int i) {
            std::vector<double> v(8, 0.0);
            v[static_cast<std::size_t>(i)] = 1.0;
            return v;
        };
        auto add = [](std::vector<std::pair<double, std::vector<double>>> terms) {
            std::vector<double> v(8, 0.0);
            for (const auto& [w, t] : terms) {
                for (int i = 0; i < 8; ++i) {
                    v[static_cast<std::size_t>(i)] += w * t[static_cast<std::size_t>(i)];
                }
            }
            return v;
        };
        const auto S = unit(0), U1 = unit(1), U2 = unit(2), V = unit(3), X2p = unit(4), Z2 = unit(5), Z3 = unit(6),
                   Zh = unit(7);
        coeff["S"] = S;
        coeff["U1"] = U1;
        coeff["U2"] = U2;
        coeff["V"] = V;
        coeff["X1"] = add({{1, U1}, {1, U2}});
        coeff["X2"] = add({{1, V}, {1, X2p}});
        coeff["Y2"] = add({{1, U1}, {1, U2}, {1, Z2}, {1, S}});
        coeff["Y3"] = add({{1, U1}, {1, U2}, {1, V}, {1, X2p}, {1, Z3}, {1, S}});
        coeff["T1"] = add({{1, U1}, {a1, S}});
        coeff["T2"] = add({{1, U2}, {a2, S}});
        coeff["YHAT2"] = add({{beta, coeff["Y2"]}, {f, coeff["T2"]}, {1, Zh}});
    }

    double cov(const std::string& a, const std::string& b) const {
        const auto& x = coeff.at(a);
        const auto& y = coeff.at(b);
        double s = 0.0;
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                s += x[static_cast<std::size_t>(i)] * base(i, j) * y[static_cast<std::size_t>(j)];
            }
        }
        return s;
    }

    Eigen::MatrixXd block(const std::vector<std::string>& names) const {
        const auto n = static_cast<Eigen::Index>(names.size());
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                m(i, j) = cov(names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]);
            }
        }
        return m;
    }

    // I(A;B|C) by conditional covariances; all blocks must be nonsingular.
    double mi(const std::vector<std::string>& a, const std::vector<std::string>& b,
              const std::vector<std::string>& c = {}) const {
        std::vector<std::string> ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        auto conditional = [&](const std::vector<std::string>& x) {
            Eigen::MatrixXd sxx = block(x);
            if (c.empty()) {
                return sxx;
            }
            Eigen::MatrixXd sxc(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(c.size()));
            for (std::size_t i = 0; i < x.size(); ++i) {
                for (std::size_t j = 0; j < c.size(); ++j) {
                    sxc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov(x[i], c[j]);
                }
            }
            const Eigen::MatrixXd scc = block(c);
            return Eigen::MatrixXd(sxx - sxc * scc.ldlt().solve(sxc.transpose()));
        };
        const double la = std::log2(conditional(a).determinant());
        const double lb = std::log2(conditional(b).determinant());
        const double lab = std::log2(conditional(ab).determinant());
        return 0.5 * (la + lb - lab);
    }

    // Var(x | given) by Schur complement.
    double conditional_variance(const std::string& x, const std::vector<std::string>& given) const {
        Eigen::VectorXd sxc(static_cast<Eigen::Index>(given.size()));
        for (std::size_t j = 0; j < given.size(); ++j) {
            sxc(static_cast<Eigen::Index>(j)) = cov(x, given[j]);
        }
        const Eigen::MatrixXd scc = block(given);
        return cov(x, x) - sxc.dot(scc.completeOrthogonalDecomposition().solve(sxc));
    }
};

// Direct membership in the rate region from the unclamped right-hand sides.
// +1 inside with every slack > margin, -1 outside with some violation > margin,
// 0 when the point is within margin of a face.
inline int direct_membership(const sdrcpm::region::MIValues& m, const sdrcpm::region::RatePoint& p,
                             double margin) {
    const double slack[] = {
        m.i_t1_out - m.i_t1_s - p.r13,
        m.i_t2_relay - m.i_t2_s - p.r12,
        m.i_t1_out + m.i_t2_relay - m.i_t1_s - m.i_t2_s - m.i_t1_t2_s - p.r13 - p.r12,
        m.i_k2_y3 - m.i_k2_s2 - p.r23,
        m.i_q2_y3 - m.i_q2_s2 - m.i_yhat_cond_y3,
        p.r12,
        p.r13,
        p.r23,
    };
    bool inside = true;
    for (double s : slack) {
        if (s < -margin) {
            return -1;
        }
        if (s <= margin) {
            inside = false;
        }
    }
    return inside ? 1 : 0;
}

// Information terms with the chain-rule structure of the coding scheme:
// conditioning on Y3 splits the compression term exactly.
inline sdrcpm::region::MIValues random_mi_values(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::bernoulli_distribution zero(0.15);
    auto draw = [&] { return zero(rng) ? 0.0 : u(rng); };
    sdrcpm::region::MIValues m;
    m.i_t1_out = draw();
    m.i_t1_s = draw() * 0.5;
    m.i_t2_relay = draw();
    m.i_t2_s = draw() * 0.5;
    m.i_t1_t2_s = draw() * 0.3;
    m.i_k2_y3 = draw();
    m.i_k2_s2 = draw() * 0.3;
    m.i_q2_y3 = draw();
    m.i_q2_s2 = draw() * 0.3;
    m.i_yhat_src = draw();
    m.i_yhat_y3 = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * m.i_yhat_src;
    m.i_yhat_cond_y3 = m.i_yhat_src - m.i_yhat_y3;
    return m;
}

// Joint table by brute-force enumeration of all twelve variables.
inline std::vector<double> brute_joint(const sdrcpm::dm::DmFactorization& f) {
    using sdrcpm::dm::DmVar;
    const auto& a = f.alphabet;
    std::array<int, 12> n{};
    for (int i = 0; i < 12; ++i) {
        n[static_cast<std::size_t>(i)] = a.size(static_cast<DmVar>(i));
    }
    std::size_t total = 1;
    for (int s : n) {
        total *= static_cast<std::size_t>(s);
    }
    std::vector<double> out(total, 0.0);
    std::array<int, 12> d{};
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int i = 11; i >= 0; --i) {
            d[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(n[static_cast<std::size_t>(i)]));
            rest /= static_cast<std::size_t>(n[static_cast<std::size_t>(i)]);
        }
        // Order: S S1 S2 K2 Q2 T1 T2 X1 X2 YHAT2 Y2 Y3
        const int s = d[0], s1 = d[1], s2 = d[2], k2 = d[3], q2 = d[4], t1 = d[5], t2 = d[6], x1 = d[7],
                  x2 = d[8], yh = d[9], y2 = d[10], y3 = d[11];
        out[idx] = f.p_state.at({s, s1, s2}) * f.p_k2.at({s2, k2}) * f.p_q2.at({k2, s2, q2}) *
                   f.p_x2.at({q2, k2, s2, x2}) * f.p_t1t2.at({s1, t1, t2}) * f.p_x1.at({t1, t2, s1, x1}) *
                   f.channel.at({x1, x2, s, y2, y3}) * f.p_yhat.at({y2, q2, k2, s2, t2, yh});
    }
    return out;
}

// Small named-variable distribution, evaluated by summing over a flat table.
class Enumerated {
public:
    Enumerated(std::vector<std::string> names, std::vector<int> sizes,
               const std::function<double(const std::vector<int>&)>& prob)
        : names_(std::move(names)), sizes_(std::move(sizes)) {
        std::size_t total = 1;
        for (int s : sizes_) {
            total *= static_cast<std::size_t>(s);
        }
        table_.resize(total);
        std::vector<int> d(sizes_.size());
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rest = idx;
            for (std::size_t i = sizes_.size(); i-- > 0;) {
                d[i] = static_cast<int>(rest % static_cast<std::size_t>(sizes_[i]));
                rest /= static_cast<std::size_t>(sizes_[i]);
            }
            table_[idx] = prob(d);
        }
    }

    double entropy(const std::vector<std::string>& vars) const {
        std::vector<std::size_t> pos;
        for (const auto& v : vars) {
            for (std::size_t i = 0; i < names_.size(); ++i) {
                if (names_[i] == v) {
                    pos.push_back(i);
                }
            }
        }
        std::map<std::vector<int>, double> m;
        std::vector<int> d(sizes_.size());
        for (std::size_t idx = 0; idx < table_.size(); ++idx) {
            std::size_t rest = idx;
            for (std::size_t i = sizes_.size(); i-- > 0;) {
                d[i] = static_cast<int>(rest % static_cast<std::size_t>(sizes_[i]));
                rest /= static_cast<std::size_t>(sizes_[i]);
            }
            std::vector<int> key;
            for (auto p : pos) {
                key.push_back(d[p]);
            }
            m[key] += table_[idx];
        }
        double h = 0.0;
        for (const auto& [k, p] : m) {
            if (p > 0) {
                h -= p * std::log2(p);
            }
        }
        return h;
    }

    // I(A;B|C) = H(A,C) - H(C) - H(A,B,C) + H(B,C)
    double mi(std::vector<std::string> a, std::vector<std::string> b, std::vector<std::string> c = {}) const {
        auto cat = [](std::vector<std::string> x, const std::vector<std::string>& y) {
            x.insert(x.end(), y.begin(), y.end());
            return x;
        };
        return entropy(cat(a, c)) - entropy(c) - entropy(cat(cat(a, b), c)) + entropy(cat(b, c));
    }

private:
    std::vector<std::string> names_;
    std::vector<int> sizes_;
    std::vector<double> table_;
};

// Rate bounds straight from information terms, with clamping at zero.
struct Bounds {
    double r13, r12, sum, r23;
};

inline Bounds bounds(double t1_out, double t1_s, double t2_relay, double t2_s, double t1_t2_s, double k2_y3,
                     double k2_s2) {
    auto c = [](double x) { return x < 0 ? 0.0 : x; };
    return {c(t1_out - t1_s), c(t2_relay - t2_s), c(t1_out + t2_relay - t1_s - t2_s - t1_t2_s), c(k2_y3 - k2_s2)};
}

}  // namespace oracle
