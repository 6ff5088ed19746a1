#include "sdrcpm/frontier.hpp"

#include "sdrcpm/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

namespace sdrcpm::frontier {

using gauss::PowerConfig;
using gauss::SchemeParams;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kChunk = 2048;

// Axis order of the cell index, slowest first.
struct AxisTable {
    std::array<std::vector<double>, 8> values;

    explicit AxisTable(const GridSpec& g)
        : values{g.rho.values(),     g.gamma.values(), g.alpha1.values(), g.alpha2.values(),
                 g.rho_u1s.values(), g.theta.values(), g.beta.values(),   g.f.values()} {}

    [[nodiscard]] std::size_t cells() const {
        std::size_t n = 1;
        for (const auto& v : values) {
            n *= v.size();
        }
        return n;
    }

    [[nodiscard]] SchemeParams params(std::size_t index, double rho_u2s) const {
        std::array<double, 8> x{};
        for (std::size_t a = values.size(); a-- > 0;) {
            const auto& v = values[a];
            x[a] = v[index % v.size()];
            index /= v.size();
        }
        SchemeParams p;
        p.rho = x[0];
        p.gamma = x[1];
        p.alpha1 = x[2];
        p.alpha2 = x[3];
        p.rho_u1s = x[4];
        p.rho_u2s = rho_u2s;
        p.theta = x[5];
        p.beta = x[6];
        p.f = x[7];
        return p;
    }
};

unsigned resolve_workers(unsigned workers) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    return workers;
}

// Runs body(begin, end, worker) over [0, count) in chunks. Chunk assignment is
// dynamic, so callers must reduce per-worker results order-independently.
template <class Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body) {
    workers = resolve_workers(workers);
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(chunks, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&](unsigned worker) {
        try {
            for (std::size_t c = next++; c < chunks; c = next++) {
                const std::size_t begin = c * kChunk;
                body(begin, std::min(count, begin + kChunk), worker);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = chunks;
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

struct Candidate {
    double value = kNegInf;
    double tie = kNegInf;
    std::size_t index = kNoIndex;
    SchemeParams params;
    region::RateBounds bounds;

    [[nodiscard]] bool beats(const Candidate& other) const {
        if (value != other.value) {
            return value > other.value;
        }
        if (tie != other.tie) {
            return tie > other.tie;
        }
        return index < other.index;
    }
    [[nodiscard]] bool empty() const { return index == kNoIndex; }
};

void offer(Candidate& slot, const Candidate& c) {
    if (c.beats(slot)) {
        slot = c;
    }
}

double r13_given_r12(const region::RateBounds& b, double r12) {
    return std::max(0.0, std::min(b.r13_max, b.r13_plus_r12_max - r12));
}

std::string format_bound(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

bool usable(const CellResult& cell) { return cell.valid && cell.bounds.feasible; }

}  // namespace

void Axis::validate(const std::string& name) const {
    if (!std::isfinite(min) || !std::isfinite(max)) {
        throw ConfigError(name + ": bounds must be finite");
    }
    if (steps < 1) {
        throw ConfigError(name + ": steps must be at least 1");
    }
    if (max < min) {
        throw ConfigError(name + ": max must not be below min");
    }
    if (steps == 1 && max != min) {
        throw ConfigError(name + ": a single step needs min == max");
    }
}

std::vector<double> Axis::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(steps, 1)));
    if (steps <= 1) {
        out.push_back(min);
        return out;
    }
    for (int i = 0; i < steps; ++i) {
        // Endpoints exactly, interior points by linear interpolation.
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        out.push_back(i == steps - 1 ? max : min + (max - min) * t);
    }
    return out;
}

void GridSpec::validate() const {
    auto within = [](const Axis& a, const std::string& name, double lo, double hi) {
        a.validate(name);
        if (a.min < lo || a.max > hi) {
            throw ConfigError(name + ": must lie in [" + format_bound(lo) + ", " + format_bound(hi) + "]");
        }
    };
    within(rho, "grid.rho", -1.0, 1.0);
    within(gamma, "grid.gamma", 0.0, 1.0);
    alpha1.validate("grid.alpha1");
    alpha2.validate("grid.alpha2");
    within(rho_u1s, "grid.rho_u1s", -1.0, 1.0);
    within(theta, "grid.theta", 0.0, 1.0);
    within(beta, "grid.beta", 0.0, 1.0);
    f.validate("grid.f");
    if (!std::isfinite(rho_u2s) || rho_u2s < -1.0 || rho_u2s > 1.0) {
        throw ConfigError("grid.rho_u2s: must lie in [-1, 1]");
    }
}

std::size_t GridSpec::cells() const { return AxisTable(*this).cells(); }

GridSpec GridSpec::with_theta(double value) const {
    GridSpec g = *this;
    g.theta = Axis{value, value, 1};
    return g;
}

CellResult evaluate_cell(const PowerConfig& power, const SchemeParams& params) {
    CellResult cell;
    cell.params = params;
    try {
        cell.params.nhat = region::solve_nhat(power, params);
        cell.bounds = region::evaluate_gaussian_region(power, cell.params);
        cell.valid = true;
    } catch (const ParameterInfeasible& e) {
        cell.error = std::string("parameter: ") + e.what();
    } catch (const NumericalConditioning& e) {
        cell.error = std::string("conditioning: ") + e.what();
    } catch (const ConstraintInfeasible& e) {
        cell.error = std::string("constraint: ") + e.what();
    }
    return cell;
}

std::vector<CellResult> sweep(const PowerConfig& power, const GridSpec& grid, unsigned workers) {
    power.validate();
    grid.validate();
    const AxisTable table(grid);
    std::vector<CellResult> out(table.cells());
    parallel_chunks(out.size(), workers, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = evaluate_cell(power, table.params(i, grid.rho_u2s));
            out[i].index = i;
        }
    });
    return out;
}

std::vector<CellResult> sweep(const PowerConfig& power, const GridSpec& grid, double theta, unsigned workers) {
    return sweep(power, grid.with_theta(theta), workers);
}

std::vector<double> default_targets(const PowerConfig& power, int count) {
    power.validate();
    if (count < 2) {
        throw ConfigError("target count must be at least 2");
    }
    const double cap = 0.5 * std::log2(1.0 + power.p1 / power.n2);
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        t.push_back(cap * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return t;
}

Objective r13_at_target(double r12_target) {
    return [r12_target](const region::RateBounds& b) {
        if (!b.feasible || b.r12_max < r12_target) {
            return kNegInf;
        }
        return r13_given_r12(b, r12_target);
    };
}

RefineResult refine(const PowerConfig& power, const SchemeParams& start, const Objective& objective,
                    const RefineOptions& options) {
    struct Coord {
        double SchemeParams::*member;
        double lo;
        double hi;
        bool free;
    };
    const std::array<Coord, 7> coords{{
        {&SchemeParams::rho, -1.0, 1.0, options.free_rho},
        {&SchemeParams::gamma, 0.0, 1.0, options.free_gamma},
        {&SchemeParams::alpha1, -2.0, 2.0, true},
        {&SchemeParams::alpha2, -2.0, 2.0, true},
        {&SchemeParams::rho_u1s, -1.0, 1.0, true},
        {&SchemeParams::beta, 0.0, 1.0, true},
        {&SchemeParams::f, -1.0, 1.0, true},
    }};

    RefineResult best;
    auto score = [&](const SchemeParams& p, region::RateBounds& bounds, double& nhat) {
        ++best.evaluations;
        const CellResult cell = evaluate_cell(power, p);
        if (!usable(cell)) {
            return kNegInf;
        }
        bounds = cell.bounds;
        nhat = cell.params.nhat;
        return objective(cell.bounds);
    };

    best.params = start;
    best.score = score(start, best.bounds, best.params.nhat);
    double step = options.initial_step;
    while (step >= options.min_step && best.evaluations < options.max_evaluations) {
        bool improved = false;
        for (const auto& c : coords) {
            if (!c.free) {
                continue;
            }
            for (double dir : {1.0, -1.0}) {
                SchemeParams trial = best.params;
                trial.*(c.member) = std::clamp(trial.*(c.member) + dir * step * (c.hi - c.lo), c.lo, c.hi);
                if (trial.*(c.member) == best.params.*(c.member)) {
                    continue;
                }
                region::RateBounds bounds;
                const double s = score(trial, bounds, trial.nhat);
                if (s > best.score + 1e-12) {
                    best.params = trial;
                    best.bounds = bounds;
                    best.score = s;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            step *= 0.5;
        }
    }
    return best;
}

FrontierCurve tradeoff_curve(const PowerConfig& power, double theta, const GridSpec& grid,
                             const TradeoffOptions& options) {
    power.validate();
    const GridSpec g = grid.with_theta(theta);
    g.validate();
    std::vector<double> targets = options.targets.empty() ? default_targets(power) : options.targets;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!std::isfinite(targets[i]) || targets[i] < 0.0) {
            throw ConfigError("targets: must be finite and nonnegative");
        }
        if (i > 0 && targets[i] <= targets[i - 1]) {
            throw ConfigError("targets: must be strictly increasing");
        }
    }

    const AxisTable table(g);
    const unsigned workers = resolve_workers(options.workers);
    struct Accumulator {
        std::vector<Candidate> per_target;
        Candidate endpoint;
        std::size_t feasible = 0;
        std::size_t invalid = 0;
    };
    std::vector<Accumulator> acc(workers);
    for (auto& a : acc) {
        a.per_target.resize(targets.size());
    }

    const std::size_t cells = table.cells();
    parallel_chunks(cells, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        Accumulator& a = acc[w];
        for (std::size_t i = begin; i < end; ++i) {
            const CellResult cell = evaluate_cell(power, table.params(i, g.rho_u2s));
            if (!cell.valid) {
                ++a.invalid;
                continue;
            }
            if (!cell.bounds.feasible) {
                continue;
            }
            ++a.feasible;
            const auto& b = cell.bounds;
            Candidate c{b.r12_max, r13_given_r12(b, b.r12_max), i, cell.params, b};
            offer(a.endpoint, c);
            for (std::size_t t = 0; t < targets.size() && targets[t] <= b.r12_max; ++t) {
                c.value = r13_given_r12(b, targets[t]);
                c.tie = 0.0;
                offer(a.per_target[t], c);
            }
        }
    });

    FrontierCurve curve;
    curve.theta = theta;
    curve.cells = cells;
    Accumulator merged;
    merged.per_target.resize(targets.size());
    for (const auto& a : acc) {
        curve.feasible_cells += a.feasible;
        curve.invalid_cells += a.invalid;
        offer(merged.endpoint, a.endpoint);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            offer(merged.per_target[t], a.per_target[t]);
        }
    }
    if (merged.endpoint.empty()) {
        curve.omitted_targets = targets;
        return curve;
    }

    struct Entry {
        double r12;
        Candidate best;
    };
    std::vector<Entry> entries;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (merged.per_target[t].empty()) {
            curve.omitted_targets.push_back(targets[t]);
        } else {
            entries.push_back({targets[t], merged.per_target[t]});
        }
    }
    Candidate end = merged.endpoint;

    if (options.refine) {
        for (auto& e : entries) {
            const auto r = refine(power, e.best.params, r13_at_target(e.r12));
            if (r.score > e.best.value) {
                e.best.value = r.score;
                e.best.params = r.params;
                e.best.bounds = r.bounds;
            }
        }
        const auto r = refine(power, end.params, [](const region::RateBounds& b) {
            return b.feasible ? b.r12_max : kNegInf;
        });
        if (r.score > end.value) {
            end.value = r.score;
            end.params = r.params;
            end.bounds = r.bounds;
        }
        // A scheme found for a larger target also serves every smaller one.
        std::vector<Candidate> pool;
        for (const auto& e : entries) {
            pool.push_back(e.best);
        }
        pool.push_back(end);
        for (auto& e : entries) {
            for (const auto& c : pool) {
                if (c.bounds.r12_max >= e.r12) {
                    const double v = r13_given_r12(c.bounds, e.r12);
                    if (v > e.best.value) {
                        e.best.value = v;
                        e.best.params = c.params;
                        e.best.bounds = c.bounds;
                    }
                }
            }
        }
    }

    for (const auto& e : entries) {
        curve.points.push_back({e.r12, e.best.value, e.best.params, e.best.bounds});
    }
    const double end_r12 = end.bounds.r12_max;
    if (curve.points.empty() || end_r12 > curve.points.back().r12) {
        curve.points.push_back({end_r12, r13_given_r12(end.bounds, end_r12), end.params, end.bounds});
    }
    return curve;
}

SdrcResult sdrc_scalar(const PowerConfig& power, const GridSpec& grid, unsigned workers) {
    power.validate();
    GridSpec g = grid.with_theta(0.0);
    g.gamma = Axis{0.0, 0.0, 1};
    g.rho = Axis{0.0, 0.0, 1};
    g.validate();
    const AxisTable table(g);
    const std::size_t cells = table.cells();

    std::vector<Candidate> best(resolve_workers(workers));
    parallel_chunks(cells, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        for (std::size_t i = begin; i < end; ++i) {
            const CellResult cell = evaluate_cell(power, table.params(i, g.rho_u2s));
            if (usable(cell)) {
                offer(best[w], Candidate{cell.bounds.r13_max, 0.0, i, cell.params, cell.bounds});
            }
        }
    });
    Candidate top;
    for (const auto& c : best) {
        offer(top, c);
    }

    SdrcResult out;
    out.cells = cells;
    if (top.empty()) {
        return out;
    }
    RefineOptions ro;
    ro.free_gamma = false;
    ro.free_rho = false;
    const auto r = refine(power, top.params, [](const region::RateBounds& b) {
        return b.feasible ? b.r13_max : kNegInf;
    }, ro);
    out.rate = std::max(top.value, r.score);
    out.params = r.score > top.value ? r.params : top.params;
    return out;
}

}  // namespace sdrcpm::frontier
