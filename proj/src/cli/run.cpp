#include "sdrcpm/cli.hpp"

#include "sdrcpm/dm_core.hpp"
#include "sdrcpm/dm_reductions.hpp"
#include "sdrcpm/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace sdrcpm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kParamHeader =
    "rho,gamma,alpha1,alpha2,rho_u1s,theta,beta,f,nhat,r13_max,r12_max,sum_max,r23_max,feasible";
constexpr const char* kBoundsHeader = "r13_max,r12_max,sum_max,r23_max,feasible,clamped";

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::string& header) : path_(path), out_(path) {
        if (!out_) {
            throw std::runtime_error(path.string() + ": cannot open for writing");
        }
        out_ << header << '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out_ << (i ? "," : "") << cells[i];
        }
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (!out_) {
            throw std::runtime_error(path_.string() + ": write failed");
        }
    }

private:
    fs::path path_;
    std::ofstream out_;
};

std::string quoted(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

void append_params(std::vector<std::string>& row, const gauss::SchemeParams& p, const region::RateBounds& b) {
    for (double x : {p.rho, p.gamma, p.alpha1, p.alpha2, p.rho_u1s, p.theta, p.beta, p.f, p.nhat, b.r13_max,
                     b.r12_max, b.r13_plus_r12_max, b.r23_max}) {
        row.push_back(format_number(x));
    }
    row.push_back(b.feasible ? "1" : "0");
}

void append_bounds(std::vector<std::string>& row, const region::RateBounds& b) {
    for (double x : {b.r13_max, b.r12_max, b.r13_plus_r12_max, b.r23_max}) {
        row.push_back(format_number(x));
    }
    row.push_back(b.feasible ? "1" : "0");
    row.push_back(b.clamped ? "1" : "0");
}

std::string frontier_file(double theta) { return "frontier_theta_" + format_number(theta) + ".csv"; }

json run_gaussian_region(const ExperimentConfig& c, const fs::path& dir, std::ostream& log) {
    const auto power = c.power_config();
    CsvFile results(dir / "results.csv", kParamHeader);
    CsvFile errors(dir / "errors.csv", "rho,gamma,alpha1,alpha2,rho_u1s,theta,beta,f,error");
    std::size_t cells = 0;
    std::size_t invalid = 0;
    for (double theta : c.theta) {
        log << "sweeping theta = " << format_number(theta) << '\n';
        for (const auto& cell : frontier::sweep(power, c.grid, theta, c.workers)) {
            ++cells;
            std::vector<std::string> row;
            if (cell.valid) {
                append_params(row, cell.params, cell.bounds);
                results.row(row);
                continue;
            }
            ++invalid;
            const auto& p = cell.params;
            for (double x : {p.rho, p.gamma, p.alpha1, p.alpha2, p.rho_u1s, p.theta, p.beta, p.f}) {
                row.push_back(format_number(x));
            }
            row.push_back(quoted(cell.error));
            errors.row(row);
        }
    }
    results.close();
    errors.close();
    return json{{"cells", cells}, {"invalid_cells", invalid}};
}

void write_plot_script(const fs::path& dir, const std::vector<double>& thetas) {
    std::ofstream out(dir / "tradeoff.gp");
    if (!out) {
        throw std::runtime_error((dir / "tradeoff.gp").string() + ": cannot open for writing");
    }
    out << "# gnuplot tradeoff.gp  (run inside the output directory)\n"
        << "set terminal pngcairo size 800,600\n"
        << "set output 'tradeoff.png'\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 'R_{12} (bits/use)'\n"
        << "set ylabel 'R_{13} (bits/use)'\n"
        << "set grid\n"
        << "set key top right\n"
        << "plot \\\n";
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        out << "    '" << frontier_file(thetas[i]) << "' using 1:2 with linespoints title 'theta = "
            << format_number(thetas[i]) << "'" << (i + 1 < thetas.size() ? ", \\\n" : "\n");
    }
    if (!out) {
        throw std::runtime_error((dir / "tradeoff.gp").string() + ": write failed");
    }
}

json run_tradeoff(const ExperimentConfig& c, const fs::path& dir, std::ostream& log) {
    const auto power = c.power_config();
    frontier::TradeoffOptions options;
    options.targets = c.targets.empty() ? frontier::default_targets(power, c.target_count) : c.targets;
    options.workers = c.workers;
    options.refine = c.refine;

    const std::string header = std::string("r12,r13,") + kParamHeader;
    CsvFile results(dir / "results.csv", header);
    CsvFile errors(dir / "errors.csv", "theta,r12_target,error");
    json summary = json::array();
    for (double theta : c.theta) {
        log << "frontier theta = " << format_number(theta) << '\n';
        const auto curve = frontier::tradeoff_curve(power, theta, c.grid, options);
        CsvFile file(dir / frontier_file(theta), header);
        for (const auto& p : curve.points) {
            std::vector<std::string> row{format_number(p.r12), format_number(p.r13)};
            append_params(row, p.params, p.bounds);
            file.row(row);
            results.row(row);
        }
        file.close();
        for (double t : curve.omitted_targets) {
            log << "notice: theta = " << format_number(theta) << ", no feasible cell reaches r12 = "
                << format_number(t) << "; point omitted\n";
            errors.row({format_number(theta), format_number(t), quoted("no feasible cell reaches this target")});
        }
        summary.push_back(json{{"theta", theta},
                               {"cells", curve.cells},
                               {"feasible_cells", curve.feasible_cells},
                               {"invalid_cells", curve.invalid_cells},
                               {"points", curve.points.size()}});
    }
    results.close();
    errors.close();
    write_plot_script(dir, c.theta);
    return summary;
}

json run_sdrc(const ExperimentConfig& c, const fs::path& dir, std::ostream& log) {
    const auto power = c.power_config();
    log << "sdrc reduction sweep\n";
    const auto r = frontier::sdrc_scalar(power, c.grid, c.workers);
    CsvFile results(dir / "results.csv", std::string("rate,") + kParamHeader);
    CsvFile errors(dir / "errors.csv", "error");
    const auto cell = frontier::evaluate_cell(power, r.params);
    if (cell.valid && cell.bounds.feasible) {
        std::vector<std::string> row{format_number(r.rate)};
        append_params(row, cell.params, cell.bounds);
        results.row(row);
    } else {
        log << "notice: no feasible cell in the grid\n";
        errors.row({quoted("no feasible cell in the grid")});
    }
    results.close();
    errors.close();
    return json{{"cells", r.cells}, {"rate", r.rate}};
}

// Explicit discrete factorizations from JSON.

using dm::Cpt;
using V = dm::DmVar;

const std::array<std::pair<const char*, dm::DmVar>, dm::kDmVarCount> kDmNames{{
    {"S", dm::DmVar::S},
    {"S1", dm::DmVar::S1},
    {"S2", dm::DmVar::S2},
    {"K2", dm::DmVar::K2},
    {"Q2", dm::DmVar::Q2},
    {"T1", dm::DmVar::T1},
    {"T2", dm::DmVar::T2},
    {"X1", dm::DmVar::X1},
    {"X2", dm::DmVar::X2},
    {"YHAT2", dm::DmVar::YHAT2},
    {"Y2", dm::DmVar::Y2},
    {"Y3", dm::DmVar::Y3},
}};

[[noreturn]] void dm_fail(const std::string& field, const std::string& message) {
    throw ConfigError("dm.factorization" + (field.empty() ? std::string() : "." + field) + ": " + message);
}

dm::AlphabetSpec parse_alphabet(const json& f) {
    dm::AlphabetSpec a;
    if (!f.contains("alphabet") || !f["alphabet"].is_object()) {
        dm_fail("alphabet", "expected an object of alphabet sizes");
    }
    for (const auto& [key, value] : f["alphabet"].items()) {
        bool known = false;
        for (const auto& [name, var] : kDmNames) {
            if (key == name) {
                if (!value.is_number_integer() || value.get<long long>() < 1 || value.get<long long>() > 64) {
                    dm_fail("alphabet." + key, "expected an integer in [1, 64]");
                }
                a.size(var) = value.get<int>();
                known = true;
            }
        }
        if (!known) {
            dm_fail("alphabet." + key, "unknown variable");
        }
    }
    return a;
}

std::vector<int> sizes_of(const dm::AlphabetSpec& a, std::initializer_list<dm::DmVar> vars) {
    std::vector<int> out;
    for (auto v : vars) {
        out.push_back(a.size(v));
    }
    return out;
}

Cpt parse_kernel(const json& f, const char* name, std::vector<int> parents, std::vector<int> children) {
    const std::string field = std::string("kernels.") + name;
    if (!f.contains("kernels") || !f["kernels"].is_object() || !f["kernels"].contains(name)) {
        dm_fail(field, "missing");
    }
    const json& k = f["kernels"][name];
    if (!k.is_array()) {
        dm_fail(field, "expected a flat array of probabilities");
    }
    std::vector<double> probs;
    for (const auto& x : k) {
        if (!x.is_number()) {
            dm_fail(field, "expected numbers only");
        }
        probs.push_back(x.get<double>());
    }
    try {
        return Cpt(std::move(parents), std::move(children), std::move(probs));
    } catch (const std::exception& e) {
        dm_fail(field, e.what());
    }
}

std::vector<int> parse_map(const json& f, const char* name) {
    if (!f.contains(name) || !f[name].is_array()) {
        dm_fail(name, "expected an array of symbol indices");
    }
    std::vector<int> out;
    for (const auto& x : f[name]) {
        if (!x.is_number_integer()) {
            dm_fail(name, "expected integers only");
        }
        out.push_back(x.get<int>());
    }
    return out;
}

dm::DmFactorization parse_noncausal(const json& f) {
    dm::DmFactorization d;
    d.alphabet = parse_alphabet(f);
    const auto& a = d.alphabet;
    d.p_state = parse_kernel(f, "p_state", {}, sizes_of(a, {V::S, V::S1, V::S2}));
    d.p_k2 = parse_kernel(f, "p_k2", sizes_of(a, {V::S2}), sizes_of(a, {V::K2}));
    d.p_q2 = parse_kernel(f, "p_q2", sizes_of(a, {V::K2, V::S2}), sizes_of(a, {V::Q2}));
    d.p_x2 = parse_kernel(f, "p_x2", sizes_of(a, {V::Q2, V::K2, V::S2}), sizes_of(a, {V::X2}));
    d.p_t1t2 = parse_kernel(f, "p_t1t2", sizes_of(a, {V::S1}), sizes_of(a, {V::T1, V::T2}));
    d.p_x1 = parse_kernel(f, "p_x1", sizes_of(a, {V::T1, V::T2, V::S1}), sizes_of(a, {V::X1}));
    d.channel = parse_kernel(f, "channel", sizes_of(a, {V::X1, V::X2, V::S}), sizes_of(a, {V::Y2, V::Y3}));
    d.p_yhat = parse_kernel(f, "p_yhat", sizes_of(a, {V::Y2, V::Q2, V::K2, V::S2, V::T2}), sizes_of(a, {V::YHAT2}));
    try {
        d.validate();
    } catch (const std::exception& e) {
        dm_fail("", e.what());
    }
    return d;
}

dm::CausalFactorization parse_causal(const json& f) {
    dm::CausalFactorization d;
    d.alphabet = parse_alphabet(f);
    const auto& a = d.alphabet;
    d.p_state = parse_kernel(f, "p_state", {}, sizes_of(a, {V::S, V::S1, V::S2}));
    d.p_k2 = parse_kernel(f, "p_k2", {}, sizes_of(a, {V::K2}));
    d.p_q2 = parse_kernel(f, "p_q2", sizes_of(a, {V::K2}), sizes_of(a, {V::Q2}));
    d.p_t1t2 = parse_kernel(f, "p_t1t2", {}, sizes_of(a, {V::T1, V::T2}));
    d.channel = parse_kernel(f, "channel", sizes_of(a, {V::X1, V::X2, V::S}), sizes_of(a, {V::Y2, V::Y3}));
    d.p_yhat = parse_kernel(f, "p_yhat", sizes_of(a, {V::Y2, V::Q2, V::K2, V::S2, V::T2}), sizes_of(a, {V::YHAT2}));
    d.f1 = parse_map(f, "f1");
    d.f2 = parse_map(f, "f2");
    try {
        d.validate();
    } catch (const std::exception& e) {
        dm_fail("", e.what());
    }
    return d;
}

json run_dm_theorem1(const ExperimentConfig& c, const fs::path& dir, std::ostream& log) {
    std::vector<dm::DmFactorization> instances;
    if (!c.dm.factorization.is_null()) {
        instances.push_back(parse_noncausal(c.dm.factorization));
    } else {
        std::mt19937_64 rng(c.dm.seed);
        for (int i = 0; i < c.dm.instances; ++i) {
            instances.push_back(dm::random_factorization(rng, c.dm.alphabet));
        }
    }
    log << "evaluating " << instances.size() << " non-causal instance(s)\n";
    CsvFile results(dir / "results.csv", std::string("instance,") + kBoundsHeader);
    CsvFile errors(dir / "errors.csv", "instance,error");
    for (std::size_t i = 0; i < instances.size(); ++i) {
        try {
            std::vector<std::string> row{std::to_string(i)};
            append_bounds(row, dm::evaluate_theorem1(instances[i]));
            results.row(row);
        } catch (const CapacityExceeded& e) {
            errors.row({std::to_string(i), quoted(e.what())});
        }
    }
    results.close();
    errors.close();
    return json{{"instances", instances.size()}};
}

json run_dm_theorem2(const ExperimentConfig& c, const fs::path& dir, std::ostream& log) {
    std::vector<dm::CausalFactorization> instances;
    if (!c.dm.factorization.is_null()) {
        instances.push_back(parse_causal(c.dm.factorization));
    } else {
        std::mt19937_64 rng(c.dm.seed);
        for (int i = 0; i < c.dm.instances; ++i) {
            instances.push_back(dm::random_causal(rng, c.dm.alphabet));
        }
    }
    log << "evaluating " << instances.size() << " causal instance(s)\n";
    CsvFile results(dir / "results.csv", std::string("instance,") + kBoundsHeader + ",subset_check");
    CsvFile errors(dir / "errors.csv", "instance,error");
    for (std::size_t i = 0; i < instances.size(); ++i) {
        try {
            std::vector<std::string> row{std::to_string(i)};
            append_bounds(row, dm::evaluate_theorem2(instances[i]));
            row.push_back(dm::causal_subset_check(instances[i]) ? "1" : "0");
            results.row(row);
        } catch (const CapacityExceeded& e) {
            errors.row({std::to_string(i), quoted(e.what())});
        }
    }
    results.close();
    errors.close();
    return json{{"instances", instances.size()}};
}

template <class Model>
void reduction_rows(CsvFile& out, const char* name, int instances, std::mt19937_64& rng, int k,
                    double& worst) {
    for (int i = 0; i < instances; ++i) {
        const Model m = Model::random(rng, k);
        const auto general = dm::evaluate_theorem1(m.factorization());
        const auto reduced = m.reduced_bounds();
        const double diff = std::max({std::abs(general.r13_max - reduced.r13_max),
                                      std::abs(general.r12_max - reduced.r12_max),
                                      std::abs(general.r13_plus_r12_max - reduced.r13_plus_r12_max),
                                      std::abs(general.r23_max - reduced.r23_max)});
        worst = std::max(worst, diff);
        std::vector<std::string> row{std::to_string(i), name};
        append_bounds(row, general);
        append_bounds(row, reduced);
        row.push_back(format_number(diff));
        out.row(row);
    }
}

json run_reductions(const ExperimentConfig& c, const fs::path& dir, std::ostream& log) {
    log << "checking reductions on " << c.dm.instances << " instance(s) per model\n";
    CsvFile results(dir / "results.csv",
                    "instance,model,general_r13_max,general_r12_max,general_sum_max,general_r23_max,"
                    "general_feasible,general_clamped,reduced_r13_max,reduced_r12_max,reduced_sum_max,"
                    "reduced_r23_max,reduced_feasible,reduced_clamped,max_abs_diff");
    CsvFile errors(dir / "errors.csv", "instance,model,error");
    std::mt19937_64 rng(c.dm.seed);
    double worst = 0.0;
    reduction_rows<dm::RcpmModel>(results, "rcpm", c.dm.instances, rng, c.dm.alphabet, worst);
    reduction_rows<dm::BcCsitModel>(results, "bc-csit", c.dm.instances, rng, c.dm.alphabet, worst);
    reduction_rows<dm::SdrcSourceModel>(results, "sdrc-source", c.dm.instances, rng, c.dm.alphabet, worst);
    reduction_rows<dm::InformedSourceModel>(results, "informed-source", c.dm.instances, rng, c.dm.alphabet, worst);
    results.close();
    errors.close();
    log << "largest difference: " << format_number(worst) << " bits\n";
    return json{{"instances_per_model", c.dm.instances}, {"max_abs_diff", worst}};
}

}  // namespace

std::string format_number(double x) {
    if (x == 0.0) {
        return "0";  // also folds -0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void run(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    const fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error(dir.string() + ": cannot create output directory: " + ec.message());
    }

    const auto start = std::chrono::steady_clock::now();
    json summary;
    switch (config.mode) {
        case Mode::GaussianRegion: summary = run_gaussian_region(config, dir, log); break;
        case Mode::Tradeoff: summary = run_tradeoff(config, dir, log); break;
        case Mode::Sdrc: summary = run_sdrc(config, dir, log); break;
        case Mode::DmTheorem1: summary = run_dm_theorem1(config, dir, log); break;
        case Mode::DmTheorem2: summary = run_dm_theorem2(config, dir, log); break;
        case Mode::Reductions: summary = run_reductions(config, dir, log); break;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest{{"tool", std::string(kToolName)},
                  {"version", std::string(kToolVersion)},
                  {"wall_time_s", wall},
                  {"config", to_json(config)},
                  {"summary", summary}};
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error((dir / "manifest.json").string() + ": write failed");
    }
    log << "wrote " << dir.string() << " in " << format_number(wall) << " s\n";
}

}  // namespace sdrcpm::cli
