#include "sdrcpm/cli.hpp"

#include "sdrcpm/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace sdrcpm::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) {
            fail(path.empty() ? key : path + "." + key, "unknown field");
        }
    }
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    return j;
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
        fail(path, "must be finite");
    }
    return x;
}

long long get_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return j.get<long long>();
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
    if (!j.is_array()) {
        fail(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

PowerValue parse_power(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"value", "unit"});
    if (!j.contains("value")) {
        fail(path + ".value", "missing");
    }
    if (!j.contains("unit")) {
        fail(path + ".unit", "missing unit tag (db or linear)");
    }
    PowerValue p;
    p.value = get_number(j["value"], path + ".value");
    if (!j["unit"].is_string()) {
        fail(path + ".unit", "expected \"db\" or \"linear\"");
    }
    const auto unit = j["unit"].get<std::string>();
    if (unit == "db") {
        p.unit = Unit::Db;
    } else if (unit == "linear") {
        p.unit = Unit::Linear;
    } else {
        fail(path + ".unit", "expected \"db\" or \"linear\", got \"" + unit + "\"");
    }
    return p;
}

json power_to_json(const PowerValue& p) {
    return json{{"value", p.value}, {"unit", p.unit == Unit::Db ? "db" : "linear"}};
}

frontier::Axis parse_axis(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"min", "max", "steps"});
    frontier::Axis a;
    for (const char* key : {"min", "max", "steps"}) {
        if (!j.contains(key)) {
            fail(path + "." + key, "missing");
        }
    }
    a.min = get_number(j["min"], path + ".min");
    a.max = get_number(j["max"], path + ".max");
    const long long steps = get_integer(j["steps"], path + ".steps");
    if (steps < 1 || steps > 100000) {
        fail(path + ".steps", "must lie in [1, 100000]");
    }
    a.steps = static_cast<int>(steps);
    return a;
}

json axis_to_json(const frontier::Axis& a) { return json{{"min", a.min}, {"max", a.max}, {"steps", a.steps}}; }

struct GridField {
    const char* name;
    frontier::Axis frontier::GridSpec::*axis;
    double lo;
    double hi;
};

// theta is absent on purpose: it comes from the top-level theta list.
constexpr std::array<GridField, 7> kGridFields{{
    {"rho", &frontier::GridSpec::rho, -1.0, 1.0},
    {"gamma", &frontier::GridSpec::gamma, 0.0, 1.0},
    {"alpha1", &frontier::GridSpec::alpha1, -1e6, 1e6},
    {"alpha2", &frontier::GridSpec::alpha2, -1e6, 1e6},
    {"rho_u1s", &frontier::GridSpec::rho_u1s, -1.0, 1.0},
    {"beta", &frontier::GridSpec::beta, 0.0, 1.0},
    {"f", &frontier::GridSpec::f, -1.0, 1.0},
}};

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::GaussianRegion: return "gaussian-region";
        case Mode::Tradeoff: return "tradeoff";
        case Mode::DmTheorem1: return "dm-theorem1";
        case Mode::DmTheorem2: return "dm-theorem2";
        case Mode::Reductions: return "reductions";
        case Mode::Sdrc: return "sdrc";
    }
    return "?";
}

Mode parse_mode(std::string_view name, const std::string& path) {
    for (Mode m : {Mode::GaussianRegion, Mode::Tradeoff, Mode::DmTheorem1, Mode::DmTheorem2, Mode::Reductions,
                   Mode::Sdrc}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    fail(path, "unknown mode \"" + std::string(name) +
                   "\" (gaussian-region, tradeoff, dm-theorem1, dm-theorem2, reductions, sdrc)");
}

std::vector<double> parse_number_list(std::string_view text, const std::string& path) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) {
            comma = text.size();
        }
        std::string item(text.substr(pos, comma - pos));
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
        double x = 0.0;
        const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
        if (item.empty() || ec != std::errc() || end != item.data() + item.size() || !std::isfinite(x)) {
            fail(path, "\"" + item + "\" is not a number");
        }
        out.push_back(x);
        pos = comma + 1;
    }
    return out;
}

gauss::PowerConfig ExperimentConfig::power_config() const {
    std::array<double, 5> v{};
    for (std::size_t i = 0; i < power.size(); ++i) {
        if (!power[i]) {
            fail("power." + std::string(kPowerFields[i]), "missing");
        }
        v[i] = power[i]->linear();
    }
    return gauss::PowerConfig{v[0], v[1], v[2], v[3], v[4]};
}

void ExperimentConfig::validate() const {
    const bool gaussian = mode == Mode::GaussianRegion || mode == Mode::Tradeoff || mode == Mode::Sdrc;
    if (workers > 1024) {
        fail("workers", "must lie in [0, 1024]");
    }
    if (out_dir.empty()) {
        fail("output.dir", "must not be empty");
    }
    if (gaussian) {
        for (std::size_t i = 0; i < power.size(); ++i) {
            const std::string path = "power." + std::string(kPowerFields[i]);
            if (!power[i]) {
                fail(path, "missing");
            }
            const double x = power[i]->linear();
            if (!std::isfinite(x) || x <= 0.0) {
                fail(path, "must be positive in linear units");
            }
        }
        for (const auto& g : kGridFields) {
            const auto& a = grid.*(g.axis);
            const std::string path = std::string("grid.") + g.name;
            a.validate(path);
            if (a.min < g.lo || a.max > g.hi) {
                fail(path, "range must stay within [" + format_number(g.lo) + ", " + format_number(g.hi) + "]");
            }
        }
        if (!std::isfinite(grid.rho_u2s) || grid.rho_u2s < -1.0 || grid.rho_u2s > 1.0) {
            fail("grid.rho_u2s", "must lie in [-1, 1]");
        }
    }
    if (mode == Mode::GaussianRegion || mode == Mode::Tradeoff) {
        if (theta.empty()) {
            fail("theta", "must list at least one value");
        }
        for (std::size_t i = 0; i < theta.size(); ++i) {
            if (!(theta[i] >= 0.0 && theta[i] <= 1.0)) {
                fail("theta[" + std::to_string(i) + "]", "must lie in [0, 1]");
            }
        }
    }
    if (mode == Mode::Tradeoff) {
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const std::string path = "targets.values[" + std::to_string(i) + "]";
            if (!(targets[i] >= 0.0)) {
                fail(path, "must be nonnegative");
            }
            if (i > 0 && targets[i] <= targets[i - 1]) {
                fail(path, "targets must be strictly increasing");
            }
        }
        if (targets.empty() && target_count < 2) {
            fail("targets.count", "must be at least 2");
        }
    }
    if (mode == Mode::DmTheorem1 || mode == Mode::DmTheorem2 || mode == Mode::Reductions) {
        if (dm.factorization.is_null()) {
            if (dm.instances < 1) {
                fail("dm.instances", "must be at least 1");
            }
            if (dm.alphabet < 1 || dm.alphabet > 4) {
                fail("dm.alphabet", "must lie in [1, 4]");
            }
        } else if (mode == Mode::Reductions) {
            fail("dm.factorization", "reductions mode draws its own instances; remove this field");
        }
    }
}

ExperimentConfig parse_config(const json& j) {
    require_object(j, "config");
    reject_unknown(j, "", {"mode", "power", "theta", "grid", "targets", "refine", "workers", "output", "seed", "dm"});
    ExperimentConfig c;
    if (!j.contains("mode")) {
        fail("mode", "missing");
    }
    if (!j["mode"].is_string()) {
        fail("mode", "expected a string");
    }
    c.mode = parse_mode(j["mode"].get<std::string>());

    if (j.contains("power")) {
        const auto& p = require_object(j["power"], "power");
        reject_unknown(p, "power", {kPowerFields.begin(), kPowerFields.end()});
        for (std::size_t i = 0; i < kPowerFields.size(); ++i) {
            const std::string key(kPowerFields[i]);
            if (p.contains(key)) {
                c.power[i] = parse_power(p[key], "power." + key);
            }
        }
    }
    if (j.contains("theta")) {
        c.theta = get_number_list(j["theta"], "theta");
    }
    if (j.contains("grid")) {
        const auto& g = require_object(j["grid"], "grid");
        std::set<std::string> allowed{"rho_u2s"};
        for (const auto& f : kGridFields) {
            allowed.insert(f.name);
        }
        reject_unknown(g, "grid", allowed);
        for (const auto& f : kGridFields) {
            if (g.contains(f.name)) {
                c.grid.*(f.axis) = parse_axis(g[f.name], std::string("grid.") + f.name);
            }
        }
        if (g.contains("rho_u2s")) {
            c.grid.rho_u2s = get_number(g["rho_u2s"], "grid.rho_u2s");
        }
    }
    if (j.contains("targets")) {
        const auto& t = require_object(j["targets"], "targets");
        reject_unknown(t, "targets", {"count", "values"});
        if (t.contains("values")) {
            c.targets = get_number_list(t["values"], "targets.values");
        }
        if (t.contains("count")) {
            c.target_count = static_cast<int>(get_integer(t["count"], "targets.count"));
        }
    }
    if (j.contains("refine")) {
        if (!j["refine"].is_boolean()) {
            fail("refine", "expected true or false");
        }
        c.refine = j["refine"].get<bool>();
    }
    if (j.contains("workers")) {
        const long long w = get_integer(j["workers"], "workers");
        if (w < 0 || w > 1024) {
            fail("workers", "must lie in [0, 1024]");
        }
        c.workers = static_cast<unsigned>(w);
    }
    if (j.contains("output")) {
        const auto& o = require_object(j["output"], "output");
        reject_unknown(o, "output", {"dir"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) {
                fail("output.dir", "expected a string");
            }
            c.out_dir = o["dir"].get<std::string>();
        }
    }
    if (j.contains("seed") && !j["seed"].is_null()) {
        const long long s = get_integer(j["seed"], "seed");
        if (s < 0) {
            fail("seed", "must be nonnegative");
        }
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (j.contains("dm")) {
        const auto& d = require_object(j["dm"], "dm");
        reject_unknown(d, "dm", {"instances", "alphabet", "seed", "factorization"});
        if (d.contains("instances")) {
            c.dm.instances = static_cast<int>(get_integer(d["instances"], "dm.instances"));
        }
        if (d.contains("alphabet")) {
            c.dm.alphabet = static_cast<int>(get_integer(d["alphabet"], "dm.alphabet"));
        }
        if (d.contains("seed")) {
            const long long s = get_integer(d["seed"], "dm.seed");
            if (s < 0) {
                fail("dm.seed", "must be nonnegative");
            }
            c.dm.seed = static_cast<std::uint64_t>(s);
        }
        if (d.contains("factorization") && !d["factorization"].is_null()) {
            c.dm.factorization = require_object(d["factorization"], "dm.factorization");
        }
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = std::string(to_string(c.mode));
    json power = json::object();
    for (std::size_t i = 0; i < c.power.size(); ++i) {
        if (c.power[i]) {
            power[std::string(kPowerFields[i])] = power_to_json(*c.power[i]);
        }
    }
    j["power"] = power;
    j["theta"] = c.theta;
    json grid = json::object();
    for (const auto& f : kGridFields) {
        grid[f.name] = axis_to_json(c.grid.*(f.axis));
    }
    grid["rho_u2s"] = c.grid.rho_u2s;
    j["grid"] = grid;
    json targets = json::object();
    targets["count"] = c.target_count;
    if (!c.targets.empty()) {
        targets["values"] = c.targets;
    }
    j["targets"] = targets;
    j["refine"] = c.refine;
    j["workers"] = c.workers;
    j["output"] = json{{"dir", c.out_dir}};
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    json dm{{"instances", c.dm.instances}, {"alphabet", c.dm.alphabet}, {"seed", c.dm.seed}};
    if (!c.dm.factorization.is_null()) {
        dm["factorization"] = c.dm.factorization;
    }
    j["dm"] = dm;
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    // A run manifest carries the resolved config under "config".
    if (j.is_object() && j.contains("config") && j.contains("tool")) {
        return parse_config(j["config"]);
    }
    return parse_config(j);
}

}  // namespace sdrcpm::cli
