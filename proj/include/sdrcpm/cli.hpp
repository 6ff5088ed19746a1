#pragma once

#include "sdrcpm/frontier.hpp"
#include "sdrcpm/gauss_core.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sdrcpm::cli {

inline constexpr std::string_view kToolName = "sdrcpm";
inline constexpr std::string_view kToolVersion = "1.0.0";

[[nodiscard]] double db_to_linear(double db);

enum class Mode { GaussianRegion, Tradeoff, DmTheorem1, DmTheorem2, Reductions, Sdrc };

[[nodiscard]] std::string_view to_string(Mode mode);
/// Throws ConfigError naming `path` for unknown names.
[[nodiscard]] Mode parse_mode(std::string_view name, const std::string& path = "mode");

enum class Unit { Db, Linear };

struct PowerValue {
    double value = 0.0;
    Unit unit = Unit::Linear;

    [[nodiscard]] double linear() const { return unit == Unit::Db ? db_to_linear(value) : value; }
};

/// Power fields in PowerConfig order: p1, p2, n2, n3, q.
inline constexpr std::array<std::string_view, 5> kPowerFields{"p1", "p2", "n2", "n3", "q"};

/// Discrete-model workload: random instances, or one explicit factorization
/// given as JSON (alphabet sizes plus flattened kernels).
struct DmConfig {
    int instances = 20;
    int alphabet = 2;
    std::uint64_t seed = 1;
    nlohmann::json factorization;  // null when instances are drawn at random
};

struct ExperimentConfig {
    Mode mode = Mode::Tradeoff;
    std::array<std::optional<PowerValue>, 5> power;
    std::vector<double> theta;
    frontier::GridSpec grid;
    std::vector<double> targets;  // empty: target_count evenly spaced targets
    int target_count = 40;
    bool refine = false;
    unsigned workers = 1;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;  // reserved; every algorithm is deterministic
    DmConfig dm;

    /// Mode-specific checks; throws ConfigError with a field path.
    void validate() const;
    /// Linear-unit powers; requires every field to be present.
    [[nodiscard]] gauss::PowerConfig power_config() const;
};

/// Parses a config object. Unknown fields are rejected; mode-specific checks
/// are left to ExperimentConfig::validate so flags can fill gaps first.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& config);

/// Reads a config file, or the config recorded inside a run manifest.
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses a comma-separated list of numbers; an empty string gives an empty list.
[[nodiscard]] std::vector<double> parse_number_list(std::string_view text, const std::string& path);

/// Executes the configured mode and writes its artifacts under config.out_dir.
/// Progress and notices go to `log`. Throws ConfigError or std::runtime_error.
void run(const ExperimentConfig& config, std::ostream& log);

/// Fixed 9-significant-digit formatting used in every CSV.
[[nodiscard]] std::string format_number(double x);

}  // namespace sdrcpm::cli
