#include "sdrcpm/cli.hpp"
#include "sdrcpm/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
    using namespace sdrcpm::cli;

    CLI::App app{"Rate regions of the state-dependent relay channel with private messages"};
    std::string config_path;
    std::string mode;
    std::string out_dir;
    std::optional<std::string> theta;
    std::optional<unsigned> workers;
    bool refine = false;
    std::array<std::optional<double>, 5> db;
    std::array<std::optional<double>, 5> linear;

    app.add_option("--config", config_path, "JSON config file or a run manifest")->check(CLI::ExistingFile);
    app.add_option("--mode", mode, "gaussian-region | tradeoff | dm-theorem1 | dm-theorem2 | reductions | sdrc");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--theta", theta, "comma-separated relay power fractions, e.g. 0,0.3,0.6");
    app.add_option("--workers", workers, "worker threads (0 = all cores)");
    app.add_flag("--refine", refine, "polish frontier points by local search");
    for (std::size_t i = 0; i < kPowerFields.size(); ++i) {
        const std::string name(kPowerFields[i]);
        auto* d = app.add_option("--" + name + "-db", db[i], name + " in dB");
        auto* l = app.add_option("--" + name + "-linear", linear[i], name + " in linear units");
        d->excludes(l);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig config;
        if (!config_path.empty()) {
            config = load_config(config_path);
        } else if (mode.empty()) {
            throw sdrcpm::ConfigError("mode: missing (pass --mode or --config)");
        }
        if (!mode.empty()) {
            config.mode = parse_mode(mode, "--mode");
        }
        if (!out_dir.empty()) {
            config.out_dir = out_dir;
        }
        if (theta) {
            config.theta = parse_number_list(*theta, "--theta");
        }
        if (workers) {
            config.workers = *workers;
        }
        if (refine) {
            config.refine = true;
        }
        for (std::size_t i = 0; i < kPowerFields.size(); ++i) {
            if (db[i]) {
                config.power[i] = PowerValue{*db[i], Unit::Db};
            } else if (linear[i]) {
                config.power[i] = PowerValue{*linear[i], Unit::Linear};
            }
        }
        run(config, std::cerr);
    } catch (const sdrcpm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
