/*
   Copyright 2026 The mvlevy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "mvlevy/cli/commands.hpp"
#include "mvlevy/cli/config.hpp"
#include "mvlevy/error.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

int main(int argc, char **argv) {
    namespace cli = mvlevy::cli;
    CLI::App app{"Simulation and verification of McKean-Vlasov SDEs driven by Levy noise", "mvlevy"};
    app.set_version_flag("--version", MVLEVY_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "experiment config (YAML)")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "random seed, overrides the config");
    app.add_option("--workers", workers, "worker threads (default $MVLEVY_WORKERS, else all cores)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out, "output directory, overrides output.dir");
    app.add_option("--set", overrides, "override a config field, key.path=value (repeatable)");

    const std::vector<std::pair<const char *, const char *>> commands{
        {"simulate", "frozen-law ensembles and drift-free KS checks"},
        {"picard", "distributional Picard iteration with gap diagnostics"},
        {"kernel-probe", "heat-kernel gradient, smoothing and continuity rate probes"},
        {"krylov-check", "occupation-estimate ratios over the test-function panel"},
        {"admissible", "(p, q) admissibility table"},
    };
    for (const auto &[name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::ConfigFailure;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    int threads = 0;
    if (workers) {
        threads = *workers;
    } else if (const char *env = std::getenv("MVLEVY_WORKERS")) {
        try {
            threads = std::stoi(env);
        } catch (const std::exception &) {
            std::cerr << "mvlevy: MVLEVY_WORKERS must be a positive integer\n";
            return cli::ConfigFailure;
        }
        if (threads < 1) {
            std::cerr << "mvlevy: MVLEVY_WORKERS must be a positive integer\n";
            return cli::ConfigFailure;
        }
    }
    if (threads > 0) omp_set_num_threads(threads);

    if (seed) overrides.push_back("seed=" + std::to_string(*seed));
    if (out) overrides.push_back("output.dir=\"" + *out + "\"");
    cli::ExperimentConfig cfg;
    try {
        cfg = config_path.empty() ? cli::parse_config("", overrides) : cli::load_config(config_path, overrides);
    } catch (const mvlevy::ConfigError &e) {
        std::cerr << "mvlevy: config error: " << e.what() << "\n";
        return cli::ConfigFailure;
    }
    return cli::run_guarded(command, cfg, std::cout, std::cerr);
}
