// Copyright 2026 The qweak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// solve: trains one problem with one or all loss strategies and writes
// CSV histories, model values and SVG figures.
//
// Exit codes: 0 success, 1 training aborted, 2 usage / configuration
// error, 3 file-system error.

#include "qweak/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

constexpr int kExitAbort = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFilesystem = 3;

using Assignments = std::vector<std::pair<std::string, std::string>>;

int solve(int argc, char **argv) {
    CLI::App app{"Solve a differential equation with per-subdomain quantum "
                 "neural networks trained on collocation and/or weak-form "
                 "losses."};
    std::string problem;
    std::optional<std::string> strategy;
    std::optional<std::string> seed;
    std::optional<std::string> epochs;
    std::string out_dir;
    std::string config_path;
    std::vector<std::string> sets;
    bool quiet = false;
    app.add_option("--problem", problem,
                   "damped_oscillator | burgers | linear_2d | laplace");
    app.add_option("--strategy", strategy, "coll | coll_join | weak | both | all");
    app.add_option("--seed", seed, "parameter-initialisation seed");
    app.add_option("--epochs", epochs, "ADAM steps per strategy");
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--config", config_path,
                   "key=value file (e.g. a previous config.snapshot)");
    app.add_option("--set", sets, "override one key: --set key=value");
    app.add_flag("--quiet", quiet, "no progress output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    qweak::RunConfig cfg;
    try {
        Assignments overrides;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw qweak::UsageError("cannot read config file " + config_path);
            }
            overrides = qweak::read_assignments(in);
        }
        if (problem.empty()) {
            for (const auto &[k, v] : overrides) {
                if (k == "problem") {
                    problem = v;
                }
            }
        }
        if (problem.empty()) {
            throw qweak::UsageError("--problem is required");
        }
        qweak::ProblemId id;
        try {
            id = qweak::parse_problem(problem);
        } catch (const qweak::ConfigError &e) {
            throw qweak::UsageError(e.what());
        }
        if (strategy) {
            overrides.emplace_back("strategy", *strategy);
        }
        if (seed) {
            overrides.emplace_back("seed", *seed);
        }
        if (epochs) {
            overrides.emplace_back("epochs", *epochs);
        }
        for (const auto &s : sets) {
            overrides.push_back(qweak::split_assignment(s));
        }
        cfg = qweak::resolve_config(id, overrides);
        (void)qweak::make_experiment(cfg); // validate before training
    } catch (const qweak::ConfigError &e) {
        std::cerr << "solve: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const auto summary = qweak::run(cfg, out_dir, quiet ? nullptr : &std::cerr);
        std::printf("%-10s %-24s %-24s\n", "strategy", "final_loss", "final_mse");
        for (const auto &r : summary.runs) {
            const auto &last = r.result.history.back();
            std::printf("%-10s %-24.17g %-24.17g\n",
                        std::string(qweak::strategy_name(r.strategy)).c_str(),
                        last.loss.total, last.metric);
        }
    } catch (const qweak::TrainingAbort &e) {
        std::cerr << "solve: training aborted in component " << e.component()
                  << " at epoch " << e.epoch() << ": " << e.what() << '\n';
        return kExitAbort;
    } catch (const qweak::FilesystemError &e) {
        std::cerr << "solve: " << e.what() << '\n';
        return kExitFilesystem;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "solve: " << e.what() << '\n';
        return kExitFilesystem;
    } catch (const qweak::DomainError &e) {
        std::cerr << "solve: " << e.what()
                  << " (the feature-map rescale does not fit the domain)\n";
        return kExitUsage;
    } catch (const qweak::ConfigError &e) {
        std::cerr << "solve: " << e.what() << '\n';
        return kExitUsage;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    try {
        return solve(argc, argv);
    } catch (const std::exception &e) {
        std::cerr << "solve: internal error: " << e.what() << '\n';
        return kExitAbort;
    }
}
