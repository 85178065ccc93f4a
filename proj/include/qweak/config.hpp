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
/**
 * @file
 * Run configuration: per-problem defaults, key=value overrides, a bit-exact
 * text snapshot, and construction of the Experiment a run trains.
 */
#pragma once

#include "qweak/decomposition.hpp"
#include "qweak/diffqnn.hpp"
#include "qweak/error.hpp"
#include "qweak/losses.hpp"
#include "qweak/problems.hpp"
#include "qweak/training.hpp"

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qweak {

/// Raised for malformed or unknown configuration input (CLI exit code 2).
class UsageError : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

struct RunConfig {
    ProblemId problem = ProblemId::DampedOscillator;
    std::string strategy = "all"; ///< a strategy name or "all"
    std::uint64_t seed = 0;
    std::size_t epochs = 500;
    double learning_rate = 0.2;
    LossWeights weights;
    WeakOptions weak;
    DerivativeEngine engine = DerivativeEngine::Jet;

    // model
    std::size_t qubits = 5;
    std::size_t depth = 4;           ///< final ansatz depth
    std::size_t separator_depth = 1; ///< 2D: ansatz between feature maps
    std::size_t uploads = 1;         ///< 2D: uploads of each coordinate
    FeatureMapKind feature_map = FeatureMapKind::ChebyshevTower;
    double rescale = 0.9;

    // domain
    std::vector<double> x_splits{-0.33, 0.33};
    std::vector<double> y_splits;
    GridSpec grid;
    std::size_t num_test_functions = 144;
    std::uint64_t test_seed = 0;

    [[nodiscard]] std::vector<Strategy> strategies() const {
        if (strategy == "all") {
            return {Strategy::Coll, Strategy::CollJoin, Strategy::Weak,
                    Strategy::Both};
        }
        return {parse_strategy(strategy)};
    }
};

/// The reference experiment setup of each problem.
[[nodiscard]] inline RunConfig default_config(ProblemId id) {
    RunConfig c;
    c.problem = id;
    switch (id) {
    case ProblemId::DampedOscillator:
        break;
    case ProblemId::StationaryBurgers:
        c.depth = 8;
        break;
    case ProblemId::Linear2D:
        c.depth = 8;
        c.feature_map = FeatureMapKind::FourierTower;
        c.rescale = 1.0;
        c.x_splits = {0.5};
        c.y_splits = {0.5};
        c.grid.points_per_axis = 20;
        break;
    case ProblemId::Laplace2D:
        c.qubits = 4;
        c.depth = 6;
        c.uploads = 2;
        c.feature_map = FeatureMapKind::FourierTower;
        c.rescale = 1.0;
        c.x_splits = {0.5};
        c.y_splits = {0.5};
        c.grid.points_per_axis = 21;
        c.epochs = 800;
        break;
    }
    return c;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_list(const std::vector<double> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + fmt_double(v[i]);
    }
    return out;
}

inline double parse_double(const std::string &key, const std::string &s) {
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw UsageError("invalid number for '" + key + "': '" + s + "'");
    }
    return v;
}

inline std::uint64_t parse_uint(const std::string &key, const std::string &s) {
    errno = 0;
    char *end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() ||
        errno == ERANGE) {
        throw UsageError("invalid non-negative integer for '" + key +
                         "': '" + s + "'");
    }
    return v;
}

inline bool parse_bool(const std::string &key, const std::string &s) {
    if (s == "true" || s == "1") {
        return true;
    }
    if (s == "false" || s == "0") {
        return false;
    }
    throw UsageError("invalid boolean for '" + key + "': '" + s + "'");
}

inline std::vector<double> parse_list(const std::string &key,
                                      const std::string &s) {
    std::vector<double> out;
    if (s.empty() || s == "none") {
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(key, item));
    }
    return out;
}

} // namespace detail

/// Applies one key=value override. `problem` is not settable here: it selects
/// the defaults every other key overrides.
inline void set_key(RunConfig &c, const std::string &key,
                    const std::string &value) {
    using namespace detail;
    auto size = [&] { return static_cast<std::size_t>(parse_uint(key, value)); };
    if (key == "strategy") {
        if (value != "all") {
            try {
                (void)parse_strategy(value);
            } catch (const ConfigError &e) {
                throw UsageError(e.what());
            }
        }
        c.strategy = value;
    } else if (key == "seed") {
        c.seed = parse_uint(key, value);
    } else if (key == "epochs") {
        c.epochs = size();
    } else if (key == "lr") {
        c.learning_rate = parse_double(key, value);
    } else if (key == "alpha") {
        c.weights.alpha = parse_double(key, value);
    } else if (key == "beta") {
        c.weights.beta = parse_double(key, value);
    } else if (key == "gamma_res") {
        c.weights.gamma_res = parse_double(key, value);
    } else if (key == "gamma_wf") {
        c.weights.gamma_wf = parse_double(key, value);
    } else if (key == "gamma_sbc") {
        c.weights.gamma_sbc = parse_double(key, value);
    } else if (key == "weak_with_ibv") {
        c.weights.weak_with_ibv = parse_bool(key, value);
    } else if (key == "both_with_sbc") {
        c.weights.both_with_sbc = parse_bool(key, value);
    } else if (key == "burgers_known_boundary") {
        c.weak.burgers_known_boundary = parse_bool(key, value);
    } else if (key == "engine") {
        if (value == "jet") {
            c.engine = DerivativeEngine::Jet;
        } else if (value == "shift_rule") {
            c.engine = DerivativeEngine::ShiftRule;
        } else {
            throw UsageError("invalid engine '" + value +
                             "' (expected jet or shift_rule)");
        }
    } else if (key == "qubits") {
        c.qubits = size();
    } else if (key == "depth") {
        c.depth = size();
    } else if (key == "separator_depth") {
        c.separator_depth = size();
    } else if (key == "uploads") {
        c.uploads = size();
    } else if (key == "feature_map") {
        if (value == "chebyshev") {
            c.feature_map = FeatureMapKind::ChebyshevTower;
        } else if (value == "fourier") {
            c.feature_map = FeatureMapKind::FourierTower;
        } else {
            throw UsageError("invalid feature_map '" + value +
                             "' (expected chebyshev or fourier)");
        }
    } else if (key == "rescale") {
        c.rescale = parse_double(key, value);
    } else if (key == "x_splits") {
        c.x_splits = parse_list(key, value);
    } else if (key == "y_splits") {
        c.y_splits = parse_list(key, value);
    } else if (key == "points_per_subdomain") {
        c.grid.points_per_subdomain = size();
    } else if (key == "points_per_axis") {
        c.grid.points_per_axis = size();
    } else if (key == "test_functions") {
        c.num_test_functions = size();
    } else if (key == "test_seed") {
        c.test_seed = parse_uint(key, value);
    } else {
        throw UsageError("unknown configuration key '" + key + "'");
    }
}

/// Splits "key=value"; surrounding whitespace is not significant.
[[nodiscard]] inline std::pair<std::string, std::string>
split_assignment(std::string_view line) {
    auto trim = [](std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) {
            return std::string_view{};
        }
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw UsageError("expected key=value, got '" + std::string(line) + "'");
    }
    return {std::string(trim(line.substr(0, eq))),
            std::string(trim(line.substr(eq + 1)))};
}

/// Reads key=value lines ('#' starts a comment line).
[[nodiscard]] inline std::vector<std::pair<std::string, std::string>>
read_assignments(std::istream &in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') {
            continue;
        }
        out.push_back(split_assignment(line));
    }
    return out;
}

/// Every key of the resolved configuration, in a fixed order.
[[nodiscard]] inline std::string snapshot(const RunConfig &c) {
    using detail::fmt_double;
    std::ostringstream s;
    auto b = [](bool v) { return v ? "true" : "false"; };
    s << "problem=" << problem_name(c.problem) << '\n'
      << "strategy=" << c.strategy << '\n'
      << "seed=" << c.seed << '\n'
      << "epochs=" << c.epochs << '\n'
      << "lr=" << fmt_double(c.learning_rate) << '\n'
      << "alpha=" << fmt_double(c.weights.alpha) << '\n'
      << "beta=" << fmt_double(c.weights.beta) << '\n'
      << "gamma_res=" << fmt_double(c.weights.gamma_res) << '\n'
      << "gamma_wf=" << fmt_double(c.weights.gamma_wf) << '\n'
      << "gamma_sbc=" << fmt_double(c.weights.gamma_sbc) << '\n'
      << "weak_with_ibv=" << b(c.weights.weak_with_ibv) << '\n'
      << "both_with_sbc=" << b(c.weights.both_with_sbc) << '\n'
      << "burgers_known_boundary=" << b(c.weak.burgers_known_boundary) << '\n'
      << "engine="
      << (c.engine == DerivativeEngine::Jet ? "jet" : "shift_rule") << '\n'
      << "qubits=" << c.qubits << '\n'
      << "depth=" << c.depth << '\n'
      << "separator_depth=" << c.separator_depth << '\n'
      << "uploads=" << c.uploads << '\n'
      << "feature_map="
      << (c.feature_map == FeatureMapKind::ChebyshevTower ? "chebyshev"
                                                          : "fourier")
      << '\n'
      << "rescale=" << fmt_double(c.rescale) << '\n'
      << "x_splits=" << (c.x_splits.empty() ? "none" : detail::fmt_list(c.x_splits))
      << '\n'
      << "y_splits=" << (c.y_splits.empty() ? "none" : detail::fmt_list(c.y_splits))
      << '\n'
      << "points_per_subdomain=" << c.grid.points_per_subdomain << '\n'
      << "points_per_axis=" << c.grid.points_per_axis << '\n'
      << "test_functions=" << c.num_test_functions << '\n'
      << "test_seed=" << c.test_seed << '\n';
    return s.str();
}

/// Per-problem defaults overlaid with `overrides` in order. A "problem" key
/// selects the defaults and must agree with `problem` when both are given.
[[nodiscard]] inline RunConfig
resolve_config(ProblemId problem,
               const std::vector<std::pair<std::string, std::string>> &overrides) {
    RunConfig c = default_config(problem);
    for (const auto &[key, value] : overrides) {
        if (key == "problem") {
            try {
                require<UsageError>(parse_problem(value) == problem,
                                    "conflicting problem '" + value + "'");
            } catch (const UsageError &) {
                throw;
            } catch (const ConfigError &e) {
                throw UsageError(e.what());
            }
            continue;
        }
        set_key(c, key, value);
    }
    return c;
}

/// Feature-map / ansatz layout of a configuration. 1D: FM, HEA(depth).
/// 2D: (FM x, HEA(sep), FM y, HEA(sep)) repeated `uploads` times with the
/// final separator replaced by HEA(depth).
[[nodiscard]] inline QnnLayout make_layout(const RunConfig &c) {
    require<ConfigError>(c.depth >= 1, "depth must be >= 1");
    QnnLayout L;
    L.num_qubits = c.qubits;
    const Problem pb(c.problem);
    L.input_dims = static_cast<std::size_t>(pb.dims());
    auto fm = [&](std::size_t dim) {
        FeatureMapSpec s;
        s.kind = c.feature_map;
        s.input_dim = dim;
        s.rescale = c.rescale;
        return s;
    };
    if (L.input_dims == 1) {
        L.blocks = {fm(0), AnsatzSpec{c.depth}};
        return L;
    }
    require<ConfigError>(c.uploads >= 1, "uploads must be >= 1");
    require<ConfigError>(c.separator_depth >= 1 || c.uploads == 1,
                         "separator_depth must be >= 1");
    for (std::size_t u = 0; u < c.uploads; ++u) {
        L.blocks.push_back(fm(0));
        if (c.separator_depth > 0) {
            L.blocks.push_back(AnsatzSpec{c.separator_depth});
        }
        L.blocks.push_back(fm(1));
        L.blocks.push_back(AnsatzSpec{u + 1 == c.uploads ? c.depth
                                                          : c.separator_depth});
    }
    return L;
}

[[nodiscard]] inline Experiment make_experiment(const RunConfig &c) {
    Problem pb(c.problem);
    require<ConfigError>(pb.dims() == 2 || c.y_splits.empty(),
                         "y_splits only apply to 2D problems");
    auto dec = build_decomposition(pb, c.x_splits, c.y_splits, c.grid);
    auto family = test_functions(c.problem, c.test_seed, c.num_test_functions);
    return Experiment{pb, std::move(dec), compile(make_layout(c)),
                      std::move(family)};
}

[[nodiscard]] inline TrainerConfig trainer_config(const RunConfig &c,
                                                  Strategy s) {
    TrainerConfig t;
    t.epochs = c.epochs;
    t.seed = c.seed;
    t.strategy = s;
    t.weights = c.weights;
    t.adam.learning_rate = c.learning_rate;
    t.weak = c.weak;
    t.engine = c.engine;
    return t;
}

} // namespace qweak
