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
 * Full-batch ADAM training of every subdomain model against a LossProgram.
 *
 * Parameters of all subdomains are optimised as one flat vector laid out as
 * [theta_0..., a_0, b_0, theta_1..., a_1, b_1, ...].
 */
#pragma once

#include "qweak/decomposition.hpp"
#include "qweak/diffqnn.hpp"
#include "qweak/error.hpp"
#include "qweak/losses.hpp"
#include "qweak/problems.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qweak {

struct AdamConfig {
    double learning_rate = 0.2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class AdamState {
  public:
    AdamState(std::size_t size, AdamConfig config)
        : config_(config), m_(size, 0.0), v_(size, 0.0) {}

    [[nodiscard]] const AdamConfig &config() const noexcept { return config_; }
    [[nodiscard]] std::span<const double> first_moment() const noexcept {
        return m_;
    }
    [[nodiscard]] std::span<const double> second_moment() const noexcept {
        return v_;
    }
    [[nodiscard]] long step_count() const noexcept { return t_; }

    /// One bias-corrected ADAM update of `params` in place.
    void step(std::span<double> params, std::span<const double> grad) {
        require<ContractError>(params.size() == m_.size() &&
                                   grad.size() == m_.size(),
                               "ADAM: parameter/gradient length mismatch");
        for (double g : grad) {
            require<ContractError>(std::isfinite(g),
                                   "ADAM: non-finite gradient");
        }
        ++t_;
        const auto &c = config_;
        const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i] = c.beta1 * m_[i] + (1.0 - c.beta1) * grad[i];
            v_[i] = c.beta2 * v_[i] + (1.0 - c.beta2) * grad[i] * grad[i];
            const double m_hat = m_[i] / bc1;
            const double v_hat = v_[i] / bc2;
            params[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
        }
    }

  private:
    AdamConfig config_;
    std::vector<double> m_;
    std::vector<double> v_;
    long t_ = 0;
};

inline void adam_step(AdamState &state, std::span<double> params,
                      std::span<const double> grad) {
    state.step(params, grad);
}

/// theta ~ U[0, 2 pi) from one seeded stream (subdomain 0 first), a = 1, b = 0.
[[nodiscard]] inline PiecewiseModel init_params(const CompiledQnn &model,
                                                std::size_t num_subdomains,
                                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    PiecewiseModel pm{model, {}};
    for (std::size_t s = 0; s < num_subdomains; ++s) {
        ModelParams p;
        p.theta.resize(model.num_theta);
        for (double &t : p.theta) {
            t = angle(rng);
        }
        pm.params.push_back(std::move(p));
    }
    return pm;
}

[[nodiscard]] inline std::vector<double> flatten(const PiecewiseModel &pm) {
    std::vector<double> flat;
    for (const auto &p : pm.params) {
        flat.insert(flat.end(), p.theta.begin(), p.theta.end());
        flat.push_back(p.a);
        flat.push_back(p.b);
    }
    return flat;
}

inline void unflatten(std::span<const double> flat, PiecewiseModel &pm) {
    std::size_t k = 0;
    for (auto &p : pm.params) {
        for (double &t : p.theta) {
            t = flat[k++];
        }
        p.a = flat[k++];
        p.b = flat[k++];
    }
    require<ContractError>(k == flat.size(), "flat parameter length mismatch");
}

/// MSE of the piecewise model against the known solution over the training
/// points.
[[nodiscard]] inline double measure_of_success(const Problem &pb,
                                               const Decomposition &dec,
                                               const PiecewiseModel &pm) {
    double acc = 0.0;
    for (const auto &tp : dec.training()) {
        const double e = piecewise_eval(pm, dec, tp.x) - pb.analytic(tp.x);
        acc += e * e;
    }
    return acc / static_cast<double>(dec.training().size());
}

/// Fields of every site of `program` under the piecewise model.
[[nodiscard]] inline std::vector<FieldBundle>
site_fields(const LossProgram &program, const PiecewiseModel &pm,
            DerivativeEngine engine) {
    const auto &table = program.sites();
    std::vector<FieldBundle> out(table.size());
    for (std::size_t s = 0; s < table.size(); ++s) {
        const Site &site = table[s];
        out[s] = evaluate_fields(pm.model,
                                 pm.params.at(static_cast<std::size_t>(site.owner)),
                                 site.x, site.needs, engine);
    }
    return out;
}

struct LossGradient {
    LossBreakdown loss;
    std::vector<double> grad; ///< flat layout, see flatten()
};

/// Total loss and its exact gradient w.r.t. every subdomain parameter.
[[nodiscard]] inline LossGradient
loss_and_gradient(const LossProgram &program, const PiecewiseModel &pm,
                  DerivativeEngine engine = DerivativeEngine::Jet) {
    const auto fields = site_fields(program, pm, engine);
    std::vector<FieldBundle> cot;
    LossGradient out;
    out.loss = program.evaluate(fields, &cot);
    const std::size_t stride = pm.model.num_theta + 2;
    out.grad.assign(stride * pm.params.size(), 0.0);
    const auto &table = program.sites();
    for (std::size_t s = 0; s < table.size(); ++s) {
        const Site &site = table[s];
        const auto owner = static_cast<std::size_t>(site.owner);
        accumulate_field_gradient(
            pm.model, pm.params[owner], site.x, site.needs, cot[s],
            std::span<double>(out.grad).subspan(owner * stride, stride),
            engine);
    }
    return out;
}

[[nodiscard]] inline LossBreakdown
loss_value(const LossProgram &program, const PiecewiseModel &pm,
           DerivativeEngine engine = DerivativeEngine::Jet) {
    return program.evaluate(site_fields(program, pm, engine));
}

struct TrainerConfig {
    std::size_t epochs = 500;
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::Both;
    LossWeights weights;
    AdamConfig adam;
    WeakOptions weak;
    DerivativeEngine engine = DerivativeEngine::Jet;
};

struct TrainRecord {
    std::size_t epoch = 0;
    LossBreakdown loss;
    double metric = 0.0;
};

struct TrainResult {
    PiecewiseModel model;
    std::vector<TrainRecord> history;
};

/// Everything a training run needs besides its TrainerConfig.
struct Experiment {
    Problem problem;
    Decomposition decomposition;
    CompiledQnn model;
    TestFunctionFamily family;
};

namespace detail {

inline void check_finite_loss(const LossBreakdown &b, std::size_t epoch) {
    const std::pair<const char *, double> parts[] = {
        {"l_de", b.l_de}, {"l_ibv", b.l_ibv}, {"l_sbc", b.l_sbc},
        {"l_wf", b.l_wf}, {"total", b.total}};
    for (const auto &[name, v] : parts) {
        if (!std::isfinite(v)) {
            throw TrainingAbort(name, static_cast<long>(epoch),
                                std::string("non-finite loss component ") +
                                    name + " at epoch " +
                                    std::to_string(epoch));
        }
    }
}

/// Names the loss component whose cotangents are non-finite.
inline std::string blame_gradient(const Experiment &ex,
                                  const TrainerConfig &cfg,
                                  const PiecewiseModel &pm) {
    const std::pair<const char *, Strategy> probes[] = {
        {"l_de", Strategy::Coll},
        {"l_sbc", Strategy::CollJoin},
        {"l_wf", Strategy::Weak}};
    for (const auto &[name, s] : probes) {
        LossProgram::Options opt{s, cfg.weights, cfg.weak, false};
        LossProgram probe(ex.problem, ex.decomposition, ex.family, opt);
        const auto g = loss_and_gradient(probe, pm, cfg.engine);
        for (double v : g.grad) {
            if (!std::isfinite(v)) {
                return name;
            }
        }
    }
    return "model";
}

} // namespace detail

/// Runs `cfg.epochs` full-batch ADAM steps from `initial`. The history holds
/// epochs + 1 records: the initial state and the state after every step.
[[nodiscard]] inline TrainResult
train(const Experiment &ex, const TrainerConfig &cfg, PiecewiseModel initial,
      const std::function<void(const TrainRecord &)> &on_record = {}) {
    require<ConfigError>(cfg.epochs >= 1, "epochs must be >= 1");
    LossProgram program(ex.problem, ex.decomposition, ex.family,
                        {cfg.strategy, cfg.weights, cfg.weak, false});
    TrainResult out{std::move(initial), {}};
    auto flat = flatten(out.model);
    AdamState adam(flat.size(), cfg.adam);
    auto emit = [&](std::size_t epoch, const LossBreakdown &loss) {
        detail::check_finite_loss(loss, epoch);
        TrainRecord rec{epoch, loss,
                        measure_of_success(ex.problem, ex.decomposition,
                                           out.model)};
        out.history.push_back(rec);
        if (on_record) {
            on_record(rec);
        }
    };
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto lg = loss_and_gradient(program, out.model, cfg.engine);
        emit(epoch, lg.loss);
        for (double g : lg.grad) {
            if (!std::isfinite(g)) {
                const auto who = detail::blame_gradient(ex, cfg, out.model);
                throw TrainingAbort(who, static_cast<long>(epoch),
                                    "non-finite gradient from " + who +
                                        " at epoch " + std::to_string(epoch));
            }
        }
        adam.step(flat, lg.grad);
        unflatten(flat, out.model);
    }
    emit(cfg.epochs, loss_value(program, out.model, cfg.engine));
    return out;
}

/// Convenience overload: parameters drawn with init_params(cfg.seed).
[[nodiscard]] inline TrainResult
train(const Experiment &ex, const TrainerConfig &cfg,
      const std::function<void(const TrainRecord &)> &on_record = {}) {
    return train(ex, cfg,
                 init_params(ex.model, ex.decomposition.size(), cfg.seed),
                 on_record);
}

} // namespace qweak
