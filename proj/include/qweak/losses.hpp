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
 * Collocation, boundary, subdomain-continuity and weak-form loss terms and
 * their strategy-gated combination.
 *
 * Every term is a mean of squares over the field values of registered sites.
 * A LossProgram evaluates all active terms from one vector of site fields and
 * can return d(total)/d(site field) for the reverse pass into the models.
 */
#pragma once

#include "qweak/decomposition.hpp"
#include "qweak/error.hpp"
#include "qweak/fields.hpp"
#include "qweak/problems.hpp"
#include "qweak/sites.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qweak {

enum class Strategy { Coll, CollJoin, Weak, Both };

[[nodiscard]] inline std::string_view strategy_name(Strategy s) {
    switch (s) {
    case Strategy::Coll:
        return "coll";
    case Strategy::CollJoin:
        return "coll_join";
    case Strategy::Weak:
        return "weak";
    case Strategy::Both:
        return "both";
    }
    return "?";
}

[[nodiscard]] inline Strategy parse_strategy(std::string_view name) {
    for (auto s : {Strategy::Coll, Strategy::CollJoin, Strategy::Weak,
                   Strategy::Both}) {
        if (strategy_name(s) == name) {
            return s;
        }
    }
    throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

struct LossWeights {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma_res = 1.0;
    double gamma_wf = 1.0;
    double gamma_sbc = 1.0;
    /// Weak strategy keeps the boundary collocation term.
    bool weak_with_ibv = true;
    /// Both strategy adds the continuity term.
    bool both_with_sbc = false;

    void validate() const {
        for (double w : {alpha, beta, gamma_res, gamma_wf, gamma_sbc}) {
            require<ConfigError>(std::isfinite(w) && w >= 0.0,
                                 "loss weights must be finite and >= 0");
        }
    }
};

struct LossBreakdown {
    double l_de = 0.0;
    double l_ibv = 0.0;
    double l_sbc = 0.0;
    double l_wf = 0.0;
    double total = 0.0;
};

/// Multipliers of each component inside the total loss.
struct LossCoefficients {
    double de = 0.0;
    double ibv = 0.0;
    double sbc = 0.0;
    double wf = 0.0;
};

[[nodiscard]] inline LossCoefficients loss_coefficients(Strategy s,
                                                        const LossWeights &w) {
    LossCoefficients c;
    switch (s) {
    case Strategy::Coll:
        c.de = w.gamma_res * w.alpha;
        c.ibv = w.gamma_res * w.beta;
        break;
    case Strategy::CollJoin:
        c.de = w.gamma_res * w.alpha;
        c.ibv = w.gamma_res * w.beta;
        c.sbc = w.gamma_sbc;
        break;
    case Strategy::Weak:
        c.wf = w.gamma_wf;
        c.ibv = w.weak_with_ibv ? w.beta : 0.0;
        break;
    case Strategy::Both:
        c.de = w.gamma_res * w.alpha;
        c.ibv = w.gamma_res * w.beta;
        c.wf = w.gamma_wf;
        c.sbc = w.both_with_sbc ? w.gamma_sbc : 0.0;
        break;
    }
    return c;
}

/// Loss components; a component a strategy does not use may be absent.
struct LossComponents {
    std::optional<double> l_de;
    std::optional<double> l_ibv;
    std::optional<double> l_sbc;
    std::optional<double> l_wf;
};

[[nodiscard]] inline LossBreakdown total_loss(Strategy s, const LossWeights &w,
                                              const LossComponents &parts) {
    const LossCoefficients c = loss_coefficients(s, w);
    auto take = [](double coeff, const std::optional<double> &v,
                   const char *name) {
        if (coeff == 0.0) {
            return v.value_or(0.0);
        }
        require<ContractError>(v.has_value(),
                               std::string("strategy needs the ") + name +
                                   " component");
        return *v;
    };
    LossBreakdown b;
    b.l_de = take(c.de, parts.l_de, "DE");
    b.l_ibv = take(c.ibv, parts.l_ibv, "IBV");
    b.l_sbc = take(c.sbc, parts.l_sbc, "SBC");
    b.l_wf = take(c.wf, parts.l_wf, "WF");
    b.total = c.de * b.l_de + c.ibv * b.l_ibv + c.sbc * b.l_sbc + c.wf * b.l_wf;
    return b;
}

/// All loss terms of one (problem, decomposition, strategy) over a shared
/// site table.
class LossProgram {
  public:
    struct Options {
        Strategy strategy = Strategy::Both;
        LossWeights weights;
        WeakOptions weak;
        /// Build every component regardless of the strategy (diagnostics).
        bool all_components = false;
    };

    LossProgram(const Problem &problem, const Decomposition &dec,
                const TestFunctionFamily &family, const Options &opt)
        : problem_(problem), opt_(opt),
          coeff_(loss_coefficients(opt.strategy, opt.weights)) {
        opt_.weights.validate();
        const bool all = opt.all_components;
        if (all || coeff_.de != 0.0) {
            build_collocation(dec);
        }
        if (all || coeff_.ibv != 0.0) {
            build_ibv(dec);
        }
        if (all || coeff_.sbc != 0.0) {
            build_sbc(dec);
        }
        if (all || coeff_.wf != 0.0) {
            weak_ = build_weak_plan(problem, family, dec.integration_layout(),
                                    table_, opt.weak);
        }
    }

    [[nodiscard]] const SiteTable &sites() const noexcept { return table_; }
    [[nodiscard]] const Options &options() const noexcept { return opt_; }

    /// Loss breakdown from site fields; fills `cotangent` (one per site) with
    /// d total / d field when given.
    LossBreakdown evaluate(std::span<const FieldBundle> fields,
                           std::vector<FieldBundle> *cotangent = nullptr) const {
        require<ContractError>(fields.size() == table_.size(),
                               "one field bundle per site required");
        if (cotangent) {
            cotangent->assign(table_.size(), FieldBundle{});
        }
        LossComponents parts;
        if (coll_) {
            parts.l_de = collocation(fields, cotangent, coeff_.de);
        }
        if (ibv_) {
            parts.l_ibv = ibv(fields, cotangent, coeff_.ibv);
        }
        if (sbc_) {
            parts.l_sbc = sbc(fields, cotangent, coeff_.sbc);
        }
        if (weak_) {
            parts.l_wf = weak(fields, cotangent, coeff_.wf);
        }
        return total_loss(opt_.strategy, opt_.weights, parts);
    }

    /// Same, pulling fields from an arbitrary evaluator (e.g. a known
    /// solution).
    [[nodiscard]] LossBreakdown evaluate_with(const FieldEvaluator &f) const {
        std::vector<FieldBundle> fields(table_.size());
        for (std::size_t s = 0; s < table_.size(); ++s) {
            fields[s] = f(table_[s].owner, table_[s].x, table_[s].needs);
        }
        return evaluate(fields);
    }

    [[nodiscard]] const std::optional<WeakPlan> &weak_plan() const noexcept {
        return weak_;
    }

  private:
    struct Collocation {
        std::vector<std::size_t> sites;
    };
    struct BoundaryTerm {
        std::vector<std::size_t> sites;
        std::vector<double> targets;
    };
    struct Jump {
        std::size_t plus;
        std::size_t minus;
    };

    void build_collocation(const Decomposition &dec) {
        Collocation c;
        const FieldNeeds needs = problem_.residual_needs();
        for (const auto &tp : dec.training()) {
            c.sites.push_back(table_.add(tp.owner, tp.x, needs));
        }
        coll_ = std::move(c);
    }

    void build_ibv(const Decomposition &dec) {
        std::vector<BoundaryTerm> terms;
        for (const auto &bc : problem_.boundary_conditions()) {
            BoundaryTerm t;
            for (const Coord &p : dec.boundary_points(bc)) {
                t.sites.push_back(
                    table_.add(dec.locate(p), p, FieldNeeds::value()));
                t.targets.push_back(bc.target(p));
            }
            terms.push_back(std::move(t));
        }
        ibv_ = std::move(terms);
    }

    void build_sbc(const Decomposition &dec) {
        std::vector<Jump> jumps;
        for (const auto &in : dec.interfaces()) {
            for (const Coord &p : in.samples) {
                jumps.push_back({table_.add(in.plus, p, FieldNeeds::value()),
                                 table_.add(in.minus, p, FieldNeeds::value())});
            }
        }
        sbc_ = std::move(jumps);
    }

    double collocation(std::span<const FieldBundle> fields,
                       std::vector<FieldBundle> *cot, double scale) const {
        const auto &sites = coll_->sites;
        const double inv_n = 1.0 / static_cast<double>(sites.size());
        double acc = 0.0;
        for (std::size_t s : sites) {
            const auto r = problem_.linearize(table_[s].x, fields[s]);
            acc += r.value * r.value;
            if (cot && scale != 0.0) {
                const double g = scale * 2.0 * r.value * inv_n;
                auto &c = (*cot)[s];
                c.f += g * r.partials.f;
                for (int d = 0; d < 2; ++d) {
                    c.d1[d] += g * r.partials.d1[d];
                    c.d2[d] += g * r.partials.d2[d];
                }
            }
        }
        return acc * inv_n;
    }

    double ibv(std::span<const FieldBundle> fields,
               std::vector<FieldBundle> *cot, double scale) const {
        double total = 0.0;
        for (const auto &t : *ibv_) {
            const double inv_n = 1.0 / static_cast<double>(t.sites.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < t.sites.size(); ++i) {
                const double e = fields[t.sites[i]].f - t.targets[i];
                acc += e * e;
                if (cot && scale != 0.0) {
                    (*cot)[t.sites[i]].f += scale * 2.0 * e * inv_n;
                }
            }
            total += acc * inv_n;
        }
        return total;
    }

    double sbc(std::span<const FieldBundle> fields,
               std::vector<FieldBundle> *cot, double scale) const {
        const auto &jumps = *sbc_;
        if (jumps.empty()) {
            return 0.0;
        }
        const double inv_n = 1.0 / static_cast<double>(jumps.size());
        double acc = 0.0;
        for (const auto &j : jumps) {
            const double e = fields[j.plus].f - fields[j.minus].f;
            acc += e * e;
            if (cot && scale != 0.0) {
                const double g = scale * 2.0 * e * inv_n;
                (*cot)[j.plus].f += g;
                (*cot)[j.minus].f -= g;
            }
        }
        return acc * inv_n;
    }

    double weak(std::span<const FieldBundle> fields,
                std::vector<FieldBundle> *cot, double scale) const {
        const WeakPlan &plan = *weak_;
        const auto terms = plan.evaluate(fields);
        const double inv_n = 1.0 / static_cast<double>(terms.size());
        double acc = 0.0;
        for (double t : terms) {
            acc += t * t;
        }
        if (cot && scale != 0.0) {
            const std::size_t w = plan.width();
            for (std::size_t c = 0; c < w; ++c) {
                const std::size_t s = plan.sites[c];
                const FieldBundle &fb = fields[s];
                FieldBundle &out = (*cot)[s];
                for (std::size_t v = 0; v < plan.num_functions; ++v) {
                    const double g = scale * 2.0 * terms[v] * inv_n;
                    const std::size_t idx = v * w + c;
                    out.f += g * (plan.A[idx] + plan.C[idx] * fb.d1[0]);
                    out.d1[0] += g * (plan.Bx[idx] + plan.C[idx] * fb.f);
                    out.d1[1] += g * plan.By[idx];
                }
            }
        }
        return acc * inv_n;
    }

    Problem problem_;
    Options opt_;
    LossCoefficients coeff_;
    SiteTable table_;
    std::optional<Collocation> coll_;
    std::optional<std::vector<BoundaryTerm>> ibv_;
    std::optional<std::vector<Jump>> sbc_;
    std::optional<WeakPlan> weak_;
};

namespace detail {

inline LossProgram single_component(const Problem &pb,
                                    const Decomposition &dec,
                                    const TestFunctionFamily &family,
                                    Strategy s, LossWeights w) {
    return LossProgram(pb, dec, family, {s, w, {}, false});
}

} // namespace detail

/// Mean squared residual over the training points.
[[nodiscard]] inline double collocation_loss(const Problem &pb,
                                             const Decomposition &dec,
                                             const FieldEvaluator &model) {
    LossWeights w;
    w.beta = 0.0;
    return detail::single_component(pb, dec, {}, Strategy::Coll, w)
        .evaluate_with(model)
        .l_de;
}

/// Sum over boundary conditions of the mean squared boundary mismatch.
[[nodiscard]] inline double ibv_loss(const Problem &pb,
                                     const Decomposition &dec,
                                     const FieldEvaluator &model) {
    LossWeights w;
    w.alpha = 0.0;
    return detail::single_component(pb, dec, {}, Strategy::Coll, w)
        .evaluate_with(model)
        .l_ibv;
}

/// Mean squared jump over all interface samples.
[[nodiscard]] inline double sbc_loss(const Problem &pb,
                                     const Decomposition &dec,
                                     const FieldEvaluator &model) {
    LossWeights w;
    w.alpha = 0.0;
    w.beta = 0.0;
    w.gamma_res = 0.0;
    return detail::single_component(pb, dec, {}, Strategy::CollJoin, w)
        .evaluate_with(model)
        .l_sbc;
}

/// Mean squared weak term over the family.
[[nodiscard]] inline double weak_loss(const Problem &pb,
                                      const Decomposition &dec,
                                      const TestFunctionFamily &family,
                                      const FieldEvaluator &model,
                                      const WeakOptions &opt = {}) {
    LossWeights w;
    w.weak_with_ibv = false;
    return LossProgram(pb, dec, family, {Strategy::Weak, w, opt, false})
        .evaluate_with(model)
        .l_wf;
}

} // namespace qweak
