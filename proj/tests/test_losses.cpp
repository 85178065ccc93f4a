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

#include "qweak/config.hpp"
#include "qweak/losses.hpp"
#include "qweak/training.hpp"

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace qweak;
using Catch::Approx;

namespace {

FieldEvaluator constant(double c) {
    return [c](int, const Coord &, FieldNeeds) {
        FieldBundle b;
        b.f = c;
        return b;
    };
}

const ProblemId kAll[] = {ProblemId::DampedOscillator, ProblemId::StationaryBurgers,
                          ProblemId::Linear2D, ProblemId::Laplace2D};
const Strategy kStrategies[] = {Strategy::Coll, Strategy::CollJoin, Strategy::Weak,
                                Strategy::Both};

} // namespace

TEST_CASE("strategy names round-trip", "[losses]") {
    for (auto s : kStrategies) {
        CHECK(parse_strategy(strategy_name(s)) == s);
    }
    CHECK_THROWS_AS(parse_strategy("mixed"), ConfigError);
}

TEST_CASE("total loss gating and weighting", "[losses]") {
    LossWeights w;
    LossComponents parts{0.2, 0.0, std::nullopt, 0.3};
    CHECK(total_loss(Strategy::Both, w, parts).total == Approx(0.5).epsilon(1e-15));
    CHECK(total_loss(Strategy::Both, w, {0.0, 0.0, std::nullopt, 0.0}).total == 0.0);
    const double coll = total_loss(Strategy::Coll, w, {1.0, 2.0, std::nullopt, 7.0}).total;
    CHECK(total_loss(Strategy::Coll, w, {1.0, 2.0, std::nullopt, 99.0}).total == coll);
    CHECK(coll == 3.0);
    CHECK(total_loss(Strategy::CollJoin, w, {1.0, 2.0, 0.5, std::nullopt}).total == 3.5);
    CHECK(total_loss(Strategy::Weak, w, {std::nullopt, 2.0, std::nullopt, 0.25}).total ==
          2.25);
    CHECK_THROWS_AS(total_loss(Strategy::Weak, w, {1.0, 1.0, 1.0, std::nullopt}),
                    ContractError);
    LossWeights bad;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    LossWeights scaled;
    scaled.alpha = 2.0;
    scaled.beta = 3.0;
    scaled.gamma_res = 0.5;
    scaled.gamma_wf = 4.0;
    const auto b = total_loss(Strategy::Both, scaled, {1.0, 1.0, std::nullopt, 1.0});
    CHECK(b.total == Approx(0.5 * (2.0 + 3.0) + 4.0));
    CHECK(b.total == Approx(loss_coefficients(Strategy::Both, scaled).de * b.l_de +
                            loss_coefficients(Strategy::Both, scaled).ibv * b.l_ibv +
                            loss_coefficients(Strategy::Both, scaled).wf * b.l_wf)
                         .epsilon(1e-12));
}

TEST_CASE("collocation loss", "[losses]") {
    const Problem pb(ProblemId::StationaryBurgers);
    const auto d = build_decomposition(pb, {-0.33, 0.33});
    CHECK(collocation_loss(pb, d, constant(2.0)) == 0.0);
    CHECK(collocation_loss(pb, d, testing::truth_evaluator(pb)) < 1e-9);

    // one point, residual r -> r^2
    const Problem osc(ProblemId::DampedOscillator);
    GridSpec two;
    two.points_per_subdomain = 2;
    const auto tiny = build_decomposition(osc, {}, {}, two);
    const double r0 = osc.oscillator_source(-1.0);
    const double r1 = osc.oscillator_source(1.0);
    CHECK(collocation_loss(osc, tiny, constant(5.0)) ==
          Approx(0.5 * (r0 * r0 + r1 * r1)).epsilon(1e-14));
}

TEST_CASE("boundary loss", "[losses]") {
    const Problem osc(ProblemId::DampedOscillator);
    const auto d = build_decomposition(osc, {-0.33, 0.33});
    CHECK(ibv_loss(osc, d, constant(0.0)) == 1.0);
    CHECK(ibv_loss(osc, d, testing::truth_evaluator(osc)) < 1e-9);

    const Problem lap(ProblemId::Laplace2D);
    GridSpec g21;
    g21.points_per_axis = 21;
    const auto e = build_decomposition(lap, {0.5}, {0.5}, g21);
    // mean of sin^2(pi y) over the 21 edge points = 10/21
    CHECK(ibv_loss(lap, e, constant(0.0)) == Approx(10.0 / 21.0).epsilon(1e-12));
    CHECK(ibv_loss(lap, e, testing::truth_evaluator(lap)) < 1e-9);
}

TEST_CASE("continuity loss", "[losses]") {
    const Problem osc(ProblemId::DampedOscillator);
    const auto d = build_decomposition(osc, {-0.33, 0.33});
    CHECK(sbc_loss(osc, d, constant(1.5)) == 0.0);
    FieldEvaluator steps = [](int owner, const Coord &, FieldNeeds) {
        FieldBundle b;
        b.f = owner == 0 ? 1.0 : (owner == 1 ? 3.0 : 4.0);
        return b;
    };
    CHECK(sbc_loss(osc, d, steps) == Approx(0.5 * (4.0 + 1.0)));
    const auto two = build_decomposition(osc, {0.1});
    FieldEvaluator pair = [](int owner, const Coord &, FieldNeeds) {
        FieldBundle b;
        b.f = owner == 0 ? -0.5 : 1.0;
        return b;
    };
    CHECK(sbc_loss(osc, two, pair) == Approx(2.25));
}

TEST_CASE("weak loss", "[losses]") {
    for (auto id : kAll) {
        const Problem pb(id);
        const RunConfig c = default_config(id);
        const auto d = build_decomposition(pb, c.x_splits, c.y_splits, c.grid);
        const auto fam = test_functions(id, c.test_seed, c.num_test_functions);
        const auto truth = testing::truth_evaluator(pb);
        const auto fine = d.integration_layout(10);
        double bound = 0.0;
        for (const auto &v : fam) {
            const double t = weak_term(pb, v, truth, d.integration_layout(1));
            const double e = 1.1 * std::abs(t - weak_term(pb, v, truth, fine)) + 1e-9;
            bound += e * e;
        }
        bound /= static_cast<double>(fam.size());
        INFO(problem_name(id));
        CHECK(weak_loss(pb, d, fam, truth) <= bound);
    }
    // family of one: t -> t^2
    const Problem osc(ProblemId::DampedOscillator);
    const auto d = build_decomposition(osc, {-0.33, 0.33});
    const TestFunctionFamily one{{TestFunctionKind::Sin, 2.0, 0.0}};
    const auto model = constant(0.7);
    const double t = weak_term(osc, one[0], model, d.integration_layout(1));
    CHECK(weak_loss(osc, d, one, model) == Approx(t * t).epsilon(1e-14));
}

TEST_CASE("loss components are non-negative and consistent", "[losses]") {
    for (auto id : kAll) {
        const auto ex = testing::shrunken_experiment(id);
        const auto pm = init_params(ex.model, ex.decomposition.size(), 4);
        for (auto s : kStrategies) {
            LossProgram lp(ex.problem, ex.decomposition, ex.family,
                           {s, {}, {}, true});
            const auto b = loss_value(lp, pm);
            CHECK(b.l_de >= 0.0);
            CHECK(b.l_ibv >= 0.0);
            CHECK(b.l_sbc >= 0.0);
            CHECK(b.l_wf >= 0.0);
            const auto c = loss_coefficients(s, {});
            CHECK(std::abs(b.total - (c.de * b.l_de + c.ibv * b.l_ibv +
                                      c.sbc * b.l_sbc + c.wf * b.l_wf)) <=
                  1e-12 * std::max(1.0, b.total));
        }
    }
}

TEST_CASE("assembled loss gradients match finite differences", "[losses]") {
    for (auto id : kAll) {
        const auto ex = testing::shrunken_experiment(id);
        CHECK(ex.family.size() == 3);
        for (auto s : kStrategies) {
            INFO(problem_name(id) << " / " << strategy_name(s));
            CHECK(testing::loss_gradient_fd_error(ex, s, 17) < 1e-4);
        }
    }
}
