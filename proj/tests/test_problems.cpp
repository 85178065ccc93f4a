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
#include "qweak/decomposition.hpp"
#include "qweak/problems.hpp"

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace qweak;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const ProblemId kAll[] = {ProblemId::DampedOscillator, ProblemId::StationaryBurgers,
                          ProblemId::Linear2D, ProblemId::Laplace2D};

FieldNeeds everything() {
    return FieldNeeds::value() | FieldNeeds::first(0) | FieldNeeds::first(1) |
           FieldNeeds::second(0) | FieldNeeds::second(1);
}

} // namespace

TEST_CASE("problem names round-trip", "[problems]") {
    for (auto id : kAll) {
        CHECK(parse_problem(problem_name(id)) == id);
    }
    CHECK_THROWS_AS(parse_problem("heat"), ConfigError);
}

TEST_CASE("analytic solutions", "[problems]") {
    CHECK(Problem(ProblemId::DampedOscillator).analytic({0.0, 0.0}) == 1.0);
    CHECK(Problem(ProblemId::Linear2D).analytic({0.5, 0.5}) == 0.5);
    CHECK(Problem(ProblemId::Laplace2D).analytic({0.0, 0.5}) ==
          Approx(1.0).epsilon(1e-14));
    const Problem b(ProblemId::StationaryBurgers);
    CHECK(b.analytic({1.0, 0.0}) == Approx(std::sqrt(6.0) * std::tan(std::sqrt(1.5))));
    CHECK(b.analytic({1.0, 0.0}) == Approx(6.79).margin(1e-2));
    CHECK(b.burgers_boundary(1) == b.analytic({1.0, 0.0}));
    CHECK(b.burgers_boundary(-1) == b.analytic({-1.0, 0.0}));
}

TEST_CASE("residual of the analytic solution vanishes", "[problems]") {
    std::mt19937_64 rng(2);
    for (auto id : kAll) {
        const Problem pb(id);
        std::uniform_real_distribution<double> ux(pb.lower()[0] + 0.01,
                                                  pb.upper()[0] - 0.01);
        std::uniform_real_distribution<double> uy(pb.lower()[1] + 0.01,
                                                  pb.upper()[1] - 0.01);
        for (int k = 0; k < 20; ++k) {
            const Coord x{ux(rng), pb.is_2d() ? uy(rng) : 0.0};
            const auto u = testing::truth_fields(pb, x, 1e-3);
            INFO(problem_name(id) << " at " << x[0] << "," << x[1]);
            CHECK(std::abs(pb.residual(x, u, everything())) < 1e-6);
        }
    }
}

TEST_CASE("trivial solutions have zero residual", "[problems]") {
    FieldBundle flat;
    flat.f = 2.0;
    CHECK(Problem(ProblemId::StationaryBurgers).residual({0.3, 0.0}, flat, everything()) ==
          0.0);
    FieldBundle zero;
    CHECK(Problem(ProblemId::Laplace2D).residual({0.3, 0.4}, zero, everything()) == 0.0);
}

TEST_CASE("residual requires its derivatives", "[problems]") {
    const Problem pb(ProblemId::StationaryBurgers);
    CHECK_THROWS_AS(pb.residual({0.0, 0.0}, {}, FieldNeeds::first(0)), ContractError);
}

TEST_CASE("boundary data matches the analytic solution", "[problems]") {
    for (auto id : kAll) {
        const Problem pb(id);
        for (const auto &bc : pb.boundary_conditions()) {
            for (int k = 0; k <= 20; ++k) {
                Coord p{0.0, 0.0};
                p[bc.fixed_dim] = bc.fixed_value;
                if (pb.is_2d()) {
                    p[1 - bc.fixed_dim] = k / 20.0;
                }
                CHECK(std::abs(bc.target(p) - pb.analytic(p)) < 1e-12);
            }
        }
    }
    CHECK(Problem(ProblemId::Laplace2D).boundary_conditions().size() == 4);
}

TEST_CASE("test-function families", "[problems]") {
    CHECK(test_functions(ProblemId::DampedOscillator, 0).size() == 11);
    CHECK(test_functions(ProblemId::StationaryBurgers, 0).size() == 11);
    CHECK(test_functions(ProblemId::Linear2D, 0).size() == 9);
    const auto lap = test_functions(ProblemId::Laplace2D, 3);
    REQUIRE(lap.size() == 144);
    for (const auto &v : lap) {
        CHECK(v.j >= 0.1);
        CHECK(v.j <= 10.0);
        CHECK(v.k >= 0.1);
        CHECK(v.k <= 10.0);
    }
    const auto again = test_functions(ProblemId::Laplace2D, 3);
    CHECK(again.front().j == lap.front().j);
    CHECK(test_functions(ProblemId::Laplace2D, 4).front().j != lap.front().j);

    // closed-form derivatives against finite differences
    for (auto id : kAll) {
        const Problem pb(id);
        for (const auto &v : test_functions(id, 1, 6)) {
            const Coord x{pb.is_2d() ? 0.37 : -0.41, pb.is_2d() ? 0.62 : 0.0};
            for (int d = 0; d < pb.dims(); ++d) {
                auto f = [&](const Coord &p) { return v.value(p); };
                const auto fd = testing::fd4(f, x, d, 1e-3);
                CHECK(v.derivative(x, d, 1) == Approx(fd.d1).margin(1e-6));
                CHECK(v.derivative(x, d, 2) == Approx(fd.d2).margin(1e-4));
            }
        }
    }
}

TEST_CASE("weak terms of the analytic solution are bounded by the quadrature "
          "error", "[problems]") {
    for (auto id : kAll) {
        const Problem pb(id);
        const RunConfig cfg = default_config(id);
        const auto dec = build_decomposition(pb, cfg.x_splits, cfg.y_splits, cfg.grid);
        const auto coarse = dec.integration_layout(1);
        const auto fine = dec.integration_layout(10);
        const auto truth = testing::truth_evaluator(pb, 1e-3);
        const auto family = test_functions(id, cfg.test_seed, cfg.num_test_functions);
        for (const auto &v : family) {
            const double t = weak_term(pb, v, truth, coarse);
            const double t_fine = weak_term(pb, v, truth, fine);
            INFO(problem_name(id) << " j=" << v.j << " k=" << v.k << " term=" << t
                                  << " fine=" << t_fine);
            CHECK(std::abs(t) <= 1.1 * std::abs(t - t_fine) + 1e-9);
        }
    }
}

TEST_CASE("damped-oscillator weak term: constant test function", "[problems]") {
    const Problem pb(ProblemId::DampedOscillator);
    const auto dec = build_decomposition(pb, {-0.33, 0.33});
    const auto truth = testing::truth_evaluator(pb);
    const TestFunction one{TestFunctionKind::One, 0.0, 0.0};
    const double t = weak_term(pb, one, truth, dec.integration_layout(1));
    const double fine = weak_term(pb, one, truth, dec.integration_layout(10));
    CHECK(std::abs(t) <= 1.1 * std::abs(t - fine) + 1e-12);
}

TEST_CASE("damped-oscillator weak terms are shift invariant", "[problems]") {
    const Problem pb(ProblemId::DampedOscillator);
    const auto dec = build_decomposition(pb, {-0.33, 0.33});
    const auto layout = dec.integration_layout(1);
    auto model = [](double c) -> FieldEvaluator {
        return [c](int, const Coord &x, FieldNeeds) {
            FieldBundle b;
            b.f = std::sin(2 * x[0]) + x[0] * x[0] + c;
            b.d1[0] = 2 * std::cos(2 * x[0]) + 2 * x[0];
            return b;
        };
    };
    // A constant c changes the term by c ([v] - Q(v')), Q the trapezium rule
    // over the subdomain grids: zero up to the quadrature error on v'.
    for (const auto &v : test_functions(ProblemId::DampedOscillator, 0)) {
        double q = 0.0;
        for (const auto &seg : layout.segments) {
            std::vector<double> dv;
            for (double x : seg.grid.points()) {
                dv.push_back(v.derivative({x, 0.0}, 0, 1));
            }
            q += trapz_1d(dv, seg.grid);
        }
        const double jump = v.value({1.0, 0.0}) - v.value({-1.0, 0.0});
        const double exact_err = std::abs(jump - q);
        CHECK(exact_err < 1e-3);
        for (double c : {-3.0, 0.5, 10.0}) {
            const double d = weak_term(pb, v, model(c), layout) -
                             weak_term(pb, v, model(0.0), layout);
            CHECK(std::abs(std::abs(d) - std::abs(c) * exact_err) <=
                  1e-12 * (1.0 + std::abs(c)));
        }
        if (v.kind == TestFunctionKind::One) {
            CHECK(weak_term(pb, v, model(7.0), layout) ==
                  Approx(weak_term(pb, v, model(0.0), layout)).margin(1e-13));
        }
    }
}

TEST_CASE("weak terms equal the integral of v times the residual", "[problems]") {
    // For a smooth non-solution f on one subdomain, integration by parts
    // makes the weak term equal int v * DE(f) (up to quadrature error),
    // with the Laplace term using the known boundary trace.
    const Problem osc(ProblemId::DampedOscillator);
    const auto dec = build_decomposition(osc, {});
    FieldEvaluator f = [](int, const Coord &x, FieldNeeds) {
        FieldBundle b;
        b.f = std::cos(x[0]) + 0.3 * x[0];
        b.d1[0] = -std::sin(x[0]) + 0.3;
        b.d2[0] = -std::cos(x[0]);
        return b;
    };
    const auto fine = Grid1D::uniform(-1.0, 1.0, 4001);
    for (const auto &v : test_functions(ProblemId::DampedOscillator, 0)) {
        std::vector<double> integrand;
        for (double x : fine.points()) {
            const Coord p{x, 0.0};
            integrand.push_back(v.value(p) * osc.residual(p, f(0, p, {}), everything()));
        }
        const double direct = trapz_1d(integrand, fine);
        const double weak = weak_term(osc, v, f, dec.integration_layout(200));
        CHECK(weak == Approx(direct).margin(1e-4));
    }

    const Problem bur(ProblemId::StationaryBurgers);
    for (const auto &v : test_functions(ProblemId::StationaryBurgers, 0)) {
        std::vector<double> integrand;
        for (double x : fine.points()) {
            const Coord p{x, 0.0};
            integrand.push_back(v.value(p) * bur.residual(p, f(0, p, {}), everything()));
        }
        const double direct = trapz_1d(integrand, fine);
        const double weak = weak_term(bur, v, f, build_decomposition(bur, {})
                                                     .integration_layout(200));
        CHECK(weak == Approx(direct).margin(1e-4));
    }
}
