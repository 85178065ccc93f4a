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

#include "qweak/quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace qweak;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

template <typename F> std::vector<double> sample(const Grid1D &g, F f) {
    std::vector<double> v;
    for (double x : g.points()) {
        v.push_back(f(x));
    }
    return v;
}

template <typename F> std::vector<double> sample2(const Grid2D &g, F f) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        for (std::size_t j = 0; j < g.y.size(); ++j) {
            v[g.index(i, j)] = f(g.x[i], g.y[j]);
        }
    }
    return v;
}

} // namespace

TEST_CASE("grids are validated", "[quadrature]") {
    CHECK_THROWS_AS(Grid1D({0.0}), ConfigError);
    CHECK_THROWS_AS(Grid1D({0.0, 0.5, 0.5}), ConfigError);
    const auto g = Grid1D::uniform(-1.0, 1.0, 5);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == 1.0);
    const auto r = g.refined(10);
    CHECK(r.size() == 41);
    CHECK(r.back() == 1.0);
}

TEST_CASE("1D trapezium", "[quadrature]") {
    const auto g = Grid1D::uniform(0.0, 1.0, 11);
    CHECK(trapz_1d(sample(g, [](double x) { return x; }), g) == 0.5);
    const Grid1D uneven({-2.0, -1.5, 0.1, 0.2, 3.0});
    CHECK(trapz_1d(sample(uneven, [](double) { return 1.0; }), uneven) ==
          Approx(5.0).margin(1e-14));
    CHECK(std::abs(trapz_1d(sample(uneven, [](double x) { return 3 * x - 1; }),
                            uneven) -
                   (1.5 * (9.0 - 4.0) - 5.0)) <= 1e-14);
    const auto g91 = Grid1D::uniform(0.0, 1.0, 91);
    CHECK(std::abs(trapz_1d(sample(g91, [](double x) { return std::sin(kPi * x); }),
                            g91) -
                   2.0 / kPi) < 1e-3);
    CHECK_THROWS_AS(trapz_1d(std::vector<double>(3, 0.0), g), ContractError);
}

TEST_CASE("trapezium weights reproduce trapz_1d", "[quadrature]") {
    const Grid1D g({0.0, 0.1, 0.35, 0.9, 1.0});
    const auto v = sample(g, [](double x) { return std::exp(x); });
    const auto w = trapezium_weights(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += w[i] * v[i];
    }
    CHECK(acc == Approx(trapz_1d(v, g)).epsilon(1e-15));
}

TEST_CASE("2D tensor trapezium", "[quadrature]") {
    const Grid2D g{Grid1D::uniform(0.0, 1.0, 21), Grid1D::uniform(0.0, 1.0, 21)};
    CHECK(trapz_2d(sample2(g, [](double, double) { return 1.0; }), g) ==
          Approx(1.0).margin(1e-14));
    CHECK(std::abs(trapz_2d(sample2(g, [](double x, double y) { return x * y; }), g) -
                   0.25) <= 1e-14);
    CHECK(std::abs(trapz_2d(sample2(g, [](double x, double y) {
                                return 2 + x - 3 * y + 0.5 * x * y;
                            }),
                            g) -
                   (2 + 0.5 - 1.5 + 0.125)) <= 1e-14);
    CHECK(std::abs(trapz_2d(sample2(g, [](double x, double y) {
                                return std::sin(kPi * x) * std::sin(kPi * y);
                            }),
                            g) -
                   4.0 / (kPi * kPi)) < 5e-3);
    CHECK_THROWS_AS(trapz_2d(std::vector<double>(10, 0.0), g), ContractError);
}

TEST_CASE("trapezium is linear and exact on grid-aligned kinks", "[quadrature]") {
    const auto g = Grid1D::uniform(-1.0, 1.0, 41);
    const auto f = sample(g, [](double x) { return std::cos(3 * x); });
    const auto h = sample(g, [](double x) { return x * x * x; });
    std::vector<double> mix(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        mix[i] = 2.5 * f[i] - 0.75 * h[i];
    }
    CHECK(std::abs(trapz_1d(mix, g) - (2.5 * trapz_1d(f, g) - 0.75 * trapz_1d(h, g))) <
          1e-12);
    const auto kink = sample(g, [](double x) { return std::abs(x - 0.5); });
    CHECK(trapz_1d(kink, g) == Approx(0.5 * 1.5 * 1.5 + 0.5 * 0.5 * 0.5).epsilon(1e-14));
}

TEST_CASE("Monte-Carlo integration", "[quadrature]") {
    const BoxSampler unit({0.0, 0.0}, {1.0, 0.0}, 1);
    CHECK(monte_carlo([](const Coord &) { return 1.0; }, {1000, 0, 2.5}, unit) ==
          Approx(2.5).epsilon(1e-14));
    const McConfig mc{100000, 0, 1.0};
    const double m1 = monte_carlo([](const Coord &p) { return p[0]; }, mc, unit);
    CHECK(std::abs(m1 - 0.5) < 5e-3);
    CHECK(std::abs(monte_carlo([](const Coord &p) { return p[0] * p[0]; }, mc, unit) -
                   1.0 / 3.0) < 5e-3);
    CHECK(monte_carlo([](const Coord &p) { return p[0]; }, mc, unit) == m1);
    CHECK_THROWS_AS(monte_carlo([](const Coord &) { return 1.0; }, {0, 0, 1.0}, unit),
                    ConfigError);
    const BoxSampler square({0.0, 0.0}, {2.0, 1.0}, 2);
    CHECK(square.volume() == 2.0);
}
