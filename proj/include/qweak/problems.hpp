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
 * The four benchmark equations: residuals, boundary data, closed-form
 * solutions, sinusoidal test-function families and the integrated-by-parts
 * weak terms.
 *
 *  - damped oscillator  f' + k e^{-kx} cos(lx) + l e^{-kx} sin(lx) = 0,
 *    f(0) = 1 on [-1, 1]; solution e^{-kx} cos(lx)
 *  - stationary Burgers f f' - nu f'' = 0, f(+-1) = f_{+-1} on [-1, 1];
 *    solution sqrt(2 nu a) tan(sqrt(a / 2nu) (x + b))
 *  - linear 2D          f_x + f_y - 2(x + y) = 0, f(0,y) = y^2,
 *    f(x,0) = x^2 on [0,1]^2; solution x^2 + y^2
 *  - Laplace            f_xx + f_yy = 0, f(0,y) = sin(pi y), f = 0 on the
 *    other edges; solution sinh(pi(x-1)) / sinh(-pi) sin(pi y)
 */
#pragma once

#include "qweak/error.hpp"
#include "qweak/fields.hpp"
#include "qweak/quadrature.hpp"
#include "qweak/sites.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qweak {

enum class ProblemId { DampedOscillator, StationaryBurgers, Linear2D, Laplace2D };

[[nodiscard]] inline std::string_view problem_name(ProblemId id) {
    switch (id) {
    case ProblemId::DampedOscillator:
        return "damped_oscillator";
    case ProblemId::StationaryBurgers:
        return "burgers";
    case ProblemId::Linear2D:
        return "linear_2d";
    case ProblemId::Laplace2D:
        return "laplace";
    }
    return "?";
}

[[nodiscard]] inline ProblemId parse_problem(std::string_view name) {
    for (auto id : {ProblemId::DampedOscillator, ProblemId::StationaryBurgers,
                    ProblemId::Linear2D, ProblemId::Laplace2D}) {
        if (problem_name(id) == name) {
            return id;
        }
    }
    throw ConfigError("unknown problem '" + std::string(name) + "'");
}

struct ProblemConstants {
    double kappa = 1.0;
    double lambda = 10.0;
    double nu = 1.0;
    double burgers_a = 3.0;
    double burgers_b = 0.0;
};

/// Dirichlet data on one boundary piece: the slice x[fixed_dim] = fixed_value.
struct BoundaryCondition {
    std::string label;
    int fixed_dim = 0;
    double fixed_value = 0.0;
    std::function<double(const Coord &)> target;
};

/// Residual value and its partial derivatives w.r.t. the field quantities.
struct ResidualLinearization {
    double value = 0.0;
    FieldBundle partials;
};

enum class TestFunctionKind { Cos, One, Sin, CosSin };

/// Smooth test function with closed-form derivatives up to second order.
/// 1D: cos(pi j x), 1 or sin(pi j x). 2D: cos(pi j x) sin(pi k y).
struct TestFunction {
    TestFunctionKind kind = TestFunctionKind::One;
    double j = 0.0;
    double k = 0.0;

    [[nodiscard]] double value(const Coord &p) const {
        const double wj = std::numbers::pi * j;
        switch (kind) {
        case TestFunctionKind::Cos:
            return std::cos(wj * p[0]);
        case TestFunctionKind::One:
            return 1.0;
        case TestFunctionKind::Sin:
            return std::sin(wj * p[0]);
        case TestFunctionKind::CosSin:
            return std::cos(wj * p[0]) * std::sin(std::numbers::pi * k * p[1]);
        }
        return 0.0;
    }

    /// d^order v / dx_dim^order for order 1 or 2.
    [[nodiscard]] double derivative(const Coord &p, int dim, int order) const {
        const double wj = std::numbers::pi * j;
        const double wk = std::numbers::pi * k;
        switch (kind) {
        case TestFunctionKind::One:
            return 0.0;
        case TestFunctionKind::Cos:
            if (dim != 0) {
                return 0.0;
            }
            return order == 1 ? -wj * std::sin(wj * p[0])
                              : -wj * wj * std::cos(wj * p[0]);
        case TestFunctionKind::Sin:
            if (dim != 0) {
                return 0.0;
            }
            return order == 1 ? wj * std::cos(wj * p[0])
                              : -wj * wj * std::sin(wj * p[0]);
        case TestFunctionKind::CosSin:
            if (dim == 0) {
                return order == 1
                           ? -wj * std::sin(wj * p[0]) * std::sin(wk * p[1])
                           : -wj * wj * value(p);
            }
            return order == 1 ? wk * std::cos(wj * p[0]) * std::cos(wk * p[1])
                              : -wk * wk * value(p);
        }
        return 0.0;
    }
};

using TestFunctionFamily = std::vector<TestFunction>;

/// Where weak-form integrals are sampled and which subdomain model owns each
/// sample. 1D problems integrate each subdomain over its own closed grid;
/// 2D problems integrate over one global tensor grid.
struct IntegrationLayout {
    int dims = 1;
    struct Segment {
        Grid1D grid;
        int owner = 0;
    };
    std::vector<Segment> segments;
    int left_owner = 0;  ///< owner of the left end of a 1D domain
    int right_owner = 0; ///< owner of the right end of a 1D domain
    std::optional<Grid2D> tensor;
    std::vector<int> tensor_owner; ///< per tensor vertex, x-major
};

struct WeakOptions {
    /// Burgers: use the known f(+-1) in the [nu f v'] boundary terms instead
    /// of the model values.
    bool burgers_known_boundary = false;
};

/// All weak terms of a family as one sparse bilinear form over sites:
///   t_v = c_v + sum_s A f_s + Bx fx_s + By fy_s + C f_s fx_s
struct WeakPlan {
    std::size_t num_functions = 0;
    std::vector<std::size_t> sites; ///< site ids into the owning SiteTable
    std::vector<double> constant;   ///< per function
    std::vector<double> A, Bx, By, C; ///< num_functions x sites.size()

    [[nodiscard]] std::size_t width() const { return sites.size(); }

    /// Weak term of every function given the fields of the plan's sites.
    [[nodiscard]] std::vector<double>
    evaluate(std::span<const FieldBundle> site_fields) const {
        std::vector<double> out(constant);
        const std::size_t w = width();
        for (std::size_t v = 0; v < num_functions; ++v) {
            double acc = 0.0;
            for (std::size_t c = 0; c < w; ++c) {
                const FieldBundle &fb = site_fields[sites[c]];
                const std::size_t idx = v * w + c;
                acc += A[idx] * fb.f + Bx[idx] * fb.d1[0] +
                       By[idx] * fb.d1[1] + C[idx] * fb.f * fb.d1[0];
            }
            out[v] += acc;
        }
        return out;
    }
};

class Problem {
  public:
    explicit Problem(ProblemId id, ProblemConstants constants = {})
        : id_(id), k_(constants) {}

    [[nodiscard]] ProblemId id() const noexcept { return id_; }
    [[nodiscard]] std::string_view name() const { return problem_name(id_); }
    [[nodiscard]] const ProblemConstants &constants() const noexcept {
        return k_;
    }
    [[nodiscard]] int dims() const noexcept {
        return is_2d() ? 2 : 1;
    }
    [[nodiscard]] bool is_2d() const noexcept {
        return id_ == ProblemId::Linear2D || id_ == ProblemId::Laplace2D;
    }
    [[nodiscard]] Coord lower() const {
        return is_2d() ? Coord{0.0, 0.0} : Coord{-1.0, 0.0};
    }
    [[nodiscard]] Coord upper() const {
        return is_2d() ? Coord{1.0, 1.0} : Coord{1.0, 0.0};
    }

    /// Forcing of the damped oscillator, k e^{-kx} cos(lx) + l e^{-kx} sin(lx).
    [[nodiscard]] double oscillator_source(double x) const {
        const double e = std::exp(-k_.kappa * x);
        return k_.kappa * e * std::cos(k_.lambda * x) +
               k_.lambda * e * std::sin(k_.lambda * x);
    }

    [[nodiscard]] double burgers_solution(double x) const {
        const double a = k_.burgers_a;
        return std::sqrt(2.0 * k_.nu * a) *
               std::tan(std::sqrt(a / (2.0 * k_.nu)) * (x + k_.burgers_b));
    }

    [[nodiscard]] double analytic(const Coord &p) const {
        const double pi = std::numbers::pi;
        switch (id_) {
        case ProblemId::DampedOscillator:
            return std::exp(-k_.kappa * p[0]) * std::cos(k_.lambda * p[0]);
        case ProblemId::StationaryBurgers:
            return burgers_solution(p[0]);
        case ProblemId::Linear2D:
            return p[0] * p[0] + p[1] * p[1];
        case ProblemId::Laplace2D:
            return std::sinh(pi * (p[0] - 1.0)) / std::sinh(-pi) *
                   std::sin(pi * p[1]);
        }
        return 0.0;
    }

    /// Field quantities the residual reads.
    [[nodiscard]] FieldNeeds residual_needs() const {
        switch (id_) {
        case ProblemId::DampedOscillator:
            return FieldNeeds::first(0);
        case ProblemId::StationaryBurgers:
            return FieldNeeds::value() | FieldNeeds::first(0) |
                   FieldNeeds::second(0);
        case ProblemId::Linear2D:
            return FieldNeeds::first(0) | FieldNeeds::first(1);
        case ProblemId::Laplace2D:
            return FieldNeeds::second(0) | FieldNeeds::second(1);
        }
        return {};
    }

    [[nodiscard]] ResidualLinearization linearize(const Coord &p,
                                                  const FieldBundle &u) const {
        ResidualLinearization r;
        switch (id_) {
        case ProblemId::DampedOscillator:
            r.value = u.d1[0] + oscillator_source(p[0]);
            r.partials.d1[0] = 1.0;
            break;
        case ProblemId::StationaryBurgers:
            r.value = u.f * u.d1[0] - k_.nu * u.d2[0];
            r.partials.f = u.d1[0];
            r.partials.d1[0] = u.f;
            r.partials.d2[0] = -k_.nu;
            break;
        case ProblemId::Linear2D:
            r.value = u.d1[0] + u.d1[1] - 2.0 * (p[0] + p[1]);
            r.partials.d1[0] = 1.0;
            r.partials.d1[1] = 1.0;
            break;
        case ProblemId::Laplace2D:
            r.value = u.d2[0] + u.d2[1];
            r.partials.d2[0] = 1.0;
            r.partials.d2[1] = 1.0;
            break;
        }
        return r;
    }

    /// DE residual at p. `available` lists the quantities present in u.
    [[nodiscard]] double residual(const Coord &p, const FieldBundle &u,
                                  FieldNeeds available) const {
        const FieldNeeds need = residual_needs();
        require<ContractError>((need.bits() & available.bits()) == need.bits(),
                               "field bundle lacks a derivative the " +
                                   std::string(name()) + " residual needs");
        return linearize(p, u).value;
    }

    [[nodiscard]] double burgers_boundary(int side) const {
        return burgers_solution(side < 0 ? -1.0 : 1.0);
    }

    [[nodiscard]] std::vector<BoundaryCondition> boundary_conditions() const {
        const double pi = std::numbers::pi;
        switch (id_) {
        case ProblemId::DampedOscillator:
            return {{"f(0)", 0, 0.0, [](const Coord &) { return 1.0; }}};
        case ProblemId::StationaryBurgers: {
            const double lo = burgers_boundary(-1);
            const double hi = burgers_boundary(1);
            return {{"f(-1)", 0, -1.0, [lo](const Coord &) { return lo; }},
                    {"f(1)", 0, 1.0, [hi](const Coord &) { return hi; }}};
        }
        case ProblemId::Linear2D:
            return {{"f(0,y)", 0, 0.0,
                     [](const Coord &p) { return p[1] * p[1]; }},
                    {"f(x,0)", 1, 0.0,
                     [](const Coord &p) { return p[0] * p[0]; }}};
        case ProblemId::Laplace2D:
            return {{"f(0,y)", 0, 0.0,
                     [pi](const Coord &p) { return std::sin(pi * p[1]); }},
                    {"f(1,y)", 0, 1.0, [](const Coord &) { return 0.0; }},
                    {"f(x,0)", 1, 0.0, [](const Coord &) { return 0.0; }},
                    {"f(x,1)", 1, 1.0, [](const Coord &) { return 0.0; }}};
        }
        return {};
    }

  private:
    ProblemId id_;
    ProblemConstants k_;
};

/// Test-function family of a problem. `seed` only matters for Laplace.
[[nodiscard]] inline TestFunctionFamily test_functions(ProblemId id,
                                                       std::uint64_t seed,
                                                       std::size_t count = 144) {
    TestFunctionFamily out;
    switch (id) {
    case ProblemId::DampedOscillator:
    case ProblemId::StationaryBurgers:
        for (int j = -5; j <= 5; ++j) {
            const auto kind = j < 0    ? TestFunctionKind::Cos
                              : j == 0 ? TestFunctionKind::One
                                       : TestFunctionKind::Sin;
            out.push_back({kind, static_cast<double>(j), 0.0});
        }
        break;
    case ProblemId::Linear2D:
        for (int j = 1; j <= 3; ++j) {
            for (int k = 1; k <= 3; ++k) {
                out.push_back({TestFunctionKind::CosSin, static_cast<double>(j),
                               static_cast<double>(k)});
            }
        }
        break;
    case ProblemId::Laplace2D: {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> label(0.1, 10.0);
        for (std::size_t n = 0; n < count; ++n) {
            const double j = label(rng);
            const double k = label(rng);
            out.push_back({TestFunctionKind::CosSin, j, k});
        }
        break;
    }
    }
    return out;
}

namespace detail {

/// Accumulates the coefficients of one weak plan.
class WeakPlanBuilder {
  public:
    WeakPlanBuilder(WeakPlan &plan, SiteTable &table, std::size_t nfun)
        : plan_(plan), table_(table) {
        plan_.num_functions = nfun;
        plan_.constant.assign(nfun, 0.0);
    }

    enum class Term { A, Bx, By, C };

    void add(std::size_t v, int owner, const Coord &x, Term term,
             double coeff) {
        FieldNeeds needs = FieldNeeds::value();
        if (term == Term::Bx || term == Term::C) {
            needs |= FieldNeeds::first(0);
        } else if (term == Term::By) {
            needs |= FieldNeeds::first(1);
        }
        const std::size_t site = table_.add(owner, x, needs);
        auto [it, inserted] = column_.try_emplace(site, plan_.sites.size());
        if (inserted) {
            plan_.sites.push_back(site);
            pending_.emplace_back();
        }
        pending_[it->second].push_back({v, term, coeff});
    }

    void add_constant(std::size_t v, double c) { plan_.constant[v] += c; }

    void finish() {
        const std::size_t w = plan_.sites.size();
        const std::size_t n = plan_.num_functions * w;
        plan_.A.assign(n, 0.0);
        plan_.Bx.assign(n, 0.0);
        plan_.By.assign(n, 0.0);
        plan_.C.assign(n, 0.0);
        for (std::size_t c = 0; c < w; ++c) {
            for (const auto &e : pending_[c]) {
                const std::size_t idx = e.v * w + c;
                switch (e.term) {
                case Term::A:
                    plan_.A[idx] += e.coeff;
                    break;
                case Term::Bx:
                    plan_.Bx[idx] += e.coeff;
                    break;
                case Term::By:
                    plan_.By[idx] += e.coeff;
                    break;
                case Term::C:
                    plan_.C[idx] += e.coeff;
                    break;
                }
            }
        }
    }

  private:
    struct Entry {
        std::size_t v;
        Term term;
        double coeff;
    };
    WeakPlan &plan_;
    SiteTable &table_;
    std::map<std::size_t, std::size_t> column_;
    std::vector<std::vector<Entry>> pending_;
};

inline void weak_oscillator(const Problem &pb, const TestFunctionFamily &fam,
                            const IntegrationLayout &L, WeakPlanBuilder &b) {
    using Term = WeakPlanBuilder::Term;
    for (std::size_t v = 0; v < fam.size(); ++v) {
        const TestFunction &tf = fam[v];
        // [f v]_{-1}^{1}
        b.add(v, L.right_owner, {1.0, 0.0}, Term::A, tf.value({1.0, 0.0}));
        b.add(v, L.left_owner, {-1.0, 0.0}, Term::A, -tf.value({-1.0, 0.0}));
        for (const auto &seg : L.segments) {
            const auto w = trapezium_weights(seg.grid);
            for (std::size_t i = 0; i < seg.grid.size(); ++i) {
                const Coord x{seg.grid[i], 0.0};
                // - int f v'
                b.add(v, seg.owner, x, Term::A, -w[i] * tf.derivative(x, 0, 1));
                // + int v * source
                b.add_constant(v, w[i] * tf.value(x) *
                                      pb.oscillator_source(x[0]));
            }
        }
    }
}

inline void weak_burgers(const Problem &pb, const TestFunctionFamily &fam,
                         const IntegrationLayout &L, const WeakOptions &opt,
                         WeakPlanBuilder &b) {
    using Term = WeakPlanBuilder::Term;
    const double nu = pb.constants().nu;
    const Coord lo{-1.0, 0.0};
    const Coord hi{1.0, 0.0};
    for (std::size_t v = 0; v < fam.size(); ++v) {
        const TestFunction &tf = fam[v];
        // [nu f v']_{-1}^{1}
        if (opt.burgers_known_boundary) {
            b.add_constant(v, nu * (pb.burgers_boundary(1) *
                                        tf.derivative(hi, 0, 1) -
                                    pb.burgers_boundary(-1) *
                                        tf.derivative(lo, 0, 1)));
        } else {
            b.add(v, L.right_owner, hi, Term::A, nu * tf.derivative(hi, 0, 1));
            b.add(v, L.left_owner, lo, Term::A, -nu * tf.derivative(lo, 0, 1));
        }
        // - [nu f' v]_{-1}^{1}
        b.add(v, L.right_owner, hi, Term::Bx, -nu * tf.value(hi));
        b.add(v, L.left_owner, lo, Term::Bx, nu * tf.value(lo));
        for (const auto &seg : L.segments) {
            const auto w = trapezium_weights(seg.grid);
            for (std::size_t i = 0; i < seg.grid.size(); ++i) {
                const Coord x{seg.grid[i], 0.0};
                // - nu int f v''
                b.add(v, seg.owner, x, Term::A,
                      -nu * w[i] * tf.derivative(x, 0, 2));
                // + int f f' v
                b.add(v, seg.owner, x, Term::C, w[i] * tf.value(x));
            }
        }
    }
}

inline void weak_linear2d(const TestFunctionFamily &fam,
                          const IntegrationLayout &L, WeakPlanBuilder &b) {
    using Term = WeakPlanBuilder::Term;
    const Grid2D &g = *L.tensor;
    const auto wx = trapezium_weights(g.x);
    const auto wy = trapezium_weights(g.y);
    const std::size_t nx = g.x.size();
    const std::size_t ny = g.y.size();
    auto owner = [&](std::size_t i, std::size_t j) {
        return L.tensor_owner[g.index(i, j)];
    };
    for (std::size_t v = 0; v < fam.size(); ++v) {
        const TestFunction &tf = fam[v];
        // int [f v]_{x=0}^{1} dy
        for (std::size_t j = 0; j < ny; ++j) {
            const Coord right = g.point(nx - 1, j);
            const Coord left = g.point(0, j);
            b.add(v, owner(nx - 1, j), right, Term::A, wy[j] * tf.value(right));
            b.add(v, owner(0, j), left, Term::A, -wy[j] * tf.value(left));
        }
        // int [f v]_{y=0}^{1} dx
        for (std::size_t i = 0; i < nx; ++i) {
            const Coord top = g.point(i, ny - 1);
            const Coord bottom = g.point(i, 0);
            b.add(v, owner(i, ny - 1), top, Term::A, wx[i] * tf.value(top));
            b.add(v, owner(i, 0), bottom, Term::A, -wx[i] * tf.value(bottom));
        }
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                const Coord p = g.point(i, j);
                const double w = wx[i] * wy[j];
                // - int int f (v_x + v_y)
                b.add(v, owner(i, j), p, Term::A,
                      -w * (tf.derivative(p, 0, 1) + tf.derivative(p, 1, 1)));
                // - 2 int int (x + y) v
                b.add_constant(v, -2.0 * w * (p[0] + p[1]) * tf.value(p));
            }
        }
    }
}

inline void weak_laplace(const TestFunctionFamily &fam,
                         const IntegrationLayout &L, WeakPlanBuilder &b) {
    using Term = WeakPlanBuilder::Term;
    const Grid2D &g = *L.tensor;
    const auto wx = trapezium_weights(g.x);
    const auto wy = trapezium_weights(g.y);
    const std::size_t nx = g.x.size();
    const std::size_t ny = g.y.size();
    const double pi = std::numbers::pi;
    auto owner = [&](std::size_t i, std::size_t j) {
        return L.tensor_owner[g.index(i, j)];
    };
    for (std::size_t v = 0; v < fam.size(); ++v) {
        const TestFunction &tf = fam[v];
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                const Coord p = g.point(i, j);
                // int int f (v_xx + v_yy)
                b.add(v, owner(i, j), p, Term::A,
                      wx[i] * wy[j] *
                          (tf.derivative(p, 0, 2) + tf.derivative(p, 1, 2)));
            }
        }
        for (std::size_t j = 0; j < ny; ++j) {
            const Coord left = g.point(0, j);
            const Coord right = g.point(nx - 1, j);
            // + int sin(pi y) dv/dx(0, y) dy   (known trace at x = 0)
            b.add_constant(v, wy[j] * std::sin(pi * left[1]) *
                                  tf.derivative(left, 0, 1));
            // - int f_x(0, y) v(0, y) dy + int f_x(1, y) v(1, y) dy
            b.add(v, owner(0, j), left, Term::Bx, -wy[j] * tf.value(left));
            b.add(v, owner(nx - 1, j), right, Term::Bx,
                  wy[j] * tf.value(right));
        }
        for (std::size_t i = 0; i < nx; ++i) {
            const Coord top = g.point(i, ny - 1);
            const Coord bottom = g.point(i, 0);
            // + int f_y(x, 1) v(x, 1) dx - int f_y(x, 0) v(x, 0) dx
            b.add(v, owner(i, ny - 1), top, Term::By, wx[i] * tf.value(top));
            b.add(v, owner(i, 0), bottom, Term::By, -wx[i] * tf.value(bottom));
        }
    }
}

} // namespace detail

/// Builds the weak terms of every function in `family`, registering the
/// model evaluations they read in `table`.
[[nodiscard]] inline WeakPlan build_weak_plan(const Problem &pb,
                                              const TestFunctionFamily &family,
                                              const IntegrationLayout &layout,
                                              SiteTable &table,
                                              const WeakOptions &opt = {}) {
    require<ContractError>(!family.empty(), "empty test-function family");
    require<ContractError>(layout.dims == pb.dims(),
                           "integration layout dimension mismatch");
    require<ContractError>(pb.is_2d() ? layout.tensor.has_value()
                                      : !layout.segments.empty(),
                           "integration layout has no grid");
    WeakPlan plan;
    detail::WeakPlanBuilder b(plan, table, family.size());
    switch (pb.id()) {
    case ProblemId::DampedOscillator:
        detail::weak_oscillator(pb, family, layout, b);
        break;
    case ProblemId::StationaryBurgers:
        detail::weak_burgers(pb, family, layout, opt, b);
        break;
    case ProblemId::Linear2D:
        detail::weak_linear2d(family, layout, b);
        break;
    case ProblemId::Laplace2D:
        detail::weak_laplace(family, layout, b);
        break;
    }
    b.finish();
    return plan;
}

/// Field source for weak terms: (owner, point, needs) -> bundle.
using FieldEvaluator =
    std::function<FieldBundle(int owner, const Coord &x, FieldNeeds needs)>;

/// Unsquared weak term of one test function for an arbitrary trial function.
[[nodiscard]] inline double weak_term(const Problem &pb, const TestFunction &v,
                                      const FieldEvaluator &evaluator,
                                      const IntegrationLayout &layout,
                                      const WeakOptions &opt = {}) {
    SiteTable table;
    const WeakPlan plan = build_weak_plan(pb, {v}, layout, table, opt);
    std::vector<FieldBundle> fields(table.size());
    for (std::size_t s = 0; s < table.size(); ++s) {
        const Site &site = table[s];
        fields[s] = evaluator(site.owner, site.x, site.needs);
    }
    return plan.evaluate(fields).front();
}

} // namespace qweak
