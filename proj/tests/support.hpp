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
// Shared test oracles.
#pragma once

#include "qweak/config.hpp"
#include "qweak/diffqnn.hpp"
#include "qweak/fields.hpp"
#include "qweak/problems.hpp"
#include "qweak/training.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace qweak::testing {

/// Fourth-order central differences of a scalar function along one axis.
struct FdDerivatives {
    double d1 = 0.0;
    double d2 = 0.0;
};

inline FdDerivatives fd4(const std::function<double(const Coord &)> &f,
                         const Coord &x, int dim, double h = 1e-3) {
    auto at = [&](double k) {
        Coord p = x;
        p[dim] += k * h;
        return f(p);
    };
    const double fp2 = at(2), fp = at(1), f0 = at(0), fm = at(-1),
                 fm2 = at(-2);
    return {(-fp2 + 8 * fp - 8 * fm + fm2) / (12 * h),
            (-fp2 + 16 * fp - 30 * f0 + 16 * fm - fm2) / (12 * h * h)};
}

/// Field bundle of the analytic solution with finite-difference derivatives.
inline FieldBundle truth_fields(const Problem &pb, const Coord &x,
                                double h = 1e-3) {
    auto f = [&](const Coord &p) { return pb.analytic(p); };
    FieldBundle b;
    b.f = pb.analytic(x);
    for (int d = 0; d < pb.dims(); ++d) {
        const auto fd = fd4(f, x, d, h);
        b.d1[d] = fd.d1;
        b.d2[d] = fd.d2;
    }
    return b;
}

inline FieldEvaluator truth_evaluator(const Problem &pb, double h = 1e-3) {
    return [pb, h](int, const Coord &x, FieldNeeds) {
        return truth_fields(pb, x, h);
    };
}

/// Random model parameters with theta ~ U[0, 2 pi).
inline ModelParams random_params(const CompiledQnn &model, std::uint64_t seed,
                                 double a = 1.0, double b = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    ModelParams p;
    p.theta.resize(model.num_theta);
    for (double &t : p.theta) {
        t = u(rng);
    }
    p.a = a;
    p.b = b;
    return p;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

/// Two-qubit, depth-1 models on an 8-point (1D) or 9-point (2D) two-subdomain
/// setup with three test functions.
inline Experiment shrunken_experiment(ProblemId id) {
    RunConfig c = default_config(id);
    c.qubits = 2;
    c.depth = 1;
    c.separator_depth = 1;
    c.uploads = 1;
    c.num_test_functions = 3;
    if (id == ProblemId::Linear2D || id == ProblemId::Laplace2D) {
        c.x_splits = {0.5};
        c.y_splits = {};
        c.grid.points_per_axis = 3;
    } else {
        c.x_splits = {0.0};
        c.grid.points_per_subdomain = 4;
    }
    auto ex = make_experiment(c);
    ex.family.resize(3);
    return ex;
}

/// Largest relative deviation between the assembled loss gradient and
/// central finite differences of the loss, over every coordinate.
inline double loss_gradient_fd_error(const Experiment &ex, Strategy s,
                                     std::uint64_t seed, double h = 1e-4) {
    auto pm = init_params(ex.model, ex.decomposition.size(), seed);
    for (auto &p : pm.params) {
        p.a = 0.8;
        p.b = 0.3;
    }
    LossProgram lp(ex.problem, ex.decomposition, ex.family, {s, {}, {}, false});
    const auto g = loss_and_gradient(lp, pm);
    const auto flat = flatten(pm);
    double worst = 0.0;
    for (std::size_t k = 0; k < flat.size(); ++k) {
        auto up = flat, dn = flat;
        up[k] += h;
        dn[k] -= h;
        auto pu = pm, pd = pm;
        unflatten(up, pu);
        unflatten(dn, pd);
        const double fd =
            (loss_value(lp, pu).total - loss_value(lp, pd).total) / (2 * h);
        worst = std::max(worst, std::abs(fd - g.grad[k]) /
                                    std::max(std::abs(fd), 1e-2));
    }
    return worst;
}

/// Test functions whose weak term on the analytic solution exceeds the
/// quadrature-refinement error estimate (|default - 10x finer| + 10%).
inline std::vector<std::size_t> weak_truth_violations(ProblemId id) {
    const RunConfig c = default_config(id);
    const Problem pb(id);
    const auto d = build_decomposition(pb, c.x_splits, c.y_splits, c.grid);
    const auto fam = test_functions(id, c.test_seed, c.num_test_functions);
    const auto truth = truth_evaluator(pb);
    const auto coarse = d.integration_layout(1);
    const auto fine = d.integration_layout(10);
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const double t = weak_term(pb, fam[i], truth, coarse);
        const double tf = weak_term(pb, fam[i], truth, fine);
        if (std::abs(t) > 1.1 * std::abs(t - tf) + 1e-9) {
            bad.push_back(i);
        }
    }
    return bad;
}

} // namespace qweak::testing
