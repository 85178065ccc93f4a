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
 * Box decomposition of a problem domain into subdomains, each carrying its
 * own independently parameterised copy of one QNN layout.
 *
 * 1D: every subdomain gets its own closed uniform grid, so neighbouring grids
 * share the interface point. 2D: one global tensor grid is partitioned; a
 * point on an interface belongs to the lowest-index subdomain containing it.
 */
#pragma once

#include "qweak/diffqnn.hpp"
#include "qweak/error.hpp"
#include "qweak/fields.hpp"
#include "qweak/problems.hpp"
#include "qweak/quadrature.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qweak {

struct Subdomain {
    Coord lo{0.0, 0.0};
    Coord hi{0.0, 0.0};
    std::vector<Coord> points; ///< training points evaluated by this model

    [[nodiscard]] bool contains(const Coord &p, int dims) const {
        for (int d = 0; d < dims; ++d) {
            if (p[d] < lo[d] || p[d] > hi[d]) {
                return false;
            }
        }
        return true;
    }
};

/// Shared boundary of two subdomains; jumps are sampled at `samples`.
struct Interface {
    int minus = 0;
    int plus = 0;
    std::vector<Coord> samples;
};

struct TrainingPoint {
    Coord x{0.0, 0.0};
    int owner = 0;
};

struct GridSpec {
    std::size_t points_per_subdomain = 30; ///< 1D
    std::size_t points_per_axis = 20;      ///< 2D, global grid
};

class Decomposition {
  public:
    [[nodiscard]] int dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t size() const noexcept {
        return subdomains_.size();
    }
    [[nodiscard]] const std::vector<Subdomain> &subdomains() const noexcept {
        return subdomains_;
    }
    [[nodiscard]] const std::vector<Interface> &interfaces() const noexcept {
        return interfaces_;
    }
    [[nodiscard]] const std::vector<TrainingPoint> &training() const noexcept {
        return training_;
    }
    [[nodiscard]] const std::optional<Grid2D> &global_grid() const noexcept {
        return global_;
    }
    [[nodiscard]] const std::vector<Grid1D> &segment_grids() const noexcept {
        return segments_;
    }
    [[nodiscard]] Coord lower() const noexcept { return lo_; }
    [[nodiscard]] Coord upper() const noexcept { return hi_; }

    /// Lowest-index subdomain whose closed box contains p.
    [[nodiscard]] int locate(const Coord &p) const {
        for (std::size_t s = 0; s < subdomains_.size(); ++s) {
            if (subdomains_[s].contains(p, dims_)) {
                return static_cast<int>(s);
            }
        }
        throw ContractError("point lies outside the domain");
    }

    /// Where weak-form integrals are sampled; `refine` subdivides every grid
    /// cell (1 = the training grid).
    [[nodiscard]] IntegrationLayout integration_layout(std::size_t refine = 1) const {
        IntegrationLayout L;
        L.dims = dims_;
        if (dims_ == 1) {
            for (std::size_t s = 0; s < segments_.size(); ++s) {
                L.segments.push_back(
                    {segments_[s].refined(refine), static_cast<int>(s)});
            }
            L.left_owner = locate(lo_);
            L.right_owner = locate(hi_);
            return L;
        }
        Grid2D g{global_->x.refined(refine), global_->y.refined(refine)};
        L.tensor_owner.resize(g.size());
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            for (std::size_t j = 0; j < g.y.size(); ++j) {
                L.tensor_owner[g.index(i, j)] = locate(g.point(i, j));
            }
        }
        L.tensor = std::move(g);
        return L;
    }

    /// Sample points of a boundary condition: the condition's point in 1D,
    /// the global-grid points along its edge in 2D.
    [[nodiscard]] std::vector<Coord>
    boundary_points(const BoundaryCondition &bc) const {
        if (dims_ == 1) {
            return {Coord{bc.fixed_value, 0.0}};
        }
        const Grid1D &free_axis = bc.fixed_dim == 0 ? global_->y : global_->x;
        std::vector<Coord> out;
        for (double t : free_axis.points()) {
            Coord p{0.0, 0.0};
            p[bc.fixed_dim] = bc.fixed_value;
            p[1 - bc.fixed_dim] = t;
            out.push_back(p);
        }
        return out;
    }

    friend Decomposition build_decomposition(const Problem &,
                                             const std::vector<double> &,
                                             const std::vector<double> &,
                                             const GridSpec &);

  private:
    int dims_ = 1;
    Coord lo_{0.0, 0.0};
    Coord hi_{0.0, 0.0};
    std::vector<Subdomain> subdomains_;
    std::vector<Interface> interfaces_;
    std::vector<TrainingPoint> training_;
    std::vector<Grid1D> segments_;
    std::optional<Grid2D> global_;
};

namespace detail {

inline std::vector<double> cut_points(double lo, double hi,
                                      const std::vector<double> &splits) {
    std::vector<double> cuts{lo};
    for (double s : splits) {
        require<ConfigError>(s > cuts.back() && s < hi,
                             "split " + std::to_string(s) +
                                 " must lie strictly inside the domain and "
                                 "increase");
        cuts.push_back(s);
    }
    cuts.push_back(hi);
    return cuts;
}

} // namespace detail

/// Splits the domain at `x_splits` (and `y_splits` in 2D).
[[nodiscard]] inline Decomposition
build_decomposition(const Problem &pb, const std::vector<double> &x_splits,
                    const std::vector<double> &y_splits = {},
                    const GridSpec &spec = {}) {
    Decomposition d;
    d.dims_ = pb.dims();
    d.lo_ = pb.lower();
    d.hi_ = pb.upper();
    const auto xc = detail::cut_points(d.lo_[0], d.hi_[0], x_splits);

    if (d.dims_ == 1) {
        require<ConfigError>(y_splits.empty(), "1D problems have no y splits");
        require<ConfigError>(spec.points_per_subdomain >= 2,
                             "need at least 2 points per subdomain");
        for (std::size_t s = 0; s + 1 < xc.size(); ++s) {
            Subdomain sub;
            sub.lo = {xc[s], 0.0};
            sub.hi = {xc[s + 1], 0.0};
            auto grid =
                Grid1D::uniform(xc[s], xc[s + 1], spec.points_per_subdomain);
            for (double x : grid.points()) {
                sub.points.push_back({x, 0.0});
                d.training_.push_back({{x, 0.0}, static_cast<int>(s)});
            }
            d.segments_.push_back(std::move(grid));
            d.subdomains_.push_back(std::move(sub));
        }
        for (std::size_t s = 0; s + 1 < d.subdomains_.size(); ++s) {
            d.interfaces_.push_back({static_cast<int>(s),
                                     static_cast<int>(s + 1),
                                     {Coord{xc[s + 1], 0.0}}});
        }
        return d;
    }

    require<ConfigError>(spec.points_per_axis >= 2,
                         "need at least 2 points per axis");
    const auto yc = detail::cut_points(d.lo_[1], d.hi_[1], y_splits);
    const std::size_t nsx = xc.size() - 1;
    const std::size_t nsy = yc.size() - 1;
    auto sub_index = [nsx](std::size_t ix, std::size_t iy) {
        return static_cast<int>(iy * nsx + ix);
    };
    for (std::size_t iy = 0; iy < nsy; ++iy) {
        for (std::size_t ix = 0; ix < nsx; ++ix) {
            Subdomain sub;
            sub.lo = {xc[ix], yc[iy]};
            sub.hi = {xc[ix + 1], yc[iy + 1]};
            d.subdomains_.push_back(std::move(sub));
        }
    }
    Grid2D g{Grid1D::uniform(d.lo_[0], d.hi_[0], spec.points_per_axis),
             Grid1D::uniform(d.lo_[1], d.hi_[1], spec.points_per_axis)};
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        for (std::size_t j = 0; j < g.y.size(); ++j) {
            const Coord p = g.point(i, j);
            const int owner = d.locate(p);
            d.subdomains_[static_cast<std::size_t>(owner)].points.push_back(p);
            d.training_.push_back({p, owner});
        }
    }
    auto samples_along = [](const Grid1D &axis, double lo, double hi) {
        std::vector<double> out;
        for (double t : axis.points()) {
            if (t >= lo && t <= hi) {
                out.push_back(t);
            }
        }
        return out;
    };
    // vertical interfaces x = xc[ix + 1]
    for (std::size_t iy = 0; iy < nsy; ++iy) {
        for (std::size_t ix = 0; ix + 1 < nsx; ++ix) {
            Interface in{sub_index(ix, iy), sub_index(ix + 1, iy), {}};
            for (double y : samples_along(g.y, yc[iy], yc[iy + 1])) {
                in.samples.push_back({xc[ix + 1], y});
            }
            d.interfaces_.push_back(std::move(in));
        }
    }
    // horizontal interfaces y = yc[iy + 1]
    for (std::size_t iy = 0; iy + 1 < nsy; ++iy) {
        for (std::size_t ix = 0; ix < nsx; ++ix) {
            Interface in{sub_index(ix, iy), sub_index(ix, iy + 1), {}};
            for (double x : samples_along(g.x, xc[ix], xc[ix + 1])) {
                in.samples.push_back({x, yc[iy + 1]});
            }
            d.interfaces_.push_back(std::move(in));
        }
    }
    d.global_ = std::move(g);
    return d;
}

/// One layout, independently trained parameters per subdomain.
struct PiecewiseModel {
    CompiledQnn model;
    std::vector<ModelParams> params;
};

/// Evaluates the model of the subdomain owning `p`.
[[nodiscard]] inline double piecewise_eval(const PiecewiseModel &pm,
                                           const Decomposition &dec,
                                           const Coord &p,
                                           const DerivativeRequest &req = {}) {
    const auto owner = static_cast<std::size_t>(dec.locate(p));
    const ModelParams &params = pm.params.at(owner);
    if (req.order == 0) {
        return model_value(pm.model, params, p);
    }
    return model_gradients(pm.model, params, p, req, DerivativeEngine::Jet)
        .value;
}

/// Sum over every interface sample of the squared jump between the two
/// adjacent subdomain models.
[[nodiscard]] inline double summed_interface_jump(const PiecewiseModel &pm,
                                                  const Decomposition &dec) {
    double acc = 0.0;
    for (const auto &in : dec.interfaces()) {
        for (const auto &x : in.samples) {
            const double jump =
                model_value(pm.model, pm.params.at(static_cast<std::size_t>(in.plus)), x) -
                model_value(pm.model, pm.params.at(static_cast<std::size_t>(in.minus)), x);
            acc += jump * jump;
        }
    }
    return acc;
}

} // namespace qweak
