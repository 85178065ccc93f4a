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
#pragma once

#include "qweak/error.hpp"
#include "qweak/fields.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qweak {

/// Strictly increasing sample points of a closed interval.
class Grid1D {
  public:
    explicit Grid1D(std::vector<double> points) : points_(std::move(points)) {
        require<ConfigError>(points_.size() >= 2,
                             "a grid needs at least 2 points");
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
            require<ConfigError>(points_[i] < points_[i + 1],
                                 "grid points must be strictly increasing");
        }
    }

    /// `count` uniformly spaced points on [lo, hi], endpoints included.
    static Grid1D uniform(double lo, double hi, std::size_t count) {
        require<ConfigError>(count >= 2, "a grid needs at least 2 points");
        std::vector<double> pts(count);
        const double step = (hi - lo) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) {
            pts[i] = lo + step * static_cast<double>(i);
        }
        pts.back() = hi;
        return Grid1D(std::move(pts));
    }

    /// Same interval with every cell split into `factor` equal cells.
    [[nodiscard]] Grid1D refined(std::size_t factor) const {
        require<ConfigError>(factor >= 1, "refinement factor must be >= 1");
        std::vector<double> pts;
        pts.reserve((points_.size() - 1) * factor + 1);
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
            const double lo = points_[i];
            const double step = (points_[i + 1] - lo) /
                                static_cast<double>(factor);
            for (std::size_t k = 0; k < factor; ++k) {
                pts.push_back(lo + step * static_cast<double>(k));
            }
        }
        pts.push_back(points_.back());
        return Grid1D(std::move(pts));
    }

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] double front() const { return points_.front(); }
    [[nodiscard]] double back() const { return points_.back(); }
    [[nodiscard]] std::span<const double> points() const noexcept {
        return points_;
    }

  private:
    std::vector<double> points_;
};

/// Tensor-product grid; values are stored x-major: v[i * ny + j] at
/// (x_i, y_j).
struct Grid2D {
    Grid1D x;
    Grid1D y;

    [[nodiscard]] std::size_t size() const { return x.size() * y.size(); }
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const {
        return i * y.size() + j;
    }
    [[nodiscard]] Coord point(std::size_t i, std::size_t j) const {
        return {x[i], y[j]};
    }
};

/// Trapezium weights w with sum_j w_j v_j equal to trapz_1d(v, grid).
[[nodiscard]] inline std::vector<double> trapezium_weights(const Grid1D &g) {
    std::vector<double> w(g.size(), 0.0);
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        const double half = 0.5 * (g[j + 1] - g[j]);
        w[j] += half;
        w[j + 1] += half;
    }
    return w;
}

[[nodiscard]] inline double trapz_1d(std::span<const double> values,
                                     const Grid1D &grid) {
    require<ContractError>(values.size() == grid.size(),
                           "trapz_1d: " + std::to_string(values.size()) +
                               " values for " + std::to_string(grid.size()) +
                               " grid points");
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        acc += 0.5 * (grid[j + 1] - grid[j]) * (values[j] + values[j + 1]);
    }
    return acc;
}

/// Integrates over y for every x line, then over x.
[[nodiscard]] inline double trapz_2d(std::span<const double> values,
                                     const Grid2D &grid) {
    require<ContractError>(values.size() == grid.size(),
                           "trapz_2d: value count does not match the grid");
    const std::size_t ny = grid.y.size();
    std::vector<double> lines(grid.x.size());
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        lines[i] = trapz_1d(values.subspan(i * ny, ny), grid.y);
    }
    return trapz_1d(lines, grid.x);
}

struct McConfig {
    std::size_t samples = 1;
    std::uint64_t seed = 0;
    double volume = 1.0;
};

/// V/M * sum_j f(x_j) with x_j drawn by `sampler(rng)`.
template <typename F, typename Sampler>
[[nodiscard]] double monte_carlo(F &&f, const McConfig &mc,
                                 Sampler &&sampler) {
    require<ConfigError>(mc.samples >= 1, "Monte-Carlo needs M >= 1");
    require<ConfigError>(mc.volume > 0.0, "domain volume must be positive");
    std::mt19937_64 rng(mc.seed);
    double acc = 0.0;
    for (std::size_t j = 0; j < mc.samples; ++j) {
        acc += f(sampler(rng));
    }
    return mc.volume / static_cast<double>(mc.samples) * acc;
}

/// Uniform sampler over an axis-aligned box [lo, hi] (dims 1 or 2).
class BoxSampler {
  public:
    BoxSampler(Coord lo, Coord hi, int dims) : lo_(lo), hi_(hi), dims_(dims) {}

    template <typename Rng> Coord operator()(Rng &rng) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Coord p{0.0, 0.0};
        for (int d = 0; d < dims_; ++d) {
            p[d] = lo_[d] + (hi_[d] - lo_[d]) * unit(rng);
        }
        return p;
    }

    [[nodiscard]] double volume() const {
        double v = 1.0;
        for (int d = 0; d < dims_; ++d) {
            v *= hi_[d] - lo_[d];
        }
        return v;
    }

  private:
    Coord lo_;
    Coord hi_;
    int dims_;
};

} // namespace qweak
