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
 * Experiment runner: trains every requested strategy of one configuration
 * and writes history.csv, solution.csv, config.snapshot and the SVG figures.
 * Every file is written to a temporary sibling and renamed into place.
 */
#pragma once

#include "qweak/config.hpp"
#include "qweak/error.hpp"
#include "qweak/svg.hpp"
#include "qweak/training.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace qweak {

/// File-system failure while writing artifacts (CLI exit code 3).
class FilesystemError : public Error {
  public:
    using Error::Error;
};

struct StrategyRun {
    Strategy strategy;
    TrainResult result;
};

struct RunSummary {
    RunConfig config;
    std::vector<StrategyRun> runs;
};

namespace detail {

inline std::string csv_num(double v) { return fmt_double(v); }

} // namespace detail

/// Writes `content` to `path` via a temporary file and an atomic rename.
inline void write_atomic(const std::filesystem::path &path,
                         const std::string &content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw FilesystemError("cannot create directory " +
                                  path.parent_path().string() + ": " +
                                  ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw FilesystemError("cannot open " + tmp.string() +
                                  " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw FilesystemError("write to " + tmp.string() + " failed");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw FilesystemError("cannot move " + tmp.string() + " to " +
                              path.string());
    }
}

/// Wide history table: one row per epoch, six columns per strategy.
[[nodiscard]] inline std::string history_csv(const std::vector<StrategyRun> &runs) {
    std::ostringstream o;
    o << "epoch";
    for (const auto &r : runs) {
        const std::string s(strategy_name(r.strategy));
        o << ',' << s << "_l_de," << s << "_l_ibv," << s << "_l_sbc," << s
          << "_l_wf," << s << "_total," << s << "_metric";
    }
    o << '\n';
    const std::size_t rows = runs.empty() ? 0 : runs.front().result.history.size();
    for (std::size_t e = 0; e < rows; ++e) {
        o << e;
        for (const auto &r : runs) {
            const auto &rec = r.result.history.at(e);
            using detail::csv_num;
            o << ',' << csv_num(rec.loss.l_de) << ',' << csv_num(rec.loss.l_ibv)
              << ',' << csv_num(rec.loss.l_sbc) << ',' << csv_num(rec.loss.l_wf)
              << ',' << csv_num(rec.loss.total) << ',' << csv_num(rec.metric);
        }
        o << '\n';
    }
    return o.str();
}

/// Model values at every training point: coordinates, truth, one column
/// per strategy.
[[nodiscard]] inline std::string solution_csv(const Experiment &ex,
                                              const std::vector<StrategyRun> &runs) {
    std::ostringstream o;
    const bool two_d = ex.problem.dims() == 2;
    o << (two_d ? "x,y,truth" : "x,truth");
    for (const auto &r : runs) {
        o << ',' << strategy_name(r.strategy);
    }
    o << '\n';
    using detail::csv_num;
    for (const auto &tp : ex.decomposition.training()) {
        o << csv_num(tp.x[0]);
        if (two_d) {
            o << ',' << csv_num(tp.x[1]);
        }
        o << ',' << csv_num(ex.problem.analytic(tp.x));
        for (const auto &r : runs) {
            o << ','
              << csv_num(piecewise_eval(r.result.model, ex.decomposition, tp.x));
        }
        o << '\n';
    }
    return o.str();
}

/// Log-scale curves: total loss solid, metric dashed, per strategy.
[[nodiscard]] inline std::string training_svg(const Experiment &ex,
                                              const std::vector<StrategyRun> &runs) {
    svg::LineChart chart;
    chart.title = std::string(ex.problem.name()) + ": training";
    chart.x_label = "epoch";
    chart.y_label = "total loss (solid) / MSE vs truth (dashed)";
    chart.log_y = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto &r = runs[i];
        svg::Series loss, metric;
        loss.label = std::string(strategy_name(r.strategy)) + " loss";
        metric.label = std::string(strategy_name(r.strategy)) + " MSE";
        loss.color = metric.color = svg::palette(i);
        metric.dashed = true;
        for (const auto &rec : r.result.history) {
            loss.x.push_back(static_cast<double>(rec.epoch));
            loss.y.push_back(rec.loss.total);
            metric.x.push_back(static_cast<double>(rec.epoch));
            metric.y.push_back(rec.metric);
        }
        chart.series.push_back(std::move(loss));
        chart.series.push_back(std::move(metric));
    }
    return svg::render(chart);
}

/// 1D: truth (solid) and every strategy (dashed) over the training points.
[[nodiscard]] inline std::string solution_overlay_svg(
    const Experiment &ex, const std::vector<StrategyRun> &runs) {
    svg::LineChart chart;
    chart.title = std::string(ex.problem.name()) + ": attained solution";
    chart.x_label = "x";
    chart.y_label = "f(x)";
    const auto &pts = ex.decomposition.training();
    svg::Series truth;
    truth.label = "truth";
    for (const auto &tp : pts) {
        truth.x.push_back(tp.x[0]);
        truth.y.push_back(ex.problem.analytic(tp.x));
    }
    chart.series.push_back(std::move(truth));
    for (std::size_t i = 0; i < runs.size(); ++i) {
        svg::Series s;
        s.label = std::string(strategy_name(runs[i].strategy));
        s.color = svg::palette(i);
        s.dashed = true;
        for (const auto &tp : pts) {
            s.x.push_back(tp.x[0]);
            s.y.push_back(
                piecewise_eval(runs[i].result.model, ex.decomposition, tp.x));
        }
        chart.series.push_back(std::move(s));
    }
    return svg::render(chart);
}

/// 2D: the truth panel followed by one error panel per strategy; error
/// panels share one colour scale.
[[nodiscard]] inline std::string error_heatmap_svg(
    const Experiment &ex, const std::vector<StrategyRun> &runs) {
    const Grid2D &g = *ex.decomposition.global_grid();
    std::vector<svg::Panel> panels;
    svg::Panel truth{"truth", g.x.size(), g.y.size(), {}};
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        for (std::size_t j = 0; j < g.y.size(); ++j) {
            truth.values.push_back(ex.problem.analytic(g.point(i, j)));
        }
    }
    panels.push_back(truth);
    for (const auto &r : runs) {
        svg::Panel p{std::string(strategy_name(r.strategy)) + " error",
                     g.x.size(), g.y.size(), {}};
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            for (std::size_t j = 0; j < g.y.size(); ++j) {
                const Coord x = g.point(i, j);
                p.values.push_back(
                    piecewise_eval(r.result.model, ex.decomposition, x) -
                    ex.problem.analytic(x));
            }
        }
        panels.push_back(std::move(p));
    }
    return svg::render_heatmaps(std::string(ex.problem.name()) +
                                    ": truth and model - truth",
                                panels, 1);
}

/// Trains every strategy of `cfg` (sequentially, same seed) and writes all
/// artifacts under `out_dir`. Progress lines go to `log` when given.
inline RunSummary run(const RunConfig &cfg, const std::filesystem::path &out_dir,
                      std::ostream *log = nullptr) {
    const Experiment ex = make_experiment(cfg);
    RunSummary summary{cfg, {}};
    for (Strategy s : cfg.strategies()) {
        if (log) {
            *log << "training " << ex.problem.name() << " / "
                 << strategy_name(s) << " (" << cfg.epochs << " epochs)\n";
        }
        summary.runs.push_back({s, train(ex, trainer_config(cfg, s))});
    }
    write_atomic(out_dir / "config.snapshot", snapshot(cfg));
    write_atomic(out_dir / "history.csv", history_csv(summary.runs));
    write_atomic(out_dir / "solution.csv", solution_csv(ex, summary.runs));
    write_atomic(out_dir / "figures" / "training.svg",
                 training_svg(ex, summary.runs));
    if (ex.problem.dims() == 1) {
        write_atomic(out_dir / "figures" / "solution.svg",
                     solution_overlay_svg(ex, summary.runs));
    } else {
        write_atomic(out_dir / "figures" / "error_heatmap.svg",
                     error_heatmap_svg(ex, summary.runs));
    }
    return summary;
}

} // namespace qweak
