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
 * Minimal deterministic SVG figures: line charts (optionally log-scale y)
 * and panels of heatmaps sharing one colour scale.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace qweak::svg {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#000000";
    bool dashed = false;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
    int width = 720;
    int height = 480;
};

/// Colour of the i-th strategy / series.
inline std::string palette(std::size_t i) {
    static const char *colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                   "#d62728", "#9467bd", "#8c564b"};
    return colors[i % 6];
}

inline std::string render(const LineChart &c) {
    const double ml = 80, mr = 170, mt = 40, mb = 56;
    const double pw = c.width - ml - mr;
    const double ph = c.height - mt - mb;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    auto ty = [&](double y) { return c.log_y ? std::log10(y) : y; };
    for (const auto &s : c.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (c.log_y && !(s.y[i] > 0.0)) {
                continue;
            }
            if (!std::isfinite(s.y[i])) {
                continue;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!(x1 > x0)) {
        x0 = std::isfinite(x0) ? x0 - 1 : 0;
        x1 = x0 + 2;
    }
    if (!(y1 > y0)) {
        y0 = std::isfinite(y0) ? y0 - 1 : 0;
        y1 = y0 + 2;
    }
    if (c.log_y) {
        y0 = std::floor(y0);
        y1 = std::ceil(y1);
    } else {
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };
    auto pyt = [&](double t) { return mt + (1.0 - (t - y0) / (y1 - y0)) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width
      << "\" height=\"" << c.height << "\" viewBox=\"0 0 " << c.width << ' '
      << c.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(ml + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(c.title) << "</text>\n"
      << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\""
      << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
    // ticks
    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + (x1 - x0) * k / 5.0;
        o << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(mt + ph + 16)
          << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    }
    if (c.log_y) {
        const int step = std::max(1, static_cast<int>((y1 - y0) / 8.0));
        for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); e += step) {
            o << "<line x1=\"" << num(ml) << "\" x2=\"" << num(ml + pw)
              << "\" y1=\"" << num(pyt(e)) << "\" y2=\"" << num(pyt(e))
              << "\" stroke=\"#ddd\"/>\n"
              << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(pyt(e) + 4)
              << "\" text-anchor=\"end\">1e" << e << "</text>\n";
        }
    } else {
        for (int k = 0; k <= 5; ++k) {
            const double yv = y0 + (y1 - y0) * k / 5.0;
            o << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(pyt(yv) + 4)
              << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
        }
    }
    o << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(c.height - 12)
      << "\" text-anchor=\"middle\">" << escape(c.x_label) << "</text>\n"
      << "<text transform=\"translate(18," << num(mt + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(c.y_label)
      << "</text>\n";
    // traces
    for (std::size_t si = 0; si < c.series.size(); ++si) {
        const auto &s = c.series[si];
        o << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.6\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
          << " points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((c.log_y && !(s.y[i] > 0.0)) || !std::isfinite(s.y[i])) {
                continue;
            }
            o << (first ? "" : " ") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
            first = false;
        }
        o << "\"/>\n";
        const double ly = mt + 14 + 18.0 * static_cast<double>(si);
        o << "<line x1=\"" << num(ml + pw + 12) << "\" x2=\"" << num(ml + pw + 40)
          << "\" y1=\"" << num(ly) << "\" y2=\"" << num(ly) << "\" stroke=\""
          << s.color << "\" stroke-width=\"1.6\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n"
          << "<text x=\"" << num(ml + pw + 46) << "\" y=\"" << num(ly + 4)
          << "\">" << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

/// One heatmap panel: values on an nx x ny vertex grid, x-major.
struct Panel {
    std::string title;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> values;
};

/// Diverging blue-white-red colour for t in [-1, 1].
inline std::string diverging(double t) {
    t = std::clamp(t, -1.0, 1.0);
    auto mix = [](double a, double b, double u) {
        return static_cast<int>(std::lround(a + (b - a) * u));
    };
    int r, g, b;
    if (t < 0) {
        r = mix(255, 33, -t);
        g = mix(255, 102, -t);
        b = mix(255, 172, -t);
    } else {
        r = mix(255, 178, t);
        g = mix(255, 24, t);
        b = mix(255, 43, t);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

/// Panels laid out in a row; panels from `shared_from` onward share one
/// symmetric colour scale, earlier ones are scaled individually.
inline std::string render_heatmaps(const std::string &title,
                                   const std::vector<Panel> &panels,
                                   std::size_t shared_from = 0) {
    const double cell = 10, pad = 24, top = 56;
    double shared = 0.0;
    for (std::size_t p = shared_from; p < panels.size(); ++p) {
        for (double v : panels[p].values) {
            shared = std::max(shared, std::abs(v));
        }
    }
    double width = pad;
    for (const auto &p : panels) {
        width += static_cast<double>(p.nx) * cell + pad;
    }
    double max_ny = 0;
    for (const auto &p : panels) {
        max_ny = std::max(max_ny, static_cast<double>(p.ny));
    }
    const double height = top + max_ny * cell + 48;
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
      << ' ' << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(title) << "</text>\n";
    double x = pad;
    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const auto &p = panels[pi];
        double scale = shared;
        if (pi < shared_from) {
            scale = 0.0;
            for (double v : p.values) {
                scale = std::max(scale, std::abs(v));
            }
        }
        if (!(scale > 0.0)) {
            scale = 1.0;
        }
        o << "<g class=\"panel\">\n<text x=\""
          << num(x + static_cast<double>(p.nx) * cell / 2) << "\" y=\""
          << num(top - 8) << "\" text-anchor=\"middle\">" << escape(p.title)
          << "</text>\n";
        for (std::size_t i = 0; i < p.nx; ++i) {
            for (std::size_t j = 0; j < p.ny; ++j) {
                const double v = p.values[i * p.ny + j];
                // y grows upwards
                const double ry = top + static_cast<double>(p.ny - 1 - j) * cell;
                o << "<rect x=\"" << num(x + static_cast<double>(i) * cell)
                  << "\" y=\"" << num(ry) << "\" width=\"" << num(cell)
                  << "\" height=\"" << num(cell) << "\" fill=\""
                  << diverging(v / scale) << "\"/>\n";
            }
        }
        o << "<text x=\"" << num(x + static_cast<double>(p.nx) * cell / 2)
          << "\" y=\"" << num(top + static_cast<double>(p.ny) * cell + 18)
          << "\" text-anchor=\"middle\">range &#177;" << num(scale)
          << "</text>\n</g>\n";
        x += static_cast<double>(p.nx) * cell + pad;
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace qweak::svg
