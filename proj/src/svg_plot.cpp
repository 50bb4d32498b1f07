#include "c2f/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace c2f {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 64.0, kRight = 18.0, kTop = 34.0, kBottom = 48.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// 1/2/5 ticks covering [lo, hi]
std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
    if (!(hi > lo)) hi = lo + 1.0;
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> ticks;
    double t = std::ceil(lo / step) * step;
    for (; t <= hi + 1e-12 * std::abs(hi); t += step) ticks.push_back(t);
    return ticks;
}

}  // namespace

void render_line_plot(const std::string& path, const PlotSpec& spec,
                      const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("render_line_plot: no series");
    for (const auto& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size())
            throw std::invalid_argument("render_line_plot: bad series '" + s.name + "'");
        if (!s.ci.empty() && s.ci.size() != s.y.size())
            throw std::invalid_argument("render_line_plot: ci size mismatch in '" + s.name + "'");
    }

    auto tx = [&](double x) { return spec.log2_x ? std::log2(x) : x; };
    auto ty = [&](double y) {
        if (!spec.log_y) return y;
        return std::log10(std::max(y, 1e-12));
    };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            const double lo = ty(s.ci.empty() ? s.y[i] : s.y[i] - s.ci[i]);
            const double hi = ty(s.ci.empty() ? s.y[i] : s.y[i] + s.ci[i]);
            ymin = std::min(ymin, lo);
            ymax = std::max(ymax, hi);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (tx(x) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open svg for writing: " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth) << "\" height=\""
      << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth) << " " << fmt(kHeight) << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"14\" text-anchor=\"middle\">"
      << spec.title << "</text>\n";

    // axes box
    f << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // x ticks
    std::vector<double> xticks;
    if (spec.log2_x) {
        for (const auto& s : series)
            for (double x : s.x)
                if (std::find(xticks.begin(), xticks.end(), x) == xticks.end())
                    xticks.push_back(x);
        std::sort(xticks.begin(), xticks.end());
    } else {
        xticks = nice_ticks(xmin, xmax);
    }
    for (double t : xticks) {
        const double X = spec.log2_x ? px(t) : kLeft + (t - xmin) / (xmax - xmin) * pw;
        f << "<line x1=\"" << fmt(X) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(X)
          << "\" y2=\"" << fmt(kTop + ph + 5) << "\" stroke=\"#333\"/>\n";
        f << "<text x=\"" << fmt(X) << "\" y=\"" << fmt(kTop + ph + 18)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t)
          << "</text>\n";
    }
    // y ticks (log axis: decades)
    std::vector<double> yticks = nice_ticks(ymin, ymax);
    for (double t : yticks) {
        const double Y = kTop + (1.0 - (t - ymin) / (ymax - ymin)) * ph;
        f << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(Y) << "\" x2=\"" << fmt(kLeft)
          << "\" y2=\"" << fmt(Y) << "\" stroke=\"#333\"/>\n";
        f << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(Y + 4)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
          << (spec.log_y ? ("1e" + fmt(t)) : fmt(t)) << "</text>\n";
    }

    f << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 10)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << spec.x_label
      << "</text>\n";
    f << "<text x=\"16\" y=\"" << fmt(kTop + ph / 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 "
      << fmt(kTop + ph / 2) << ")\">" << spec.y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        f << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            f << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
        f << "\"/>\n";
        if (!s.ci.empty()) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double X = px(s.x[i]);
                f << "<line x1=\"" << fmt(X) << "\" y1=\"" << fmt(py(s.y[i] - s.ci[i]))
                  << "\" x2=\"" << fmt(X) << "\" y2=\"" << fmt(py(s.y[i] + s.ci[i]))
                  << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
            }
        }
        // legend entry
        const double ly = kTop + 14 + 16.0 * static_cast<double>(si);
        f << "<line x1=\"" << fmt(kLeft + pw - 120) << "\" y1=\"" << fmt(ly) << "\" x2=\""
          << fmt(kLeft + pw - 100) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
        f << "<text x=\"" << fmt(kLeft + pw - 95) << "\" y=\"" << fmt(ly + 4)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name << "</text>\n";
    }
    f << "</svg>\n";
    if (!f) throw std::runtime_error("short write on svg: " + path);
}

}  // namespace c2f
