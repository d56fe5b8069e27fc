// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "nnfc/errors.hpp"

namespace nnfc::plot {

namespace {

constexpr int kPanelWidth = 560;
constexpr int kPanelHeight = 360;
constexpr int kMarginLeft = 62;
constexpr int kMarginRight = 18;
constexpr int kMarginTop = 34;
constexpr int kMarginBottom = 46;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void expand(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double m = 0.05 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
};

double niceStep(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0;
  if (frac <= 1.5) {
    step = 1.0;
  } else if (frac <= 3.0) {
    step = 2.0;
  } else if (frac <= 7.0) {
    step = 5.0;
  }
  return step * mag;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void renderPanel(std::string& out, const Panel& panel, int x0) {
  Range xr, yr;
  for (const Series& s : panel.series) {
    for (double v : s.x) xr.expand(v);
    for (double v : s.y) yr.expand(v);
  }
  xr.pad();
  yr.pad();

  const double plot_w = kPanelWidth - kMarginLeft - kMarginRight;
  const double plot_h = kPanelHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double v) {
    return double(x0) + kMarginLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  const auto sy = [&](double v) {
    return kMarginTop + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%d\" y=\"%d\" width=\"%.0f\" height=\"%.0f\" "
                "fill=\"none\" stroke=\"#333\"/>\n",
                x0 + kMarginLeft, kMarginTop, plot_w, plot_h);
  out += buf;

  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.0f\" y=\"20\" text-anchor=\"middle\" "
                "font-size=\"14\">%s</text>\n",
                double(x0) + kMarginLeft + plot_w / 2, panel.title.c_str());
  out += buf;

  // ticks and grid
  const double xstep = niceStep(xr.hi - xr.lo);
  for (double v = std::ceil(xr.lo / xstep) * xstep; v <= xr.hi + 1e-9; v += xstep) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"#ddd\"/>\n",
                  sx(v), sy(yr.lo), sx(v), sy(yr.hi));
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" "
                  "font-size=\"11\">%s</text>\n",
                  sx(v), kMarginTop + plot_h + 16.0, fmt(v).c_str());
    out += buf;
  }
  const double ystep = niceStep(yr.hi - yr.lo);
  for (double v = std::ceil(yr.lo / ystep) * ystep; v <= yr.hi + 1e-9; v += ystep) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"#ddd\"/>\n",
                  sx(xr.lo), sy(v), sx(xr.hi), sy(v));
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" "
                  "font-size=\"11\">%s</text>\n",
                  double(x0) + kMarginLeft - 6.0, sy(v) + 4.0, fmt(v).c_str());
    out += buf;
  }

  // axis labels
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.0f\" y=\"%d\" text-anchor=\"middle\" "
                "font-size=\"12\">%s</text>\n",
                double(x0) + kMarginLeft + plot_w / 2, kPanelHeight - 10,
                panel.x_label.c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%.0f\" text-anchor=\"middle\" font-size=\"12\" "
                "transform=\"rotate(-90 %d %.0f)\">%s</text>\n",
                x0 + 16, kMarginTop + plot_h / 2, x0 + 16, kMarginTop + plot_h / 2,
                panel.y_label.c_str());
  out += buf;

  // series
  for (const Series& s : panel.series) {
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\"";
    if (s.dashed) out += " stroke-dasharray=\"5,4\"";
    out += " points=\"";
    const size_t n = std::min(s.x.size(), s.y.size());
    const size_t stride = std::max<size_t>(1, n / 4000);
    for (size_t i = 0; i < n; i += stride) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", sx(s.x[i]), sy(s.y[i]));
      out += buf;
    }
    out += "\"/>\n";
  }

  // legend
  double ly = kMarginTop + 14.0;
  for (const Series& s : panel.series) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.0f\" y1=\"%.1f\" x2=\"%.0f\" y2=\"%.1f\" "
                  "stroke=\"%s\" stroke-width=\"2\"%s/>\n",
                  double(x0) + kMarginLeft + 8, ly - 4,
                  double(x0) + kMarginLeft + 30, ly - 4, s.color.c_str(),
                  s.dashed ? " stroke-dasharray=\"5,4\"" : "");
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.0f\" y=\"%.1f\" font-size=\"11\">%s</text>\n",
                  double(x0) + kMarginLeft + 34, ly, s.label.c_str());
    out += buf;
    ly += 14.0;
  }
}

}  // namespace

std::string renderFigure(const std::vector<Panel>& panels) {
  const int width = kPanelWidth * int(panels.size());
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" font-family=\"sans-serif\">\n",
                width, kPanelHeight);
  std::string out = buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (size_t i = 0; i < panels.size(); ++i) {
    renderPanel(out, panels[i], int(i) * kPanelWidth);
  }
  out += "</svg>\n";
  return out;
}

void writeFigure(const std::string& path, const std::vector<Panel>& panels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write figure: " + path);
  out << renderFigure(panels);
}

}  // namespace nnfc::plot
