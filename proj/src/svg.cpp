// Copyright 2026 The hazchain authors
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

#include "hazchain/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hazchain/errors.hpp"

namespace hazchain {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 600;
constexpr int kLeft = 80, kRight = 150, kTop = 48, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf", "#393b79", "#ad494a"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_curves_svg(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, bool log_y) {
  double x_max = 0.0, y_max = 0.0;
  double y_min_pos = 1.0;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
      if (y > 0.0) y_min_pos = std::min(y_min_pos, y);
    }
  }
  if (x_max <= 0.0) x_max = 1.0;
  if (y_max <= 0.0) y_max = 1.0;
  double y_lo = log_y ? std::pow(10.0, std::floor(std::log10(std::max(y_min_pos, 1e-12)))) : 0.0;
  double y_hi = log_y ? std::pow(10.0, std::ceil(std::log10(y_max))) : y_max * 1.05;
  if (log_y && y_hi <= y_lo) y_hi = y_lo * 10.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + x / x_max * plot_w; };
  auto py = [&](double y) {
    if (log_y)
      return kTop + (1.0 - (std::log10(y) - std::log10(y_lo)) /
                               (std::log10(y_hi) - std::log10(y_lo))) * plot_h;
    return kTop + (1.0 - y / y_hi) * plot_h;
  };

  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"16\">" << title << "</text>\n";

  // Axes box.
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // X ticks.
  for (int i = 0; i <= 5; ++i) {
    const double x = x_max * i / 5.0;
    out << "<line x1=\"" << px(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << px(x)
        << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";

  // Y ticks: decades when logarithmic, fifths otherwise.
  if (log_y) {
    for (double y = y_lo; y <= y_hi * 1.0001; y *= 10.0) {
      out << "<line x1=\"" << kLeft << "\" y1=\"" << py(y) << "\" x2=\"" << kLeft + plot_w
          << "\" y2=\"" << py(y) << "\" stroke=\"#ddd\"/>\n";
      out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(y) + 4
          << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double y = y_hi * i / 5.0;
      out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(std::max(y, 1e-300)) + 4
          << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
    }
  }
  out << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" transform=\"rotate(-90 18 " << kTop + plot_h / 2
      << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

  for (size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    // Split the polyline wherever a point cannot be drawn on a log axis.
    std::string seg;
    auto flush = [&]() {
      if (!seg.empty())
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"" << seg << "\"/>\n";
      seg.clear();
    };
    for (auto [x, y] : series[i].points) {
      if (log_y && y <= 0.0) {
        flush();
        continue;
      }
      seg += fmt(px(x)) + "," + fmt(py(y)) + " ";
    }
    flush();
    const double ly = kTop + 16.0 + 16.0 * static_cast<double>(i);
    out << "<line x1=\"" << kLeft + plot_w + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kLeft + plot_w + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + plot_w + 34 << "\" y=\"" << ly << "\">"
        << series[i].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace hazchain
