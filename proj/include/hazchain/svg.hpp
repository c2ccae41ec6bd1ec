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

#ifndef HAZCHAIN_SVG_HPP_
#define HAZCHAIN_SVG_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace hazchain {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

// Minimal line-chart writer. With log_y, nonpositive values are dropped from
// the drawn polylines (their series stay in the legend).
void write_curves_svg(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, bool log_y);

}  // namespace hazchain

#endif  // HAZCHAIN_SVG_HPP_
