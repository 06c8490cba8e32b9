// Copyright 2026 The mixent Authors
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

#include <string>
#include <vector>

namespace mixent::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool bold = false;  // drawn thicker, e.g. a mean curve
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 800;
  int height = 480;
};

/// Axes with tick labels, one polyline per series and a legend.
std::string render_svg(const LineChart& chart);

/// Tick positions covering [lo, hi] at a 1/2/5 x 10^k spacing.
std::vector<double> nice_ticks(double lo, double hi, int target_count = 6);

}  // namespace mixent::cli
