// Copyright 2026 The Phireg Authors. All rights reserved.
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

#ifndef PHIREG_SVG_HPP_
#define PHIREG_SVG_HPP_

#include <string>
#include <vector>

namespace phireg {

// Tiny SVG canvas with a world-to-pixel mapping; generated markup only, no
// plotting dependency. World y grows upward.
class SvgCanvas {
 public:
  SvgCanvas(int width_px, int height_px, double x_min, double x_max,
            double y_min, double y_max, int margin_px = 30);

  void Line(double x1, double y1, double x2, double y2,
            const std::string& color = "#444", double width = 1.0);
  void Arrow(double x, double y, double dx, double dy,
             const std::string& color = "#336", double width = 1.0);
  void Circle(double x, double y, double radius_px,
              const std::string& fill = "#c22");
  void Polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& color = "#26c", double width = 1.2);
  void Text(double x, double y, const std::string& text, int size_px = 11,
            const std::string& color = "#222");
  void Frame();        // rectangle around the world box
  void AxisLabels(const std::string& x_label, const std::string& y_label);

  std::string Render() const;
  void Save(const std::string& path) const;

 private:
  double Px(double x) const;
  double Py(double y) const;

  int width_, height_, margin_;
  double x_min_, x_max_, y_min_, y_max_;
  std::vector<std::string> elements_;
};

}  // namespace phireg

#endif  // PHIREG_SVG_HPP_
