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

#include "phireg/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phireg {

namespace {

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

SvgCanvas::SvgCanvas(int width_px, int height_px, double x_min, double x_max,
                     double y_min, double y_max, int margin_px)
    : width_(width_px), height_(height_px), margin_(margin_px), x_min_(x_min),
      x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw std::invalid_argument("svg canvas needs a non-empty world box");
  }
}

double SvgCanvas::Px(double x) const {
  return margin_ + (x - x_min_) / (x_max_ - x_min_) * (width_ - 2 * margin_);
}

double SvgCanvas::Py(double y) const {
  return height_ - margin_ -
         (y - y_min_) / (y_max_ - y_min_) * (height_ - 2 * margin_);
}

void SvgCanvas::Line(double x1, double y1, double x2, double y2,
                     const std::string& color, double width) {
  std::ostringstream os;
  os << "<line x1=\"" << Fmt(Px(x1)) << "\" y1=\"" << Fmt(Py(y1)) << "\" x2=\""
     << Fmt(Px(x2)) << "\" y2=\"" << Fmt(Py(y2)) << "\" stroke=\"" << color
     << "\" stroke-width=\"" << Fmt(width) << "\"/>";
  elements_.push_back(os.str());
}

void SvgCanvas::Arrow(double x, double y, double dx, double dy,
                      const std::string& color, double width) {
  double x2 = x + dx, y2 = y + dy;
  Line(x, y, x2, y2, color, width);
  // Small head: two barbs rotated from the shaft direction (pixel space).
  double px1 = Px(x), py1 = Py(y), px2 = Px(x2), py2 = Py(y2);
  double vx = px2 - px1, vy = py2 - py1;
  double len = std::hypot(vx, vy);
  if (len < 1e-9) return;
  vx /= len;
  vy /= len;
  const double head = 3.0;
  for (double sgn : {1.0, -1.0}) {
    double hx = px2 - head * (vx + sgn * 0.5 * -vy);
    double hy = py2 - head * (vy + sgn * 0.5 * vx);
    std::ostringstream os;
    os << "<line x1=\"" << Fmt(px2) << "\" y1=\"" << Fmt(py2) << "\" x2=\""
       << Fmt(hx) << "\" y2=\"" << Fmt(hy) << "\" stroke=\"" << color
       << "\" stroke-width=\"" << Fmt(width) << "\"/>";
    elements_.push_back(os.str());
  }
}

void SvgCanvas::Circle(double x, double y, double radius_px,
                       const std::string& fill) {
  std::ostringstream os;
  os << "<circle cx=\"" << Fmt(Px(x)) << "\" cy=\"" << Fmt(Py(y)) << "\" r=\""
     << Fmt(radius_px) << "\" fill=\"" << fill << "\"/>";
  elements_.push_back(os.str());
}

void SvgCanvas::Polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& color, double width) {
  if (pts.empty()) return;
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
     << Fmt(width) << "\" points=\"";
  for (const auto& [x, y] : pts) {
    os << Fmt(Px(x)) << "," << Fmt(Py(y)) << " ";
  }
  os << "\"/>";
  elements_.push_back(os.str());
}

void SvgCanvas::Text(double x, double y, const std::string& text, int size_px,
                     const std::string& color) {
  std::ostringstream os;
  os << "<text x=\"" << Fmt(Px(x)) << "\" y=\"" << Fmt(Py(y))
     << "\" font-size=\"" << size_px << "\" font-family=\"sans-serif\" fill=\""
     << color << "\">" << text << "</text>";
  elements_.push_back(os.str());
}

void SvgCanvas::Frame() {
  std::ostringstream os;
  os << "<rect x=\"" << Fmt(Px(x_min_)) << "\" y=\"" << Fmt(Py(y_max_))
     << "\" width=\"" << Fmt(Px(x_max_) - Px(x_min_)) << "\" height=\""
     << Fmt(Py(y_min_) - Py(y_max_))
     << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>";
  elements_.push_back(os.str());
}

void SvgCanvas::AxisLabels(const std::string& x_label,
                           const std::string& y_label) {
  std::ostringstream os;
  os << "<text x=\"" << Fmt(width_ / 2.0) << "\" y=\"" << Fmt(height_ - 6.0)
     << "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#222\" "
        "text-anchor=\"middle\">"
     << x_label << "</text>";
  elements_.push_back(os.str());
  std::ostringstream os2;
  os2 << "<text x=\"10\" y=\"" << Fmt(height_ / 2.0)
      << "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#222\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 10 "
      << Fmt(height_ / 2.0) << ")\">" << y_label << "</text>";
  elements_.push_back(os2.str());
}

std::string SvgCanvas::Render() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
     << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " "
     << height_ << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& e : elements_) os << e << "\n";
  os << "</svg>\n";
  return os.str();
}

void SvgCanvas::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write svg: " + path);
  out << Render();
}

}  // namespace phireg
