#pragma once

// Dependency-free SVG line/scatter plots, just enough to eyeball runs.

#include <pdgan/csv.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdgan {

class SvgPlot {
 public:
  SvgPlot(std::string title = "", int width = 720, int height = 480)
      : title_(std::move(title)), w_(width), h_(height) {}

  void line(const std::vector<double>& xs, const std::vector<double>& ys,
            const std::string& color, double width = 1.5) {
    add(xs, ys, color, width, /*scatter=*/false);
  }

  void scatter(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& color, double radius = 2.0) {
    add(xs, ys, color, radius, /*scatter=*/true);
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write svg: " + path);

    double xlo = min_x_, xhi = max_x_, ylo = min_y_, yhi = max_y_;
    if (!(xlo < xhi)) { xlo -= 1.0; xhi += 1.0; }
    if (!(ylo < yhi)) { ylo -= 1.0; yhi += 1.0; }
    const double xpad = 0.04 * (xhi - xlo), ypad = 0.06 * (yhi - ylo);
    xlo -= xpad; xhi += xpad; ylo -= ypad; yhi += ypad;

    const double L = 56, R = 12, T = title_.empty() ? 12 : 32, B = 36;
    auto px = [&](double x) {
      return L + (x - xlo) / (xhi - xlo) * (w_ - L - R);
    };
    auto py = [&](double y) {
      return h_ - B - (y - ylo) / (yhi - ylo) * (h_ - T - B);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_
        << "\" height=\"" << h_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title_.empty())
      out << "<text x=\"" << w_ / 2 << "\" y=\"20\" text-anchor=\"middle\" "
             "font-family=\"sans-serif\" font-size=\"14\">"
          << title_ << "</text>\n";

    // frame and ticks
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << w_ - L - R
        << "\" height=\"" << h_ - T - B
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double fx = xlo + (xhi - xlo) * i / 4.0;
      const double fy = ylo + (yhi - ylo) * i / 4.0;
      out << "<text x=\"" << px(fx) << "\" y=\"" << h_ - B + 16
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">"
          << csv::num(round3(fx)) << "</text>\n";
      out << "<text x=\"" << L - 6 << "\" y=\"" << py(fy) + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">"
          << csv::num(round3(fy)) << "</text>\n";
      out << "<line x1=\"" << px(fx) << "\" y1=\"" << T << "\" x2=\"" << px(fx)
          << "\" y2=\"" << h_ - B << "\" stroke=\"#ddd\"/>\n";
      out << "<line x1=\"" << L << "\" y1=\"" << py(fy) << "\" x2=\""
          << w_ - R << "\" y2=\"" << py(fy) << "\" stroke=\"#ddd\"/>\n";
    }

    for (const auto& s : series_) {
      if (s.scatter) {
        for (size_t i = 0; i < s.xs.size(); ++i)
          out << "<circle cx=\"" << px(s.xs[i]) << "\" cy=\"" << py(s.ys[i])
              << "\" r=\"" << s.width << "\" fill=\"" << s.color
              << "\" fill-opacity=\"0.6\"/>\n";
      } else {
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"" << s.width << "\" points=\"";
        for (size_t i = 0; i < s.xs.size(); ++i)
          out << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
        out << "\"/>\n";
      }
    }
    out << "</svg>\n";
  }

 private:
  struct Series {
    std::vector<double> xs, ys;
    std::string color;
    double width;
    bool scatter;
  };

  static double round3(double v) {
    if (v == 0.0) return 0.0;
    const double scale =
        std::pow(10.0, 2 - std::floor(std::log10(std::abs(v))));
    return std::round(v * scale) / scale;
  }

  void add(const std::vector<double>& xs, const std::vector<double>& ys,
           const std::string& color, double width, bool scatter) {
    if (xs.size() != ys.size())
      throw std::invalid_argument("SvgPlot: x/y size mismatch");
    for (size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
      min_x_ = std::min(min_x_, xs[i]);
      max_x_ = std::max(max_x_, xs[i]);
      min_y_ = std::min(min_y_, ys[i]);
      max_y_ = std::max(max_y_, ys[i]);
    }
    series_.push_back({xs, ys, color, width, scatter});
  }

  std::string title_;
  int w_, h_;
  std::vector<Series> series_;
  double min_x_ = std::numeric_limits<double>::infinity();
  double max_x_ = -std::numeric_limits<double>::infinity();
  double min_y_ = std::numeric_limits<double>::infinity();
  double max_y_ = -std::numeric_limits<double>::infinity();
};

}  // namespace pdgan
