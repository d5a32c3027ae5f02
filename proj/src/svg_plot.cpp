#include "qwoa/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qwoa {

namespace {

constexpr const char* kPalette[] = {"#1f4e9c", "#c0392b", "#27864a", "#8e44ad", "#d68910",
                                    "#222222"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) >= 1e4 || std::abs(v) < 1e-2)) {
    std::snprintf(buf, sizeof buf, "%.1e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.3g", v);
  }
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label, bool log_y)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)),
      log_y_(log_y) {}

std::string SvgPlot::render(int width, int height) const {
  const double left = 70, right = 20, top = 40, bottom = 55;
  const double pw = width - left - right, ph = height - top - bottom;

  auto ty = [this](double y) { return log_y_ ? std::log10(y) : y; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto take_y = [&](double y) {
    if (!std::isfinite(y) || (log_y_ && y <= 0.0)) return;
    ymin = std::min(ymin, ty(y));
    ymax = std::max(ymax, ty(y));
  };
  for (const auto& s : series_) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k])) continue;
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      take_y(s.y[k]);
      if (k < s.err_lo.size()) take_y(s.err_lo[k]);
      if (k < s.err_hi.size()) take_y(s.err_hi[k]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 1, xmax += 1;
  if (ymax == ymin) ymin -= 1, ymax += 1;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title_) + "</text>\n";
  out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 5; ++k) {
    const double fx = xmin + (xmax - xmin) * k / 5.0;
    const double px = sx(fx);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(px) +
           "\" y2=\"" + num(top + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(px) + "\" y=\"" + num(top + ph + 18) +
           "\" text-anchor=\"middle\">" + tick_label(fx) + "</text>\n";
    const double fy = ymin + (ymax - ymin) * k / 5.0;
    const double py = top + (1.0 - k / 5.0) * ph;
    const double label = log_y_ ? std::pow(10.0, fy) : fy;
    out += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(left) +
           "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" +
           tick_label(label) + "</text>\n";
  }
  out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 12.0) +
         "\" text-anchor=\"middle\">" + escape(x_label_) + "</text>\n";
  out += "<text transform=\"translate(16," + num(top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label_) + "</text>\n";

  for (std::size_t si = 0; si < series_.size(); ++si) {
    const auto& s = series_[si];
    const std::string color = kPalette[si % std::size(kPalette)];
    auto valid = [&](std::size_t k) {
      return std::isfinite(s.x[k]) && std::isfinite(s.y[k]) && !(log_y_ && s.y[k] <= 0.0);
    };
    if (s.line) {
      std::string pts;
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        if (valid(k)) pts += num(sx(s.x[k])) + "," + num(sy(s.y[k])) + " ";
      }
      out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
             (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
    }
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!valid(k)) continue;
      if (k < s.err_lo.size() && k < s.err_hi.size() && std::isfinite(s.err_lo[k]) &&
          std::isfinite(s.err_hi[k]) && !(log_y_ && s.err_lo[k] <= 0.0)) {
        out += "<line x1=\"" + num(sx(s.x[k])) + "\" y1=\"" + num(sy(s.err_lo[k])) + "\" x2=\"" +
               num(sx(s.x[k])) + "\" y2=\"" + num(sy(s.err_hi[k])) + "\" stroke=\"" + color +
               "\"/>\n";
      }
      if (s.markers) {
        out += "<circle cx=\"" + num(sx(s.x[k])) + "\" cy=\"" + num(sy(s.y[k])) +
               "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    }
    const double ly = top + 14.0 + 16.0 * si;
    out += "<rect x=\"" + num(left + 10) + "\" y=\"" + num(ly - 9) +
           "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    out += "<text x=\"" + num(left + 25) + "\" y=\"" + num(ly) + "\">" + escape(s.label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

} // namespace qwoa
