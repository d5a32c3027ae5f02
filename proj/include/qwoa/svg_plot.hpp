#pragma once

#include <string>
#include <vector>

namespace qwoa {

/// Minimal static SVG chart: points/lines with optional error bars.
class SvgPlot {
public:
  struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err_lo;  // absolute lower bounds, optional
    std::vector<double> err_hi;
    bool line = true;
    bool markers = true;
    bool dashed = false;
  };

  SvgPlot(std::string title, std::string x_label, std::string y_label, bool log_y = false);

  void add(Series series) { series_.push_back(std::move(series)); }
  [[nodiscard]] std::string render(int width = 640, int height = 420) const;

private:
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  bool log_y_;
  std::vector<Series> series_;
};

} // namespace qwoa
