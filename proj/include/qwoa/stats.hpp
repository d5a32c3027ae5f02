#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qwoa/rng.hpp"

namespace qwoa {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline constexpr double kZ95 = 1.959963984540054;

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> values);
/// Linear-interpolated quantile, q in [0, 1]. Copies and sorts.
double quantile(std::span<const double> values, double q);
double median(std::span<const double> values);

/// mean +/- z * s / sqrt(k).
Interval normal_ci(std::span<const double> values, double z = kZ95);
/// Percentile bootstrap of the mean.
Interval bootstrap_ci(std::span<const double> values, int resamples, Rng& rng,
                      double level = 0.95);
/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct QuadraticFit {
  double a = 0.0;  // x^2
  double b = 0.0;  // x
  double c = 0.0;  // 1
  double residual_norm = 0.0;

  [[nodiscard]] double operator()(double x) const noexcept { return (a * x + b) * x + c; }
};

struct ExponentialFit {
  double a = 0.0;
  double r = 0.0;  // y ~ a * r^x
  double residual_norm = 0.0;  // in log space

  [[nodiscard]] double operator()(double x) const;
};

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double residual_norm = 0.0;
};

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);
/// Least squares y ~ a x^2 + b x + c. Needs >= 3 distinct x.
QuadraticFit fit_quadratic(std::span<const double> x, std::span<const double> y);
/// Least squares on log y. Needs >= 3 points and every y > 0.
ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y);

} // namespace qwoa
