#include "qwoa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "qwoa/error.hpp"

namespace qwoa {

double mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean of empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

Interval normal_ci(std::span<const double> values, double z) {
  const double m = mean(values);
  const double half = z * sample_stddev(values) / std::sqrt(static_cast<double>(values.size()));
  return {m - half, m + half};
}

Interval bootstrap_ci(std::span<const double> values, int resamples, Rng& rng, double level) {
  if (values.empty() || resamples < 1) throw InvalidArgument("bootstrap needs data and resamples");
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) s += values[rng.below(values.size())];
    m = s / static_cast<double>(values.size());
  }
  const double tail = (1.0 - level) / 2.0;
  return {quantile(means, tail), quantile(means, 1.0 - tail)};
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0 || successes > trials) throw InvalidArgument("invalid binomial counts");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& rhs,
                                    double& residual_norm) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < design.cols()) throw InvalidArgument("least-squares system is rank deficient");
  Eigen::VectorXd coef = qr.solve(rhs);
  residual_norm = (design * coef - rhs).norm();
  return coef;
}

void check_points(std::span<const double> x, std::span<const double> y, std::size_t min_points) {
  if (x.size() != y.size()) throw InvalidArgument("x and y lengths differ");
  std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < min_points) {
    throw InvalidArgument("fit needs at least " + std::to_string(min_points) + " distinct points");
  }
}

} // namespace

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  check_points(x, y, 2);
  Eigen::MatrixXd design(x.size(), 2);
  Eigen::VectorXd rhs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = x[i];
    rhs(i) = y[i];
  }
  LinearFit fit;
  const auto coef = solve_least_squares(design, rhs, fit.residual_norm);
  fit.intercept = coef(0);
  fit.slope = coef(1);
  return fit;
}

QuadraticFit fit_quadratic(std::span<const double> x, std::span<const double> y) {
  check_points(x, y, 3);
  // Centre and scale x so the Vandermonde columns are well conditioned.
  const double shift = mean(x);
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v - shift));
  Eigen::MatrixXd design(x.size(), 3);
  Eigen::VectorXd rhs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - shift) / scale;
    design(i, 0) = u * u;
    design(i, 1) = u;
    design(i, 2) = 1.0;
    rhs(i) = y[i];
  }
  QuadraticFit fit;
  const auto k = solve_least_squares(design, rhs, fit.residual_norm);
  // Map a'u^2 + b'u + c' with u = (x - s)/h back to powers of x.
  const double a2 = k(0) / (scale * scale);
  const double b1 = k(1) / scale;
  fit.a = a2;
  fit.b = b1 - 2.0 * a2 * shift;
  fit.c = a2 * shift * shift - b1 * shift + k(2);
  return fit;
}

double ExponentialFit::operator()(double x) const { return a * std::pow(r, x); }

ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y) {
  check_points(x, y, 3);
  std::vector<double> logy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw InvalidArgument("exponential fit needs positive values");
    logy[i] = std::log(y[i]);
  }
  const auto line = fit_linear(x, logy);
  return {std::exp(line.intercept), std::exp(line.slope), line.residual_norm};
}

} // namespace qwoa
