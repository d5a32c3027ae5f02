#include "qwoa/lbfgsb.hpp"

#include <cmath>
#include <deque>

namespace qwoa::optim {

bool Box::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x(i) >= lower(i) && x(i) <= upper(i))) return false;
  }
  return true;
}

Eigen::VectorXd Box::project(const Eigen::VectorXd& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

std::string to_string(Status status) {
  switch (status) {
    case Status::ProjectedGradient: return "projected_gradient";
    case Status::FunctionChange: return "function_change";
    case Status::IterationLimit: return "iteration_limit";
    case Status::LineSearchFailed: return "line_search_failed";
  }
  return "unknown";
}

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Box& box) {
  return box.project(x - g) - x;
}

namespace {

class CountingObjective {
public:
  CountingObjective(const Objective& f, bool trace) : f_(f), trace_enabled_(trace) {}

  double operator()(const Eigen::VectorXd& x) {
    const double v = f_(x);
    ++count_;
    if (trace_enabled_) trace_.push_back({count_, x, v});
    if (!std::isfinite(v)) {
      throw NonFiniteObjective("objective returned a non-finite value at evaluation " +
                                   std::to_string(count_),
                               trace_);
    }
    return v;
  }

  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  std::vector<Evaluation> take_trace() { return std::move(trace_); }

private:
  const Objective& f_;
  bool trace_enabled_;
  std::uint64_t count_ = 0;
  std::vector<Evaluation> trace_;
};

Eigen::VectorXd fd_gradient(CountingObjective& f, const Eigen::VectorXd& x, double fx,
                            const Box& box, const Settings& s) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double lo = box.lower(i);
    const double hi = box.upper(i);
    if (hi <= lo) {
      g(i) = 0.0;
      continue;
    }
    const double h = std::min(std::max(s.fd_min_step, s.fd_relative_step * std::abs(x(i))),
                              0.5 * (hi - lo));
    const bool can_up = x(i) + h <= hi;
    const bool can_down = x(i) - h >= lo;
    if (can_up && can_down) {
      probe(i) = x(i) + h;
      const double fp = f(probe);
      probe(i) = x(i) - h;
      const double fm = f(probe);
      g(i) = (fp - fm) / (2.0 * h);
    } else if (can_up) {
      probe(i) = x(i) + h;
      g(i) = (f(probe) - fx) / h;
    } else {
      probe(i) = x(i) - h;
      g(i) = (fx - f(probe)) / h;
    }
    probe(i) = x(i);
  }
  return g;
}

struct Memory {
  std::deque<Eigen::VectorXd> s;
  std::deque<Eigen::VectorXd> y;

  void clear() {
    s.clear();
    y.clear();
  }

  // Two-loop recursion: returns H q.
  [[nodiscard]] Eigen::VectorXd apply_inverse_hessian(Eigen::VectorXd q) const {
    const std::size_t m = s.size();
    std::vector<double> alpha(m);
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = s[k].dot(q) / y[k].dot(s[k]);
      q -= alpha[k] * y[k];
    }
    if (m > 0) q *= s.back().dot(y.back()) / y.back().squaredNorm();
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = y[k].dot(q) / y[k].dot(s[k]);
      q += (alpha[k] - beta) * s[k];
    }
    return q;
  }
};

} // namespace

Result minimize(const Objective& objective, const Eigen::VectorXd& x0, const Box& box,
                const Settings& settings) {
  if (box.lower.size() != x0.size() || box.upper.size() != x0.size()) {
    throw InvalidArgument("bounds and starting point differ in dimension");
  }
  if (!box.contains(x0)) throw InvalidArgument("starting point lies outside the bounds");

  CountingObjective f(objective, settings.record_trace);
  Result result;
  Eigen::VectorXd x = x0;
  double fx = f(x);
  result.initial_value = fx;
  Eigen::VectorXd g = fd_gradient(f, x, fx, box, settings);
  Memory memory;

  auto finish = [&](Status status) {
    result.x = x;
    result.value = fx;
    result.status = status;
    result.evaluations = f.count();
    result.trace = f.take_trace();
    return result;
  };

  for (result.iterations = 0; result.iterations < settings.max_iterations; ++result.iterations) {
    if (projected_gradient(x, g, box).lpNorm<Eigen::Infinity>() <= settings.pg_tolerance) {
      return finish(Status::ProjectedGradient);
    }

    // Variables pinned at a bound with the gradient pushing outward stay fixed.
    Eigen::VectorXd free_mask = Eigen::VectorXd::Ones(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if ((x(i) <= box.lower(i) && g(i) > 0.0) || (x(i) >= box.upper(i) && g(i) < 0.0) ||
          box.upper(i) <= box.lower(i)) {
        free_mask(i) = 0.0;
      }
    }
    const Eigen::VectorXd g_free = g.cwiseProduct(free_mask);

    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd d = -memory.apply_inverse_hessian(g_free).cwiseProduct(free_mask);
      if (g.dot(d) >= 0.0) {
        memory.clear();
        d = -g_free;
      }
      double alpha = memory.s.empty() ? std::min(1.0, 1.0 / d.lpNorm<Eigen::Infinity>()) : 1.0;
      for (int ls = 0; ls < settings.max_line_search_steps; ++ls, alpha *= 0.5) {
        x_new = box.project(x + alpha * d);
        const Eigen::VectorXd step = x_new - x;
        if (step.lpNorm<Eigen::Infinity>() == 0.0) break;
        f_new = f(x_new);
        if (f_new <= fx + settings.armijo * g.dot(step)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (memory.s.empty()) break;
        memory.clear();
      }
    }
    if (!accepted) return finish(Status::LineSearchFailed);

    const Eigen::VectorXd g_new = fd_gradient(f, x_new, f_new, box, settings);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    if (s.dot(y) > 1e-10 * y.squaredNorm()) {
      memory.s.push_back(s);
      memory.y.push_back(y);
      if (static_cast<int>(memory.s.size()) > settings.memory) {
        memory.s.pop_front();
        memory.y.pop_front();
      }
    }
    const double decrease = fx - f_new;
    const double scale = std::max({std::abs(fx), std::abs(f_new), 1.0});
    x = x_new;
    fx = f_new;
    g = g_new;
    if (decrease <= settings.ftol_relative * scale) {
      ++result.iterations;
      return finish(Status::FunctionChange);
    }
  }
  return finish(Status::IterationLimit);
}

} // namespace qwoa::optim
