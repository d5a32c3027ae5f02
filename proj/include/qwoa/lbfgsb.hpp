#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qwoa/error.hpp"

namespace qwoa::optim {

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  [[nodiscard]] bool contains(const Eigen::VectorXd& x) const;
  [[nodiscard]] Eigen::VectorXd project(const Eigen::VectorXd& x) const;
};

struct Settings {
  int memory = 10;
  int max_iterations = 500;
  double pg_tolerance = 1e-6;      // infinity norm of the projected gradient
  double ftol_relative = 1e-10;    // (f_k - f_{k+1}) / max(|f_k|, |f_{k+1}|, 1)
  double fd_relative_step = 1e-6;
  double fd_min_step = 1e-6;
  int max_line_search_steps = 40;
  double armijo = 1e-4;
  bool record_trace = false;
};

enum class Status { ProjectedGradient, FunctionChange, IterationLimit, LineSearchFailed };

std::string to_string(Status status);

struct Evaluation {
  std::uint64_t index = 0;  // 1-based call number
  Eigen::VectorXd x;
  double value = 0.0;
};

struct Result {
  Eigen::VectorXd x;
  double value = 0.0;
  double initial_value = 0.0;
  std::uint64_t evaluations = 0;
  int iterations = 0;
  Status status = Status::IterationLimit;
  std::vector<Evaluation> trace;

  [[nodiscard]] bool converged() const noexcept {
    return status == Status::ProjectedGradient || status == Status::FunctionChange;
  }
};

/// Thrown when the objective returns NaN or inf. Carries the evaluations up
/// to and including the offending one when tracing is on.
class NonFiniteObjective : public NumericError {
public:
  NonFiniteObjective(const std::string& what, std::vector<Evaluation> trace)
      : NumericError(what), trace_(std::move(trace)) {}
  [[nodiscard]] const std::vector<Evaluation>& trace() const noexcept { return trace_; }

private:
  std::vector<Evaluation> trace_;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Projected gradient: P(x - g) - x.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Box& box);

/// Limited-memory BFGS with box constraints and finite-difference gradients.
///
/// Each iteration fixes the variables sitting on a bound whose gradient
/// points outward, builds the two-loop quasi-Newton direction on the free
/// variables, and backtracks along the projected path x(a) = P(x + a d)
/// until the Armijo condition holds. Iterates never leave the box and the
/// objective value never increases. Gradients use central differences,
/// switching to one-sided differences next to a bound.
Result minimize(const Objective& f, const Eigen::VectorXd& x0, const Box& box,
                const Settings& settings = {});

} // namespace qwoa::optim
