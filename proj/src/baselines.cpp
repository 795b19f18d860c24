#include "adadgs/baselines.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "adadgs/gradient.hpp"

namespace adadgs {

namespace {

void validate(const BaselineConfig& config, const Objective& f, const Vector& x0) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw std::invalid_argument("baseline config: learning_rate must be positive");
  }
  if (!(config.sigma_or_h > 0.0) || !std::isfinite(config.sigma_or_h)) {
    throw std::invalid_argument("baseline config: sigma_or_h must be positive");
  }
  if (config.budget < 1) {
    throw std::invalid_argument("baseline config: budget must be at least 1");
  }
  if (static_cast<std::size_t>(x0.size()) != f.dim() || !x0.allFinite()) {
    throw std::invalid_argument("baseline: initial point must be finite with dimension " +
                                std::to_string(f.dim()));
  }
}

/// Bookkeeping shared by the three loops.
class Run {
 public:
  Run(const Objective& f, const Vector& x0, const BaselineConfig& config)
      : config_(config), per_iteration_(baseline_evals_per_iteration(config, f.dim())) {
    result_.x_best = x0;
    try {
      f0_ = evaluate_point(f, x0);
    } catch (const EvaluationError& e) {
      fail(e);
      result_.f_best = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    evals_ = 1;
    result_.f_best = f0_;
    result_.trace.push_back({0, evals_, f0_, f0_, config.sigma_or_h, 0.0});
  }

  double initial_value() const { return f0_; }
  bool failed() const { return failed_; }

  /// True when another full iteration fits in the budget and cap.
  bool may_continue() {
    if (failed_) {
      return false;
    }
    if (iteration_ >= config_.max_iterations) {
      result_.stop = StopReason::iteration_cap;
      return false;
    }
    if (evals_ + per_iteration_ > config_.budget) {
      result_.stop = StopReason::budget;
      return false;
    }
    return true;
  }

  void offer(const BestSample& sample) {
    if (sample.value < result_.f_best) {
      result_.f_best = sample.value;
      result_.x_best = sample.point;
    }
  }

  void record(std::size_t evals_used, double f_current, double step) {
    evals_ += evals_used;
    ++iteration_;
    result_.trace.push_back(
        {iteration_, evals_, f_current, result_.f_best, config_.sigma_or_h, step});
  }

  void fail(const EvaluationError& e) {
    failed_ = true;
    result_.stop = StopReason::evaluation_failure;
    result_.error = e.what();
  }

  OptimizationResult finish() { return std::move(result_); }

 private:
  const BaselineConfig& config_;
  std::size_t per_iteration_;
  OptimizationResult result_;
  std::size_t evals_ = 0;
  std::size_t iteration_ = 0;
  double f0_ = 0.0;
  bool failed_ = false;
};

}  // namespace

BaselineMethod parse_baseline_method(std::string_view name) {
  if (name == "es_bpop") return BaselineMethod::es_bpop;
  if (name == "nesterov") return BaselineMethod::nesterov;
  if (name == "fd") return BaselineMethod::fd;
  throw std::invalid_argument("unknown baseline method '" + std::string(name) + "'");
}

std::string_view to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::es_bpop:
      return "es_bpop";
    case BaselineMethod::nesterov:
      return "nesterov";
    case BaselineMethod::fd:
      return "fd";
  }
  return "unknown";
}

BaselineConfig BaselineConfig::defaults(BaselineMethod method) {
  BaselineConfig config;
  config.method = method;
  switch (method) {
    case BaselineMethod::es_bpop:
      config.learning_rate = 0.01;
      config.sigma_or_h = 0.1;
      break;
    case BaselineMethod::nesterov:
      config.learning_rate = 1e-3;
      config.sigma_or_h = 1e-4;
      break;
    case BaselineMethod::fd:
      config.learning_rate = 0.01;
      config.sigma_or_h = 1e-5;
      break;
  }
  return config;
}

std::size_t es_population(const BaselineConfig& config, std::size_t dim) {
  if (config.population) {
    return *config.population;
  }
  const std::size_t n = 5 * dim;
  return n % 2 == 0 ? n : n + 1;
}

std::size_t baseline_evals_per_iteration(const BaselineConfig& config, std::size_t dim) {
  switch (config.method) {
    case BaselineMethod::es_bpop:
      return es_population(config, dim);
    case BaselineMethod::nesterov:
      return 2;
    case BaselineMethod::fd:
      return 2 * dim;
  }
  return 0;
}

FdGradient fd_gradient(const Objective& f, const Vector& x, double h, Execution execution) {
  const Eigen::Index d = x.size();
  Matrix points(d, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    points.col(2 * i) = x;
    points.col(2 * i + 1) = x;
    points(i, 2 * i) += h;
    points(i, 2 * i + 1) -= h;
  }
  const std::vector<double> values = evaluate_batch(f, points, execution);
  FdGradient out;
  out.vector.resize(d);
  double total = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.vector[i] = (values[2 * k] - values[2 * k + 1]) / (2.0 * h);
    total += values[2 * k] + values[2 * k + 1];
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.best_sample.offer(values[k], points.col(static_cast<Eigen::Index>(k)));
  }
  out.mean_value = total / static_cast<double>(values.size());
  out.evals_used = values.size();
  return out;
}

OptimizationResult es_bpop_minimize(const Objective& f, const Vector& x0,
                                    const BaselineConfig& config, std::uint64_t seed) {
  validate(config, f, x0);
  const std::size_t population = es_population(config, f.dim());
  if (population == 0 || (config.antithetic && population % 2 != 0)) {
    throw std::invalid_argument("es_bpop: population must be positive and even");
  }
  Rng rng(seed);
  Run run(f, x0, config);
  Vector x = x0;
  while (run.may_continue()) {
    try {
      const McGradient g = gs_mc_gradient(f, x, config.sigma_or_h, population,
                                          config.antithetic, rng, config.execution);
      run.offer(g.best_sample);
      const Vector delta = config.learning_rate * g.vector;
      x -= delta;
      run.record(g.evals_used, g.mean_value, delta.norm());
    } catch (const EvaluationError& e) {
      run.fail(e);
    }
  }
  return run.finish();
}

OptimizationResult nesterov_minimize(const Objective& f, const Vector& x0,
                                     const BaselineConfig& config, std::uint64_t seed) {
  validate(config, f, x0);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Run run(f, x0, config);
  Vector x = x0;
  double f_x = run.initial_value();
  const double h = config.sigma_or_h;
  Vector u(x.size());
  while (run.may_continue()) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      u[i] = normal(rng);
    }
    try {
      // F(x) is re-queried every step so each step costs exactly 2.
      Matrix points(x.size(), 2);
      points.col(0) = x;
      points.col(1) = x + h * u;
      const std::vector<double> values = evaluate_batch(f, points, config.execution);
      f_x = values[0];
      BestSample best;
      best.offer(values[0], points.col(0));
      best.offer(values[1], points.col(1));
      run.offer(best);
      const double slope = (values[1] - values[0]) / h;
      const Vector delta = config.learning_rate * slope * u;
      x -= delta;
      run.record(2, f_x, delta.norm());
    } catch (const EvaluationError& e) {
      run.fail(e);
    }
  }
  return run.finish();
}

OptimizationResult fd_minimize(const Objective& f, const Vector& x0,
                               const BaselineConfig& config) {
  validate(config, f, x0);
  Run run(f, x0, config);
  Vector x = x0;
  while (run.may_continue()) {
    try {
      const FdGradient g = fd_gradient(f, x, config.sigma_or_h, config.execution);
      run.offer(g.best_sample);
      const Vector delta = config.learning_rate * g.vector;
      x -= delta;
      run.record(g.evals_used, g.mean_value, delta.norm());
    } catch (const EvaluationError& e) {
      run.fail(e);
    }
  }
  return run.finish();
}

OptimizationResult baseline_minimize(const Objective& f, const Vector& x0,
                                     const BaselineConfig& config, std::uint64_t seed) {
  switch (config.method) {
    case BaselineMethod::es_bpop:
      return es_bpop_minimize(f, x0, config, seed);
    case BaselineMethod::nesterov:
      return nesterov_minimize(f, x0, config, seed);
    case BaselineMethod::fd:
      return fd_minimize(f, x0, config);
  }
  throw std::invalid_argument("unknown baseline method");
}

}  // namespace adadgs
