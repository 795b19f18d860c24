#include "adadgs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adadgs {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) {
    throw std::invalid_argument("AdaDGS config: " + message);
  }
}

void offer_best(OptimizerState& state, const BestSample& sample) {
  if (sample.value < state.f_best) {
    state.f_best = sample.value;
    state.x_best = sample.point;
  }
}

void explore(OptimizerState& state, const ResolvedAdaDgs& config, Rng& rng) {
  state.frame = random_rotation(state.frame.dim(), rng);
  state.sigma = config.sigma0;
  state.last_reset_t = state.t;
  state.last_explored = true;
}

TraceRow row_of(const OptimizerState& state) {
  return {state.t, state.evals, state.f_current, state.f_best, state.sigma, state.last_step};
}

}  // namespace

LineSearchGrid LineSearchGrid::from_range(double l_max, double l_min, std::size_t points) {
  if (points < 2) {
    throw std::invalid_argument("LineSearchGrid: need at least 2 points");
  }
  if (!(l_min > 0.0) || !(l_min < l_max) || !std::isfinite(l_max)) {
    throw std::invalid_argument("LineSearchGrid: need 0 < l_min < l_max");
  }
  LineSearchGrid grid;
  grid.l_max = l_max;
  grid.points = points;
  grid.rho = std::pow(l_min / l_max, 1.0 / static_cast<double>(points - 1));
  return grid;
}

double LineSearchGrid::step(std::size_t j) const {
  return l_max * std::pow(rho, static_cast<double>(j));
}

ResolvedAdaDgs resolve(const AdaDgsConfig& config, const Objective& f) {
  ResolvedAdaDgs out;
  out.rule = gauss_hermite_rule(config.gh_order);

  const double l_max = config.l_max.value_or(f.domain_diagonal());
  require(std::isfinite(l_max) && l_max > 0.0, "l_max must be positive");

  if (config.contraction) {
    const double rho = *config.contraction;
    require(rho > 0.0 && rho < 1.0, "contraction must lie in (0, 1)");
    std::size_t points = 0;
    if (config.ls_points) {
      require(!config.l_min, "l_min, ls_points and contraction cannot all be set");
      points = *config.ls_points;
    } else {
      const double l_min = config.l_min.value_or(config.l_min_ratio * l_max);
      require(l_min > 0.0 && l_min < l_max, "need 0 < l_min < l_max");
      const double span = std::log(l_min / l_max) / std::log(rho);
      points = 1 + static_cast<std::size_t>(std::llround(span));
    }
    require(points >= 2, "line search needs at least 2 points");
    out.grid = LineSearchGrid{l_max, rho, points};
    require(out.grid.l_min() > 0.0, "derived l_min underflows");
  } else {
    const double l_min = config.l_min.value_or(config.l_min_ratio * l_max);
    require(l_min > 0.0 && l_min < l_max, "need 0 < l_min < l_max");
    const double default_points =
        std::round(0.05 * config.gh_order * static_cast<double>(f.dim()));
    const std::size_t points =
        config.ls_points.value_or(std::max<std::size_t>(12, static_cast<std::size_t>(default_points)));
    require(points >= 2, "line search needs at least 2 points");
    out.grid = LineSearchGrid::from_range(l_max, l_min, points);
  }

  out.sigma0 = config.sigma0.value_or(config.sigma0_scale * f.domain_width());
  require(std::isfinite(out.sigma0) && out.sigma0 > 0.0, "sigma0 must be positive");
  require(config.gamma >= 0.0, "gamma must be non-negative");
  require(config.budget >= 1, "budget must be at least 1");

  out.gamma = config.gamma;
  out.max_iterations = config.max_iterations;
  out.budget = config.budget;
  out.reset_interval = config.reset_interval;
  out.radius_update = config.radius_update;
  out.initial_frame = config.initial_frame;
  out.skip_zero_node = config.skip_zero_node;
  out.execution = config.execution;
  return out;
}

std::size_t evals_per_iteration(const ResolvedAdaDgs& config, std::size_t dim) {
  return stencil_size(config.rule, dim, config.skip_zero_node) + config.grid.points;
}

LineSearchResult line_search(const Objective& f, const Vector& x, double f_x, const Vector& g,
                             const LineSearchGrid& grid, Execution execution) {
  const double norm = g.norm();
  if (!(norm > kDegenerateGradientNorm)) {
    throw DegenerateGradient();
  }
  const Vector direction = g / norm;
  Matrix candidates(x.size(), static_cast<Eigen::Index>(grid.points));
  for (std::size_t j = 0; j < grid.points; ++j) {
    candidates.col(static_cast<Eigen::Index>(j)) = x - grid.step(j) * direction;
  }

  LineSearchResult out;
  out.candidate_values = evaluate_batch(f, candidates, execution);
  out.evals_used = out.candidate_values.size();
  for (std::size_t j = 1; j < out.candidate_values.size(); ++j) {
    if (out.candidate_values[j] < out.candidate_values[out.best_index]) {
      out.best_index = j;
    }
  }
  const double best = out.candidate_values[out.best_index];
  out.accepted = best < f_x;
  if (out.accepted) {
    out.step_distance = grid.step(out.best_index);
    out.x_new = candidates.col(static_cast<Eigen::Index>(out.best_index));
    out.f_new = best;
  } else {
    out.x_new = x;
    out.f_new = f_x;
  }
  out.lambda = out.step_distance / norm;
  return out;
}

double sigma_update(double sigma_prev, double step) {
  return std::max(0.5 * (sigma_prev + step), std::numeric_limits<double>::min());
}

OptimizerState initial_state(const Objective& f, const Vector& x0, const ResolvedAdaDgs& config,
                             Rng& rng) {
  if (static_cast<std::size_t>(x0.size()) != f.dim()) {
    throw std::invalid_argument("initial point has dimension " + std::to_string(x0.size()) +
                                ", objective expects " + std::to_string(f.dim()));
  }
  if (!x0.allFinite()) {
    throw std::invalid_argument("initial point is not finite");
  }
  OptimizerState state;
  state.x = x0;
  state.sigma = config.sigma0;
  state.frame = config.initial_frame == InitialFrame::random ? random_rotation(f.dim(), rng)
                                                             : Frame::identity(f.dim());
  state.f_current = evaluate_point(f, x0);
  state.evals = 1;
  state.f_best = state.f_current;
  state.x_best = x0;
  return state;
}

OptimizerState adadgs_step(const Objective& f, OptimizerState state,
                           const ResolvedAdaDgs& config, Rng& rng) {
  const DgsGradient gradient =
      dgs_gradient(f, state.x, state.frame, state.sigma, config.rule,
                   {config.skip_zero_node, config.execution});
  state.evals += gradient.evals_used;
  offer_best(state, gradient.best_sample);
  state.t += 1;
  state.last_step = 0.0;
  state.last_explored = false;

  if (!(gradient.vector.norm() > kDegenerateGradientNorm)) {
    explore(state, config, rng);
    return state;
  }

  const LineSearchResult search =
      line_search(f, state.x, state.f_current, gradient.vector, config.grid, config.execution);
  state.evals += search.evals_used;

  const double step =
      config.radius_update == RadiusUpdate::distance ? search.step_distance : search.lambda;
  const double relative_change = std::abs(search.f_new - state.f_current) /
                                 std::max(std::abs(state.f_current), 1e-12);

  state.sigma = sigma_update(state.sigma, step);
  state.x = search.x_new;
  state.f_current = search.f_new;
  state.last_step = search.step_distance;
  if (state.f_current < state.f_best) {
    state.f_best = state.f_current;
    state.x_best = state.x;
  }

  const bool interval_elapsed =
      !state.last_reset_t || state.t - *state.last_reset_t >= config.reset_interval;
  if (relative_change < config.gamma && interval_elapsed) {
    explore(state, config, rng);
  }
  return state;
}

OptimizationResult adadgs_minimize(const Objective& f, const Vector& x0,
                                   const AdaDgsConfig& config, std::uint64_t seed) {
  const ResolvedAdaDgs resolved = resolve(config, f);
  Rng rng(seed);
  OptimizationResult result;
  result.x_best = x0;

  OptimizerState state;
  try {
    state = initial_state(f, x0, resolved, rng);
  } catch (const EvaluationError& e) {
    result.f_best = std::numeric_limits<double>::quiet_NaN();
    result.stop = StopReason::evaluation_failure;
    result.error = e.what();
    return result;
  }
  result.trace.push_back(row_of(state));

  const std::size_t per_iteration = evals_per_iteration(resolved, f.dim());
  while (true) {
    if (state.t >= resolved.max_iterations) {
      result.stop = StopReason::iteration_cap;
      break;
    }
    if (state.evals + per_iteration > resolved.budget) {
      result.stop = StopReason::budget;
      break;
    }
    try {
      state = adadgs_step(f, state, resolved, rng);
    } catch (const EvaluationError& e) {
      result.stop = StopReason::evaluation_failure;
      result.error = e.what();
      break;
    }
    result.trace.push_back(row_of(state));
  }
  result.x_best = state.x_best;
  result.f_best = state.f_best;
  return result;
}

}  // namespace adadgs
