#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "adadgs/gradient.hpp"
#include "adadgs/trace.hpp"

namespace adadgs {

enum class RadiusUpdate {
  distance,       ///< average sigma with the accepted step length L_max * rho^J
  learning_rate,  ///< average sigma with lambda = step length / ||g||
};

enum class InitialFrame { identity, random };

/// AdaDGS hyper-parameters. Unset optionals take defaults derived from the
/// objective's search box in resolve().
struct AdaDgsConfig {
  int gh_order = 5;
  std::optional<double> l_max;     ///< default: search box diagonal
  std::optional<double> l_min;     ///< default: l_min_ratio * l_max
  double l_min_ratio = 0.005;
  std::optional<std::size_t> ls_points;  ///< default: max(12, round(0.05 * M * d))
  std::optional<double> contraction;     ///< rho; see resolve()
  std::optional<double> sigma0;          ///< default: sigma0_scale * search box width
  double sigma0_scale = 1.0;
  double gamma = 0.001;
  std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
  std::size_t budget = std::numeric_limits<std::size_t>::max();
  std::size_t reset_interval = 10;
  RadiusUpdate radius_update = RadiusUpdate::distance;
  InitialFrame initial_frame = InitialFrame::identity;
  bool skip_zero_node = true;
  Execution execution = Execution::parallel;
};

/// Log-spaced step lengths l_max * rho^j, j = 0..points-1.
struct LineSearchGrid {
  double l_max = 1.0;
  double rho = 0.5;
  std::size_t points = 2;

  /// rho = (l_min / l_max)^(1 / (points - 1)).
  static LineSearchGrid from_range(double l_max, double l_min, std::size_t points);

  double step(std::size_t j) const;
  double l_min() const { return step(points - 1); }
};

/// Fully determined configuration for one objective.
struct ResolvedAdaDgs {
  QuadratureRule rule;
  LineSearchGrid grid;
  double sigma0 = 1.0;
  double gamma = 0.001;
  std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
  std::size_t budget = std::numeric_limits<std::size_t>::max();
  std::size_t reset_interval = 10;
  RadiusUpdate radius_update = RadiusUpdate::distance;
  InitialFrame initial_frame = InitialFrame::identity;
  bool skip_zero_node = true;
  Execution execution = Execution::parallel;
};

/// Fills defaults and validates invariants (0 < l_min < l_max, points >= 2,
/// sigma0 > 0, gamma >= 0). Line-search grid rules:
///   - contraction and ls_points both set: l_min = l_max * rho^(points-1);
///   - contraction only: points = 1 + round(log(l_min/l_max) / log(rho));
///   - otherwise rho follows from l_min, l_max and points.
/// Throws std::invalid_argument on inconsistent or invalid settings.
ResolvedAdaDgs resolve(const AdaDgsConfig& config, const Objective& f);

/// Evaluations consumed by one full iteration (stencil + line search).
std::size_t evals_per_iteration(const ResolvedAdaDgs& config, std::size_t dim);

/// Raised by line_search when the search direction has (near) zero norm.
class DegenerateGradient : public std::domain_error {
 public:
  DegenerateGradient() : std::domain_error("line_search: gradient norm <= 1e-12") {}
};

inline constexpr double kDegenerateGradientNorm = 1e-12;

struct LineSearchResult {
  std::size_t best_index = 0;  ///< argmin over candidates, ties to the smaller j
  bool accepted = false;       ///< best candidate strictly beats the incumbent
  double step_distance = 0.0;  ///< l_max * rho^J if accepted, else 0
  double lambda = 0.0;         ///< step_distance / ||g||
  Vector x_new;
  double f_new = 0.0;
  std::size_t evals_used = 0;
  std::vector<double> candidate_values;
};

/// Evaluates x - l_max rho^j g/||g|| for every j and keeps the best of the
/// candidates and the incumbent (x, f_x). The incumbent is not re-evaluated.
LineSearchResult line_search(const Objective& f, const Vector& x, double f_x, const Vector& g,
                             const LineSearchGrid& grid,
                             Execution execution = Execution::parallel);

/// sigma_t = (sigma_{t-1} + step) / 2, floored at the smallest normal double.
double sigma_update(double sigma_prev, double step);

struct OptimizerState {
  Vector x;
  double sigma = 1.0;
  Frame frame = Frame::identity(1);
  std::size_t t = 0;
  std::size_t evals = 0;
  double f_current = 0.0;
  double f_best = 0.0;
  Vector x_best;
  std::optional<std::size_t> last_reset_t;
  double last_step = 0.0;       ///< step distance of the latest iteration
  bool last_explored = false;   ///< latest iteration rotated the frame and reset sigma
};

/// Evaluates f(x0) and sets up the frame and radius.
OptimizerState initial_state(const Objective& f, const Vector& x0, const ResolvedAdaDgs& config,
                             Rng& rng);

/// One AdaDGS iteration: DGS gradient, line search, radius update and the
/// random-exploration trigger.
OptimizerState adadgs_step(const Objective& f, OptimizerState state,
                           const ResolvedAdaDgs& config, Rng& rng);

/// Runs AdaDGS until the iteration cap or until the next full iteration
/// would exceed the evaluation budget. Evaluation failures stop the run;
/// the trace up to the failure is kept.
OptimizationResult adadgs_minimize(const Objective& f, const Vector& x0,
                                   const AdaDgsConfig& config, std::uint64_t seed);

}  // namespace adadgs
