#pragma once

#include <Eigen/Core>
#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adadgs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Closed interval [lower, upper].
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  double center() const { return 0.5 * (lower + upper); }
};

/// Raised when an objective evaluation fails or returns a non-finite value.
/// Carries the position of the offending sample inside its batch when known.
class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what,
                           std::optional<std::size_t> sample_index = std::nullopt);

  const std::optional<std::size_t>& sample_index() const { return sample_index_; }

 private:
  std::optional<std::size_t> sample_index_;
};

/// A counted black-box loss F: R^d -> R with an initial search box.
///
/// The counter is shared between copies, so handing an Objective to an
/// optimizer by value still accounts every call against the same budget.
/// Evaluation never checks finiteness; batch evaluation does.
class Objective {
 public:
  using Function = std::function<double(const VectorRef&)>;

  Objective(std::string label, std::vector<Interval> bounds, Function fn,
            bool concurrent_safe = true);

  double operator()(const VectorRef& x) const;

  std::size_t dim() const { return bounds_.size(); }
  const std::string& label() const { return label_; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  std::size_t evaluations() const { return counter_->load(std::memory_order_relaxed); }

  /// True when concurrent calls from several threads are permitted.
  bool concurrent_safe() const { return concurrent_safe_; }

  /// Largest coordinate width of the search box.
  double domain_width() const;
  /// Euclidean length of the search box diagonal.
  double domain_diagonal() const;

 private:
  std::string label_;
  std::vector<Interval> bounds_;
  Function fn_;
  bool concurrent_safe_;
  std::shared_ptr<std::atomic<std::size_t>> counter_;
};

/// Evaluates a single point and rejects non-finite results.
double evaluate_point(const Objective& f, const VectorRef& x);

/// Wraps `f` so its values are multiplied by `factor`. Every call is
/// counted by both the wrapper and `f`.
Objective scaled(const Objective& f, double factor);

}  // namespace adadgs
