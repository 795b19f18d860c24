#include "adadgs/objective.hpp"

#include <cmath>

namespace adadgs {

EvaluationError::EvaluationError(const std::string& what,
                                 std::optional<std::size_t> sample_index)
    : std::runtime_error(what), sample_index_(sample_index) {}

Objective::Objective(std::string label, std::vector<Interval> bounds, Function fn,
                     bool concurrent_safe)
    : label_(std::move(label)),
      bounds_(std::move(bounds)),
      fn_(std::move(fn)),
      concurrent_safe_(concurrent_safe),
      counter_(std::make_shared<std::atomic<std::size_t>>(0)) {
  if (bounds_.empty()) {
    throw std::invalid_argument("Objective: dimension must be positive");
  }
  for (const auto& b : bounds_) {
    if (!(b.lower < b.upper) || !std::isfinite(b.lower) || !std::isfinite(b.upper)) {
      throw std::invalid_argument("Objective: bounds must be finite with lower < upper");
    }
  }
  if (!fn_) {
    throw std::invalid_argument("Objective: empty function");
  }
}

double Objective::operator()(const VectorRef& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw std::invalid_argument("Objective '" + label_ + "': expected dimension " +
                                std::to_string(dim()) + ", got " +
                                std::to_string(x.size()));
  }
  counter_->fetch_add(1, std::memory_order_relaxed);
  return fn_(x);
}

double Objective::domain_width() const {
  double width = 0.0;
  for (const auto& b : bounds_) {
    width = std::max(width, b.width());
  }
  return width;
}

double Objective::domain_diagonal() const {
  double sum = 0.0;
  for (const auto& b : bounds_) {
    sum += b.width() * b.width();
  }
  return std::sqrt(sum);
}

double evaluate_point(const Objective& f, const VectorRef& x) {
  const double value = f(x);
  if (!std::isfinite(value)) {
    throw EvaluationError("objective '" + f.label() + "' returned a non-finite value", 0);
  }
  return value;
}

Objective scaled(const Objective& f, double factor) {
  Objective copy = f;
  Objective wrapped(f.label(), f.bounds(),
                    [inner = std::move(copy), factor](const VectorRef& x) {
                      return factor * inner(x);
                    },
                    f.concurrent_safe());
  return wrapped;
}

}  // namespace adadgs
