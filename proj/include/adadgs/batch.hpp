#pragma once

#include <vector>

#include "adadgs/objective.hpp"

namespace adadgs {

enum class Execution { serial, parallel };

// Batch evaluation of the columns of `points`. Both kernels return values
// in column order and throw EvaluationError naming the lowest failing
// column, so results do not depend on which kernel ran.

/// Reference kernel: one column after another on the calling thread.
std::vector<double> evaluate_batch_serial(const Objective& f, const Matrix& points);

/// OpenMP kernel. Falls back to the serial kernel for objectives that are
/// not safe for concurrent calls, or when called from inside an active
/// parallel region.
std::vector<double> evaluate_batch_parallel(const Objective& f, const Matrix& points);

std::vector<double> evaluate_batch(const Objective& f, const Matrix& points,
                                   Execution execution);

}  // namespace adadgs
