#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "adadgs/objective.hpp"

namespace adadgs {

/// Raised when an external objective process cannot be started or rejects
/// the handshake.
class SubprocessSetupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One external evaluator process speaking the line protocol:
///
///   -> "H <d>\n"                  <- "OK\n"
///   -> "E <x_1> ... <x_d>\n"      <- "<f>\n"  or  "ERR <message>\n"
///
/// Numbers use shortest round-trip decimals. One request is in flight at a
/// time. The process is terminated when the channel is destroyed.
class SubprocessChannel {
 public:
  SubprocessChannel(const std::vector<std::string>& argv, std::size_t dim,
                    std::chrono::milliseconds timeout);
  ~SubprocessChannel();

  SubprocessChannel(const SubprocessChannel&) = delete;
  SubprocessChannel& operator=(const SubprocessChannel&) = delete;

  /// Throws EvaluationError on an ERR reply, a garbled reply, a timeout or
  /// process exit.
  double evaluate(const VectorRef& x);

  std::size_t dim() const { return dim_; }

 private:
  void send(const std::string& line);
  std::string receive_line();
  void shutdown();

  std::size_t dim_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

struct SubprocessOptions {
  std::vector<std::string> argv;
  std::chrono::milliseconds timeout{30000};
  /// Number of processes. With more than one, the objective accepts
  /// concurrent calls and hands each to an idle process.
  std::size_t workers = 1;
};

/// Starts the worker processes, performs the handshake on each, and wraps
/// them as a counted Objective. Throws SubprocessSetupError before returning
/// if any process fails the handshake.
Objective subprocess_objective(const SubprocessOptions& options, std::size_t dim,
                               std::vector<Interval> bounds, std::string label = "subprocess");

}  // namespace adadgs
