#include "adadgs/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <mutex>

#include "adadgs/format.hpp"

namespace adadgs {

namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string describe_errno(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

/// Pool of channels handed out one per in-flight call.
class ChannelPool {
 public:
  ChannelPool(const SubprocessOptions& options, std::size_t dim) {
    for (std::size_t i = 0; i < std::max<std::size_t>(options.workers, 1); ++i) {
      channels_.push_back(std::make_unique<SubprocessChannel>(options.argv, dim, options.timeout));
      idle_.push_back(channels_.back().get());
    }
  }

  double evaluate(const VectorRef& x) {
    SubprocessChannel* channel = nullptr;
    {
      std::unique_lock lock(mutex_);
      ready_.wait(lock, [&] { return !idle_.empty(); });
      channel = idle_.back();
      idle_.pop_back();
    }
    struct Release {
      ChannelPool* pool;
      SubprocessChannel* channel;
      ~Release() {
        {
          std::lock_guard lock(pool->mutex_);
          pool->idle_.push_back(channel);
        }
        pool->ready_.notify_one();
      }
    } release{this, channel};
    return channel->evaluate(x);
  }

 private:
  std::vector<std::unique_ptr<SubprocessChannel>> channels_;
  std::vector<SubprocessChannel*> idle_;
  std::mutex mutex_;
  std::condition_variable ready_;
};

}  // namespace

SubprocessChannel::SubprocessChannel(const std::vector<std::string>& argv, std::size_t dim,
                                     std::chrono::milliseconds timeout)
    : dim_(dim), timeout_(timeout) {
  if (argv.empty()) {
    throw SubprocessSetupError("subprocess objective: empty command");
  }
  ignore_sigpipe_once();

  int in_pipe[2];   // parent -> child
  int out_pipe[2];  // child -> parent
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw SubprocessSetupError(describe_errno("pipe"));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw SubprocessSetupError(describe_errno("pipe"));
  }

  std::vector<char*> args;
  for (const auto& a : argv) {
    args.push_back(const_cast<char*>(a.c_str()));
  }
  args.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw SubprocessSetupError(describe_errno("fork"));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  pid_ = pid;
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  try {
    send("H " + std::to_string(dim_) + "\n");
    const std::string reply = receive_line();
    if (reply != "OK") {
      throw SubprocessSetupError("subprocess objective: handshake rejected: '" + reply + "'");
    }
  } catch (const SubprocessSetupError&) {
    shutdown();
    throw;
  } catch (const std::exception& e) {
    shutdown();
    throw SubprocessSetupError(std::string("subprocess objective: handshake failed: ") +
                               e.what());
  }
}

SubprocessChannel::~SubprocessChannel() { shutdown(); }

void SubprocessChannel::shutdown() {
  if (to_child_ >= 0) {
    ::close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    ::close(from_child_);
    from_child_ = -1;
  }
  if (pid_ > 0) {
    // Closing stdin asks a well-behaved helper to exit; give it a moment.
    int status = 0;
    for (int attempt = 0; attempt < 50; ++attempt) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      ::usleep(2000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void SubprocessChannel::send(const std::string& line) {
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(to_child_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EvaluationError(describe_errno("subprocess objective: write failed"));
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string SubprocessChannel::receive_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') {
        line.pop_back();
      }
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      throw EvaluationError("subprocess objective: timed out waiting for a reply");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw EvaluationError(describe_errno("subprocess objective: poll failed"));
    }
    if (ready == 0) {
      continue;
    }
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EvaluationError(describe_errno("subprocess objective: read failed"));
    }
    if (n == 0) {
      throw EvaluationError("subprocess objective: process closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

double SubprocessChannel::evaluate(const VectorRef& x) {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw std::invalid_argument("subprocess objective: dimension mismatch");
  }
  if (to_child_ < 0) {
    throw EvaluationError("subprocess objective: channel is closed");
  }
  std::string request = "E";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    request += ' ';
    request += format_double(x[i]);
  }
  request += '\n';
  send(request);
  const std::string reply = receive_line();
  if (reply.rfind("ERR", 0) == 0) {
    throw EvaluationError("subprocess objective reported: " + reply);
  }
  try {
    return parse_double(reply);
  } catch (const std::invalid_argument&) {
    throw EvaluationError("subprocess objective: malformed reply '" + reply + "'");
  }
}

Objective subprocess_objective(const SubprocessOptions& options, std::size_t dim,
                               std::vector<Interval> bounds, std::string label) {
  if (bounds.size() != dim) {
    throw std::invalid_argument("subprocess objective: bounds do not match dimension");
  }
  auto pool = std::make_shared<ChannelPool>(options, dim);
  const bool concurrent = options.workers > 1;
  return Objective(std::move(label), std::move(bounds),
                   [pool](const VectorRef& x) { return pool->evaluate(x); }, concurrent);
}

}  // namespace adadgs
