#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <time.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "linewalker/drivers.hpp"
#include "linewalker/types.hpp"

namespace linewalker {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Black-box objective served by a child process over a line protocol:
/// each request is one line of space-separated decimal coordinates, each
/// reply one decimal value line (or "ERROR <msg>"). One request is in
/// flight at a time; the process is reused across evaluations and
/// terminated when the oracle is destroyed.
class ExternalOracle {
 public:
  explicit ExternalOracle(std::vector<std::string> argv) : argv_(std::move(argv)) {
    if (argv_.empty()) {
      throw OracleError("oracle: empty command");
    }
    ignore_sigpipe_once();
    spawn();
  }

  ExternalOracle(const ExternalOracle&) = delete;
  ExternalOracle& operator=(const ExternalOracle&) = delete;

  ~ExternalOracle() { shutdown(); }

  const std::vector<std::string>& command() const { return argv_; }

  double evaluate(const Eigen::VectorXd& x) {
    std::string request;
    char buf[64];
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), x[k]);
      if (k > 0) request += ' ';
      request.append(buf, res.ptr);
    }
    request += '\n';
    if (std::fputs(request.c_str(), to_child_) == EOF ||
        std::fflush(to_child_) != 0) {
      throw OracleError("oracle: writing the request failed (process gone?)");
    }

    std::string line = read_line();
    const std::string trimmed = trim(line);
    if (trimmed.rfind("ERROR", 0) == 0) {
      std::string msg = trim(trimmed.substr(5));
      throw OracleError("oracle reported an error: " +
                        (msg.empty() ? std::string("(no message)") : msg));
    }
    double value = 0.0;
    const char* begin = trimmed.data();
    const char* end = begin + trimmed.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || trimmed.empty()) {
      throw OracleError("oracle protocol violation, non-numeric reply: \"" +
                        trimmed + "\"");
    }
    if (!std::isfinite(value)) {
      throw OracleError("oracle returned a non-finite value: \"" + trimmed +
                        "\"");
    }
    return value;
  }

 private:
  static void ignore_sigpipe_once() {
    static const bool done = [] {
      ::signal(SIGPIPE, SIG_IGN);
      return true;
    }();
    (void)done;
  }

  void spawn() {
    int to_child[2], from_child[2], status_pipe[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0 ||
        ::pipe2(status_pipe, O_CLOEXEC) != 0) {
      throw OracleError("oracle: pipe creation failed");
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      throw OracleError("oracle: fork failed");
    }
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      std::vector<char*> cargv;
      cargv.reserve(argv_.size() + 1);
      for (std::string& a : argv_) cargv.push_back(a.data());
      cargv.push_back(nullptr);
      ::execvp(cargv[0], cargv.data());
      const int err = errno;
      [[maybe_unused]] ssize_t n = ::write(status_pipe[1], &err, sizeof(err));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    ::close(status_pipe[1]);

    int exec_errno = 0;
    const ssize_t got = ::read(status_pipe[0], &exec_errno, sizeof(exec_errno));
    ::close(status_pipe[0]);
    if (got > 0) {
      ::close(to_child[1]);
      ::close(from_child[0]);
      int status = 0;
      ::waitpid(pid_, &status, 0);
      pid_ = -1;
      throw OracleError("oracle: failed to launch \"" + argv_[0] +
                        "\": " + std::strerror(exec_errno));
    }

    to_child_ = ::fdopen(to_child[1], "w");
    from_child_ = ::fdopen(from_child[0], "r");
    if (to_child_ == nullptr || from_child_ == nullptr) {
      throw OracleError("oracle: fdopen failed");
    }
  }

  std::string read_line() {
    std::string line;
    int c;
    while ((c = std::fgetc(from_child_)) != EOF) {
      if (c == '\n') return line;
      line.push_back(static_cast<char>(c));
    }
    throw OracleError("oracle closed its output before replying (EOF)" +
                      (line.empty() ? std::string()
                                    : ", partial line: \"" + line + "\""));
  }

  static std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }

  void shutdown() {
    if (to_child_ != nullptr) {
      std::fclose(to_child_);  // EOF tells a well-behaved child to exit
      to_child_ = nullptr;
    }
    if (pid_ > 0) {
      int status = 0;
      bool reaped = false;
      for (int i = 0; i < 200; ++i) {  // up to ~2 s of polite waiting
        if (::waitpid(pid_, &status, WNOHANG) == pid_) {
          reaped = true;
          break;
        }
        struct timespec ts {0, 10 * 1000 * 1000};
        ::nanosleep(&ts, nullptr);
      }
      if (!reaped) {
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
      }
      pid_ = -1;
    }
    if (from_child_ != nullptr) {
      std::fclose(from_child_);
      from_child_ = nullptr;
    }
  }

  std::vector<std::string> argv_;
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

/// Objective handle backed by one child process. The process lives as long
/// as a copy of the returned objective does.
inline Objective spawn_external_oracle(std::vector<std::string> argv) {
  auto oracle = std::make_shared<ExternalOracle>(std::move(argv));
  return [oracle](const Eigen::VectorXd& x) { return oracle->evaluate(x); };
}

}  // namespace linewalker
