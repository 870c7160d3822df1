// Runs an external SMT solver as a subprocess with a hard wall-clock timeout.
// The child gets its own process group so that script interpreters and their
// children die together on timeout.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relcheck/diag.hpp"
#include "relcheck/smt/solver.hpp"

namespace relcheck::smt {

namespace {

bool runnable(const std::string& path) {
  struct stat st{};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
         ::access(path.c_str(), X_OK) == 0;
}

std::string find_on_path(const std::string& name) {
  if (name.find('/') != std::string::npos) return runnable(name) ? name : "";
  const char* path = std::getenv("PATH");
  if (!path) return "";
  std::istringstream is(path);
  std::string dir;
  while (std::getline(is, dir, ':')) {
    if (dir.empty()) continue;
    std::string candidate = dir + "/" + name;
    if (runnable(candidate)) return candidate;
  }
  return "";
}

std::string self_directory() {
  char buf[4096];
  ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n <= 0) return "";
  buf[n] = '\0';
  return std::filesystem::path(buf).parent_path().string();
}

}  // namespace

std::string resolve_solver(const std::string& preferred) {
  std::vector<std::string> tried;
  auto attempt = [&](const std::string& name) -> std::string {
    if (name.empty()) return "";
    std::string found = find_on_path(name);
    if (found.empty()) tried.push_back(name);
    return found;
  };

  if (!preferred.empty()) {
    std::string s = attempt(preferred);
    if (!s.empty()) return s;
    throw Error(ErrorKind::SolverNotFound,
                "solver '" + preferred + "' is not an executable file");
  }
  if (const char* env = std::getenv("RELCHECK_SOLVER")) {
    std::string s = attempt(env);
    if (!s.empty()) return s;
    throw Error(ErrorKind::SolverNotFound,
                "RELCHECK_SOLVER ('" + std::string(env) + "') is not an executable file");
  }
  if (std::string s = attempt("z3"); !s.empty()) return s;
  std::string self = self_directory();
  if (!self.empty()) {
    if (std::string s = attempt(self + "/z3js"); !s.empty()) return s;
    if (std::string s = attempt(self + "/../tools/z3js"); !s.empty()) return s;
  }
  std::string msg = "no SMT solver found (tried";
  for (const std::string& t : tried) msg += " '" + t + "'";
  msg += "); install z3, or point RELCHECK_SOLVER or --solver at one";
  throw Error(ErrorKind::SolverNotFound, msg);
}

SolveResult run_solver(const std::string& solver, const std::string& script_text,
                       double timeout_seconds) {
  char tmpl[] = "/tmp/relcheck-XXXXXX.smt2";
  int fd = ::mkstemps(tmpl, 5);
  if (fd < 0) throw Error(ErrorKind::Internal, "cannot create a temporary script file");
  std::string script_path = tmpl;
  {
    size_t off = 0;
    while (off < script_text.size()) {
      ssize_t w = ::write(fd, script_text.data() + off, script_text.size() - off);
      if (w <= 0) {
        ::close(fd);
        ::unlink(script_path.c_str());
        throw Error(ErrorKind::Internal, "cannot write the temporary script file");
      }
      off += static_cast<size_t>(w);
    }
    ::close(fd);
  }

  int out_pipe[2];
  if (::pipe(out_pipe) != 0) {
    ::unlink(script_path.c_str());
    throw Error(ErrorKind::Internal, "pipe() failed");
  }

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::unlink(script_path.c_str());
    throw Error(ErrorKind::Internal, "fork() failed");
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(out_pipe[1], STDERR_FILENO);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl(solver.c_str(), solver.c_str(), script_path.c_str(), (char*)nullptr);
    _exit(127);
  }

  ::close(out_pipe[1]);
  std::string output;
  bool timed_out = false;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000));
  char buf[4096];
  while (true) {
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                         deadline - std::chrono::steady_clock::now())
                         .count();
    if (remaining <= 0) {
      timed_out = true;
      break;
    }
    struct pollfd pfd{out_pipe[0], POLLIN, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining, 1000)));
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (pr == 0) continue;
    ssize_t n = ::read(out_pipe[0], buf, sizeof(buf));
    if (n <= 0) break;  // EOF or error: the child is done writing
    output.append(buf, static_cast<size_t>(n));
  }
  ::close(out_pipe[0]);

  int wstatus = 0;
  if (timed_out) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);  // in case setpgid raced
    ::waitpid(pid, &wstatus, 0);
    ::unlink(script_path.c_str());
    SolveResult r;
    r.status = SolveStatus::Unknown;
    r.timed_out = true;
    return r;
  }
  ::waitpid(pid, &wstatus, 0);
  ::unlink(script_path.c_str());

  // The verdict is the first output line that reads sat/unsat/unknown.
  std::istringstream is(output);
  std::string line;
  size_t consumed = 0;
  while (std::getline(is, line)) {
    consumed += line.size() + 1;
    std::string t = line;
    t.erase(0, t.find_first_not_of(" \t\r"));
    t.erase(t.find_last_not_of(" \t\r") + 1);
    if (t == "sat" || t == "unsat" || t == "unknown" || t == "timeout") {
      SolveResult r;
      r.status = t == "sat" ? SolveStatus::Sat
                 : t == "unsat" ? SolveStatus::Unsat
                                : SolveStatus::Unknown;
      r.timed_out = t == "timeout";
      r.model_text = consumed < output.size() ? output.substr(consumed) : "";
      return r;
    }
  }

  std::string detail = output.substr(0, 400);
  if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 127)
    throw Error(ErrorKind::SolverCrashed, "failed to launch solver '" + solver + "'");
  throw Error(ErrorKind::SolverCrashed,
              "solver produced no verdict (exit status " + std::to_string(wstatus) +
                  (detail.empty() ? ")" : "): " + detail));
}

}  // namespace relcheck::smt
