#include "forge/sandbox/process_runner.hpp"

#include <fcntl.h>
#include <grp.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <mutex>

#include "forge/sandbox/backend.hpp"
#include "forge/util/fs.hpp"

namespace forge::sandbox {

namespace {

constexpr uid_t kNobodyUid = 65534;
constexpr gid_t kNobodyGid = 65534;
constexpr double kGraceSeconds = 2.0;

void ignore_sigpipe_once() {
    static std::once_flag flag;
    std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void set_nonblocking(int fd) {
    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void set_cloexec(int fd) {
    int flags = ::fcntl(fd, F_GETFD, 0);
    ::fcntl(fd, F_SETFD, flags | FD_CLOEXEC);
}

// Peak resident set from /proc; 0 when unreadable (process already gone).
std::int64_t read_vm_hwm(pid_t pid) {
    char path[64];
    std::snprintf(path, sizeof(path), "/proc/%d/status", pid);
    auto content = util::read_file(path);
    if (!content) return 0;
    auto pos = content->find("VmHWM:");
    if (pos == std::string::npos) return 0;
    long long kib = 0;
    if (std::sscanf(content->c_str() + pos, "VmHWM: %lld", &kib) != 1) return 0;
    return static_cast<std::int64_t>(kib) * 1024;
}

[[noreturn]] void child_exec(const RunRequest& req, int in_fd, int out_fd, int err_fd) {
    ::setpgid(0, 0);
    ::dup2(in_fd, STDIN_FILENO);
    ::dup2(out_fd, STDOUT_FILENO);
    ::dup2(err_fd, STDERR_FILENO);

    struct rlimit no_core { 0, 0 };
    ::setrlimit(RLIMIT_CORE, &no_core);

    if (!req.workdir.empty() && ::chdir(req.workdir.c_str()) != 0) {
        std::fprintf(stderr, "chdir %s: %s\n", req.workdir.c_str(), std::strerror(errno));
        ::_exit(126);
    }
    if (req.drop_privileges && ::geteuid() == 0) {
        if (::setgroups(0, nullptr) != 0 || ::setgid(kNobodyGid) != 0 || ::setuid(kNobodyUid) != 0) {
            std::fprintf(stderr, "privilege drop failed: %s\n", std::strerror(errno));
            ::_exit(126);
        }
    }

    std::vector<char*> argv;
    argv.reserve(req.argv.size() + 1);
    for (const auto& a : req.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    std::fprintf(stderr, "exec %s: %s\n", argv[0], std::strerror(errno));
    ::_exit(127);
}

}  // namespace

std::unique_lock<std::mutex> exec_write_guard() {
    static std::mutex mutex;
    return std::unique_lock(mutex);
}

ExecutionOutcome run_process(const RunRequest& req) {
    ignore_sigpipe_once();

    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (::pipe(in_pipe) != 0) throw BackendUnavailable("pipe: " + std::string(std::strerror(errno)));
    if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
        throw BackendUnavailable("pipe: " + std::string(std::strerror(errno)));
    }
    for (int fd : {in_pipe[1], out_pipe[0], err_pipe[0]}) set_cloexec(fd);

    auto start = std::chrono::steady_clock::now();
    pid_t pid;
    {
        // No provisioning write fd may be open during the fork; see
        // exec_write_guard. The child never unwinds this scope.
        auto guard = exec_write_guard();
        pid = ::fork();
        if (pid == 0) {
            ::close(in_pipe[1]);
            ::close(out_pipe[0]);
            ::close(err_pipe[0]);
            child_exec(req, in_pipe[0], out_pipe[1], err_pipe[1]);
        }
    }
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
        throw BackendUnavailable("fork: " + std::string(std::strerror(errno)));
    }

    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    // Race guard: the child also calls setpgid on itself.
    ::setpgid(pid, pid);

    int stdin_fd = in_pipe[1];
    int stdout_fd = out_pipe[0];
    int stderr_fd = err_pipe[0];
    for (int fd : {stdin_fd, stdout_fd, stderr_fd}) set_nonblocking(fd);

    ExecutionOutcome outcome;
    std::size_t stdin_written = 0;
    bool engine_killed = false;
    bool sent_term = false;
    bool sent_kill = false;
    bool reaped = false;
    int wait_status = 0;
    struct rusage usage {};
    std::int64_t polled_peak = 0;

    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    auto kill_group = [&](int signo) {
        ::kill(-pid, signo);
        ::kill(pid, signo);  // in case the group switch lost the race
    };

    if (req.stdin_bytes.empty()) {
        ::close(stdin_fd);
        stdin_fd = -1;
    }

    const double term_deadline = req.time_limit;
    const double kill_deadline = req.time_limit + kGraceSeconds;
    // Once the child is reaped, drain remaining pipe data briefly; a
    // lingering grandchild could otherwise hold the pipes open forever.
    double drain_deadline = -1.0;

    auto read_stream = [&](int& fd, std::string& sink) {
        char buf[65536];
        for (;;) {
            ssize_t n = ::read(fd, buf, sizeof(buf));
            if (n > 0) {
                std::size_t cap = static_cast<std::size_t>(req.output_limit);
                if (sink.size() + static_cast<std::size_t>(n) > cap) {
                    sink.append(buf, cap - sink.size());
                    outcome.violations.insert(Violation::Output);
                    engine_killed = true;
                    sent_kill = true;
                    kill_group(SIGKILL);
                    ::close(fd);
                    fd = -1;
                    return;
                }
                sink.append(buf, static_cast<std::size_t>(n));
                continue;
            }
            if (n == 0) {
                ::close(fd);
                fd = -1;
            }
            return;  // EOF, EAGAIN, or error: nothing more now
        }
    };

    while (stdout_fd >= 0 || stderr_fd >= 0 || !reaped) {
        if (!reaped) {
            int r = ::wait4(pid, &wait_status, WNOHANG, &usage);
            if (r == pid) {
                reaped = true;
                outcome.wall_time = elapsed();
                drain_deadline = elapsed() + 0.5;
            }
        }
        if (reaped && stdout_fd < 0 && stderr_fd < 0) break;

        double now = elapsed();
        if (!reaped) {
            if (req.memory_limit > 0) {
                std::int64_t peak = read_vm_hwm(pid);
                if (peak > polled_peak) polled_peak = peak;
                if (peak > req.memory_limit && !sent_kill) {
                    outcome.violations.insert(Violation::Memory);
                    engine_killed = true;
                    sent_kill = true;
                    kill_group(SIGKILL);
                }
            }
            if (now >= kill_deadline && !sent_kill) {
                outcome.violations.insert(Violation::Timeout);
                engine_killed = true;
                sent_kill = true;
                kill_group(SIGKILL);
            } else if (now >= term_deadline && !sent_term) {
                outcome.violations.insert(Violation::Timeout);
                engine_killed = true;
                sent_term = true;
                kill_group(SIGTERM);
            }
        } else if (now >= drain_deadline) {
            // Stragglers in the group keep the pipes open; stop waiting.
            kill_group(SIGKILL);
            if (stdout_fd >= 0) { ::close(stdout_fd); stdout_fd = -1; }
            if (stderr_fd >= 0) { ::close(stderr_fd); stderr_fd = -1; }
            break;
        }

        struct pollfd fds[3];
        nfds_t nfds = 0;
        int stdout_slot = -1, stderr_slot = -1, stdin_slot = -1;
        if (stdout_fd >= 0) { fds[nfds] = {stdout_fd, POLLIN, 0}; stdout_slot = static_cast<int>(nfds++); }
        if (stderr_fd >= 0) { fds[nfds] = {stderr_fd, POLLIN, 0}; stderr_slot = static_cast<int>(nfds++); }
        if (stdin_fd >= 0) { fds[nfds] = {stdin_fd, POLLOUT, 0}; stdin_slot = static_cast<int>(nfds++); }

        int timeout_ms = 20;
        if (nfds == 0) {
            struct timespec ts {0, 20 * 1000 * 1000};
            ::nanosleep(&ts, nullptr);
        } else if (::poll(fds, nfds, timeout_ms) > 0) {
            if (stdout_slot >= 0 && (fds[stdout_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
                read_stream(stdout_fd, outcome.stdout_bytes);
            }
            if (stderr_slot >= 0 && stderr_fd >= 0 &&
                (fds[stderr_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
                read_stream(stderr_fd, outcome.stderr_bytes);
            }
            if (stdin_slot >= 0 && stdin_fd >= 0 &&
                (fds[stdin_slot].revents & (POLLOUT | POLLHUP | POLLERR))) {
                ssize_t n = ::write(stdin_fd, req.stdin_bytes.data() + stdin_written,
                                    req.stdin_bytes.size() - stdin_written);
                if (n > 0) stdin_written += static_cast<std::size_t>(n);
                if ((n < 0 && errno != EAGAIN && errno != EINTR) || stdin_written >= req.stdin_bytes.size()) {
                    ::close(stdin_fd);
                    stdin_fd = -1;
                }
            }
        }
    }

    if (stdin_fd >= 0) ::close(stdin_fd);
    if (!reaped) {
        ::wait4(pid, &wait_status, 0, &usage);
        outcome.wall_time = elapsed();
    }
    kill_group(SIGKILL);  // reap any stragglers' parent group

    outcome.cpu_time = static_cast<double>(usage.ru_utime.tv_sec) + usage.ru_utime.tv_usec / 1e6 +
                       static_cast<double>(usage.ru_stime.tv_sec) + usage.ru_stime.tv_usec / 1e6;
    std::int64_t rusage_peak = static_cast<std::int64_t>(usage.ru_maxrss) * 1024;
    outcome.max_memory = std::max(polled_peak, rusage_peak);

    if (WIFEXITED(wait_status)) {
        outcome.exit_code = WEXITSTATUS(wait_status);
    } else if (WIFSIGNALED(wait_status)) {
        if (engine_killed) {
            outcome.exit_code = std::nullopt;
        } else {
            outcome.exit_code = 128 + WTERMSIG(wait_status);
        }
    } else {
        outcome.exit_code = std::nullopt;
        engine_killed = true;
    }
    // Timeout soundness: the violation implies the limit was reached.
    if (outcome.violations.count(Violation::Timeout) && outcome.wall_time < req.time_limit) {
        outcome.wall_time = req.time_limit;
    }
    return outcome;
}

}  // namespace forge::sandbox
