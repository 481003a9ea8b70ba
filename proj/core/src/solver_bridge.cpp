#include "wfresil/solver_bridge.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <pthread.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "wfresil/error.hpp"

extern char** environ;

namespace wfresil {

std::string SolverConfig::default_solver() {
    const char* env = std::getenv("WFRESIL_ASP_SOLVER");
    if (env && *env) return env;
    return "clingo";
}

std::string_view to_string(SolverStatus status) {
    switch (status) {
    case SolverStatus::Satisfiable: return "SATISFIABLE";
    case SolverStatus::Unsatisfiable: return "UNSATISFIABLE";
    case SolverStatus::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// Output decoding
// ---------------------------------------------------------------------------

namespace {

bool atom_start(char c) { return (c >= 'a' && c <= 'z') || c == '_' || c == '-'; }
bool name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '\'';
}

// Splits an answer line into atom texts, respecting parentheses and strings.
std::vector<std::string_view> split_atoms(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        int depth = 0;
        bool quoted = false;
        while (i < line.size()) {
            char c = line[i];
            if (quoted) {
                if (c == '\\') ++i;
                else if (c == '"') quoted = false;
            } else if (c == '"') {
                quoted = true;
            } else if (c == '(') {
                ++depth;
            } else if (c == ')') {
                --depth;
            } else if (c == ' ' && depth == 0) {
                break;
            }
            ++i;
        }
        if (quoted || depth != 0)
            throw Error(ErrorCode::OutputParseError, "unbalanced atom '" + std::string(line.substr(start)) + "'");
        out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
}

} // namespace

Atom parse_atom(std::string_view text) {
    auto bad = [&] { return Error(ErrorCode::OutputParseError, "malformed atom '" + std::string(text) + "'"); };
    if (text.empty() || !atom_start(text[0])) throw bad();
    std::size_t i = text[0] == '-' ? 1 : 0;
    if (i >= text.size() || !atom_start(text[i]) || text[i] == '-') throw bad();
    while (i < text.size() && name_char(text[i])) ++i;
    Atom atom{std::string(text.substr(0, i)), {}};
    if (i == text.size()) return atom;
    if (text[i] != '(' || text.back() != ')') throw bad();
    std::size_t start = ++i;
    int depth = 0;
    bool quoted = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '\\') ++i;
            else if (c == '"') quoted = false;
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == '(') {
            ++depth;
        } else if ((c == ',' || c == ')') && depth == 0) {
            if (i == start) throw bad();
            atom.args.emplace_back(text.substr(start, i - start));
            start = i + 1;
            if (c == ')') {
                if (i + 1 != text.size()) throw bad();
                return atom;
            }
        } else if (c == ')') {
            --depth;
        }
    }
    throw bad();
}

SolverOutcome decode_solver_output(std::string raw, int exit_code) {
    SolverOutcome out;
    out.exit_code = exit_code;
    std::optional<SolverStatus> marker;
    std::optional<std::vector<Atom>> first_answer;

    std::string_view text = raw;
    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start < text.size();) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        lines.push_back(trim(text.substr(start, nl - start)));
        start = nl + 1;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto line = lines[i];
        if (line.starts_with("Answer:")) {
            if (!first_answer) {
                std::vector<Atom> atoms;
                std::string_view next = i + 1 < lines.size() ? lines[i + 1] : std::string_view{};
                for (auto a : split_atoms(next)) atoms.push_back(parse_atom(a));
                std::sort(atoms.begin(), atoms.end());
                first_answer = std::move(atoms);
            }
            ++i;
        } else if (line == "SATISFIABLE" || line == "OPTIMUM FOUND") {
            marker = SolverStatus::Satisfiable;
        } else if (line == "UNSATISFIABLE") {
            marker = SolverStatus::Unsatisfiable;
        } else if (line == "UNKNOWN") {
            marker = SolverStatus::Unknown;
        }
    }

    std::optional<SolverStatus> by_code;
    if (exit_code == 10 || exit_code == 30) by_code = SolverStatus::Satisfiable;
    if (exit_code == 20) by_code = SolverStatus::Unsatisfiable;

    if (by_code && marker && *by_code != *marker)
        throw Error(ErrorCode::OutputParseError, "exit code " + std::to_string(exit_code) + " contradicts marker " +
                                                     std::string(to_string(*marker)));
    out.status = by_code ? *by_code : marker.value_or(SolverStatus::Unknown);
    if (out.status == SolverStatus::Satisfiable) {
        if (!first_answer) throw Error(ErrorCode::OutputParseError, "satisfiable result without an answer set");
        out.answer_set = std::move(first_answer);
    }
    out.raw = std::move(raw);
    return out;
}

// ---------------------------------------------------------------------------
// Subprocess
// ---------------------------------------------------------------------------

namespace {

struct Pipe {
    int fd[2] = {-1, -1};
    Pipe() {
        if (::pipe2(fd, O_CLOEXEC) != 0) throw Error(ErrorCode::SolverFailed, "pipe: " + std::string(std::strerror(errno)));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fd[0] >= 0) ::close(fd[0]);
        fd[0] = -1;
    }
    void close_write() {
        if (fd[1] >= 0) ::close(fd[1]);
        fd[1] = -1;
    }
};

} // namespace

SolverOutcome run_solver(std::string_view program, const SolverConfig& config) {
    if (!(config.timeout_seconds > 0)) throw Error(ErrorCode::InvalidArgument, "solver timeout must be positive");
    Pipe in, out, err;

    std::vector<std::string> args{config.executable, "--models=1"};
    args.insert(args.end(), config.extra_args.begin(), config.extra_args.end());
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);

    // Writes to a solver that exited early must fail with EPIPE, not kill us.
    sigset_t pipe_only, saved_mask;
    sigemptyset(&pipe_only);
    sigaddset(&pipe_only, SIGPIPE);
    pthread_sigmask(SIG_BLOCK, &pipe_only, &saved_mask);
    struct MaskGuard {
        sigset_t pipe_only;
        sigset_t saved;
        ~MaskGuard() {
            sigset_t pending;
            sigpending(&pending);
            if (sigismember(&pending, SIGPIPE) && !sigismember(&saved, SIGPIPE)) {
                timespec zero{0, 0};
                sigtimedwait(&pipe_only, nullptr, &zero);
            }
            pthread_sigmask(SIG_SETMASK, &saved, nullptr);
        }
    } mask_guard{pipe_only, saved_mask};

    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setsigmask(&attr, &saved_mask);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETSIGMASK);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.fd[0], 0);
    posix_spawn_file_actions_adddup2(&actions, out.fd[1], 1);
    posix_spawn_file_actions_adddup2(&actions, err.fd[1], 2);
    pid_t pid = 0;
    int rc = posix_spawnp(&pid, config.executable.c_str(), &actions, &attr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    if (rc == ENOENT || rc == EACCES || rc == ENOTDIR)
        throw Error(ErrorCode::SolverNotFound, "cannot execute '" + config.executable + "': " + std::strerror(rc));
    if (rc != 0) throw Error(ErrorCode::SolverFailed, "spawn '" + config.executable + "': " + std::strerror(rc));

    in.close_read();
    out.close_write();
    err.close_write();
    ::fcntl(in.fd[1], F_SETFL, O_NONBLOCK);
    if (program.empty()) in.close_write();

    std::string captured, diagnostics;
    std::size_t written = 0;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(config.timeout_seconds);
    bool timed_out = false;
    char buffer[65536];

    while (out.fd[0] >= 0 || err.fd[0] >= 0) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        int wait_ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
        pollfd fds[3];
        nfds_t n = 0;
        int idx_in = -1, idx_out = -1, idx_err = -1;
        if (in.fd[1] >= 0) {
            idx_in = static_cast<int>(n);
            fds[n++] = {in.fd[1], POLLOUT, 0};
        }
        if (out.fd[0] >= 0) {
            idx_out = static_cast<int>(n);
            fds[n++] = {out.fd[0], POLLIN, 0};
        }
        if (err.fd[0] >= 0) {
            idx_err = static_cast<int>(n);
            fds[n++] = {err.fd[0], POLLIN, 0};
        }
        int ready = ::poll(fds, n, wait_ms);
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (idx_in >= 0 && fds[idx_in].revents) {
            if (fds[idx_in].revents & (POLLERR | POLLHUP)) {
                in.close_write();
            } else {
                ssize_t w = ::write(in.fd[1], program.data() + written, program.size() - written);
                if (w > 0) written += static_cast<std::size_t>(w);
                else if (w < 0 && errno != EAGAIN && errno != EINTR) in.close_write();
                if (written == program.size()) in.close_write();
            }
        }
        auto drain = [&](int idx, Pipe& p, std::string& sink) {
            if (idx < 0 || !fds[idx].revents) return;
            ssize_t r = ::read(p.fd[0], buffer, sizeof buffer);
            if (r > 0) sink.append(buffer, static_cast<std::size_t>(r));
            else if (r == 0 || (errno != EAGAIN && errno != EINTR)) p.close_read();
        };
        drain(idx_out, out, captured);
        drain(idx_err, err, diagnostics);
    }

    int status = 0;
    if (timed_out) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        throw Error(ErrorCode::SolverTimeout,
                    "solver exceeded " + std::to_string(config.timeout_seconds) + " seconds");
    }
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (!WIFEXITED(status))
        throw Error(ErrorCode::SolverFailed, "solver terminated abnormally: " + diagnostics);
    int code = WEXITSTATUS(status);
    if (code == 127) throw Error(ErrorCode::SolverNotFound, "cannot execute '" + config.executable + "'");
    if (code != 0 && code != 10 && code != 20 && code != 30)
        throw Error(ErrorCode::SolverFailed, "solver exited with code " + std::to_string(code) + ": " + diagnostics);
    return decode_solver_output(std::move(captured), code);
}

SolverOutcome run_solver(const AspProgram& program, const SolverConfig& config) {
    return run_solver(program.text, config);
}

// ---------------------------------------------------------------------------
// Interpretation
// ---------------------------------------------------------------------------

namespace {

void require_decided(const SolverOutcome& outcome) {
    if (outcome.status == SolverStatus::Unknown)
        throw Error(ErrorCode::IndeterminateResult, "solver did not decide the program");
}

} // namespace

GameVerdict interpret_srcp(const SolverOutcome& outcome, const AspProgram& program) {
    require_decided(outcome);
    GameVerdict v;
    if (outcome.status == SolverStatus::Unsatisfiable) {
        v.decision = true;
        return v;
    }
    UserSet removed(program.atom_map.user_constants.size());
    for (const auto& atom : *outcome.answer_set) {
        if (atom.predicate != "removed" || atom.args.size() != 1) continue;
        auto u = program.atom_map.user(atom.args[0]);
        if (!u) throw Error(ErrorCode::OutputParseError, "removed/1 names unknown user '" + atom.args[0] + "'");
        removed.insert(*u);
    }
    v.witness = Counterexample{removed};
    return v;
}

GameVerdict interpret_orcp(const SolverOutcome& outcome, const AspProgram& program) {
    require_decided(outcome);
    GameVerdict v;
    if (outcome.status == SolverStatus::Unsatisfiable) return v;
    v.decision = true;

    const auto& map = program.atom_map;
    const std::size_t n = map.step_constants.size();
    std::vector<UserIndex> assigned(n, kUnassigned);
    std::vector<char> order(n * n, 0);
    auto inconsistent = [](const std::string& why) { return Error(ErrorCode::InconsistentStrategy, why); };

    for (const auto& atom : *outcome.answer_set) {
        if (atom.predicate == "assign" && atom.args.size() == 2) {
            auto s = map.step(atom.args[0]);
            auto u = map.user(atom.args[1]);
            if (!s || !u) throw Error(ErrorCode::OutputParseError, "assign/2 atom with unknown entity");
            if (assigned[*s] != kUnassigned) throw inconsistent("step " + atom.args[0] + " assigned twice");
            assigned[*s] = *u;
        } else if (atom.predicate == "order" && atom.args.size() == 2) {
            auto a = map.step(atom.args[0]);
            auto b = map.step(atom.args[1]);
            if (!a || !b) throw Error(ErrorCode::OutputParseError, "order/2 atom with unknown step");
            order[*a * n + *b] = 1;
        }
    }
    for (StepIndex s = 0; s < n; ++s)
        if (assigned[s] == kUnassigned) throw inconsistent("step " + map.step_constants[s] + " unassigned");
    for (StepIndex a = 0; a < n; ++a) {
        if (order[a * n + a]) throw inconsistent("order is reflexive at step " + map.step_constants[a]);
        for (StepIndex b = a + 1; b < n; ++b)
            if (order[a * n + b] == order[b * n + a])
                throw inconsistent("order does not totally order steps " + map.step_constants[a] + " and " +
                                   map.step_constants[b]);
    }
    std::vector<StepIndex> sequence(n);
    for (StepIndex s = 0; s < n; ++s) sequence[s] = s;
    auto rank = [&](StepIndex s) {
        std::size_t r = 0;
        for (StepIndex x = 0; x < n; ++x) r += order[x * n + s];
        return r;
    };
    std::sort(sequence.begin(), sequence.end(), [&](StepIndex a, StepIndex b) { return rank(a) < rank(b); });
    for (std::size_t i = 0; i < n; ++i) {
        if (rank(sequence[i]) != i) throw inconsistent("order is not transitive");
        for (std::size_t j = i + 1; j < n; ++j)
            if (!order[sequence[i] * n + sequence[j]]) throw inconsistent("order is not transitive");
    }
    Play play;
    for (auto s : sequence) play.push_back({s, assigned[s]});
    v.witness = WinningPlay{play};
    return v;
}

} // namespace wfresil
