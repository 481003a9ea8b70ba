#pragma once

// Runs a clingo-compatible solver as a subprocess and reads verdicts back
// from its answer sets.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfresil/asp_codegen.hpp"
#include "wfresil/games.hpp"

namespace wfresil {

struct SolverConfig {
    std::string executable = default_solver();
    std::vector<std::string> extra_args;
    double timeout_seconds = 60.0;

    // $WFRESIL_ASP_SOLVER if set, otherwise "clingo".
    static std::string default_solver();
};

struct Atom {
    std::string predicate;
    std::vector<std::string> args;
    auto operator<=>(const Atom&) const = default;
};

enum class SolverStatus { Satisfiable, Unsatisfiable, Unknown };

[[nodiscard]] std::string_view to_string(SolverStatus status);

struct SolverOutcome {
    SolverStatus status = SolverStatus::Unknown;
    std::optional<std::vector<Atom>> answer_set; // present iff Satisfiable
    std::string raw;                             // captured standard output
    int exit_code = -1;
};

// Parses one ground atom such as `p`, `p(a,1)` or `p("x",f(b))`; nested
// terms are kept as text. Throws Error{OutputParseError}.
[[nodiscard]] Atom parse_atom(std::string_view text);

// Decodes solver output. The exit code (10/30 satisfiable, 20 unsatisfiable,
// anything else undecided) must agree with the SATISFIABLE/UNSATISFIABLE
// marker when both are present.
[[nodiscard]] SolverOutcome decode_solver_output(std::string raw, int exit_code);

// Throws Error{SolverNotFound, SolverTimeout, SolverFailed, OutputParseError}.
[[nodiscard]] SolverOutcome run_solver(std::string_view program, const SolverConfig& config);
[[nodiscard]] SolverOutcome run_solver(const AspProgram& program, const SolverConfig& config);

// Static program: unsatisfiable means resilient; otherwise removed/1 gives
// the counterexample. Throws Error{IndeterminateResult, OutputParseError}.
[[nodiscard]] GameVerdict interpret_srcp(const SolverOutcome& outcome, const AspProgram& program);

// One-shot program: satisfiable means resilient, with Player 1's play read
// from assign/2 ordered by order/2. Throws Error{IndeterminateResult,
// InconsistentStrategy}.
[[nodiscard]] GameVerdict interpret_orcp(const SolverOutcome& outcome, const AspProgram& program);

} // namespace wfresil
