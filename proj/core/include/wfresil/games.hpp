#pragma once

// Exact deciders for workflow satisfiability and the resiliency games.
//
// Player 1 assigns users to steps, one step per round, keeping the partial
// plan valid; Player 2 removes users. The games differ in when Player 2 may
// remove and whether removed users return:
//   static      Player 2 removes up to t users once, before the first round.
//   one-shot    Player 2 removes up to t users once, at a round of its choosing.
//   decremental Player 2 removes users cumulatively, at most t in total.
//   dynamic     Player 2 blocks a fresh set of up to t users every round.
// In every game Player 1 has won as soon as the plan is complete and valid.

#include <cstddef>
#include <functional>
#include <string_view>
#include <variant>
#include <vector>

#include "wfresil/model.hpp"
#include "wfresil/user_set.hpp"

namespace wfresil {

struct GameConfig {
    std::size_t max_states = 10'000'000; // explored configurations before giving up
    bool memoize = true;
};

struct ValidPlan {
    PartialPlan plan;
};
struct Counterexample {
    UserSet removed;
};
struct WinningPlay {
    Play play;
};
// Player 2 strikes with `removed` once `trigger` (of length trigger_length)
// has been played, leaving no valid completion.
struct StrikeFound {
    std::size_t trigger_length = 0;
    UserSet removed;
    Play trigger;
};

using Witness = std::variant<std::monostate, ValidPlan, Counterexample, WinningPlay, StrikeFound>;

struct GameVerdict {
    bool decision = false;
    Witness witness;
    std::size_t states = 0; // configurations explored
};

enum class Analysis { Wsp, Srcp, Orcp, Crcp, Drcp };

[[nodiscard]] std::string_view to_string(Analysis a);
// Throws Error{InvalidArgument} for unknown names.
[[nodiscard]] Analysis parse_analysis(std::string_view name);

// All deciders throw Error{StateBudgetExceeded} once config.max_states
// configurations have been explored without an answer.
[[nodiscard]] GameVerdict decide_wsp(const WorkflowPolicy& policy, const GameConfig& config = {});
[[nodiscard]] GameVerdict decide_srcp(const WorkflowPolicy& policy, Budget t, const GameConfig& config = {});
[[nodiscard]] GameVerdict decide_orcp(const WorkflowPolicy& policy, Budget t, const GameConfig& config = {});
[[nodiscard]] GameVerdict decide_crcp(const WorkflowPolicy& policy, Budget t, const GameConfig& config = {});
[[nodiscard]] GameVerdict decide_drcp(const WorkflowPolicy& policy, Budget t, const GameConfig& config = {});
[[nodiscard]] GameVerdict decide(Analysis analysis, const WorkflowPolicy& policy, Budget t,
                                 const GameConfig& config = {});

// Visits valid complete plans in lexicographic order (step declaration order,
// then user declaration order). Stops early when the visitor returns false.
void for_each_valid_plan(const WorkflowPolicy& policy, const std::function<bool(const PartialPlan&)>& visit);
[[nodiscard]] std::vector<PartialPlan> enumerate_valid_plans(const WorkflowPolicy& policy);

// Removing `removed` leaves the policy unsatisfiable.
[[nodiscard]] bool verify_counterexample(const WorkflowPolicy& policy, const UserSet& removed,
                                         const GameConfig& config = {});

// The play is functional, respects the step order, builds a valid complete
// plan, and every proper prefix leaves a statically resilient residual policy.
[[nodiscard]] bool verify_winning_play(const WorkflowPolicy& policy, const Play& play, Budget t,
                                       const GameConfig& config = {});

// After playing the trigger, removing the strike set leaves the residual
// policy unsatisfiable.
[[nodiscard]] bool verify_strike(const WorkflowPolicy& policy, const StrikeFound& strike, Budget t,
                                 const GameConfig& config = {});

// Residual policy after playing `play` from `policy`; throws InvalidSeed when
// some move is not a valid extension.
[[nodiscard]] WorkflowPolicy project_play(const WorkflowPolicy& policy, const Play& play);

} // namespace wfresil
