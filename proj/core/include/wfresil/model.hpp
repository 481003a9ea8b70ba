#pragma once

// Workflow authorization policies <S, order, U, A, C>, partial plans, and the
// operations that check and transform them.

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wfresil/user_set.hpp"

namespace wfresil {

using StepIndex = std::size_t;
using UserIndex = std::size_t;

// Identifiers are non-empty strings over [A-Za-z0-9_].
[[nodiscard]] bool is_token(std::string_view text) noexcept;

// Number of users the adversary may remove.
struct Budget {
    std::size_t t = 0;
    auto operator<=>(const Budget&) const = default;
};

// ---------------------------------------------------------------------------
// Name-based, unchecked description of a policy. This is what parsers and
// instance generators build; validate_policy turns it into a WorkflowPolicy.
// ---------------------------------------------------------------------------
namespace draft {

struct SeparationOfDuty {
    std::string first;
    std::string second;
    bool operator==(const SeparationOfDuty&) const = default;
};

struct BindingOfDuty {
    std::string first;
    std::string second;
    bool operator==(const BindingOfDuty&) const = default;
};

struct Entailment {
    std::string relation;
    std::vector<std::string> lhs;
    std::vector<std::string> rhs;
    bool operator==(const Entailment&) const = default;
};

// Explicit set of permitted assignments; each tuple is positional w.r.t. scope.
struct Extensional {
    std::vector<std::string> scope;
    std::vector<std::vector<std::string>> allowed;
    bool operator==(const Extensional&) const = default;
};

using Constraint = std::variant<SeparationOfDuty, BindingOfDuty, Entailment, Extensional>;

struct Relation {
    std::string name;
    std::vector<std::pair<std::string, std::string>> pairs;
    bool operator==(const Relation&) const = default;
};

} // namespace draft

struct PolicyDraft {
    std::vector<std::string> steps;
    std::vector<std::pair<std::string, std::string>> order; // (before, after)
    std::vector<std::string> users;
    std::vector<std::pair<std::string, std::string>> auth; // (step, user)
    std::vector<draft::Relation> relations;
    std::vector<draft::Constraint> constraints;

    bool operator==(const PolicyDraft&) const = default;
};

// ---------------------------------------------------------------------------
// Checked, index-based representation.
// ---------------------------------------------------------------------------

struct SeparationOfDuty {
    StepIndex first;
    StepIndex second;
    bool operator==(const SeparationOfDuty&) const = default;
};

struct BindingOfDuty {
    StepIndex first;
    StepIndex second;
    bool operator==(const BindingOfDuty&) const = default;
};

struct Entailment {
    std::size_t relation; // index into WorkflowPolicy::relations()
    std::vector<StepIndex> lhs;
    std::vector<StepIndex> rhs;

    // Both step sets singleton.
    [[nodiscard]] bool is_type1() const noexcept { return lhs.size() == 1 && rhs.size() == 1; }
    bool operator==(const Entailment&) const = default;
};

struct Extensional {
    std::vector<StepIndex> scope;
    std::vector<std::vector<UserIndex>> allowed; // sorted, unique
    bool operator==(const Extensional&) const = default;
};

using Constraint = std::variant<SeparationOfDuty, BindingOfDuty, Entailment, Extensional>;

// Steps constrained by c, sorted and deduplicated.
[[nodiscard]] std::vector<StepIndex> scope_of(const Constraint& c);

class Relation {
public:
    Relation() = default;
    Relation(std::string name, std::size_t user_count);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] bool contains(UserIndex a, UserIndex b) const noexcept {
        return a < users_ && b < users_ && matrix_[a * users_ + b] != 0;
    }
    void insert(UserIndex a, UserIndex b) { matrix_[a * users_ + b] = 1; }
    [[nodiscard]] std::vector<std::pair<UserIndex, UserIndex>> pairs() const;

    bool operator==(const Relation&) const = default;

private:
    std::string name_;
    std::size_t users_ = 0;
    std::vector<char> matrix_;
};

inline constexpr UserIndex kUnassigned = std::numeric_limits<UserIndex>::max();

// A map from steps to users, stored densely over the policy's step order.
// Causal closure is a property checked by operations, not an invariant here.
class PartialPlan {
public:
    PartialPlan() = default;
    explicit PartialPlan(std::size_t step_count) : slots_(step_count, kUnassigned) {}

    [[nodiscard]] std::size_t step_count() const noexcept { return slots_.size(); }
    [[nodiscard]] bool assigned(StepIndex s) const noexcept { return slots_[s] != kUnassigned; }
    [[nodiscard]] std::optional<UserIndex> at(StepIndex s) const noexcept {
        if (slots_[s] == kUnassigned) return std::nullopt;
        return slots_[s];
    }
    [[nodiscard]] UserIndex operator[](StepIndex s) const noexcept { return slots_[s]; }

    void assign(StepIndex s, UserIndex u) noexcept { slots_[s] = u; }
    void clear(StepIndex s) noexcept { slots_[s] = kUnassigned; }

    [[nodiscard]] std::size_t domain_size() const noexcept;
    [[nodiscard]] bool complete() const noexcept { return domain_size() == slots_.size(); }
    [[nodiscard]] std::vector<StepIndex> domain() const;
    [[nodiscard]] bool uses(UserIndex u) const noexcept;
    [[nodiscard]] std::span<const UserIndex> slots() const noexcept { return slots_; }

    auto operator<=>(const PartialPlan&) const = default;

private:
    std::vector<UserIndex> slots_;
};

struct Move {
    StepIndex step;
    UserIndex user;
    auto operator<=>(const Move&) const = default;
};

// Player 1's assignment sequence.
using Play = std::vector<Move>;

// No step appears twice.
[[nodiscard]] bool is_functional(std::span<const Move> play);
[[nodiscard]] PartialPlan plan_of(std::span<const Move> play, std::size_t step_count);

class WorkflowPolicy {
public:
    WorkflowPolicy() = default;

    [[nodiscard]] std::size_t step_count() const noexcept { return steps_.size(); }
    [[nodiscard]] std::size_t user_count() const noexcept { return users_.size(); }
    [[nodiscard]] const std::vector<std::string>& steps() const noexcept { return steps_; }
    [[nodiscard]] const std::vector<std::string>& users() const noexcept { return users_; }
    [[nodiscard]] const std::string& step_name(StepIndex s) const { return steps_.at(s); }
    [[nodiscard]] const std::string& user_name(UserIndex u) const { return users_.at(u); }
    [[nodiscard]] std::optional<StepIndex> find_step(std::string_view name) const;
    [[nodiscard]] std::optional<UserIndex> find_user(std::string_view name) const;

    // Strict order: true iff a precedes b in the transitive closure.
    [[nodiscard]] bool precedes(StepIndex a, StepIndex b) const noexcept {
        return closure_[a * steps_.size() + b] != 0;
    }
    [[nodiscard]] const std::vector<std::pair<StepIndex, StepIndex>>& order_reduction() const noexcept {
        return reduction_;
    }
    [[nodiscard]] std::vector<std::pair<StepIndex, StepIndex>> order_closure() const;
    // All steps strictly before s.
    [[nodiscard]] const std::vector<StepIndex>& predecessors(StepIndex s) const { return preds_.at(s); }
    // Declaration order, stably sorted to respect the step order.
    [[nodiscard]] const std::vector<StepIndex>& topological_order() const noexcept { return topo_; }

    [[nodiscard]] bool authorized(StepIndex s, UserIndex u) const noexcept {
        return auth_[s * users_.size() + u] != 0;
    }
    [[nodiscard]] const std::vector<UserIndex>& authorized_users(StepIndex s) const {
        return auth_lists_.at(s);
    }
    [[nodiscard]] std::vector<std::pair<StepIndex, UserIndex>> auth_pairs() const;

    [[nodiscard]] const std::vector<Relation>& relations() const noexcept { return relations_; }
    [[nodiscard]] std::optional<std::size_t> find_relation(std::string_view name) const;
    [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    // Indices of constraints whose scope contains s.
    [[nodiscard]] const std::vector<std::size_t>& constraints_on(StepIndex s) const {
        return constraints_on_.at(s);
    }

    [[nodiscard]] PolicyDraft to_draft() const;

    // Structural equality over the checked form (order compared by reduction).
    bool operator==(const WorkflowPolicy& other) const;

private:
    friend WorkflowPolicy validate_policy(const PolicyDraft& draft);
    friend WorkflowPolicy without_users(const WorkflowPolicy& policy, const UserSet& removed);
    friend WorkflowPolicy project(const WorkflowPolicy& policy, StepIndex s, UserIndex u);

    // Derives reduction, predecessor lists, topological order and lookup tables
    // from steps_, users_, closure_, auth_ and constraints_.
    void index();

    std::vector<std::string> steps_;
    std::vector<std::string> users_;
    std::vector<char> closure_;
    std::vector<std::pair<StepIndex, StepIndex>> reduction_;
    std::vector<std::vector<StepIndex>> preds_;
    std::vector<StepIndex> topo_;
    std::vector<char> auth_;
    std::vector<std::vector<UserIndex>> auth_lists_;
    std::vector<Relation> relations_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> constraints_on_;
};

// Checks every policy invariant and derives the closure/reduction of the order.
// Throws Error{InvalidName, DuplicateDeclaration, CyclicOrder, DanglingReference,
// MalformedConstraint}.
[[nodiscard]] WorkflowPolicy validate_policy(const PolicyDraft& draft);

// Same policy with every authorization of the removed users dropped.
[[nodiscard]] WorkflowPolicy without_users(const WorkflowPolicy& policy, const UserSet& removed);

[[nodiscard]] bool is_causally_closed(const WorkflowPolicy& policy, std::span<const StepIndex> domain);
[[nodiscard]] bool is_causally_closed(const WorkflowPolicy& policy, const PartialPlan& plan);

enum class ConstraintStatus { Satisfied, Violated, Pending };

// Assumes every scope step of c is assigned in plan.
[[nodiscard]] bool permits(const WorkflowPolicy& policy, const Constraint& c, const PartialPlan& plan);
[[nodiscard]] ConstraintStatus constraint_status(const WorkflowPolicy& policy, const Constraint& c,
                                                 const PartialPlan& plan);

struct Validity {
    bool causally_closed = true;
    bool complete = false;
    std::vector<StepIndex> unauthorized;
    std::vector<std::size_t> violated; // constraint indices

    [[nodiscard]] bool valid() const noexcept {
        return causally_closed && unauthorized.empty() && violated.empty();
    }
    [[nodiscard]] bool valid_complete() const noexcept { return valid() && complete; }
};

[[nodiscard]] Validity check_validity(const WorkflowPolicy& policy, const PartialPlan& plan);

// Every constraint on s whose scope is fully assigned in plan permits plan.
[[nodiscard]] bool permits_at(const WorkflowPolicy& policy, const PartialPlan& plan, StepIndex s);

// Whether plan + (s, u) is a valid partial plan, given that plan already is one.
[[nodiscard]] bool extends_validly(const WorkflowPolicy& policy, const PartialPlan& plan, StepIndex s,
                                   UserIndex u);

// Residual policy after committing s -> u. Requires {(s, u)} to be a valid
// partial plan; throws Error{InvalidSeed} otherwise.
[[nodiscard]] WorkflowPolicy project(const WorkflowPolicy& policy, StepIndex s, UserIndex u);

// Human-readable rendering of plans and constraints, used in reports.
[[nodiscard]] std::string describe(const WorkflowPolicy& policy, const PartialPlan& plan);
[[nodiscard]] std::string describe(const WorkflowPolicy& policy, const Constraint& c);

} // namespace wfresil
