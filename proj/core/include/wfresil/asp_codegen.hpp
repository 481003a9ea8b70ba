#pragma once

// Answer-set programs for static and one-shot resiliency, built with the
// model saturation technique. The static program encodes the complement
// (a stable model is a removal set that breaks the workflow); the one-shot
// program is satisfiable iff Player 1 has a winning strategy.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wfresil/model.hpp"

namespace wfresil {

enum class Target { SrcpComplement, Orcp };

enum class SrcpEncoding {
    // Adds rules so that a step left with no available user counts as a
    // violation. Without them the assignment rule turns into a constraint
    // and such removal sets are never reported.
    Guarded,
    // The six-rule program exactly as originally published.
    Figure,
};

enum class EntityKind { Step, User };

// Predicate with the entity kind of each argument position.
struct AtomTemplate {
    std::string predicate;
    std::vector<EntityKind> arguments;
    bool operator==(const AtomTemplate&) const = default;
};

struct AtomMap {
    std::vector<std::string> step_constants; // indexed by StepIndex
    std::vector<std::string> user_constants; // indexed by UserIndex
    std::map<std::string, StepIndex> steps;  // constant -> step
    std::map<std::string, UserIndex> users;  // constant -> user
    std::vector<AtomTemplate> templates;

    [[nodiscard]] std::optional<StepIndex> step(const std::string& constant) const;
    [[nodiscard]] std::optional<UserIndex> user(const std::string& constant) const;
};

struct AspProgram {
    std::string text;
    AtomMap atom_map;
    Target target = Target::SrcpComplement;
};

// Maps tokens to distinct ASP constants. Tokens that already start with a
// lowercase letter map to themselves; others get a lowercased first
// character (or an `x` prefix) and a `_N` suffix if that is taken.
[[nodiscard]] std::vector<std::string> asp_constants(const std::vector<std::string>& tokens,
                                                     const std::vector<std::string>& reserved = {});

// Throws Error{UnsupportedConstraint} when the policy has constraints the
// target cannot express (static: SoD only; one-shot: SoD, BoD, type-1 entailment).
[[nodiscard]] std::string emit_instance_facts(const WorkflowPolicy& policy, Target target);
[[nodiscard]] AspProgram emit_srcp_program(const WorkflowPolicy& policy, Budget t,
                                           SrcpEncoding encoding = SrcpEncoding::Guarded);
[[nodiscard]] AspProgram emit_orcp_program(const WorkflowPolicy& policy, Budget t);

} // namespace wfresil
