#pragma once

// Line-oriented policy format:
//
//   steps: a b c
//   order: a < b
//   users: u1 u2
//   auth: a u1; a u2; b u1
//   relation r: u1 u2; u2 u1
//   constraint: sod a b
//   constraint: bod a c
//   constraint: entail r { a } { b c }
//   constraint: allow { a b } u1 u2; u2 u1
//   budget: 1
//
// `#` starts a comment. Clauses may appear in any order; `order`, `auth`,
// `relation` and `constraint` repeat, `steps`, `users` and `budget` do not.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfresil/model.hpp"

namespace wfresil {

struct PolicyDocument {
    WorkflowPolicy policy;
    std::optional<Budget> budget;

    [[nodiscard]] const std::vector<Relation>& relations() const noexcept { return policy.relations(); }
    bool operator==(const PolicyDocument&) const = default;
};

// Syntax only; throws SyntaxError.
[[nodiscard]] PolicyDraft parse_policy_draft(std::string_view text, std::optional<Budget>* budget = nullptr);

// Syntax plus validate_policy; throws SyntaxError or the validation Error.
[[nodiscard]] PolicyDocument parse_policy(std::string_view text);

// Canonical text: clauses in the order shown above, one per line.
[[nodiscard]] std::string serialize_policy(const PolicyDocument& doc);
[[nodiscard]] std::string serialize_policy(const WorkflowPolicy& policy, std::optional<Budget> budget = {});

} // namespace wfresil
