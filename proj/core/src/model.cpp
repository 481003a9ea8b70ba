#include "wfresil/model.hpp"

#include <algorithm>
#include <unordered_map>

#include "wfresil/error.hpp"

namespace wfresil {

bool is_token(std::string_view text) noexcept {
    if (text.empty()) return false;
    for (char c : text) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

std::vector<StepIndex> scope_of(const Constraint& c) {
    std::vector<StepIndex> out;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, SeparationOfDuty> || std::is_same_v<K, BindingOfDuty>) {
                out = {k.first, k.second};
            } else if constexpr (std::is_same_v<K, Entailment>) {
                out = k.lhs;
                out.insert(out.end(), k.rhs.begin(), k.rhs.end());
            } else {
                out = k.scope;
            }
        },
        c);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Relation::Relation(std::string name, std::size_t user_count)
    : name_(std::move(name)), users_(user_count), matrix_(user_count * user_count, 0) {}

std::vector<std::pair<UserIndex, UserIndex>> Relation::pairs() const {
    std::vector<std::pair<UserIndex, UserIndex>> out;
    for (UserIndex a = 0; a < users_; ++a)
        for (UserIndex b = 0; b < users_; ++b)
            if (contains(a, b)) out.emplace_back(a, b);
    return out;
}

std::size_t PartialPlan::domain_size() const noexcept {
    std::size_t n = 0;
    for (auto u : slots_) n += u != kUnassigned ? 1 : 0;
    return n;
}

std::vector<StepIndex> PartialPlan::domain() const {
    std::vector<StepIndex> out;
    for (StepIndex s = 0; s < slots_.size(); ++s)
        if (slots_[s] != kUnassigned) out.push_back(s);
    return out;
}

bool PartialPlan::uses(UserIndex u) const noexcept {
    return std::find(slots_.begin(), slots_.end(), u) != slots_.end();
}

bool is_functional(std::span<const Move> play) {
    for (std::size_t i = 0; i < play.size(); ++i)
        for (std::size_t j = i + 1; j < play.size(); ++j)
            if (play[i].step == play[j].step) return false;
    return true;
}

PartialPlan plan_of(std::span<const Move> play, std::size_t step_count) {
    PartialPlan plan(step_count);
    for (const auto& m : play) plan.assign(m.step, m.user);
    return plan;
}

// ---------------------------------------------------------------------------
// WorkflowPolicy
// ---------------------------------------------------------------------------

std::optional<StepIndex> WorkflowPolicy::find_step(std::string_view name) const {
    for (StepIndex s = 0; s < steps_.size(); ++s)
        if (steps_[s] == name) return s;
    return std::nullopt;
}

std::optional<UserIndex> WorkflowPolicy::find_user(std::string_view name) const {
    for (UserIndex u = 0; u < users_.size(); ++u)
        if (users_[u] == name) return u;
    return std::nullopt;
}

std::optional<std::size_t> WorkflowPolicy::find_relation(std::string_view name) const {
    for (std::size_t r = 0; r < relations_.size(); ++r)
        if (relations_[r].name() == name) return r;
    return std::nullopt;
}

std::vector<std::pair<StepIndex, StepIndex>> WorkflowPolicy::order_closure() const {
    std::vector<std::pair<StepIndex, StepIndex>> out;
    for (StepIndex a = 0; a < steps_.size(); ++a)
        for (StepIndex b = 0; b < steps_.size(); ++b)
            if (precedes(a, b)) out.emplace_back(a, b);
    return out;
}

std::vector<std::pair<StepIndex, UserIndex>> WorkflowPolicy::auth_pairs() const {
    std::vector<std::pair<StepIndex, UserIndex>> out;
    for (StepIndex s = 0; s < steps_.size(); ++s)
        for (UserIndex u : auth_lists_[s]) out.emplace_back(s, u);
    return out;
}

void WorkflowPolicy::index() {
    const std::size_t n = steps_.size();
    const std::size_t m = users_.size();

    reduction_.clear();
    for (StepIndex a = 0; a < n; ++a)
        for (StepIndex b = 0; b < n; ++b) {
            if (!precedes(a, b)) continue;
            bool covered = false;
            for (StepIndex c = 0; c < n && !covered; ++c) covered = precedes(a, c) && precedes(c, b);
            if (!covered) reduction_.emplace_back(a, b);
        }

    preds_.assign(n, {});
    for (StepIndex b = 0; b < n; ++b)
        for (StepIndex a = 0; a < n; ++a)
            if (precedes(a, b)) preds_[b].push_back(a);

    topo_.clear();
    std::vector<bool> placed(n, false);
    while (topo_.size() < n) {
        for (StepIndex s = 0; s < n; ++s) {
            if (placed[s]) continue;
            bool ready = std::all_of(preds_[s].begin(), preds_[s].end(), [&](StepIndex p) { return placed[p]; });
            if (ready) {
                placed[s] = true;
                topo_.push_back(s);
                break;
            }
        }
    }

    auth_lists_.assign(n, {});
    for (StepIndex s = 0; s < n; ++s)
        for (UserIndex u = 0; u < m; ++u)
            if (authorized(s, u)) auth_lists_[s].push_back(u);

    constraints_on_.assign(n, {});
    for (std::size_t i = 0; i < constraints_.size(); ++i)
        for (StepIndex s : scope_of(constraints_[i])) constraints_on_[s].push_back(i);
}

bool WorkflowPolicy::operator==(const WorkflowPolicy& other) const {
    return steps_ == other.steps_ && users_ == other.users_ && closure_ == other.closure_ &&
           auth_ == other.auth_ && relations_ == other.relations_ && constraints_ == other.constraints_;
}

PolicyDraft WorkflowPolicy::to_draft() const {
    PolicyDraft d;
    d.steps = steps_;
    d.users = users_;
    for (auto [a, b] : reduction_) d.order.emplace_back(steps_[a], steps_[b]);
    for (auto [s, u] : auth_pairs()) d.auth.emplace_back(steps_[s], users_[u]);
    for (const auto& r : relations_) {
        draft::Relation dr{r.name(), {}};
        for (auto [a, b] : r.pairs()) dr.pairs.emplace_back(users_[a], users_[b]);
        d.relations.push_back(std::move(dr));
    }
    auto names = [&](const std::vector<StepIndex>& v) {
        std::vector<std::string> out;
        for (auto s : v) out.push_back(steps_[s]);
        return out;
    };
    for (const auto& c : constraints_) {
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, SeparationOfDuty>) {
                    d.constraints.emplace_back(draft::SeparationOfDuty{steps_[k.first], steps_[k.second]});
                } else if constexpr (std::is_same_v<K, BindingOfDuty>) {
                    d.constraints.emplace_back(draft::BindingOfDuty{steps_[k.first], steps_[k.second]});
                } else if constexpr (std::is_same_v<K, Entailment>) {
                    d.constraints.emplace_back(
                        draft::Entailment{relations_[k.relation].name(), names(k.lhs), names(k.rhs)});
                } else {
                    draft::Extensional e{names(k.scope), {}};
                    for (const auto& tuple : k.allowed) {
                        std::vector<std::string> row;
                        for (auto u : tuple) row.push_back(users_[u]);
                        e.allowed.push_back(std::move(row));
                    }
                    d.constraints.emplace_back(std::move(e));
                }
            },
            c);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

std::unordered_map<std::string, std::size_t> name_table(const std::vector<std::string>& names,
                                                        std::string_view kind) {
    std::unordered_map<std::string, std::size_t> table;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!is_token(names[i]))
            throw Error(ErrorCode::InvalidName, std::string(kind) + " name '" + names[i] + "' is not a token");
        if (!table.emplace(names[i], i).second)
            throw Error(ErrorCode::DuplicateDeclaration, std::string(kind) + " '" + names[i] + "' declared twice");
    }
    return table;
}

std::size_t lookup(const std::unordered_map<std::string, std::size_t>& table, const std::string& name,
                   std::string_view kind) {
    auto it = table.find(name);
    if (it == table.end())
        throw Error(ErrorCode::DanglingReference, "undeclared " + std::string(kind) + " '" + name + "'");
    return it->second;
}

std::vector<StepIndex> step_set(const std::unordered_map<std::string, std::size_t>& steps,
                                const std::vector<std::string>& names, std::string_view what) {
    if (names.empty()) throw Error(ErrorCode::MalformedConstraint, std::string(what) + " is empty");
    std::vector<StepIndex> out;
    for (const auto& n : names) {
        auto s = lookup(steps, n, "step");
        if (std::find(out.begin(), out.end(), s) != out.end())
            throw Error(ErrorCode::MalformedConstraint, std::string(what) + " repeats step '" + n + "'");
        out.push_back(s);
    }
    return out;
}

void normalize(Extensional& e) {
    std::sort(e.allowed.begin(), e.allowed.end());
    e.allowed.erase(std::unique(e.allowed.begin(), e.allowed.end()), e.allowed.end());
}

} // namespace

WorkflowPolicy validate_policy(const PolicyDraft& d) {
    WorkflowPolicy p;
    auto steps = name_table(d.steps, "step");
    auto users = name_table(d.users, "user");
    p.steps_ = d.steps;
    p.users_ = d.users;
    const std::size_t n = d.steps.size();
    const std::size_t m = d.users.size();

    p.closure_.assign(n * n, 0);
    for (const auto& [a, b] : d.order) {
        auto ia = lookup(steps, a, "step");
        auto ib = lookup(steps, b, "step");
        if (ia == ib) throw Error(ErrorCode::CyclicOrder, "step '" + a + "' ordered before itself");
        p.closure_[ia * n + ib] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (p.closure_[i * n + k])
                for (std::size_t j = 0; j < n; ++j)
                    if (p.closure_[k * n + j]) p.closure_[i * n + j] = 1;
    for (std::size_t i = 0; i < n; ++i)
        if (p.closure_[i * n + i]) throw Error(ErrorCode::CyclicOrder, "order has a cycle through '" + d.steps[i] + "'");

    p.auth_.assign(n * m, 0);
    for (const auto& [s, u] : d.auth) p.auth_[lookup(steps, s, "step") * m + lookup(users, u, "user")] = 1;

    std::unordered_map<std::string, std::size_t> relation_names;
    for (const auto& r : d.relations) {
        if (!is_token(r.name)) throw Error(ErrorCode::InvalidName, "relation name '" + r.name + "' is not a token");
        if (!relation_names.emplace(r.name, p.relations_.size()).second)
            throw Error(ErrorCode::DuplicateDeclaration, "relation '" + r.name + "' declared twice");
        Relation rel(r.name, m);
        for (const auto& [a, b] : r.pairs) rel.insert(lookup(users, a, "user"), lookup(users, b, "user"));
        p.relations_.push_back(std::move(rel));
    }

    for (const auto& c : d.constraints) {
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, draft::SeparationOfDuty> || std::is_same_v<K, draft::BindingOfDuty>) {
                    auto a = lookup(steps, k.first, "step");
                    auto b = lookup(steps, k.second, "step");
                    if (a == b) throw Error(ErrorCode::MalformedConstraint, "constraint relates step '" + k.first + "' to itself");
                    if constexpr (std::is_same_v<K, draft::SeparationOfDuty>)
                        p.constraints_.emplace_back(SeparationOfDuty{a, b});
                    else
                        p.constraints_.emplace_back(BindingOfDuty{a, b});
                } else if constexpr (std::is_same_v<K, draft::Entailment>) {
                    auto it = relation_names.find(k.relation);
                    if (it == relation_names.end())
                        throw Error(ErrorCode::DanglingReference, "undeclared relation '" + k.relation + "'");
                    p.constraints_.emplace_back(Entailment{it->second, step_set(steps, k.lhs, "entailment step set"),
                                                           step_set(steps, k.rhs, "entailment step set")});
                } else {
                    Extensional e{step_set(steps, k.scope, "constraint scope"), {}};
                    for (const auto& row : k.allowed) {
                        if (row.size() != e.scope.size())
                            throw Error(ErrorCode::MalformedConstraint, "allowed tuple arity differs from scope size");
                        std::vector<UserIndex> tuple;
                        for (const auto& u : row) tuple.push_back(lookup(users, u, "user"));
                        e.allowed.push_back(std::move(tuple));
                    }
                    normalize(e);
                    p.constraints_.emplace_back(std::move(e));
                }
            },
            c);
    }

    p.index();
    return p;
}

WorkflowPolicy without_users(const WorkflowPolicy& policy, const UserSet& removed) {
    WorkflowPolicy p = policy;
    const std::size_t m = p.users_.size();
    for (StepIndex s = 0; s < p.steps_.size(); ++s)
        for (UserIndex u = 0; u < m; ++u)
            if (removed.contains(u)) p.auth_[s * m + u] = 0;
    for (auto& list : p.auth_lists_)
        std::erase_if(list, [&](UserIndex u) { return removed.contains(u); });
    return p;
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

bool is_causally_closed(const WorkflowPolicy& policy, std::span<const StepIndex> domain) {
    std::vector<bool> in(policy.step_count(), false);
    for (auto s : domain) in[s] = true;
    for (auto s : domain)
        for (auto p : policy.predecessors(s))
            if (!in[p]) return false;
    return true;
}

bool is_causally_closed(const WorkflowPolicy& policy, const PartialPlan& plan) {
    for (StepIndex s = 0; s < plan.step_count(); ++s)
        if (plan.assigned(s))
            for (auto p : policy.predecessors(s))
                if (!plan.assigned(p)) return false;
    return true;
}

namespace {

bool scope_assigned(const Constraint& c, const PartialPlan& plan) {
    return std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, SeparationOfDuty> || std::is_same_v<K, BindingOfDuty>) {
                return plan.assigned(k.first) && plan.assigned(k.second);
            } else if constexpr (std::is_same_v<K, Entailment>) {
                auto ok = [&](StepIndex s) { return plan.assigned(s); };
                return std::all_of(k.lhs.begin(), k.lhs.end(), ok) && std::all_of(k.rhs.begin(), k.rhs.end(), ok);
            } else {
                return std::all_of(k.scope.begin(), k.scope.end(), [&](StepIndex s) { return plan.assigned(s); });
            }
        },
        c);
}

} // namespace

bool permits(const WorkflowPolicy& policy, const Constraint& c, const PartialPlan& plan) {
    return std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, SeparationOfDuty>) {
                return plan[k.first] != plan[k.second];
            } else if constexpr (std::is_same_v<K, BindingOfDuty>) {
                return plan[k.first] == plan[k.second];
            } else if constexpr (std::is_same_v<K, Entailment>) {
                const auto& rel = policy.relations()[k.relation];
                for (auto a : k.lhs)
                    for (auto b : k.rhs)
                        if (rel.contains(plan[a], plan[b])) return true;
                return false;
            } else {
                std::vector<UserIndex> tuple;
                tuple.reserve(k.scope.size());
                for (auto s : k.scope) tuple.push_back(plan[s]);
                return std::binary_search(k.allowed.begin(), k.allowed.end(), tuple);
            }
        },
        c);
}

ConstraintStatus constraint_status(const WorkflowPolicy& policy, const Constraint& c, const PartialPlan& plan) {
    if (!scope_assigned(c, plan)) return ConstraintStatus::Pending;
    return permits(policy, c, plan) ? ConstraintStatus::Satisfied : ConstraintStatus::Violated;
}

Validity check_validity(const WorkflowPolicy& policy, const PartialPlan& plan) {
    Validity v;
    v.causally_closed = is_causally_closed(policy, plan);
    v.complete = plan.complete();
    for (StepIndex s = 0; s < plan.step_count(); ++s)
        if (plan.assigned(s) && (plan[s] >= policy.user_count() || !policy.authorized(s, plan[s])))
            v.unauthorized.push_back(s);
    for (std::size_t i = 0; i < policy.constraints().size(); ++i)
        if (constraint_status(policy, policy.constraints()[i], plan) == ConstraintStatus::Violated)
            v.violated.push_back(i);
    return v;
}

bool permits_at(const WorkflowPolicy& policy, const PartialPlan& plan, StepIndex s) {
    for (auto i : policy.constraints_on(s)) {
        const auto& c = policy.constraints()[i];
        if (scope_assigned(c, plan) && !permits(policy, c, plan)) return false;
    }
    return true;
}

bool extends_validly(const WorkflowPolicy& policy, const PartialPlan& plan, StepIndex s, UserIndex u) {
    if (s >= policy.step_count() || u >= policy.user_count()) return false;
    if (plan.assigned(s) || !policy.authorized(s, u)) return false;
    for (auto p : policy.predecessors(s))
        if (!plan.assigned(p)) return false;
    PartialPlan next = plan;
    next.assign(s, u);
    return permits_at(policy, next, s);
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

namespace {

// Residual of c after fixing s -> u, over the remaining scope (old indices).
Extensional residualize(const WorkflowPolicy& policy, const Constraint& c, StepIndex s, UserIndex u) {
    const std::size_t m = policy.user_count();
    Extensional out;
    if (const auto* sod = std::get_if<SeparationOfDuty>(&c)) {
        out.scope = {sod->first == s ? sod->second : sod->first};
        for (UserIndex v = 0; v < m; ++v)
            if (v != u) out.allowed.push_back({v});
        return out;
    }
    if (const auto* bod = std::get_if<BindingOfDuty>(&c)) {
        out.scope = {bod->first == s ? bod->second : bod->first};
        out.allowed.push_back({u});
        return out;
    }
    if (const auto* ext = std::get_if<Extensional>(&c)) {
        std::size_t pos = std::find(ext->scope.begin(), ext->scope.end(), s) - ext->scope.begin();
        for (std::size_t i = 0; i < ext->scope.size(); ++i)
            if (i != pos) out.scope.push_back(ext->scope[i]);
        for (const auto& tuple : ext->allowed) {
            if (tuple[pos] != u) continue;
            std::vector<UserIndex> rest;
            for (std::size_t i = 0; i < tuple.size(); ++i)
                if (i != pos) rest.push_back(tuple[i]);
            out.allowed.push_back(std::move(rest));
        }
        return out;
    }
    // Entailment: enumerate assignments of the remaining scope.
    for (auto x : scope_of(c))
        if (x != s) out.scope.push_back(x);
    PartialPlan probe(policy.step_count());
    probe.assign(s, u);
    std::vector<UserIndex> tuple(out.scope.size(), 0);
    if (m == 0) return out;
    while (true) {
        for (std::size_t i = 0; i < tuple.size(); ++i) probe.assign(out.scope[i], tuple[i]);
        if (permits(policy, c, probe)) out.allowed.push_back(tuple);
        std::size_t i = 0;
        while (i < tuple.size() && ++tuple[i] == m) tuple[i++] = 0;
        if (i == tuple.size()) break;
    }
    return out;
}

} // namespace

WorkflowPolicy project(const WorkflowPolicy& policy, StepIndex s, UserIndex u) {
    if (s >= policy.step_count() || u >= policy.user_count())
        throw Error(ErrorCode::InvalidSeed, "seed references an undeclared step or user");
    if (!policy.predecessors(s).empty())
        throw Error(ErrorCode::InvalidSeed, "step '" + policy.step_name(s) + "' has unassigned predecessors");
    if (!policy.authorized(s, u))
        throw Error(ErrorCode::InvalidSeed,
                    "user '" + policy.user_name(u) + "' is not authorized for '" + policy.step_name(s) + "'");
    PartialPlan seed(policy.step_count());
    seed.assign(s, u);
    if (!permits_at(policy, seed, s))
        throw Error(ErrorCode::InvalidSeed, "seed violates a constraint on '" + policy.step_name(s) + "'");

    const std::size_t n = policy.step_count();
    const std::size_t m = policy.user_count();
    auto renumber = [s](StepIndex x) { return x > s ? x - 1 : x; };

    WorkflowPolicy p;
    p.users_ = policy.users_;
    p.relations_ = policy.relations_;
    for (StepIndex x = 0; x < n; ++x)
        if (x != s) p.steps_.push_back(policy.steps_[x]);
    const std::size_t n2 = n - 1;
    p.closure_.assign(n2 * n2, 0);
    p.auth_.assign(n2 * m, 0);
    for (StepIndex a = 0; a < n; ++a) {
        if (a == s) continue;
        for (StepIndex b = 0; b < n; ++b)
            if (b != s && policy.precedes(a, b)) p.closure_[renumber(a) * n2 + renumber(b)] = 1;
        for (UserIndex v = 0; v < m; ++v)
            if (policy.authorized(a, v)) p.auth_[renumber(a) * m + v] = 1;
    }

    auto shift = [&](std::vector<StepIndex> v) {
        for (auto& x : v) x = renumber(x);
        return v;
    };
    for (const auto& c : policy.constraints()) {
        auto scope = scope_of(c);
        bool mentions = std::find(scope.begin(), scope.end(), s) != scope.end();
        if (!mentions) {
            std::visit(
                [&](const auto& k) {
                    using K = std::decay_t<decltype(k)>;
                    if constexpr (std::is_same_v<K, SeparationOfDuty> || std::is_same_v<K, BindingOfDuty>) {
                        p.constraints_.emplace_back(K{renumber(k.first), renumber(k.second)});
                    } else if constexpr (std::is_same_v<K, Entailment>) {
                        p.constraints_.emplace_back(Entailment{k.relation, shift(k.lhs), shift(k.rhs)});
                    } else {
                        p.constraints_.emplace_back(Extensional{shift(k.scope), k.allowed});
                    }
                },
                c);
            continue;
        }
        if (scope.size() == 1) continue; // checked above
        Extensional e = residualize(policy, c, s, u);
        e.scope = shift(e.scope);
        normalize(e);
        p.constraints_.emplace_back(std::move(e));
    }

    p.index();
    return p;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string describe(const WorkflowPolicy& policy, const PartialPlan& plan) {
    std::string out = "{";
    bool first = true;
    for (StepIndex s = 0; s < plan.step_count(); ++s) {
        if (!plan.assigned(s)) continue;
        if (!first) out += ", ";
        first = false;
        out += policy.step_name(s) + "->" + policy.user_name(plan[s]);
    }
    return out + "}";
}

std::string describe(const WorkflowPolicy& policy, const Constraint& c) {
    auto steps = [&](const std::vector<StepIndex>& v) {
        std::string out;
        for (auto s : v) out += (out.empty() ? "" : " ") + policy.step_name(s);
        return out;
    };
    return std::visit(
        [&](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, SeparationOfDuty>) {
                return "sod " + policy.step_name(k.first) + " " + policy.step_name(k.second);
            } else if constexpr (std::is_same_v<K, BindingOfDuty>) {
                return "bod " + policy.step_name(k.first) + " " + policy.step_name(k.second);
            } else if constexpr (std::is_same_v<K, Entailment>) {
                return "entail " + policy.relations()[k.relation].name() + " { " + steps(k.lhs) + " } { " +
                       steps(k.rhs) + " }";
            } else {
                std::string out = "allow { " + steps(k.scope) + " }";
                for (std::size_t i = 0; i < k.allowed.size(); ++i) {
                    out += i == 0 ? " " : "; ";
                    for (std::size_t j = 0; j < k.allowed[i].size(); ++j)
                        out += (j == 0 ? "" : " ") + policy.user_name(k.allowed[i][j]);
                }
                return out;
            }
        },
        c);
}

} // namespace wfresil
