#include "wfresil/asp_codegen.hpp"

#include <algorithm>
#include <set>

#include "wfresil/error.hpp"

namespace wfresil {

std::optional<StepIndex> AtomMap::step(const std::string& constant) const {
    auto it = steps.find(constant);
    if (it == steps.end()) return std::nullopt;
    return it->second;
}

std::optional<UserIndex> AtomMap::user(const std::string& constant) const {
    auto it = users.find(constant);
    if (it == users.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> asp_constants(const std::vector<std::string>& tokens,
                                       const std::vector<std::string>& reserved) {
    std::set<std::string> taken(reserved.begin(), reserved.end());
    taken.insert("not");
    std::vector<std::string> out(tokens.size());
    auto identity = [&](const std::string& s) { return !s.empty() && s[0] >= 'a' && s[0] <= 'z'; };

    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (identity(tokens[i]) && !taken.count(tokens[i])) out[i] = tokens[i];
    for (const auto& s : out)
        if (!s.empty()) taken.insert(s);

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!out[i].empty()) continue;
        std::string base = tokens[i];
        if (!base.empty() && base[0] >= 'A' && base[0] <= 'Z')
            base[0] = static_cast<char>(base[0] - 'A' + 'a');
        else if (!identity(base))
            base = "x" + base;
        std::string candidate = base;
        for (std::size_t n = 2; taken.count(candidate); ++n) candidate = base + "_" + std::to_string(n);
        taken.insert(candidate);
        out[i] = candidate;
    }
    return out;
}

namespace {

void require_supported(const WorkflowPolicy& policy, Target target) {
    for (const auto& c : policy.constraints()) {
        bool ok = false;
        if (std::holds_alternative<SeparationOfDuty>(c)) ok = true;
        if (target == Target::Orcp) {
            if (std::holds_alternative<BindingOfDuty>(c)) ok = true;
            if (const auto* e = std::get_if<Entailment>(&c)) ok = e->is_type1();
        }
        if (!ok)
            throw Error(ErrorCode::UnsupportedConstraint,
                        "constraint '" + describe(policy, c) + "' cannot be encoded for the " +
                            (target == Target::Orcp ? "one-shot" : "static") + " program");
    }
}

AtomMap build_map(const WorkflowPolicy& policy, Target target) {
    AtomMap map;
    if (target == Target::Orcp) {
        for (StepIndex s = 0; s < policy.step_count(); ++s) map.step_constants.push_back(std::to_string(s + 1));
    } else {
        map.step_constants = asp_constants(policy.steps());
    }
    map.user_constants = asp_constants(policy.users(), {"nobody"});
    for (StepIndex s = 0; s < map.step_constants.size(); ++s) map.steps[map.step_constants[s]] = s;
    for (UserIndex u = 0; u < map.user_constants.size(); ++u) map.users[map.user_constants[u]] = u;

    using K = EntityKind;
    map.templates = {{"step", {K::Step}}, {"user", {K::User}}, {"auth", {K::Step, K::User}}};
    if (target == Target::SrcpComplement) {
        map.templates.push_back({"sod", {K::Step, K::Step}});
        map.templates.push_back({"removed", {K::User}});
        map.templates.push_back({"avail", {K::Step, K::User}});
        map.templates.push_back({"assign", {K::Step, K::User}});
    } else {
        map.templates.push_back({"before", {K::Step, K::Step}});
        map.templates.push_back({"assign", {K::Step, K::User}});
        map.templates.push_back({"order", {K::Step, K::Step}});
        map.templates.push_back({"pre", {K::Step}});
        map.templates.push_back({"post", {K::Step}});
        map.templates.push_back({"removed", {K::User}});
        map.templates.push_back({"preserved", {K::User}});
        map.templates.push_back({"avail", {K::Step, K::User}});
    }
    return map;
}

// Relations referenced by entailment constraints, in declaration order.
std::vector<std::size_t> used_relations(const WorkflowPolicy& policy) {
    std::vector<std::size_t> out;
    for (const auto& c : policy.constraints())
        if (const auto* e = std::get_if<Entailment>(&c)) out.push_back(e->relation);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string facts(const WorkflowPolicy& policy, Target target, const AtomMap& map) {
    const auto& sc = map.step_constants;
    const auto& uc = map.user_constants;
    std::string out;
    for (StepIndex s = 0; s < policy.step_count(); ++s) out += "step(" + sc[s] + ").\n";
    if (target == Target::Orcp)
        for (auto [a, b] : policy.order_reduction()) out += "before(" + sc[a] + "," + sc[b] + ").\n";
    for (UserIndex u = 0; u < policy.user_count(); ++u) out += "user(" + uc[u] + ").\n";
    for (auto [s, u] : policy.auth_pairs()) out += "auth(" + sc[s] + "," + uc[u] + ").\n";
    if (target == Target::SrcpComplement) {
        for (const auto& c : policy.constraints())
            if (const auto* sod = std::get_if<SeparationOfDuty>(&c))
                out += "sod(" + sc[sod->first] + "," + sc[sod->second] + ").\n";
    } else {
        for (auto r : used_relations(policy)) {
            const auto& rel = policy.relations()[r];
            for (auto [a, b] : rel.pairs()) out += "rel_" + rel.name() + "(" + uc[a] + "," + uc[b] + ").\n";
        }
    }
    return out;
}

std::string budget_text(Budget t) { return std::to_string(t.t); }

} // namespace

std::string emit_instance_facts(const WorkflowPolicy& policy, Target target) {
    require_supported(policy, target);
    return facts(policy, target, build_map(policy, target));
}

AspProgram emit_srcp_program(const WorkflowPolicy& policy, Budget t, SrcpEncoding encoding) {
    require_supported(policy, Target::SrcpComplement);
    AspProgram program;
    program.target = Target::SrcpComplement;
    program.atom_map = build_map(policy, Target::SrcpComplement);

    std::string& out = program.text;
    out += facts(policy, Target::SrcpComplement, program.atom_map);
    out += "\n";
    out += "% Generate Player 2's strike\n";
    out += "{ removed(U) : user(U) } " + budget_text(t) + ".\n";
    out += "\n";
    out += "% Generate Player 1's assignment\n";
    out += "avail(S, U) :- auth(S, U), not removed(U).\n";
    out += "assign(S, U) : avail(S, U) :- step(S).\n";
    out += "\n";
    if (encoding == SrcpEncoding::Guarded) {
        out += "% Steps left without an available user\n";
        out += "vacant(S) :- step(S), not avail(S, U) : auth(S, U).\n";
        out += "avail(S, nobody) :- vacant(S).\n";
        out += "violation :- vacant(S).\n";
        out += "\n";
    }
    out += "% Test separation-of-duty constraints\n";
    out += "violation :-\n";
    out += "    sod(S1, S2), assign(S1, U), assign(S2, U).\n";
    out += "\n";
    out += "% Model saturation\n";
    out += "assign(S, U) :- violation, avail(S, U).\n";
    out += "\n";
    out += "% Reject unsaturated models\n";
    out += ":- not violation.\n";
    return program;
}

AspProgram emit_orcp_program(const WorkflowPolicy& policy, Budget t) {
    require_supported(policy, Target::Orcp);
    AspProgram program;
    program.target = Target::Orcp;
    program.atom_map = build_map(policy, Target::Orcp);

    std::string& out = program.text;
    out += "% Step numbering\n";
    for (StepIndex s = 0; s < policy.step_count(); ++s)
        out += "% " + std::to_string(s + 1) + " = " + policy.step_name(s) + "\n";
    out += "\n";
    out += facts(policy, Target::Orcp, program.atom_map);
    out += "\n";
    out += "% Generate a plan as part of Player 1's strategy\n";
    out += "1 { assign(S, U) : auth(S, U) } 1 :- step(S).\n";
    out += "\n";
    out += "% Generate a total ordering of steps as part of\n";
    out += "% Player 1's strategy\n";
    out += "order(X, Y); order(Y, X) :-\n";
    out += "    step(X), step(Y), X != Y.\n";
    out += "order(X, Y) :- before(X, Y).\n";
    out += "order(X, Z) :- order(X, Y), order(Y, Z).\n";
    out += "\n";
    out += "% Generate strike point of Player 2\n";
    out += "post(S); pre(S) :- step(S).\n";
    out += "post(S2) :- post(S1), order(S1, S2).\n";
    out += "\n";
    out += "% Generate strike set of Player 2\n";
    out += "removed(U); preserved(U) :- user(U).\n";
    out += "\n";
    out += "% Available assignments for Player 1\n";
    out += "avail(S, U) :- pre(S), assign(S, U).\n";
    out += "avail(S, U) :- post(S), auth(S, U), preserved(U).\n";
    out += "\n";
    out += "% Detect satisfiability\n";
    if (policy.step_count() == 0) {
        out += "sat.\n";
    } else {
        std::vector<std::string> body;
        auto var = [](StepIndex s) { return "U" + std::to_string(s + 1); };
        for (StepIndex s = 0; s < policy.step_count(); ++s)
            body.push_back("avail(" + std::to_string(s + 1) + "," + var(s) + ")");
        for (const auto& c : policy.constraints()) {
            if (const auto* sod = std::get_if<SeparationOfDuty>(&c)) {
                body.push_back(var(sod->first) + " != " + var(sod->second));
            } else if (const auto* bod = std::get_if<BindingOfDuty>(&c)) {
                body.push_back(var(bod->first) + " = " + var(bod->second));
            } else if (const auto* e = std::get_if<Entailment>(&c)) {
                body.push_back("rel_" + policy.relations()[e->relation].name() + "(" + var(e->lhs[0]) + "," +
                               var(e->rhs[0]) + ")");
            }
        }
        out += "sat :- ";
        for (std::size_t i = 0; i < body.size(); ++i) out += (i == 0 ? "" : ", ") + body[i];
        out += ".\n";
    }
    out += "\n";
    out += "% Player 2 loses if it removes more than t users\n";
    out += "sat :- " + std::to_string(t.t + 1) + " { removed(U) : user(U) }.\n";
    out += "\n";
    out += "% Model saturation\n";
    out += "pre(S) :- sat, step(S).\n";
    out += "post(S) :- sat, step(S).\n";
    out += "removed(U) :- sat, user(U).\n";
    out += "preserved(U) :- sat, user(U).\n";
    out += "avail(S, U) :- sat, auth(S, U).\n";
    out += "\n";
    out += "% Reject unsaturated models\n";
    out += ":- not sat.\n";
    return program;
}

} // namespace wfresil
