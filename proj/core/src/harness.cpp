#include "wfresil/harness.hpp"

#include <chrono>
#include <ostream>
#include <random>

#include <json.hpp>

#include "wfresil/error.hpp"
#include "wfresil/policy_dsl.hpp"

namespace wfresil {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::size_t between(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
    }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

private:
    std::mt19937_64 engine_;
};

bool range_ok(const Range& r) { return r.lo <= r.hi; }

std::string user_list(const WorkflowPolicy& policy, const UserSet& users) {
    std::string out = "{";
    bool first = true;
    for (auto u : users.members()) {
        out += (first ? "" : ", ") + policy.user_name(u);
        first = false;
    }
    return out + "}";
}

std::string play_text(const WorkflowPolicy& policy, const Play& play) {
    std::string out = "[";
    for (std::size_t i = 0; i < play.size(); ++i)
        out += (i ? ", " : "") + policy.step_name(play[i].step) + "->" + policy.user_name(play[i].user);
    return out + "]";
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

void check_params(const GenParams& p) {
    if (!range_ok(p.steps) || !range_ok(p.users) || !range_ok(p.sod) || !range_ok(p.bod) || !range_ok(p.entailment))
        throw Error(ErrorCode::InvalidArgument, "empty range in generator parameters");
    if (!(p.order_density >= 0.0 && p.order_density <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "order density must lie in [0,1]");
    if (!(p.auth_density > 0.0 && p.auth_density <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "auth density must lie in (0,1]");
}

WorkflowPolicy random_policy(const GenParams& p) {
    check_params(p);
    Rng rng(p.seed);
    PolicyDraft d;
    const std::size_t n = rng.between(p.steps.lo, p.steps.hi);
    const std::size_t m = rng.between(p.users.lo, p.users.hi);
    for (std::size_t i = 1; i <= n; ++i) d.steps.push_back("s" + std::to_string(i));
    for (std::size_t i = 1; i <= m; ++i) d.users.push_back("u" + std::to_string(i));

    // Edges only go from lower to higher index, so the order is acyclic.
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (rng.chance(p.order_density)) d.order.emplace_back(d.steps[a], d.steps[b]);
    for (const auto& s : d.steps)
        for (const auto& u : d.users)
            if (p.auth_density >= 1.0 || rng.chance(p.auth_density)) d.auth.emplace_back(s, u);

    auto pair = [&]() {
        std::size_t a = rng.between(0, n - 1);
        std::size_t b = rng.between(0, n - 2);
        if (b >= a) ++b;
        return std::pair(d.steps[a], d.steps[b]);
    };
    const std::size_t sods = rng.between(p.sod.lo, p.sod.hi);
    const std::size_t bods = rng.between(p.bod.lo, p.bod.hi);
    const std::size_t ents = rng.between(p.entailment.lo, p.entailment.hi);
    if (n < 2) return validate_policy(d);

    for (std::size_t i = 0; i < sods; ++i) {
        auto [a, b] = pair();
        d.constraints.emplace_back(draft::SeparationOfDuty{a, b});
    }
    for (std::size_t i = 0; i < bods; ++i) {
        auto [a, b] = pair();
        d.constraints.emplace_back(draft::BindingOfDuty{a, b});
    }
    for (std::size_t i = 0; i < ents; ++i) {
        draft::Relation rel{"r" + std::to_string(i + 1), {}};
        for (const auto& u : d.users)
            for (const auto& v : d.users)
                if (rng.chance(0.5)) rel.pairs.emplace_back(u, v);
        auto [a, b] = pair();
        d.constraints.emplace_back(draft::Entailment{rel.name, {a}, {b}});
        d.relations.push_back(std::move(rel));
    }
    return validate_policy(d);
}

bool XCheckReport::ok() const noexcept {
    return agree && chain_ok && collapse_ok && witness_valid.value_or(true);
}

std::string describe_witness(const WorkflowPolicy& policy, const Witness& witness) {
    if (const auto* p = std::get_if<ValidPlan>(&witness)) return describe(policy, p->plan);
    if (const auto* c = std::get_if<Counterexample>(&witness)) return "remove " + user_list(policy, c->removed);
    if (const auto* w = std::get_if<WinningPlay>(&witness)) return "play " + play_text(policy, w->play);
    if (const auto* s = std::get_if<StrikeFound>(&witness))
        return "after " + play_text(policy, s->trigger) + " remove " + user_list(policy, s->removed);
    return "";
}

XCheckReport xcheck_srcp(const WorkflowPolicy& policy, Budget t, const SolverConfig& solver, SrcpEncoding encoding,
                         const GameConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    XCheckReport r;
    r.check = "srcp";
    r.budget = t.t;
    r.policy = serialize_policy(policy, t);

    GameVerdict oracle = decide_srcp(policy, t, config);
    r.oracle = oracle.decision;
    r.oracle_witness = describe_witness(policy, oracle.witness);

    AspProgram program = emit_srcp_program(policy, t, encoding);
    GameVerdict asp = interpret_srcp(run_solver(program, solver), program);
    r.asp = asp.decision;
    r.asp_witness = describe_witness(policy, asp.witness);
    r.agree = *r.oracle == *r.asp;

    bool valid = true;
    for (const GameVerdict* v : {&oracle, &asp})
        if (const auto* c = std::get_if<Counterexample>(&v->witness))
            valid = valid && c->removed.size() <= t.t && verify_counterexample(policy, c->removed, config);
    if (!*r.oracle || !*r.asp) r.witness_valid = valid;
    r.millis = elapsed_ms(start);
    return r;
}

XCheckReport xcheck_orcp(const WorkflowPolicy& policy, Budget t, const SolverConfig& solver,
                         const GameConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    XCheckReport r;
    r.check = "orcp";
    r.budget = t.t;
    r.policy = serialize_policy(policy, t);

    GameVerdict oracle = decide_orcp(policy, t, config);
    r.oracle = oracle.decision;
    r.oracle_witness = describe_witness(policy, oracle.witness);

    AspProgram program = emit_orcp_program(policy, t);
    GameVerdict asp = interpret_orcp(run_solver(program, solver), program);
    r.asp = asp.decision;
    r.asp_witness = describe_witness(policy, asp.witness);
    r.agree = *r.oracle == *r.asp;

    bool valid = true;
    bool any = false;
    for (const GameVerdict* v : {&oracle, &asp})
        if (const auto* w = std::get_if<WinningPlay>(&v->witness)) {
            any = true;
            valid = valid && verify_winning_play(policy, w->play, t, config);
        }
    if (any) r.witness_valid = valid;
    r.millis = elapsed_ms(start);
    return r;
}

XCheckReport inclusion_chain_check(const WorkflowPolicy& policy, Budget t, const GameConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    XCheckReport r;
    r.check = "chain";
    r.budget = t.t;
    r.policy = serialize_policy(policy, t);
    try {
        for (Analysis a : {Analysis::Wsp, Analysis::Srcp, Analysis::Orcp, Analysis::Crcp, Analysis::Drcp})
            r.chain.push_back(decide(a, policy, t, config).decision);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::StateBudgetExceeded) throw;
        r.chain.clear();
        r.skipped = e.what();
        r.millis = elapsed_ms(start);
        return r;
    }
    // Stronger notion implies weaker: drcp => crcp => orcp => srcp => wsp.
    for (std::size_t i = 0; i + 1 < r.chain.size(); ++i)
        if (*r.chain[i + 1] && !*r.chain[i]) r.chain_ok = false;
    if (t.t == 0)
        r.collapse_ok = *r.chain[1] == *r.chain[0] && *r.chain[2] == *r.chain[0] && *r.chain[3] == *r.chain[0];
    r.millis = elapsed_ms(start);
    return r;
}

std::string to_json_line(const XCheckReport& r) {
    using nlohmann::json;
    auto opt = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
    json j;
    j["seed"] = r.seed;
    j["check"] = r.check;
    j["budget"] = r.budget;
    j["oracle"] = opt(r.oracle);
    j["asp"] = opt(r.asp);
    j["agree"] = r.agree;
    j["oracle_witness"] = r.oracle_witness;
    j["asp_witness"] = r.asp_witness;
    j["witness_valid"] = opt(r.witness_valid);
    json chain = nullptr;
    if (!r.chain.empty()) {
        chain = json::object();
        const char* names[] = {"wsp", "srcp", "orcp", "crcp", "drcp"};
        for (std::size_t i = 0; i < r.chain.size() && i < 5; ++i) chain[names[i]] = opt(r.chain[i]);
    }
    j["chain"] = chain;
    j["chain_ok"] = r.chain_ok;
    j["collapse_ok"] = r.collapse_ok;
    j["skipped"] = r.skipped ? json(*r.skipped) : json(nullptr);
    j["ok"] = r.ok();
    j["millis"] = r.millis;
    j["policy"] = r.policy;
    return j.dump();
}

CampaignConfig default_campaign(CampaignKind kind) {
    CampaignConfig c;
    c.kind = kind;
    c.params = GenParams{};
    if (kind == CampaignKind::Orcp) {
        c.last_seed = 200;
        c.params.users = {1, 3};
        c.params.sod = {0, 2};
        c.params.bod = {0, 1};
        c.params.entailment = {0, 1};
        c.budgets = {0, 1};
    }
    return c;
}

std::pair<WorkflowPolicy, Budget> campaign_instance(const CampaignConfig& config, std::uint64_t seed) {
    if (config.budgets.empty()) throw Error(ErrorCode::InvalidArgument, "no budgets to choose from");
    GenParams p = config.params;
    p.seed = seed;
    Rng pick(seed ^ 0x9e3779b97f4a7c15ULL);
    Budget t{config.budgets[pick.between(0, config.budgets.size() - 1)]};
    return {random_policy(p), t};
}

CampaignSummary run_campaign(const CampaignConfig& config, std::ostream* out) {
    CampaignSummary summary;
    for (std::uint64_t seed = config.first_seed; seed <= config.last_seed; ++seed) {
        auto [policy, t] = campaign_instance(config, seed);
        XCheckReport r;
        switch (config.kind) {
        case CampaignKind::Srcp: r = xcheck_srcp(policy, t, config.solver, config.encoding, config.game); break;
        case CampaignKind::Orcp: r = xcheck_orcp(policy, t, config.solver, config.game); break;
        case CampaignKind::Chain: r = inclusion_chain_check(policy, t, config.game); break;
        }
        r.seed = seed;
        ++summary.instances;
        if (!r.agree) ++summary.disagreements;
        if (!r.chain_ok) ++summary.chain_violations;
        if (!r.collapse_ok) ++summary.collapse_violations;
        if (r.witness_valid == false) ++summary.witness_failures;
        if (r.skipped) ++summary.skipped;
        if (!r.ok()) summary.failures.push_back(r);
        if (out) *out << to_json_line(r) << '\n';
        if (seed == config.last_seed) break;
    }
    return summary;
}

} // namespace wfresil
