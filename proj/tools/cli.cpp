#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wfresil/asp_codegen.hpp"
#include "wfresil/error.hpp"
#include "wfresil/games.hpp"
#include "wfresil/harness.hpp"
#include "wfresil/policy_dsl.hpp"
#include "wfresil/reductions.hpp"
#include "wfresil/solver_bridge.hpp"

namespace wfresil::cli {

namespace {

using nlohmann::json;

struct Failure {
    int code;
    std::string message;
};

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::SolverNotFound:
    case ErrorCode::SolverTimeout:
    case ErrorCode::SolverFailed:
    case ErrorCode::OutputParseError:
    case ErrorCode::IndeterminateResult:
    case ErrorCode::InconsistentStrategy:
    case ErrorCode::StateBudgetExceeded: return kRuntime;
    default: return kUsage;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kUsage, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t parse_count(const std::string& text, const std::string& what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw Failure{kUsage, what + ": '" + text + "' is not a non-negative integer"};
    return v;
}

// "3" or "1..3".
Range parse_range(const std::string& text, const std::string& what) {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        auto v = parse_count(text, what);
        return {v, v};
    }
    Range r{parse_count(text.substr(0, dots), what), parse_count(text.substr(dots + 2), what)};
    if (r.lo > r.hi) throw Failure{kUsage, what + ": empty range '" + text + "'"};
    return r;
}

json users_json(const WorkflowPolicy& p, const UserSet& users) {
    json a = json::array();
    for (auto u : users.members()) a.push_back(p.user_name(u));
    return a;
}

json play_json(const WorkflowPolicy& p, const Play& play) {
    json a = json::array();
    for (const auto& m : play) a.push_back({{"step", p.step_name(m.step)}, {"user", p.user_name(m.user)}});
    return a;
}

json witness_json(const WorkflowPolicy& p, const Witness& w) {
    if (const auto* v = std::get_if<ValidPlan>(&w)) {
        json plan = json::object();
        for (StepIndex s = 0; s < p.step_count(); ++s)
            if (v->plan.assigned(s)) plan[p.step_name(s)] = p.user_name(v->plan[s]);
        return {{"kind", "plan"}, {"plan", plan}};
    }
    if (const auto* c = std::get_if<Counterexample>(&w))
        return {{"kind", "counterexample"}, {"removed", users_json(p, c->removed)}};
    if (const auto* wp = std::get_if<WinningPlay>(&w)) return {{"kind", "play"}, {"play", play_json(p, wp->play)}};
    if (const auto* s = std::get_if<StrikeFound>(&w))
        return {{"kind", "strike"}, {"trigger", play_json(p, s->trigger)}, {"removed", users_json(p, s->removed)}};
    return nullptr;
}

struct Globals {
    bool json_output = false;
    bool quiet = false;
    std::string solver;
};

Budget resolve_budget(const std::optional<std::size_t>& flag, const PolicyDocument& doc) {
    if (flag) return Budget{*flag};
    if (doc.budget) return *doc.budget;
    throw Failure{kUsage, "no budget: pass -t or add a 'budget:' clause"};
}

SrcpEncoding parse_encoding(const std::string& name) {
    if (name == "guarded") return SrcpEncoding::Guarded;
    if (name == "figure") return SrcpEncoding::Figure;
    throw Failure{kUsage, "unknown --srcp-encoding '" + name + "'"};
}

double millis_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

SolverConfig solver_config(const Globals& g, double timeout) {
    SolverConfig c;
    if (!g.solver.empty()) c.executable = g.solver;
    c.timeout_seconds = timeout;
    return c;
}

void print_verdict(const Globals& g, std::ostream& out, const json& j, const WorkflowPolicy& p, const GameVerdict& v,
                   const std::string& label) {
    if (g.quiet) return;
    if (g.json_output) {
        out << j.dump() << '\n';
        return;
    }
    out << label << ": " << (v.decision ? "yes" : "no") << '\n';
    std::string w = describe_witness(p, v.witness);
    if (!w.empty()) out << "witness: " << w << '\n';
}

// ---------------------------------------------------------------------------

struct CheckArgs {
    std::string file;
    std::string analysis = "srcp";
    std::optional<std::size_t> t;
    std::size_t max_states = GameConfig{}.max_states;
};

int cmd_check(const Globals& g, const CheckArgs& a, std::ostream& out) {
    auto analysis = parse_analysis(a.analysis);
    auto doc = parse_policy(read_file(a.file));
    Budget t = analysis == Analysis::Wsp ? Budget{a.t.value_or(doc.budget.value_or(Budget{}).t)}
                                         : resolve_budget(a.t, doc);
    const auto start = std::chrono::steady_clock::now();
    GameVerdict v = decide(analysis, doc.policy, t, GameConfig{a.max_states, true});
    json j{{"command", "check"},
           {"analysis", a.analysis},
           {"decision", v.decision},
           {"witness", witness_json(doc.policy, v.witness)},
           {"states", v.states},
           {"millis", millis_since(start)}};
    if (analysis == Analysis::Wsp) {
        j["satisfiable"] = v.decision;
    } else {
        j["budget"] = t.t;
        j["resilient"] = v.decision;
    }
    std::string label = std::string(to_string(analysis));
    if (analysis != Analysis::Wsp) label += " (t=" + std::to_string(t.t) + ")";
    print_verdict(g, out, j, doc.policy, v, label);
    return v.decision ? kYes : kNo;
}

struct EncodeArgs {
    std::string file;
    std::string target = "srcp";
    std::optional<std::size_t> t;
    std::string encoding = "guarded";
    double timeout = 60;
};

AspProgram encode(const EncodeArgs& a, const PolicyDocument& doc) {
    Budget t = resolve_budget(a.t, doc);
    if (a.target == "srcp") return emit_srcp_program(doc.policy, t, parse_encoding(a.encoding));
    if (a.target == "orcp") return emit_orcp_program(doc.policy, t);
    throw Failure{kUsage, "unknown --target '" + a.target + "'"};
}

int cmd_encode(const Globals& g, const EncodeArgs& a, std::ostream& out) {
    auto doc = parse_policy(read_file(a.file));
    AspProgram program = encode(a, doc);
    if (g.json_output)
        out << json{{"command", "encode"}, {"target", a.target}, {"program", program.text}}.dump() << '\n';
    else
        out << program.text;
    return kYes;
}

int cmd_solve(const Globals& g, const EncodeArgs& a, std::ostream& out) {
    auto doc = parse_policy(read_file(a.file));
    AspProgram program = encode(a, doc);
    const auto start = std::chrono::steady_clock::now();
    SolverOutcome outcome = run_solver(program, solver_config(g, a.timeout));
    GameVerdict v = a.target == "srcp" ? interpret_srcp(outcome, program) : interpret_orcp(outcome, program);
    json j{{"command", "solve"},
           {"target", a.target},
           {"budget", resolve_budget(a.t, doc).t},
           {"solver_status", std::string(to_string(outcome.status))},
           {"resilient", v.decision},
           {"decision", v.decision},
           {"witness", witness_json(doc.policy, v.witness)},
           {"millis", millis_since(start)}};
    print_verdict(g, out, j, doc.policy, v, a.target + " via solver (t=" + std::to_string(resolve_budget(a.t, doc).t) + ")");
    return v.decision ? kYes : kNo;
}

struct GenerateArgs {
    // random
    std::uint64_t seed = 1;
    std::string steps = "1..3";
    std::string users = "1..4";
    double order_density = 0.3;
    double auth_density = 0.7;
    std::string sod = "0..2";
    std::string bod = "0";
    std::string entail = "0";
    std::optional<std::size_t> budget;
    // dhc
    std::string graph;
    std::string b;
    // succrad
    std::string circuit;
    std::size_t n = 1;
    std::size_t k = 2;
    bool provenance = false;
};

void print_generated(const Globals& g, std::ostream& out, const WorkflowPolicy& policy, std::optional<Budget> budget,
                     const ReductionOutput* reduction, bool provenance) {
    std::string text = serialize_policy(policy, budget);
    json prov;
    if (reduction && provenance)
        prov = {{"steps", reduction->step_provenance},
                {"users", reduction->user_provenance},
                {"notes", reduction->notes}};
    if (g.json_output) {
        json j{{"command", "generate"}, {"policy", text}};
        if (!prov.is_null()) j["provenance"] = prov;
        out << j.dump() << '\n';
        return;
    }
    out << text;
    if (!prov.is_null()) out << "# provenance " << prov.dump() << '\n';
}

int cmd_generate_random(const Globals& g, const GenerateArgs& a, std::ostream& out) {
    GenParams p;
    p.seed = a.seed;
    p.steps = parse_range(a.steps, "--steps");
    p.users = parse_range(a.users, "--users");
    p.order_density = a.order_density;
    p.auth_density = a.auth_density;
    p.sod = parse_range(a.sod, "--sod");
    p.bod = parse_range(a.bod, "--bod");
    p.entailment = parse_range(a.entail, "--entail");
    std::optional<Budget> budget;
    if (a.budget) budget = Budget{*a.budget};
    print_generated(g, out, random_policy(p), budget, nullptr, false);
    return kYes;
}

int cmd_generate_dhc(const Globals& g, const GenerateArgs& a, std::ostream& out) {
    SimpleGraph graph = parse_graph(read_file(a.graph));
    auto r = dhc_to_srcp(graph, parse_edge_list(graph, a.b));
    print_generated(g, out, r.policy, r.budget, &r, a.provenance);
    return kYes;
}

int cmd_generate_succrad(const Globals& g, const GenerateArgs& a, std::ostream& out) {
    BooleanCircuit c = parse_circuit(read_file(a.circuit));
    auto r = succrad_to_orcp(c, a.n, a.k);
    print_generated(g, out, r.policy, r.budget, &r, a.provenance);
    return kYes;
}

struct XcheckArgs {
    std::string kind = "all";
    std::optional<std::string> seeds;
    std::string encoding = "guarded";
    std::size_t max_states = 200'000;
    bool timing = true;
    double timeout = 60;
};

int cmd_xcheck(const Globals& g, const XcheckArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<CampaignKind> kinds;
    if (a.kind == "srcp" || a.kind == "all") kinds.push_back(CampaignKind::Srcp);
    if (a.kind == "orcp" || a.kind == "all") kinds.push_back(CampaignKind::Orcp);
    if (a.kind == "chain" || a.kind == "all") kinds.push_back(CampaignKind::Chain);
    if (kinds.empty()) throw Failure{kUsage, "unknown --kind '" + a.kind + "'"};
    Range seeds = parse_range(a.seeds.value_or("1..50"), "--seeds");
    bool ok = true;
    for (auto kind : kinds) {
        CampaignConfig c = default_campaign(kind);
        c.first_seed = seeds.lo;
        c.last_seed = seeds.hi;
        c.solver = solver_config(g, a.timeout);
        c.encoding = parse_encoding(a.encoding);
        c.game.max_states = a.max_states;
        std::ostringstream lines;
        CampaignSummary s = run_campaign(c, &lines);
        if (!g.quiet) {
            if (a.timing) {
                out << lines.str();
            } else {
                std::istringstream in(lines.str());
                for (std::string line; std::getline(in, line);) {
                    auto j = json::parse(line);
                    j.erase("millis");
                    out << j.dump() << '\n';
                }
            }
        }
        const char* name = kind == CampaignKind::Srcp ? "srcp" : kind == CampaignKind::Orcp ? "orcp" : "chain";
        if (!g.quiet)
            err << name << ": " << s.instances << " instances, " << s.disagreements << " disagreements, "
                << s.chain_violations << " chain violations, " << s.collapse_violations << " collapse violations, "
                << s.witness_failures << " witness failures, " << s.skipped << " skipped\n";
        ok = ok && s.ok();
    }
    return ok ? kYes : kNo;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Workflow resiliency analysis"};
    app.name("wfresil");
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json_output, "Machine-readable output");
    app.add_flag("--quiet", g.quiet, "Only report through the exit code");
    app.add_option("--solver", g.solver, "ASP solver executable (default $WFRESIL_ASP_SOLVER or clingo)");

    CheckArgs check;
    auto* c_check = app.add_subcommand("check", "Decide an analysis with the exact game solver");
    c_check->add_option("file", check.file, "Policy file")->required();
    c_check->add_option("-a,--analysis", check.analysis, "wsp, srcp, orcp, crcp or drcp");
    c_check->add_option("-t,--budget", check.t, "Budget; overrides the file's budget clause");
    c_check->add_option("--max-states", check.max_states, "Give up after this many configurations");

    EncodeArgs encode_args;
    auto* c_encode = app.add_subcommand("encode", "Print the answer-set program for a policy");
    EncodeArgs solve_args;
    auto* c_solve = app.add_subcommand("solve", "Decide an analysis with the ASP solver");
    for (auto [cmd, a] : {std::pair{c_encode, &encode_args}, std::pair{c_solve, &solve_args}}) {
        cmd->add_option("file", a->file, "Policy file")->required();
        cmd->add_option("--target", a->target, "srcp or orcp");
        cmd->add_option("-t,--budget", a->t, "Budget; overrides the file's budget clause");
        cmd->add_option("--srcp-encoding", a->encoding, "guarded or figure");
    }
    c_solve->add_option("--timeout", solve_args.timeout, "Solver timeout in seconds");

    GenerateArgs gen;
    auto* c_gen = app.add_subcommand("generate", "Generate a policy");
    c_gen->require_subcommand(1);
    auto* g_random = c_gen->add_subcommand("random", "Seeded random policy");
    g_random->add_option("--seed", gen.seed);
    g_random->add_option("--steps", gen.steps, "Step count or range lo..hi");
    g_random->add_option("--users", gen.users, "User count or range lo..hi");
    g_random->add_option("--order-density", gen.order_density);
    g_random->add_option("--auth-density", gen.auth_density);
    g_random->add_option("--sod", gen.sod, "Separation-of-duty count or range");
    g_random->add_option("--bod", gen.bod, "Binding-of-duty count or range");
    g_random->add_option("--entail", gen.entail, "Entailment count or range");
    g_random->add_option("--budget", gen.budget, "Budget clause to add");
    auto* g_dhc = c_gen->add_subcommand("dhc", "Static resiliency instance from a graph and edge set B");
    g_dhc->add_option("--graph", gen.graph, "Graph file")->required();
    g_dhc->add_option("--b", gen.b, "Edges of B, e.g. \"a-b,c-d\"");
    g_dhc->add_flag("--provenance", gen.provenance);
    auto* g_succ = c_gen->add_subcommand("succrad", "One-shot resiliency instance from a circuit");
    g_succ->add_option("--circuit", gen.circuit, "Circuit file with 2n inputs")->required();
    g_succ->add_option("-n", gen.n, "Bits per vertex");
    g_succ->add_option("-k", gen.k, "Radius bound");
    g_succ->add_flag("--provenance", gen.provenance);

    XcheckArgs xc;
    auto* c_xcheck = app.add_subcommand("xcheck", "Cross-check oracles and the ASP pipeline on random instances");
    c_xcheck->add_option("--kind", xc.kind, "srcp, orcp, chain or all");
    c_xcheck->add_option("--seeds", xc.seeds, "Seed or range lo..hi (default 1..50)");
    c_xcheck->add_option("--srcp-encoding", xc.encoding, "guarded or figure");
    c_xcheck->add_option("--max-states", xc.max_states);
    c_xcheck->add_option("--timeout", xc.timeout, "Solver timeout in seconds");
    c_xcheck->add_flag("!--no-timing", xc.timing, "Omit timings so output is reproducible");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (c_check->parsed()) return cmd_check(g, check, out);
        if (c_encode->parsed()) return cmd_encode(g, encode_args, out);
        if (c_solve->parsed()) return cmd_solve(g, solve_args, out);
        if (g_random->parsed()) return cmd_generate_random(g, gen, out);
        if (g_dhc->parsed()) return cmd_generate_dhc(g, gen, out);
        if (g_succ->parsed()) return cmd_generate_succrad(g, gen, out);
        if (c_xcheck->parsed()) return cmd_xcheck(g, xc, out, err);
    } catch (const Failure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}

} // namespace wfresil::cli
