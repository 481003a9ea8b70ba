#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "support.hpp"
#include "wfresil/error.hpp"
#include "wfresil/harness.hpp"
#include "wfresil/solver_bridge.hpp"

using namespace wfresil;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

// Writes an executable shell script into a fresh temporary directory.
std::string fake_solver(const std::string& name, const std::string& body) {
    auto dir = fs::temp_directory_path() / "wfresil_fake_solvers";
    fs::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path) << "#!/bin/sh\n" << body;
    fs::permissions(path, fs::perms::owner_all);
    return path.string();
}

SolverConfig with(const std::string& exe, double timeout = 30) {
    SolverConfig c;
    c.executable = exe;
    c.timeout_seconds = timeout;
    return c;
}

} // namespace

TEST_CASE("atom parsing") {
    CHECK(parse_atom("sat") == Atom{"sat", {}});
    CHECK(parse_atom("assign(1,u2)") == Atom{"assign", {"1", "u2"}});
    CHECK(parse_atom("p(\"a,b\",f(x,y))") == Atom{"p", {"\"a,b\"", "f(x,y)"}});
    CHECK(parse_atom("-q(a)") == Atom{"-q", {"a"}});
    for (const char* bad : {"", "P", "p(", "p()", "p(a,)", "p(a)b", "1x", "p(a))"})
        CHECK_MESSAGE(code_of([&] { (void)parse_atom(bad); }) == ErrorCode::OutputParseError, bad);
}

TEST_CASE("output decoding") {
    auto sat = decode_solver_output("clingo version 5\nSolving...\nAnswer: 1\nremoved(bob) sat\nSATISFIABLE\n", 10);
    CHECK(sat.status == SolverStatus::Satisfiable);
    REQUIRE(sat.answer_set.has_value());
    CHECK(*sat.answer_set == std::vector<Atom>{{"removed", {"bob"}}, {"sat", {}}});

    auto unsat = decode_solver_output("Solving...\nUNSATISFIABLE\n", 20);
    CHECK(unsat.status == SolverStatus::Unsatisfiable);
    CHECK_FALSE(unsat.answer_set.has_value());

    auto empty_model = decode_solver_output("Answer: 1\n\nSATISFIABLE\n", 30);
    REQUIRE(empty_model.answer_set.has_value());
    CHECK(empty_model.answer_set->empty());

    CHECK(decode_solver_output("UNKNOWN\n", 0).status == SolverStatus::Unknown);
    CHECK(decode_solver_output("Answer: 1\na\nSATISFIABLE\n", 0).status == SolverStatus::Satisfiable);
    CHECK(code_of([] { (void)decode_solver_output("UNSATISFIABLE\n", 10); }) == ErrorCode::OutputParseError);
    CHECK(code_of([] { (void)decode_solver_output("Answer: 1\na\nSATISFIABLE\n", 20); }) ==
          ErrorCode::OutputParseError);
    CHECK(code_of([] { (void)decode_solver_output("SATISFIABLE\n", 10); }) == ErrorCode::OutputParseError);
    CHECK(code_of([] { (void)decode_solver_output("Answer: 1\np(\nSATISFIABLE\n", 10); }) ==
          ErrorCode::OutputParseError);
}

TEST_CASE("subprocess failures are classified") {
    CHECK(code_of([] { (void)run_solver("a.", with("/nonexistent/solver")); }) == ErrorCode::SolverNotFound);
    auto slow = fake_solver("slow.sh", "cat >/dev/null\nsleep 5\n");
    CHECK(code_of([&] { (void)run_solver("a.", with(slow, 0.3)); }) == ErrorCode::SolverTimeout);
    auto crash = fake_solver("crash.sh", "cat >/dev/null\necho boom >&2\nexit 1\n");
    CHECK(code_of([&] { (void)run_solver("a.", with(crash)); }) == ErrorCode::SolverFailed);
    auto liar = fake_solver("liar.sh", "cat >/dev/null\necho UNSATISFIABLE\nexit 10\n");
    CHECK(code_of([&] { (void)run_solver("a.", with(liar)); }) == ErrorCode::OutputParseError);
    auto early = fake_solver("early.sh", "echo UNSATISFIABLE\nexit 20\n");
    std::string big(1 << 20, '%');
    CHECK(run_solver(big, with(early)).status == SolverStatus::Unsatisfiable);
    CHECK(code_of([&] { (void)run_solver("a.", with(early, 0)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("canned outcomes are interpreted") {
    auto p = testing::policy(testing::kSodPair2);
    auto program = emit_srcp_program(p, Budget{1});
    auto broken = interpret_srcp(decode_solver_output("Answer: 1\nremoved(u2)\nSATISFIABLE\n", 10), program);
    CHECK_FALSE(broken.decision);
    CHECK(std::get<Counterexample>(broken.witness).removed.members() == std::vector<std::size_t>{1});
    CHECK(interpret_srcp(decode_solver_output("UNSATISFIABLE\n", 20), program).decision);
    CHECK(code_of([&] { (void)interpret_srcp(decode_solver_output("UNKNOWN\n", 0), program); }) ==
          ErrorCode::IndeterminateResult);
    CHECK(code_of([&] {
              (void)interpret_srcp(decode_solver_output("Answer: 1\nremoved(zed)\nSATISFIABLE\n", 10), program);
          }) == ErrorCode::OutputParseError);

    auto oneshot = emit_orcp_program(p, Budget{0});
    auto play = interpret_orcp(
        decode_solver_output("Answer: 1\nassign(2,u1) assign(1,u2) order(1,2) sat\nSATISFIABLE\n", 10), oneshot);
    CHECK(play.decision);
    CHECK(std::get<WinningPlay>(play.witness).play == Play{{0, 1}, {1, 0}});
    CHECK_FALSE(interpret_orcp(decode_solver_output("UNSATISFIABLE\n", 20), oneshot).decision);
    CHECK(code_of([&] {
              (void)interpret_orcp(decode_solver_output("Answer: 1\nassign(1,u1) order(1,2)\nSATISFIABLE\n", 10),
                                   oneshot);
          }) == ErrorCode::InconsistentStrategy);
    CHECK(code_of([&] {
              (void)interpret_orcp(
                  decode_solver_output("Answer: 1\nassign(1,u1) assign(2,u2) order(1,2) order(2,1)\nSATISFIABLE\n", 10),
                  oneshot);
          }) == ErrorCode::InconsistentStrategy);
}

TEST_CASE("real solver decides the golden programs") {
    SolverConfig config;
    auto sample = parse_policy(
        "steps: prepare approve pay\norder: prepare < approve\norder: approve < pay\nusers: alice bob Carol dave\n"
        "auth: prepare alice; prepare bob; approve bob; approve Carol; pay Carol; pay dave; pay alice\n"
        "constraint: sod prepare approve\nconstraint: sod approve pay\n");
    for (std::size_t t = 0; t <= 2; ++t) {
        auto program = emit_srcp_program(sample.policy, Budget{t});
        auto v = interpret_srcp(run_solver(program, config), program);
        CHECK(v.decision == oracle::of(sample.policy).srcp(t));
        if (!v.decision) {
            const auto& removed = std::get<Counterexample>(v.witness).removed;
            CHECK(removed.size() <= t);
            CHECK(verify_counterexample(sample.policy, removed));
        }
        auto oneshot = emit_orcp_program(sample.policy, Budget{t});
        auto o = interpret_orcp(run_solver(oneshot, config), oneshot);
        CHECK(o.decision == oracle::of(sample.policy).orcp(t));
        if (o.decision) CHECK(verify_winning_play(sample.policy, std::get<WinningPlay>(o.witness).play, Budget{t}));
    }
}

TEST_CASE("real solver agrees with the deciders on small random policies") {
    SolverConfig config;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GenParams gp;
        gp.seed = seed;
        auto p = random_policy(gp);
        for (std::size_t t = 0; t <= 2; ++t) {
            auto r = xcheck_srcp(p, Budget{t}, config);
            CHECK_MESSAGE(r.ok(), to_json_line(r));
        }
    }
}
