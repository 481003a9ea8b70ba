#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "support.hpp"
#include "wfresil/error.hpp"
#include "wfresil/harness.hpp"
#include "wfresil/policy_dsl.hpp"

using namespace wfresil;

TEST_CASE("random policies are deterministic and within bounds") {
    GenParams p;
    p.seed = 42;
    CHECK(random_policy(p) == random_policy(p));
    std::size_t differing = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        p.seed = seed;
        auto policy = random_policy(p);
        CHECK(policy.step_count() >= 1);
        CHECK(policy.step_count() <= 3);
        CHECK(policy.user_count() >= 1);
        CHECK(policy.user_count() <= 4);
        CHECK(policy.constraints().size() <= 2);
        for (const auto& c : policy.constraints()) CHECK(std::holds_alternative<SeparationOfDuty>(c));
        CHECK(parse_policy(serialize_policy(PolicyDocument{policy, {}})).policy == policy);
        GenParams q = p;
        q.seed = seed + 1;
        differing += !(random_policy(q) == policy);
    }
    CHECK(differing > 400);
}

TEST_CASE("auth density one authorizes every pair") {
    GenParams p;
    p.auth_density = 1.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        p.seed = seed;
        auto policy = random_policy(p);
        CHECK(policy.auth_pairs().size() == policy.step_count() * policy.user_count());
    }
}

TEST_CASE("generator parameters are checked") {
    GenParams p;
    p.steps = {3, 1};
    CHECK_THROWS_AS(check_params(p), Error);
    p = GenParams{};
    p.auth_density = 1.5;
    CHECK_THROWS_AS(check_params(p), Error);
    p = GenParams{};
    p.order_density = -0.1;
    CHECK_THROWS_AS((void)random_policy(p), Error);
}

TEST_CASE("static cross-check reports agreement and witnesses") {
    SolverConfig solver;
    auto r = xcheck_srcp(testing::policy(testing::kSodPair2), Budget{1}, solver);
    CHECK(r.check == "srcp");
    CHECK(r.oracle == std::optional<bool>{false});
    CHECK(r.asp == std::optional<bool>{false});
    CHECK(r.agree);
    CHECK(r.witness_valid == std::optional<bool>{true});
    CHECK(r.ok());

    auto ok = xcheck_srcp(testing::policy(testing::kSodPair3), Budget{1}, solver);
    CHECK(ok.oracle == std::optional<bool>{true});
    CHECK(ok.asp == std::optional<bool>{true});
    CHECK_FALSE(ok.witness_valid.has_value());
}

TEST_CASE("unguarded static program is caught by the cross-check") {
    // Removing u1 leaves step a without users; the published program misses that.
    auto p = testing::policy("steps: a\nusers: u1 u2\nauth: a u1\n");
    auto r = xcheck_srcp(p, Budget{1}, SolverConfig{}, SrcpEncoding::Figure);
    CHECK(r.oracle == std::optional<bool>{false});
    CHECK(r.asp == std::optional<bool>{true});
    CHECK_FALSE(r.agree);
    CHECK_FALSE(r.ok());
}

TEST_CASE("one-shot cross-check") {
    SolverConfig solver;
    auto bod = xcheck_orcp(testing::policy(testing::kBodPair2), Budget{1}, solver);
    CHECK(bod.oracle == std::optional<bool>{false});
    CHECK(bod.agree);
    auto sod = xcheck_orcp(testing::policy(testing::kSodPair3), Budget{1}, solver);
    CHECK(sod.asp == std::optional<bool>{true});
    CHECK(sod.witness_valid == std::optional<bool>{true});
    CHECK(sod.ok());
}

TEST_CASE("inclusion chain report") {
    auto r = inclusion_chain_check(testing::policy(testing::kBodPair2), Budget{1});
    REQUIRE(r.chain.size() == 5);
    CHECK(*r.chain[0]);
    CHECK(*r.chain[1]);
    CHECK_FALSE(*r.chain[2]);
    CHECK(r.chain_ok);
    auto zero = inclusion_chain_check(testing::policy(testing::kSodPair2), Budget{0});
    CHECK(zero.collapse_ok);
    auto tiny = inclusion_chain_check(testing::policy(testing::kSodPair3), Budget{1}, GameConfig{1, true});
    CHECK(tiny.skipped.has_value());
    CHECK(tiny.ok());
}

TEST_CASE("json lines carry every field") {
    auto r = inclusion_chain_check(testing::policy(testing::kSodPair3), Budget{1});
    r.seed = 9;
    auto j = nlohmann::json::parse(to_json_line(r));
    for (const char* key : {"seed", "check", "budget", "oracle", "asp", "agree", "oracle_witness", "asp_witness",
                            "witness_valid", "chain", "chain_ok", "collapse_ok", "skipped", "ok", "millis", "policy"})
        CHECK_MESSAGE(j.contains(key), key);
    CHECK(j["seed"] == 9);
    CHECK(j["chain"]["drcp"] == true);
    CHECK(j["ok"] == true);
    CHECK(j["policy"].get<std::string>().find("constraint: sod a b") != std::string::npos);
}

TEST_CASE("campaigns write one line per instance") {
    auto c = default_campaign(CampaignKind::Chain);
    c.first_seed = 3;
    c.last_seed = 12;
    std::ostringstream out;
    auto s = run_campaign(c, &out);
    CHECK(s.instances == 10);
    CHECK(s.ok());
    std::istringstream in(out.str());
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line); ++lines) CHECK(nlohmann::json::parse(line)["check"] == "chain");
    CHECK(lines == 10);
    auto [p1, t1] = campaign_instance(c, 7);
    auto [p2, t2] = campaign_instance(c, 7);
    CHECK(p1 == p2);
    CHECK(t1 == t2);
}

TEST_CASE("default campaigns") {
    auto s = default_campaign(CampaignKind::Srcp);
    CHECK(s.last_seed - s.first_seed + 1 == 500);
    CHECK(s.params.users.hi == 4);
    CHECK(s.budgets == std::vector<std::size_t>{0, 1, 2});
    auto o = default_campaign(CampaignKind::Orcp);
    CHECK(o.last_seed - o.first_seed + 1 == 200);
    CHECK(o.params.users.hi == 3);
    CHECK(o.budgets == std::vector<std::size_t>{0, 1});
}
