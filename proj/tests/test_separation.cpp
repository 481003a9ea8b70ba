#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "wfresil/games.hpp"
#include "wfresil/policy_dsl.hpp"

using namespace wfresil;

namespace {

PolicyDocument fixture(const std::string& name) {
    std::ifstream in(std::string(WFRESIL_TEST_DIR) + "/fixtures/" + name);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_policy(ss.str());
}

// wsp, srcp, orcp, crcp, drcp
std::vector<bool> chain(const PolicyDocument& doc) {
    std::vector<bool> out;
    for (auto a : {Analysis::Wsp, Analysis::Srcp, Analysis::Orcp, Analysis::Crcp, Analysis::Drcp})
        out.push_back(decide(a, doc.policy, *doc.budget).decision);
    return out;
}

std::vector<bool> oracle_chain(const PolicyDocument& doc) {
    auto g = oracle::of(doc.policy);
    std::size_t t = doc.budget->t;
    return {g.wsp(), g.srcp(t), g.orcp(t), g.crcp(t), g.drcp(t)};
}

} // namespace

TEST_CASE("static but not one-shot") {
    auto doc = fixture("srcp_not_orcp.policy");
    const std::vector<bool> expected{true, true, false, false, false};
    CHECK(oracle_chain(doc) == expected);
    CHECK(chain(doc) == expected);
}

TEST_CASE("one-shot but not decremental") {
    auto doc = fixture("orcp_not_crcp.policy");
    const std::vector<bool> expected{true, true, true, false, false};
    CHECK(oracle_chain(doc) == expected);
    CHECK(chain(doc) == expected);
}

TEST_CASE("decremental but not dynamic") {
    auto doc = fixture("crcp_not_drcp.policy");
    const std::vector<bool> expected{true, true, true, true, false};
    CHECK(oracle_chain(doc) == expected);
    CHECK(chain(doc) == expected);
}
