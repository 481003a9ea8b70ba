#include <doctest.h>

#include <random>

#include "support.hpp"
#include "wfresil/error.hpp"
#include "wfresil/policy_dsl.hpp"

using namespace wfresil;

namespace {

std::string error_of(std::string_view text) {
    try {
        (void)parse_policy(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("parses the separation example") {
    auto doc = parse_policy("steps: a b\nusers: u1 u2\nauth: a u1; a u2; b u1; b u2\nconstraint: sod a b");
    CHECK(doc.policy.steps() == std::vector<std::string>{"a", "b"});
    CHECK(doc.policy.users() == std::vector<std::string>{"u1", "u2"});
    CHECK(doc.policy.auth_pairs().size() == 4);
    REQUIRE(doc.policy.constraints().size() == 1);
    CHECK(std::holds_alternative<SeparationOfDuty>(doc.policy.constraints()[0]));
    CHECK_FALSE(doc.budget.has_value());
}

TEST_CASE("parses every clause form") {
    auto doc = parse_policy(
        "# comment line\n"
        "steps: a b c   # trailing comment\n"
        "users: u1 u2\n"
        "order: a < b\n"
        "order: b < c\n"
        "auth: a u1; a u2\n"
        "auth: b u1; c u2\n"
        "relation r: u1 u2; u2 u1\n"
        "constraint: bod a c\n"
        "constraint: entail r { a } { b c }\n"
        "constraint: allow { a b } u1 u1; u2 u1\n"
        "budget: 2\n");
    const auto& p = doc.policy;
    CHECK(p.order_reduction().size() == 2);
    CHECK(p.precedes(0, 2));
    REQUIRE(doc.relations().size() == 1);
    CHECK(doc.relations()[0].name() == "r");
    CHECK(doc.relations()[0].contains(1, 0));
    CHECK(p.constraints().size() == 3);
    REQUIRE(doc.budget.has_value());
    CHECK(doc.budget->t == 2);
    const auto& e = std::get<Entailment>(p.constraints()[1]);
    CHECK(e.lhs == std::vector<StepIndex>{0});
    CHECK(e.rhs == std::vector<StepIndex>{1, 2});
    CHECK_FALSE(e.is_type1());
}

TEST_CASE("semantic errors propagate from validation") {
    CHECK(error_of("steps: b\norder: b < b\n").rfind("CyclicOrder", 0) == 0);
    CHECK(error_of("steps: a\nusers: u\nauth: a v\n").rfind("DanglingReference", 0) == 0);
    CHECK(error_of("steps: a\nconstraint: sod a a\n").rfind("MalformedConstraint", 0) == 0);
}

TEST_CASE("syntax errors carry line and column") {
    CHECK(error_of("steps: a\nusers: u1\nbogus: x\n") == "SyntaxError: 3:1: unknown clause 'bogus'");
    CHECK(error_of("steps: a\nauth: a\n").rfind("SyntaxError: 2:", 0) == 0);
    CHECK(error_of("steps: a b\norder: a b\n").rfind("SyntaxError: 2:", 0) == 0);
    CHECK(error_of("steps: a\nsteps: b\n").rfind("SyntaxError: 2:1:", 0) == 0);
    CHECK(error_of("steps: a$\n") == "SyntaxError: 1:9: unexpected character");
    CHECK(error_of("budget: x\n").rfind("SyntaxError: 1:9:", 0) == 0);
    CHECK(error_of("steps: a\nconstraint: entail r { a } b\n").rfind("SyntaxError: 2:", 0) == 0);
    CHECK(error_of("steps a\n").rfind("SyntaxError: 1:", 0) == 0);
    CHECK(error_of("steps: a b\nconstraint: xor a b\n") == "SyntaxError: 2:13: unknown constraint kind 'xor'");
}

TEST_CASE("empty policy serializes to the canonical form") {
    CHECK(serialize_policy(parse_policy("")) == "steps:\nusers:\n");
    CHECK(serialize_policy(parse_policy("# nothing\n\n")) == "steps:\nusers:\n");
}

TEST_CASE("serialization is canonical") {
    auto doc = parse_policy("constraint: sod a b\nauth: b u2; a u1\nusers: u1 u2\nsteps: a b\nbudget: 1\norder: a < b\n");
    CHECK(serialize_policy(doc) ==
          "steps: a b\n"
          "order: a < b\n"
          "users: u1 u2\n"
          "auth: a u1; b u2\n"
          "constraint: sod a b\n"
          "budget: 1\n");
    auto doc2 = parse_policy(
        "steps: a b c\nusers: u1 u2\norder: a < b\norder: b < c\norder: a < c\n"
        "relation r: u2 u1; u1 u2\nconstraint: entail r { a } { b c }\nconstraint: allow { b a } u2 u1; u1 u1; u2 u1\n");
    CHECK(serialize_policy(doc2) ==
          "steps: a b c\n"
          "order: a < b\n"
          "order: b < c\n"
          "users: u1 u2\n"
          "relation r: u1 u2; u2 u1\n"
          "constraint: entail r { a } { b c }\n"
          "constraint: allow { b a } u1 u1; u2 u1\n");
}

TEST_CASE("round trip over random documents") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        PolicyDocument doc{validate_policy(testing::random_draft(seed, 4, 4)), {}};
        if (seed % 3 == 0) doc.budget = Budget{seed % 4};
        auto text = serialize_policy(doc);
        auto back = parse_policy(text);
        CHECK(back == doc);
        CHECK(serialize_policy(back) == text);
    }
}

TEST_CASE("serialization is injective on distinct documents") {
    std::vector<std::pair<std::string, PolicyDocument>> seen;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        PolicyDocument doc{validate_policy(testing::random_draft(seed, 3, 2)), {}};
        auto text = serialize_policy(doc);
        for (const auto& [t, d] : seen) CHECK((t == text) == (d == doc));
        seen.emplace_back(text, doc);
    }
}

TEST_CASE("parser is total on fuzzed input") {
    std::mt19937_64 rng(2024);
    const std::string alphabet = "steps:usr<;{}#abu12 \n\t\r$-_orderauthrelationconstraintsodbodentailallowbudget";
    std::vector<std::string> corpus = {
        testing::kSodPair3, testing::kBodPair2,
        "steps: a b c\nusers: u1 u2\nrelation r: u1 u2\nconstraint: entail r { a } { b c }\nbudget: 3\n",
        "steps: a b\nusers: u1\nconstraint: allow { a b } u1 u1\n"};
    std::size_t parsed = 0, rejected = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string text;
        switch (i % 3) {
        case 0: { // raw bytes
            std::size_t len = rng() % 64;
            for (std::size_t k = 0; k < len; ++k) text.push_back(static_cast<char>(rng() % 256));
            break;
        }
        case 1: { // grammar-flavoured characters
            std::size_t len = rng() % 80;
            for (std::size_t k = 0; k < len; ++k) text.push_back(alphabet[rng() % alphabet.size()]);
            break;
        }
        default: { // mutations of valid documents
            text = corpus[rng() % corpus.size()];
            std::size_t edits = 1 + rng() % 4;
            for (std::size_t k = 0; k < edits && !text.empty(); ++k) {
                std::size_t at = rng() % text.size();
                switch (rng() % 3) {
                case 0: text.erase(at, 1); break;
                case 1: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
                default: text[at] = static_cast<char>(rng() % 128);
                }
            }
        }
        }
        try {
            auto doc = parse_policy(text);
            ++parsed;
            CHECK(parse_policy(serialize_policy(doc)) == doc);
        } catch (const SyntaxError& e) {
            ++rejected;
            CHECK(std::string(e.what()).rfind("SyntaxError: ", 0) == 0);
        } catch (const Error&) {
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 10000);
    CHECK(parsed > 0);
}

TEST_CASE("parse_policy_draft keeps names unchecked") {
    std::optional<Budget> budget;
    auto d = parse_policy_draft("steps: a\nauth: a ghost\nbudget: 4\n", &budget);
    CHECK(d.auth.size() == 1);
    REQUIRE(budget.has_value());
    CHECK(budget->t == 4);
}
