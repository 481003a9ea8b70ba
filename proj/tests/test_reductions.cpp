#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "wfresil/error.hpp"
#include "wfresil/games.hpp"
#include "wfresil/reductions.hpp"

using namespace wfresil;

namespace {

SimpleGraph complete_graph(std::size_t n) {
    std::vector<std::string> vs;
    std::vector<std::pair<std::string, std::string>> es;
    for (std::size_t i = 0; i < n; ++i) vs.push_back("v" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) es.emplace_back(vs[i], vs[j]);
    return make_graph(vs, es);
}

// Graph on n vertices whose edges are the set bits of mask over the pairs of K_n.
SimpleGraph subgraph(std::size_t n, unsigned mask) {
    auto k = complete_graph(n);
    std::vector<std::pair<std::string, std::string>> es;
    for (std::size_t e = 0; e < k.edges.size(); ++e)
        if ((mask >> e) & 1U) es.emplace_back(k.vertices[k.edges[e].first], k.vertices[k.edges[e].second]);
    return make_graph(k.vertices, es);
}

// Vertex sequences whose consecutive entries (cyclically) are adjacent.
std::size_t cyclic_sequences(const SimpleGraph& g) {
    const std::size_t n = g.vertices.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t count = 0;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = g.adjacent(perm[i], perm[(i + 1) % n]);
        count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

BooleanCircuit constant(bool value, std::size_t n) {
    std::string text = "inputs:";
    for (std::size_t j = 1; j <= n; ++j) text += " x" + std::to_string(j);
    for (std::size_t j = 1; j <= n; ++j) text += " y" + std::to_string(j);
    text += value ? "\ngate g = CONST1\noutput: g\n" : "\ngate g = CONST0\noutput: g\n";
    return parse_circuit(text);
}

BooleanCircuit random_circuit(std::mt19937_64& rng, std::size_t inputs, std::size_t gates) {
    std::vector<std::string> names;
    std::string text = "inputs:";
    for (std::size_t i = 0; i < inputs; ++i) {
        names.push_back("i" + std::to_string(i));
        text += " " + names.back();
    }
    text += "\n";
    for (std::size_t g = 0; g < gates; ++g) {
        auto pick = [&] { return names[rng() % names.size()]; };
        std::string id = "g" + std::to_string(g);
        switch (rng() % 3) {
        case 0: text += "gate " + id + " = AND " + pick() + " " + pick() + "\n"; break;
        case 1: text += "gate " + id + " = OR " + pick() + " " + pick() + "\n"; break;
        default: text += "gate " + id + " = NOT " + pick() + "\n";
        }
        names.push_back(id);
    }
    text += "output: " + names.back() + "\n";
    return parse_circuit(text);
}

// Exists x, for all y, exists z: reach(x, y, z).
bool quantified_reach(const BooleanCircuit& reach, std::size_t n, std::size_t k) {
    const std::size_t vertices = std::size_t{1} << n;
    const std::size_t zbits = n * (k - 1);
    auto bits_of = [n](std::size_t v, std::vector<bool>& out, std::size_t at) {
        for (std::size_t j = 0; j < n; ++j) out[at + j] = (v >> (n - 1 - j)) & 1U;
    };
    std::vector<bool> bits(reach.inputs.size());
    for (std::size_t x = 0; x < vertices; ++x) {
        bool all = true;
        for (std::size_t y = 0; y < vertices && all; ++y) {
            bool any = false;
            for (std::size_t z = 0; z < (std::size_t{1} << zbits) && !any; ++z) {
                bits_of(x, bits, 0);
                bits_of(y, bits, n);
                for (std::size_t b = 0; b < zbits; ++b) bits[2 * n + b] = (z >> (zbits - 1 - b)) & 1U;
                any = eval_circuit(reach, bits);
            }
            all = any;
        }
        if (all) return true;
    }
    return false;
}

} // namespace

TEST_CASE("graph text format") {
    auto g = parse_graph("# triangle\nvertices: a b c\nedge: a b\nedge: c b\nedge: a c\n");
    CHECK(g.vertices == std::vector<std::string>{"a", "b", "c"});
    CHECK(g.edges == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(parse_graph(serialize_graph(g)) == g);
    CHECK(parse_edge_list(g, "") == std::vector<std::size_t>{});
    CHECK(parse_edge_list(g, " c-b , a-b") == std::vector<std::size_t>{0, 2});
    CHECK_THROWS_AS((void)parse_edge_list(g, "a-d"), Error);
    CHECK_THROWS_AS((void)make_graph({"a"}, {{"a", "a"}}), Error);
    CHECK_THROWS_AS((void)make_graph({"a", "b"}, {{"a", "b"}, {"b", "a"}}), Error);
    CHECK_THROWS_AS((void)make_graph({"a", "a"}, {}), Error);
    CHECK_THROWS_AS((void)parse_graph("vertices: a\nedge: a z\n"), Error);
}

TEST_CASE("hamiltonian cycle conventions") {
    CHECK(has_hamiltonian_cycle(subgraph(0, 0), {}));
    CHECK_FALSE(has_hamiltonian_cycle(subgraph(1, 0), {}));
    CHECK(has_hamiltonian_cycle(subgraph(2, 1), {}));
    CHECK_FALSE(has_hamiltonian_cycle(subgraph(2, 0), {}));
    CHECK(has_hamiltonian_cycle(complete_graph(3), {}));
    CHECK_FALSE(has_hamiltonian_cycle(complete_graph(3), {true, false, false}));
}

TEST_CASE("dynamic hamiltonian examples") {
    auto k3 = complete_graph(3);
    auto r = dhc_to_srcp(k3, {});
    CHECK(r.policy.step_count() == 6);
    CHECK(r.budget.t == 0);
    CHECK(r.step_provenance.size() == 6);
    CHECK(r.user_provenance.size() == r.policy.user_count());
    CHECK(dhc_decide_bruteforce(k3, {}));
    CHECK(decide_srcp(r.policy, r.budget).decision);

    auto c4 = parse_graph("vertices: a b c d\nedge: a b\nedge: b c\nedge: c d\nedge: a d\n");
    auto b = parse_edge_list(c4, "a-b,c-d");
    CHECK_FALSE(dhc_decide_bruteforce(c4, b));
    auto rc4 = dhc_to_srcp(c4, b);
    CHECK(rc4.budget.t == 1);
    CHECK_FALSE(decide_srcp(rc4.policy, rc4.budget).decision);

    auto p3 = parse_graph("vertices: a b c\nedge: a b\nedge: b c\n");
    CHECK_FALSE(dhc_decide_bruteforce(p3, {}));
    CHECK_FALSE(decide_srcp(dhc_to_srcp(p3, {}).policy, Budget{0}).decision);
    CHECK_THROWS_AS((void)dhc_decide_bruteforce(complete_graph(9), {}), Error);
}

TEST_CASE("valid plans correspond to hamiltonian vertex sequences") {
    for (std::size_t n = 0; n <= 5; ++n) {
        const unsigned pairs = static_cast<unsigned>(n * (n - (n > 0)) / 2);
        for (unsigned mask = 0; mask < (1U << pairs); mask += (n == 5 ? 37 : 1)) {
            auto g = subgraph(n, mask);
            auto r = dhc_to_srcp(g, {});
            CHECK_MESSAGE(enumerate_valid_plans(r.policy).size() == cyclic_sequences(g), "n ", n, " mask ", mask);
        }
    }
}

TEST_CASE("reduced policies agree with brute force on small graphs") {
    for (std::size_t n = 0; n <= 3; ++n) {
        const unsigned pairs = static_cast<unsigned>(n * (n - (n > 0)) / 2);
        for (unsigned mask = 0; mask < (1U << pairs); ++mask) {
            auto g = subgraph(n, mask);
            for (unsigned bmask = 0; bmask < (1U << g.edges.size()); ++bmask) {
                std::vector<std::size_t> b;
                for (std::size_t e = 0; e < g.edges.size(); ++e)
                    if ((bmask >> e) & 1U) b.push_back(e);
                auto r = dhc_to_srcp(g, b);
                bool expected = dhc_decide_bruteforce(g, b);
                CHECK(decide_srcp(r.policy, r.budget).decision == expected);
                CHECK(oracle::of(r.policy).srcp(r.budget.t) == expected);
            }
        }
    }
}

TEST_CASE("circuit text format and evaluation") {
    auto c = parse_circuit("inputs: a b\ngate g1 = AND a b\ngate g2 = NOT g1\ngate g3 = INPUT a\n"
                           "gate g4 = OR g2 g3\noutput: g4\n");
    CHECK(c.size() == 4);
    CHECK(parse_circuit(serialize_circuit(c)) == c);
    CHECK(eval_circuit(c, {false, false}));
    CHECK(eval_circuit(c, {true, true}));
    CHECK(eval_circuit(c, {false, true}));
    CHECK_THROWS_AS((void)parse_circuit("inputs: a\ngate g = AND a\noutput: g\n"), Error);
    CHECK_THROWS_AS((void)parse_circuit("inputs: a\ngate g = XOR a a\noutput: g\n"), Error);
    CHECK_THROWS_AS((void)parse_circuit("inputs: a\ngate g = NOT h\noutput: g\n"), Error);
    BooleanCircuit bad{{"a"}, {Gate{"g", GateKind::Not, {1}}}, 1};
    CHECK_THROWS_AS(check_circuit(bad), Error);
}

TEST_CASE("truth table circuits") {
    for (unsigned table = 0; table < 16; ++table) {
        auto c = circuit_from_truth_table(table);
        for (unsigned x = 0; x < 2; ++x)
            for (unsigned y = 0; y < 2; ++y)
                CHECK(eval_circuit(c, {x == 1, y == 1}) == (((table >> (2 * x + y)) & 1U) == 1));
    }
}

TEST_CASE("reachability circuit") {
    // n = 1, only the edge 0 -> 1 (x = 0, y = 1).
    auto edge01 = circuit_from_truth_table(0b0010);
    auto reach = build_reach_circuit(edge01, 1, 2);
    CHECK(reach.inputs == std::vector<std::string>{"x1", "y1", "z1_1"});
    CHECK(eval_circuit(reach, {false, false, false}));
    CHECK(eval_circuit(reach, {false, true, false}));
    CHECK_FALSE(eval_circuit(reach, {true, false, false}));
    CHECK_FALSE(eval_circuit(reach, {true, false, true}));
    CHECK_THROWS_AS((void)build_reach_circuit(edge01, 1, 1), Error);
    CHECK_THROWS_AS((void)build_reach_circuit(edge01, 2, 2), Error);
}

TEST_CASE("radius brute force examples") {
    CHECK(succrad_decide_bruteforce(constant(true, 1), 1, 1));
    CHECK_FALSE(succrad_decide_bruteforce(constant(false, 1), 1, 2));
    CHECK(graph_radius(adjacency_matrix(constant(false, 2), 2)) == SIZE_MAX);
    // Directed 4-cycle 0 -> 1 -> 2 -> 3 -> 0 has radius 3.
    auto cycle = parse_circuit(
        "inputs: x1 x2 y1 y2\n"
        "gate a = NOT x2\ngate b = AND a y2\ngate c = NOT y1\ngate d = AND x1 y1\ngate e = NOT x1\n"
        "gate f = AND e c\ngate g = OR d f\ngate h = AND b g\n"
        "gate i = NOT y2\ngate j = AND x2 i\ngate k = NOT x1\ngate l = AND k y1\ngate m = NOT y1\n"
        "gate o = AND x1 m\ngate p = OR l o\ngate q = AND j p\ngate r = OR h q\noutput: r\n");
    CHECK(graph_radius(adjacency_matrix(cycle, 2)) == 3);
    CHECK(succrad_decide_bruteforce(cycle, 2, 3));
    CHECK_FALSE(succrad_decide_bruteforce(cycle, 2, 2));
    CHECK_THROWS_AS((void)succrad_decide_bruteforce(constant(true, 4), 4, 2), Error);
}

TEST_CASE("quantified reachability matches the radius") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        std::size_t n = 1 + static_cast<std::size_t>(round % 2);
        auto bc = random_circuit(rng, 2 * n, 3 + rng() % 8);
        for (std::size_t k = 2; k <= 3; ++k) {
            auto reach = build_reach_circuit(bc, n, k);
            CHECK(quantified_reach(reach, n, k) == succrad_decide_bruteforce(bc, n, k));
        }
    }
}

TEST_CASE("reachability circuit size stays polynomial") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 40; ++round) {
        std::size_t n = 1 + static_cast<std::size_t>(round % 3);
        auto bc = random_circuit(rng, 2 * n, 1 + rng() % 20);
        for (std::size_t k = 2; k <= 5; ++k) {
            auto reach = build_reach_circuit(bc, n, k);
            CHECK(reach.size() <= 2 * k * k * bc.size() + 8 * k * n + 8);
        }
    }
}

TEST_CASE("one-shot reduction output") {
    for (std::size_t n = 1; n <= 2; ++n) {
        auto r = succrad_to_orcp(constant(true, n), n, 2);
        CHECK(r.budget.t == n);
        std::size_t stars = 0;
        for (const auto& u : r.policy.users())
            if (u.rfind("f_", 0) == 0 || u.rfind("t_", 0) == 0) ++stars;
        CHECK(stars == 2 * n);
        CHECK(r.user_provenance.size() == r.policy.user_count());
        CHECK(r.step_provenance.size() == r.policy.step_count());
        CHECK_FALSE(r.notes.empty());
    }
    CHECK_THROWS_AS((void)succrad_to_orcp(constant(true, 0), 0, 2), Error);
}

TEST_CASE("one-shot reduction agrees with the radius for every two-vertex graph") {
    for (unsigned table = 0; table < 16; ++table) {
        auto bc = circuit_from_truth_table(table);
        auto r = succrad_to_orcp(bc, 1, 2);
        CHECK_MESSAGE(decide_orcp(r.policy, r.budget).decision == succrad_decide_bruteforce(bc, 1, 2), "table ",
                      table);
    }
}
