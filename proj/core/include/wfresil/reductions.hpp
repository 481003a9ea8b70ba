#pragma once

// Instance generators for two hardness constructions, with brute-force
// deciders for their source problems:
//   Dynamic Hamiltonian Circuit  -> static resiliency
//   SuccRad(k) (radius of a circuit-represented digraph) -> one-shot resiliency

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wfresil/model.hpp"

namespace wfresil {

// Undirected graph without loops or multi-edges. Edges are stored as
// (smaller index, larger index), sorted.
struct SimpleGraph {
    std::vector<std::string> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    [[nodiscard]] bool adjacent(std::size_t a, std::size_t b) const;
    [[nodiscard]] std::optional<std::size_t> edge_index(std::size_t a, std::size_t b) const;
    [[nodiscard]] std::optional<std::size_t> find_vertex(std::string_view name) const;
    bool operator==(const SimpleGraph&) const = default;
};

// Normalizes and checks edges; throws Error{InvalidArgument} on loops,
// repeated edges or unknown vertices.
[[nodiscard]] SimpleGraph make_graph(std::vector<std::string> vertices,
                                     const std::vector<std::pair<std::string, std::string>>& edges);

// `vertices: a b c` and `edge: a b` lines, `#` comments.
[[nodiscard]] SimpleGraph parse_graph(std::string_view text);
[[nodiscard]] std::string serialize_graph(const SimpleGraph& g);

// Edge list such as "a-b,c-d" (empty string for no edges). Returns edge
// indices of g, sorted; throws Error{InvalidArgument} for non-edges.
[[nodiscard]] std::vector<std::size_t> parse_edge_list(const SimpleGraph& g, std::string_view text);

enum class GateKind { And, Or, Not, Const0, Const1, Input };

[[nodiscard]] std::string_view to_string(GateKind kind);

// Node i < inputs.size() is input i; node inputs.size() + j is gates[j].
// Operands are node indices that precede the gate. An Input gate copies the
// input node named by its single operand.
struct Gate {
    std::string id;
    GateKind kind = GateKind::Const0;
    std::vector<std::size_t> operands;
    bool operator==(const Gate&) const = default;
};

struct BooleanCircuit {
    std::vector<std::string> inputs;
    std::vector<Gate> gates;
    std::size_t output = 0; // node index

    [[nodiscard]] std::size_t node_count() const noexcept { return inputs.size() + gates.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return gates.size(); }
    bool operator==(const BooleanCircuit&) const = default;
};

// Throws Error{InvalidArgument} when arities or references are wrong.
void check_circuit(const BooleanCircuit& c);

[[nodiscard]] bool eval_circuit(const BooleanCircuit& c, const std::vector<bool>& bits);

// `inputs: a b`, `gate g = AND a b | OR a b | NOT a | CONST0 | CONST1 | INPUT a`,
// `output: g`. Throws SyntaxError or Error{InvalidArgument}.
[[nodiscard]] BooleanCircuit parse_circuit(std::string_view text);
[[nodiscard]] std::string serialize_circuit(const BooleanCircuit& c);

// Two-input circuit (inputs x1, y1) whose value on (x, y) is bit (2x + y)
// of `table`, i.e. table bit 0 is f(0,0), bit 1 f(0,1), bit 2 f(1,0), bit 3 f(1,1).
[[nodiscard]] BooleanCircuit circuit_from_truth_table(unsigned table);

struct ReductionOutput {
    WorkflowPolicy policy;
    Budget budget;
    std::map<std::string, std::string> step_provenance; // step name -> source entity
    std::map<std::string, std::string> user_provenance; // user name -> source entity
    std::vector<std::string> notes;
};

// Every D within b of size at most floor(|b|/2) leaves a Hamiltonian graph.
// A Hamiltonian cycle is a cyclic ordering of all vertices with consecutive
// vertices adjacent (the empty graph has one; a single vertex has none; two
// vertices have one iff they are adjacent). Throws Error{TooLarge} above 8 vertices.
[[nodiscard]] bool dhc_decide_bruteforce(const SimpleGraph& g, const std::vector<std::size_t>& b);
[[nodiscard]] bool has_hamiltonian_cycle(const SimpleGraph& g, const std::vector<bool>& removed_edges);

[[nodiscard]] ReductionOutput dhc_to_srcp(const SimpleGraph& g, const std::vector<std::size_t>& b);

// BC_=(x,y) or BC_G(x,y) or the walks x -> z1 -> ... -> zi -> y for i < k.
// Inputs are x (n bits), y (n bits), z1 .. z(k-1) (n bits each).
[[nodiscard]] BooleanCircuit build_reach_circuit(const BooleanCircuit& bc_g, std::size_t n, std::size_t k);

// Vertex v has bits (v >> (n-1)) & 1, ..., v & 1 as x1..xn.
[[nodiscard]] std::vector<std::vector<bool>> adjacency_matrix(const BooleanCircuit& bc_g, std::size_t n);
[[nodiscard]] std::size_t graph_radius(const std::vector<std::vector<bool>>& adjacency); // SIZE_MAX if infinite
// Throws Error{TooLarge} when n > 3.
[[nodiscard]] bool succrad_decide_bruteforce(const BooleanCircuit& bc_g, std::size_t n, std::size_t k);

[[nodiscard]] ReductionOutput succrad_to_orcp(const BooleanCircuit& bc_g, std::size_t n, std::size_t k);

} // namespace wfresil
