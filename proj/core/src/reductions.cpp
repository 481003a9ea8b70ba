#include "wfresil/reductions.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>

#include "wfresil/error.hpp"

namespace wfresil {

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

bool SimpleGraph::adjacent(std::size_t a, std::size_t b) const { return edge_index(a, b).has_value(); }

std::optional<std::size_t> SimpleGraph::edge_index(std::size_t a, std::size_t b) const {
    auto key = std::minmax(a, b);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair(key.first, key.second));
    if (it == edges.end() || *it != std::pair(key.first, key.second)) return std::nullopt;
    return static_cast<std::size_t>(it - edges.begin());
}

std::optional<std::size_t> SimpleGraph::find_vertex(std::string_view name) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == name) return i;
    return std::nullopt;
}

SimpleGraph make_graph(std::vector<std::string> vertices,
                       const std::vector<std::pair<std::string, std::string>>& edges) {
    SimpleGraph g;
    g.vertices = std::move(vertices);
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        if (!is_token(g.vertices[i]))
            throw Error(ErrorCode::InvalidArgument, "vertex name '" + g.vertices[i] + "' is not a token");
        for (std::size_t j = 0; j < i; ++j)
            if (g.vertices[i] == g.vertices[j])
                throw Error(ErrorCode::InvalidArgument, "vertex '" + g.vertices[i] + "' declared twice");
    }
    for (const auto& [a, b] : edges) {
        auto ia = g.find_vertex(a);
        auto ib = g.find_vertex(b);
        if (!ia || !ib) throw Error(ErrorCode::InvalidArgument, "edge " + a + "-" + b + " names an unknown vertex");
        if (*ia == *ib) throw Error(ErrorCode::InvalidArgument, "loop at vertex '" + a + "'");
        auto key = std::minmax(*ia, *ib);
        g.edges.emplace_back(key.first, key.second);
    }
    std::sort(g.edges.begin(), g.edges.end());
    if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end())
        throw Error(ErrorCode::InvalidArgument, "repeated edge");
    return g;
}

namespace {

// Whitespace-separated words of each non-empty line, comments removed.
struct TextLine {
    std::size_t number;
    std::vector<std::string> words;
    std::vector<std::size_t> columns;
};

std::vector<TextLine> split_lines(std::string_view text) {
    std::vector<TextLine> out;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        ++number;
        start = nl + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        TextLine tl{number, {}, {}};
        std::size_t i = 0;
        while (i < line.size()) {
            char c = line[i];
            if (c == ' ' || c == '\t' || c == '\r') {
                ++i;
                continue;
            }
            if (c == ':' || c == '=') {
                tl.words.emplace_back(1, c);
                tl.columns.push_back(i + 1);
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != ':' &&
                   line[j] != '=')
                ++j;
            std::string word(line.substr(i, j - i));
            if (!is_token(word)) throw SyntaxError(number, i + 1, "'" + word + "' is not an identifier");
            tl.words.push_back(std::move(word));
            tl.columns.push_back(i + 1);
            i = j;
        }
        if (!tl.words.empty()) out.push_back(std::move(tl));
    }
    return out;
}

void expect_colon(const TextLine& line) {
    if (line.words.size() < 2 || line.words[1] != ":")
        throw SyntaxError(line.number, line.columns.size() > 1 ? line.columns[1] : line.columns[0] + line.words[0].size(),
                          "expected ':'");
}

} // namespace

SimpleGraph parse_graph(std::string_view text) {
    std::vector<std::string> vertices;
    std::vector<std::pair<std::string, std::string>> edges;
    bool seen_vertices = false;
    for (const auto& line : split_lines(text)) {
        const auto& w = line.words;
        expect_colon(line);
        if (w[0] == "vertices") {
            if (seen_vertices) throw SyntaxError(line.number, line.columns[0], "repeated 'vertices' clause");
            seen_vertices = true;
            vertices.assign(w.begin() + 2, w.end());
        } else if (w[0] == "edge") {
            if (w.size() != 4) throw SyntaxError(line.number, line.columns[0], "edge needs two vertices");
            edges.emplace_back(w[2], w[3]);
        } else {
            throw SyntaxError(line.number, line.columns[0], "unknown clause '" + w[0] + "'");
        }
    }
    return make_graph(std::move(vertices), edges);
}

std::string serialize_graph(const SimpleGraph& g) {
    std::string out = "vertices:";
    for (const auto& v : g.vertices) out += " " + v;
    out += "\n";
    for (auto [a, b] : g.edges) out += "edge: " + g.vertices[a] + " " + g.vertices[b] + "\n";
    return out;
}

std::vector<std::size_t> parse_edge_list(const SimpleGraph& g, std::string_view text) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(start, comma - start);
        start = comma + 1;
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.empty()) continue;
        auto dash = item.find('-');
        if (dash == std::string_view::npos)
            throw Error(ErrorCode::InvalidArgument, "edge '" + std::string(item) + "' is not of the form a-b");
        auto a = g.find_vertex(item.substr(0, dash));
        auto b = g.find_vertex(item.substr(dash + 1));
        std::optional<std::size_t> e;
        if (a && b) e = g.edge_index(*a, *b);
        if (!e) throw Error(ErrorCode::InvalidArgument, "'" + std::string(item) + "' is not an edge of the graph");
        out.push_back(*e);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Circuits
// ---------------------------------------------------------------------------

std::string_view to_string(GateKind kind) {
    switch (kind) {
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Not: return "NOT";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
    case GateKind::Input: return "INPUT";
    }
    return "?";
}

namespace {

std::size_t arity(GateKind kind) {
    switch (kind) {
    case GateKind::And:
    case GateKind::Or: return 2;
    case GateKind::Not:
    case GateKind::Input: return 1;
    default: return 0;
    }
}

} // namespace

void check_circuit(const BooleanCircuit& c) {
    for (std::size_t j = 0; j < c.gates.size(); ++j) {
        const auto& g = c.gates[j];
        std::size_t node = c.inputs.size() + j;
        if (g.operands.size() != arity(g.kind))
            throw Error(ErrorCode::InvalidArgument, "gate '" + g.id + "' has the wrong number of operands");
        for (auto op : g.operands)
            if (op >= node) throw Error(ErrorCode::InvalidArgument, "gate '" + g.id + "' uses a later node");
        if (g.kind == GateKind::Input && g.operands[0] >= c.inputs.size())
            throw Error(ErrorCode::InvalidArgument, "INPUT gate '" + g.id + "' must name an input");
    }
    if (c.output >= c.node_count()) throw Error(ErrorCode::InvalidArgument, "circuit output is undefined");
}

bool eval_circuit(const BooleanCircuit& c, const std::vector<bool>& bits) {
    if (bits.size() < c.inputs.size()) throw Error(ErrorCode::InvalidArgument, "missing input bits");
    std::vector<bool> value(c.node_count());
    for (std::size_t i = 0; i < c.inputs.size(); ++i) value[i] = bits[i];
    for (std::size_t j = 0; j < c.gates.size(); ++j) {
        const auto& g = c.gates[j];
        bool v = false;
        switch (g.kind) {
        case GateKind::And: v = value[g.operands[0]] && value[g.operands[1]]; break;
        case GateKind::Or: v = value[g.operands[0]] || value[g.operands[1]]; break;
        case GateKind::Not: v = !value[g.operands[0]]; break;
        case GateKind::Const0: v = false; break;
        case GateKind::Const1: v = true; break;
        case GateKind::Input: v = value[g.operands[0]]; break;
        }
        value[c.inputs.size() + j] = v;
    }
    return value[c.output];
}

BooleanCircuit parse_circuit(std::string_view text) {
    BooleanCircuit c;
    std::map<std::string, std::size_t> nodes;
    bool seen_inputs = false;
    std::optional<std::string> output;
    std::size_t output_line = 0, output_column = 0;
    for (const auto& line : split_lines(text)) {
        const auto& w = line.words;
        auto node_of = [&](std::size_t i) {
            auto it = nodes.find(w[i]);
            if (it == nodes.end()) throw SyntaxError(line.number, line.columns[i], "undefined node '" + w[i] + "'");
            return it->second;
        };
        if (w[0] == "inputs") {
            expect_colon(line);
            if (seen_inputs || !c.gates.empty())
                throw SyntaxError(line.number, line.columns[0], "'inputs' must come once, before any gate");
            seen_inputs = true;
            for (std::size_t i = 2; i < w.size(); ++i) {
                if (!nodes.emplace(w[i], c.inputs.size()).second)
                    throw SyntaxError(line.number, line.columns[i], "node '" + w[i] + "' defined twice");
                c.inputs.push_back(w[i]);
            }
        } else if (w[0] == "gate") {
            if (w.size() < 4 || w[2] != "=") throw SyntaxError(line.number, line.columns[0], "expected 'gate <id> = <kind> ...'");
            Gate g;
            g.id = w[1];
            const std::string& kind = w[3];
            if (kind == "AND") g.kind = GateKind::And;
            else if (kind == "OR") g.kind = GateKind::Or;
            else if (kind == "NOT") g.kind = GateKind::Not;
            else if (kind == "CONST0") g.kind = GateKind::Const0;
            else if (kind == "CONST1") g.kind = GateKind::Const1;
            else if (kind == "INPUT") g.kind = GateKind::Input;
            else throw SyntaxError(line.number, line.columns[3], "unknown gate kind '" + kind + "'");
            if (w.size() != 4 + arity(g.kind))
                throw SyntaxError(line.number, line.columns[3], kind + " takes " + std::to_string(arity(g.kind)) + " operands");
            for (std::size_t i = 4; i < w.size(); ++i) g.operands.push_back(node_of(i));
            if (g.kind == GateKind::Input && g.operands[0] >= c.inputs.size())
                throw SyntaxError(line.number, line.columns[4], "INPUT must name an input");
            if (!nodes.emplace(g.id, c.node_count()).second)
                throw SyntaxError(line.number, line.columns[1], "node '" + g.id + "' defined twice");
            c.gates.push_back(std::move(g));
        } else if (w[0] == "output") {
            expect_colon(line);
            if (w.size() != 3 || output) throw SyntaxError(line.number, line.columns[0], "expected one 'output: <id>'");
            output = w[2];
            output_line = line.number;
            output_column = line.columns[2];
        } else {
            throw SyntaxError(line.number, line.columns[0], "unknown clause '" + w[0] + "'");
        }
    }
    if (!output) throw SyntaxError(1, 1, "missing 'output' clause");
    auto it = nodes.find(*output);
    if (it == nodes.end()) throw SyntaxError(output_line, output_column, "undefined node '" + *output + "'");
    c.output = it->second;
    check_circuit(c);
    return c;
}

std::string serialize_circuit(const BooleanCircuit& c) {
    auto name = [&](std::size_t node) {
        return node < c.inputs.size() ? c.inputs[node] : c.gates[node - c.inputs.size()].id;
    };
    std::string out = "inputs:";
    for (const auto& i : c.inputs) out += " " + i;
    out += "\n";
    for (const auto& g : c.gates) {
        out += "gate " + g.id + " = " + std::string(to_string(g.kind));
        for (auto op : g.operands) out += " " + name(op);
        out += "\n";
    }
    out += "output: " + name(c.output) + "\n";
    return out;
}

namespace {

class CircuitBuilder {
public:
    explicit CircuitBuilder(std::vector<std::string> inputs) { c_.inputs = std::move(inputs); }

    std::size_t gate(GateKind kind, std::vector<std::size_t> operands) {
        c_.gates.push_back({"g" + std::to_string(c_.gates.size() + 1), kind, std::move(operands)});
        return c_.node_count() - 1;
    }
    std::size_t op_and(std::size_t a, std::size_t b) { return gate(GateKind::And, {a, b}); }
    std::size_t op_or(std::size_t a, std::size_t b) { return gate(GateKind::Or, {a, b}); }
    std::size_t op_not(std::size_t a) { return gate(GateKind::Not, {a}); }

    // Copy of `sub` with its inputs bound to the given nodes; returns its output node.
    std::size_t instantiate(const BooleanCircuit& sub, const std::vector<std::size_t>& bind) {
        std::vector<std::size_t> map(sub.node_count());
        for (std::size_t i = 0; i < sub.inputs.size(); ++i) map[i] = bind[i];
        for (std::size_t j = 0; j < sub.gates.size(); ++j) {
            const auto& g = sub.gates[j];
            std::vector<std::size_t> ops;
            for (auto op : g.operands) ops.push_back(map[op]);
            map[sub.inputs.size() + j] = gate(g.kind, std::move(ops));
        }
        return map[sub.output];
    }

    BooleanCircuit finish(std::size_t output) {
        c_.output = output;
        return std::move(c_);
    }

private:
    BooleanCircuit c_;
};

} // namespace

BooleanCircuit circuit_from_truth_table(unsigned table) {
    CircuitBuilder b({"x1", "y1"});
    std::optional<std::size_t> acc;
    for (unsigned row = 0; row < 4; ++row) {
        if (!((table >> row) & 1U)) continue;
        std::size_t x = (row & 2U) ? 0 : b.op_not(0);
        std::size_t y = (row & 1U) ? 1 : b.op_not(1);
        std::size_t term = b.op_and(x, y);
        acc = acc ? b.op_or(*acc, term) : term;
    }
    if (!acc) acc = b.gate(GateKind::Const0, {});
    return b.finish(*acc);
}

// ---------------------------------------------------------------------------
// Dynamic Hamiltonian Circuit
// ---------------------------------------------------------------------------

bool has_hamiltonian_cycle(const SimpleGraph& g, const std::vector<bool>& removed_edges) {
    const std::size_t n = g.vertices.size();
    if (n == 0) return true;
    auto adj = [&](std::size_t a, std::size_t b) {
        auto e = g.edge_index(a, b);
        return e && !(*e < removed_edges.size() && removed_edges[*e]);
    };
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    // Vertex 0 stays first; every rotation of a cycle is covered that way.
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = adj(perm[i], perm[(i + 1) % n]);
        if (ok) return true;
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return false;
}

bool dhc_decide_bruteforce(const SimpleGraph& g, const std::vector<std::size_t>& b) {
    if (g.vertices.size() > 8) throw Error(ErrorCode::TooLarge, "brute force is limited to 8 vertices");
    for (auto e : b)
        if (e >= g.edges.size()) throw Error(ErrorCode::InvalidArgument, "B must be a subset of the edges");
    const std::size_t limit = b.size() / 2;
    const std::size_t subsets = std::size_t{1} << b.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > limit) continue;
        std::vector<bool> removed(g.edges.size(), false);
        for (std::size_t i = 0; i < b.size(); ++i)
            if ((mask >> i) & 1U) removed[b[i]] = true;
        if (!has_hamiltonian_cycle(g, removed)) return false;
    }
    return true;
}

ReductionOutput dhc_to_srcp(const SimpleGraph& g, const std::vector<std::size_t>& b) {
    for (auto e : b)
        if (e >= g.edges.size()) throw Error(ErrorCode::InvalidArgument, "B must be a subset of the edges");
    const std::size_t n = g.vertices.size();
    const std::size_t t = b.size() / 2;
    std::vector<bool> in_b(g.edges.size(), false);
    for (auto e : b) in_b[e] = true;

    ReductionOutput out;
    out.budget = Budget{t};
    PolicyDraft d;
    auto sv = [](std::size_t i) { return "sv" + std::to_string(i + 1); };
    auto se = [](std::size_t i) { return "se" + std::to_string(i + 1); };
    for (std::size_t i = 0; i < n; ++i) {
        d.steps.push_back(sv(i));
        d.steps.push_back(se(i));
        out.step_provenance[sv(i)] = "position " + std::to_string(i + 1) + " of the cycle (vertex)";
        out.step_provenance[se(i)] = "position " + std::to_string(i + 1) + " of the cycle (edge to the next vertex)";
    }

    std::vector<std::vector<std::string>> vertex_users(n), edge_users(g.edges.size());
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t c = 1; c <= t + 1; ++c) {
            std::string name = "v" + std::to_string(v + 1) + "_" + std::to_string(c);
            vertex_users[v].push_back(name);
            d.users.push_back(name);
            out.user_provenance[name] = "vertex " + g.vertices[v] + ", copy " + std::to_string(c);
        }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        std::size_t copies = in_b[e] ? 1 : t + 1;
        const std::string label = g.vertices[g.edges[e].first] + "-" + g.vertices[g.edges[e].second];
        for (std::size_t c = 1; c <= copies; ++c) {
            std::string name = "e" + std::to_string(e + 1) + "_" + std::to_string(c);
            edge_users[e].push_back(name);
            d.users.push_back(name);
            out.user_provenance[name] =
                "edge " + label + (in_b[e] ? " (in B)" : "") + ", copy " + std::to_string(c);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& vs : vertex_users)
            for (const auto& u : vs) d.auth.emplace_back(sv(i), u);
        for (const auto& es : edge_users)
            for (const auto& u : es) d.auth.emplace_back(se(i), u);
    }

    draft::Relation incident{"incident", {}}, incident_inv{"incident_inv", {}}, distinct{"distinct", {}};
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        for (std::size_t end : {g.edges[e].first, g.edges[e].second})
            for (const auto& ue : edge_users[e])
                for (const auto& uv : vertex_users[end]) {
                    incident.pairs.emplace_back(ue, uv);
                    incident_inv.pairs.emplace_back(uv, ue);
                }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
            if (a != c)
                for (const auto& ua : vertex_users[a])
                    for (const auto& uc : vertex_users[c]) distinct.pairs.emplace_back(ua, uc);
    d.relations = {incident, incident_inv, distinct};

    for (std::size_t i = 0; i < n; ++i) d.constraints.emplace_back(draft::Entailment{"incident_inv", {sv(i)}, {se(i)}});
    for (std::size_t i = 0; i + 1 < n; ++i)
        d.constraints.emplace_back(draft::Entailment{"incident", {se(i)}, {sv(i + 1)}});
    if (n > 0) d.constraints.emplace_back(draft::Entailment{"incident", {se(n - 1)}, {sv(0)}});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d.constraints.emplace_back(draft::Entailment{"distinct", {sv(i)}, {sv(j)}});

    out.policy = validate_policy(d);
    out.notes.push_back("budget is floor(|B|/2) = " + std::to_string(t));
    return out;
}

// ---------------------------------------------------------------------------
// SuccRad(k)
// ---------------------------------------------------------------------------

BooleanCircuit build_reach_circuit(const BooleanCircuit& bc_g, std::size_t n, std::size_t k) {
    if (bc_g.inputs.size() != 2 * n) throw Error(ErrorCode::InvalidArgument, "BC_G must have 2n inputs");
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be at least 2");
    check_circuit(bc_g);

    std::vector<std::string> names;
    for (std::size_t j = 1; j <= n; ++j) names.push_back("x" + std::to_string(j));
    for (std::size_t j = 1; j <= n; ++j) names.push_back("y" + std::to_string(j));
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t j = 1; j <= n; ++j) names.push_back("z" + std::to_string(i) + "_" + std::to_string(j));
    CircuitBuilder b(names);

    // vectors[0] = x, vectors[1] = y, vectors[1 + i] = z^i
    auto vec = [n](std::size_t which) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j) out.push_back(which * n + j);
        return out;
    };
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_cache;
    auto edge = [&](std::size_t from, std::size_t to) {
        auto key = std::pair(from, to);
        if (auto it = edge_cache.find(key); it != edge_cache.end()) return it->second;
        auto bind = vec(from);
        auto second = vec(to);
        bind.insert(bind.end(), second.begin(), second.end());
        return edge_cache[key] = b.instantiate(bc_g, bind);
    };

    // BC_=: conjunction of bitwise equivalences.
    std::optional<std::size_t> equal;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t x = j, y = n + j;
        std::size_t both = b.op_and(x, y);
        std::size_t neither = b.op_and(b.op_not(x), b.op_not(y));
        std::size_t same = b.op_or(both, neither);
        equal = equal ? b.op_and(*equal, same) : same;
    }
    if (!equal) equal = b.gate(GateKind::Const1, {});

    std::size_t reach = b.op_or(*equal, edge(0, 1));
    for (std::size_t i = 1; i < k; ++i) {
        // x -> z^1 -> ... -> z^i -> y
        std::size_t walk = edge(0, 2);
        for (std::size_t m = 1; m < i; ++m) walk = b.op_and(walk, edge(1 + m, 2 + m));
        walk = b.op_and(walk, edge(1 + i, 1));
        reach = b.op_or(reach, walk);
    }
    return b.finish(reach);
}

std::vector<std::vector<bool>> adjacency_matrix(const BooleanCircuit& bc_g, std::size_t n) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::vector<bool>> adj(size, std::vector<bool>(size, false));
    std::vector<bool> bits(2 * n);
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y) {
            for (std::size_t j = 0; j < n; ++j) {
                bits[j] = (x >> (n - 1 - j)) & 1U;
                bits[n + j] = (y >> (n - 1 - j)) & 1U;
            }
            adj[x][y] = eval_circuit(bc_g, bits);
        }
    return adj;
}

std::size_t graph_radius(const std::vector<std::vector<bool>>& adj) {
    const std::size_t size = adj.size();
    constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
    std::size_t best = inf;
    for (std::size_t src = 0; src < size; ++src) {
        std::vector<std::size_t> dist(size, inf);
        std::deque<std::size_t> queue{src};
        dist[src] = 0;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (std::size_t w = 0; w < size; ++w)
                if (adj[v][w] && dist[w] == inf) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
        }
        best = std::min(best, *std::max_element(dist.begin(), dist.end()));
    }
    return best;
}

bool succrad_decide_bruteforce(const BooleanCircuit& bc_g, std::size_t n, std::size_t k) {
    if (n > 3) throw Error(ErrorCode::TooLarge, "brute force is limited to n <= 3");
    if (bc_g.inputs.size() != 2 * n) throw Error(ErrorCode::InvalidArgument, "BC_G must have 2n inputs");
    if (n == 0) return true;
    return graph_radius(adjacency_matrix(bc_g, n)) <= k;
}

ReductionOutput succrad_to_orcp(const BooleanCircuit& bc_g, std::size_t n, std::size_t k) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
    BooleanCircuit reach = build_reach_circuit(bc_g, n, k);
    const std::size_t inputs = reach.inputs.size();

    ReductionOutput out;
    out.budget = Budget{n};
    PolicyDraft d;

    // Steps: one per input bit (named after the input) and per gate, then out.
    std::vector<std::string> node_step(reach.node_count());
    for (std::size_t i = 0; i < inputs; ++i) {
        node_step[i] = reach.inputs[i];
        std::string what = i < n ? "bit of x" : i < 2 * n ? "bit of y" : "bit of an intermediate vertex z";
        out.step_provenance[node_step[i]] = what + " (" + reach.inputs[i] + ")";
    }
    for (std::size_t j = 0; j < reach.gates.size(); ++j) {
        node_step[inputs + j] = reach.gates[j].id;
        out.step_provenance[reach.gates[j].id] =
            std::string(to_string(reach.gates[j].kind)) + " gate of the reachability circuit";
    }
    for (const auto& s : node_step) d.steps.push_back(s);
    d.steps.push_back("out");
    out.step_provenance["out"] = "output bit of the reachability circuit";
    for (std::size_t i = 0; i + 1 < d.steps.size(); ++i) d.order.emplace_back(d.steps[i], d.steps[i + 1]);

    // Users: n+1 copies each of top/bot, and f_1, t_2, ..., f_(2n-1), t_(2n).
    std::vector<std::string> bottoms, tops, stars;
    std::map<std::string, bool> truth;
    for (std::size_t c = 1; c <= n + 1; ++c) {
        bottoms.push_back("bot_" + std::to_string(c));
        tops.push_back("top_" + std::to_string(c));
    }
    for (std::size_t c = 1; c <= 2 * n; ++c) stars.push_back((c % 2 == 1 ? "f_" : "t_") + std::to_string(c));
    for (const auto& u : bottoms) {
        d.users.push_back(u);
        truth[u] = false;
        out.user_provenance[u] = "false, robust variant";
    }
    for (const auto& u : tops) {
        d.users.push_back(u);
        truth[u] = true;
        out.user_provenance[u] = "true, robust variant";
    }
    for (const auto& u : stars) {
        d.users.push_back(u);
        truth[u] = u[0] == 't';
        out.user_provenance[u] = std::string(u[0] == 't' ? "true" : "false") + ", removable variant";
    }

    std::vector<std::string> bools = bottoms;
    bools.insert(bools.end(), tops.begin(), tops.end());
    std::map<std::string, std::vector<std::string>> authorized;
    for (std::size_t i = 0; i < reach.node_count(); ++i) {
        bool is_y = i >= n && i < 2 * n;
        authorized[node_step[i]] = is_y ? stars : bools;
    }
    authorized["out"] = tops;
    for (const auto& s : d.steps)
        for (const auto& u : authorized[s]) d.auth.emplace_back(s, u);

    // Gate semantics as explicit allowed tuples over the authorized users.
    for (std::size_t j = 0; j < reach.gates.size(); ++j) {
        const auto& g = reach.gates[j];
        std::vector<std::string> scope{node_step[inputs + j]};
        for (auto op : g.operands)
            if (std::find(scope.begin(), scope.end(), node_step[op]) == scope.end()) scope.push_back(node_step[op]);
        auto value_of = [&](const std::vector<std::string>& row, std::size_t node) {
            auto pos = std::find(scope.begin(), scope.end(), node_step[node]) - scope.begin();
            return truth[row[static_cast<std::size_t>(pos)]];
        };
        draft::Extensional e{scope, {}};
        std::vector<std::string> row(scope.size());
        std::function<void(std::size_t)> fill = [&](std::size_t pos) {
            if (pos == scope.size()) {
                bool out_value = truth[row[0]];
                bool expected = false;
                switch (g.kind) {
                case GateKind::And: expected = value_of(row, g.operands[0]) && value_of(row, g.operands[1]); break;
                case GateKind::Or: expected = value_of(row, g.operands[0]) || value_of(row, g.operands[1]); break;
                case GateKind::Not: expected = !value_of(row, g.operands[0]); break;
                case GateKind::Const0: expected = false; break;
                case GateKind::Const1: expected = true; break;
                case GateKind::Input: expected = value_of(row, g.operands[0]); break;
                }
                if (out_value == expected) e.allowed.push_back(row);
                return;
            }
            for (const auto& u : authorized[scope[pos]]) {
                row[pos] = u;
                fill(pos + 1);
            }
        };
        fill(0);
        d.constraints.emplace_back(std::move(e));
    }

    draft::Relation equal{"equal", {}}, order{"order", {}};
    for (const auto& a : d.users)
        for (const auto& b : d.users)
            if (truth[a] == truth[b]) equal.pairs.emplace_back(a, b);
    for (std::size_t a = 0; a < stars.size(); ++a)
        for (std::size_t b = a + 1; b < stars.size(); ++b) order.pairs.emplace_back(stars[a], stars[b]);
    d.relations = {equal, order};
    d.constraints.emplace_back(draft::Entailment{"equal", {"out"}, {node_step[reach.output]}});
    for (std::size_t j = 1; j < n; ++j)
        d.constraints.emplace_back(draft::Entailment{"order", {node_step[n + j - 1]}, {node_step[n + j]}});

    out.policy = validate_policy(d);
    out.notes.push_back("gate constraints are extensional; only the game oracles decide this instance");
    out.notes.push_back("budget t = n = " + std::to_string(n));
    return out;
}

} // namespace wfresil
