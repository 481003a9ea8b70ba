#pragma once

#include <random>
#include <string>

#include "wfresil/model.hpp"
#include "wfresil/policy_dsl.hpp"

namespace testing {

inline wfresil::WorkflowPolicy policy(const std::string& text) { return wfresil::parse_policy(text).policy; }

inline const char* kSodPair3 =
    "steps: a b\norder: a < b\nusers: u1 u2 u3\n"
    "auth: a u1; a u2; a u3; b u1; b u2; b u3\nconstraint: sod a b\n";
inline const char* kSodPair2 =
    "steps: a b\norder: a < b\nusers: u1 u2\nauth: a u1; a u2; b u1; b u2\nconstraint: sod a b\n";
inline const char* kBodPair2 =
    "steps: a b\norder: a < b\nusers: u1 u2\nauth: a u1; a u2; b u1; b u2\nconstraint: bod a b\n";

// Random drafts with every constraint form, for round trips and projection.
inline wfresil::PolicyDraft random_draft(std::uint64_t seed, std::size_t max_steps = 3, std::size_t max_users = 3) {
    std::mt19937_64 rng(seed);
    auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    wfresil::PolicyDraft d;
    std::size_t n = below(max_steps + 1), m = below(max_users + 1);
    for (std::size_t i = 0; i < n; ++i) d.steps.push_back("s" + std::to_string(i));
    for (std::size_t i = 0; i < m; ++i) d.users.push_back(i % 2 ? "U" + std::to_string(i) : "u" + std::to_string(i));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (below(3) == 0) d.order.emplace_back(d.steps[a], d.steps[b]);
    for (const auto& s : d.steps)
        for (const auto& u : d.users)
            if (below(4) != 0) d.auth.emplace_back(s, u);
    if (n == 0) return d;
    auto some_steps = [&]() {
        std::vector<std::string> out;
        for (const auto& s : d.steps)
            if (below(2) == 0) out.push_back(s);
        if (out.empty()) out.push_back(d.steps[below(n)]);
        return out;
    };
    std::size_t cs = below(4);
    for (std::size_t i = 0; i < cs; ++i) {
        std::size_t kind = below(4);
        if (kind < 2 && n >= 2) {
            std::size_t a = below(n), b = below(n - 1);
            if (b >= a) ++b;
            if (kind == 0)
                d.constraints.emplace_back(wfresil::draft::SeparationOfDuty{d.steps[a], d.steps[b]});
            else
                d.constraints.emplace_back(wfresil::draft::BindingOfDuty{d.steps[a], d.steps[b]});
        } else if (kind == 2 && m > 0) {
            wfresil::draft::Relation r{"rel" + std::to_string(d.relations.size()), {}};
            for (const auto& u : d.users)
                for (const auto& v : d.users)
                    if (below(2) == 0) r.pairs.emplace_back(u, v);
            d.constraints.emplace_back(wfresil::draft::Entailment{r.name, some_steps(), some_steps()});
            d.relations.push_back(std::move(r));
        } else if (kind == 3 && m > 0) {
            wfresil::draft::Extensional e{some_steps(), {}};
            std::size_t rows = below(5);
            for (std::size_t r = 0; r < rows; ++r) {
                std::vector<std::string> row;
                for (std::size_t k = 0; k < e.scope.size(); ++k) row.push_back(d.users[below(m)]);
                e.allowed.push_back(row);
            }
            d.constraints.emplace_back(std::move(e));
        }
    }
    return d;
}

} // namespace testing
