#include "symmetry.hpp"

#include <algorithm>

namespace wfresil::detail {

namespace {

UserIndex swap_user(UserIndex x, UserIndex u, UserIndex v) {
    if (x == u) return v;
    if (x == v) return u;
    return x;
}

bool swap_preserves(const WorkflowPolicy& p, UserIndex u, UserIndex v) {
    for (StepIndex s = 0; s < p.step_count(); ++s)
        if (p.authorized(s, u) != p.authorized(s, v)) return false;

    const std::size_t m = p.user_count();
    for (const auto& rel : p.relations()) {
        for (UserIndex x : {u, v})
            for (UserIndex y = 0; y < m; ++y) {
                UserIndex sx = swap_user(x, u, v);
                UserIndex sy = swap_user(y, u, v);
                if (rel.contains(x, y) != rel.contains(sx, sy)) return false;
                if (rel.contains(y, x) != rel.contains(sy, sx)) return false;
            }
    }

    std::vector<UserIndex> image;
    for (const auto& c : p.constraints()) {
        const auto* ext = std::get_if<Extensional>(&c);
        if (!ext) continue;
        for (const auto& tuple : ext->allowed) {
            if (std::find(tuple.begin(), tuple.end(), u) == tuple.end() &&
                std::find(tuple.begin(), tuple.end(), v) == tuple.end())
                continue;
            image = tuple;
            for (auto& x : image) x = swap_user(x, u, v);
            if (!std::binary_search(ext->allowed.begin(), ext->allowed.end(), image)) return false;
        }
    }
    return true;
}

} // namespace

std::vector<UserIndex> interchangeable_users(const WorkflowPolicy& policy) {
    const std::size_t m = policy.user_count();
    std::vector<UserIndex> rep(m);
    std::vector<UserIndex> reps;
    for (UserIndex u = 0; u < m; ++u) {
        rep[u] = u;
        for (UserIndex r : reps)
            if (swap_preserves(policy, r, u)) {
                rep[u] = r;
                break;
            }
        if (rep[u] == u) reps.push_back(u);
    }
    return rep;
}

} // namespace wfresil::detail
