#include "wfresil/games.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "symmetry.hpp"
#include "wfresil/error.hpp"

namespace wfresil {

std::string_view to_string(Analysis a) {
    switch (a) {
    case Analysis::Wsp: return "wsp";
    case Analysis::Srcp: return "srcp";
    case Analysis::Orcp: return "orcp";
    case Analysis::Crcp: return "crcp";
    case Analysis::Drcp: return "drcp";
    }
    return "?";
}

Analysis parse_analysis(std::string_view name) {
    for (auto a : {Analysis::Wsp, Analysis::Srcp, Analysis::Orcp, Analysis::Crcp, Analysis::Drcp})
        if (to_string(a) == name) return a;
    throw Error(ErrorCode::InvalidArgument, "unknown analysis '" + std::string(name) + "'");
}

namespace {

class Counter {
public:
    explicit Counter(std::size_t cap) : cap_(cap) {}
    void tick() {
        if (++count_ > cap_)
            throw Error(ErrorCode::StateBudgetExceeded,
                        "explored more than " + std::to_string(cap_) + " configurations");
    }
    [[nodiscard]] std::size_t count() const { return count_; }

private:
    std::size_t cap_;
    std::size_t count_ = 0;
};

struct SlotsHash {
    std::size_t operator()(const std::vector<UserIndex>& v) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : v) h = (h ^ (x + 0x9e3779b97f4a7c15ULL)) * 1099511628211ULL;
        return h;
    }
};

// Next k-subset of {0..m-1} in lexicographic order; false after the last one.
bool next_combination(std::vector<std::size_t>& c, std::size_t m) {
    std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < m - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

template <class F>
void for_each_subset_of_size(std::size_t m, std::size_t k, F&& f) {
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    do {
        UserSet s(m);
        for (auto x : c) s.insert(x);
        if (!f(s)) return;
    } while (k > 0 && next_combination(c, m));
}

// ---------------------------------------------------------------------------
// Satisfiability: backtracking in topological order, trying used users plus
// one unused user per interchangeability class.
// ---------------------------------------------------------------------------

class WspSearch {
public:
    WspSearch(const WorkflowPolicy& policy, Counter& counter)
        : p_(policy), counter_(counter), plan_(policy.step_count()), uses_(policy.user_count(), 0),
          rep_(detail::interchangeable_users(policy)), last_use_(policy.step_count(), 0) {
        const auto& topo = p_.topological_order();
        std::vector<std::size_t> pos(topo.size());
        for (std::size_t i = 0; i < topo.size(); ++i) pos[topo[i]] = i;
        for (const auto& c : p_.constraints()) {
            auto scope = scope_of(c);
            std::size_t last = 0;
            for (auto s : scope) last = std::max(last, pos[s]);
            for (auto s : scope) last_use_[s] = std::max(last_use_[s], last);
        }
    }

    bool run() { return dfs(0); }
    [[nodiscard]] const PartialPlan& plan() const { return plan_; }

private:
    // Whether the prefix extends to a valid plan depends only on the users at
    // assigned steps that share a constraint with some later step.
    std::vector<UserIndex> frontier_key(std::size_t depth) const {
        const auto& topo = p_.topological_order();
        std::vector<UserIndex> key{depth};
        for (std::size_t i = 0; i < depth; ++i)
            if (last_use_[topo[i]] >= depth) key.push_back(plan_[topo[i]]);
        return key;
    }

    bool dfs(std::size_t depth) {
        counter_.tick();
        const auto& topo = p_.topological_order();
        if (depth == topo.size()) return true;
        auto key = frontier_key(depth);
        if (dead_.count(key)) return false;
        StepIndex s = topo[depth];
        std::vector<UserIndex> fresh_tried;
        for (UserIndex u : p_.authorized_users(s)) {
            if (uses_[u] == 0) {
                if (std::find(fresh_tried.begin(), fresh_tried.end(), rep_[u]) != fresh_tried.end()) continue;
                fresh_tried.push_back(rep_[u]);
            }
            plan_.assign(s, u);
            if (permits_at(p_, plan_, s)) {
                ++uses_[u];
                if (dfs(depth + 1)) return true;
                --uses_[u];
            }
            plan_.clear(s);
        }
        dead_.insert(std::move(key));
        return false;
    }

    const WorkflowPolicy& p_;
    Counter& counter_;
    PartialPlan plan_;
    std::vector<std::size_t> uses_;
    std::vector<UserIndex> rep_;
    std::vector<std::size_t> last_use_; // last topological position sharing a constraint
    std::unordered_set<std::vector<UserIndex>, SlotsHash> dead_;
};

std::optional<PartialPlan> find_plan(const WorkflowPolicy& policy, Counter& counter) {
    WspSearch search(policy, counter);
    if (search.run()) return search.plan();
    return std::nullopt;
}

bool plan_avoids(const PartialPlan& plan, const UserSet& removed) {
    for (auto u : plan.slots())
        if (u != kUnassigned && removed.contains(u)) return false;
    return true;
}

// First removal set (lexicographic, size min(t,|U|)) that kills satisfiability.
std::optional<UserSet> find_counterexample(const WorkflowPolicy& policy, std::size_t t, Counter& counter) {
    const std::size_t m = policy.user_count();
    const std::size_t k = std::min(t, m);
    std::vector<PartialPlan> known; // plans found so far; any that avoids Delta settles it
    std::optional<UserSet> found;
    for_each_subset_of_size(m, k, [&](const UserSet& removed) {
        for (const auto& plan : known)
            if (plan_avoids(plan, removed)) return true;
        auto plan = find_plan(without_users(policy, removed), counter);
        if (!plan) {
            found = removed;
            return false;
        }
        if (known.size() < 64) known.push_back(*plan);
        return true;
    });
    return found;
}

// Moves available at the root of a (residual) policy: order-minimal step,
// authorized user, no violated unary constraint. One user per class among
// those interchangeable in this policy.
std::vector<Move> root_moves(const WorkflowPolicy& p, bool break_symmetry) {
    std::vector<Move> out;
    std::vector<UserIndex> rep = break_symmetry ? detail::interchangeable_users(p) : std::vector<UserIndex>{};
    PartialPlan probe(p.step_count());
    for (StepIndex s = 0; s < p.step_count(); ++s) {
        if (!p.predecessors(s).empty()) continue;
        for (UserIndex u : p.authorized_users(s)) {
            if (break_symmetry && rep[u] != u) continue;
            probe.assign(s, u);
            if (permits_at(p, probe, s)) out.push_back({s, u});
            probe.clear(s);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// One-shot: depth-first search for a play whose every proper prefix leaves a
// statically resilient residual policy.
// ---------------------------------------------------------------------------

class OrcpSearch {
public:
    OrcpSearch(const WorkflowPolicy& policy, std::size_t t, const GameConfig& config, Counter& counter)
        : root_(policy), t_(t), config_(config), counter_(counter) {}

    bool run() {
        std::vector<StepIndex> orig(root_.step_count());
        for (StepIndex s = 0; s < orig.size(); ++s) orig[s] = s;
        PartialPlan theta(root_.step_count());
        return win(root_, orig, theta);
    }
    [[nodiscard]] const Play& play() const { return play_; }

private:
    bool win(const WorkflowPolicy& w, std::vector<StepIndex>& orig, PartialPlan& theta) {
        counter_.tick();
        if (w.step_count() == 0) return true;
        std::vector<UserIndex> key(theta.slots().begin(), theta.slots().end());
        if (config_.memoize) {
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        bool result = false;
        if (!find_counterexample(w, t_, counter_)) {
            for (const auto& mv : root_moves(w, true)) {
                auto next = project(w, mv.step, mv.user);
                StepIndex s0 = orig[mv.step];
                orig.erase(orig.begin() + static_cast<std::ptrdiff_t>(mv.step));
                theta.assign(s0, mv.user);
                play_.push_back({s0, mv.user});
                bool ok = win(next, orig, theta);
                if (ok) {
                    result = true;
                    theta.clear(s0);
                    orig.insert(orig.begin() + static_cast<std::ptrdiff_t>(mv.step), s0);
                    break;
                }
                play_.pop_back();
                theta.clear(s0);
                orig.insert(orig.begin() + static_cast<std::ptrdiff_t>(mv.step), s0);
            }
        }
        if (config_.memoize) memo_.emplace(std::move(key), result);
        return result;
    }

    const WorkflowPolicy& root_;
    std::size_t t_;
    const GameConfig& config_;
    Counter& counter_;
    Play play_;
    std::unordered_map<std::vector<UserIndex>, bool, SlotsHash> memo_;
};

// Follows Player 1's first available move until Player 2 can strike.
StrikeFound locate_strike(const WorkflowPolicy& policy, std::size_t t, Counter& counter) {
    StrikeFound out;
    WorkflowPolicy w = policy;
    std::vector<StepIndex> orig(policy.step_count());
    for (StepIndex s = 0; s < orig.size(); ++s) orig[s] = s;
    while (true) {
        if (auto delta = find_counterexample(w, t, counter)) {
            out.removed = *delta;
            out.trigger_length = out.trigger.size();
            return out;
        }
        auto moves = root_moves(w, false);
        if (moves.empty() || w.step_count() == 0) {
            // Cannot happen when the one-shot game is lost; keep the trigger as is.
            out.removed = UserSet(policy.user_count());
            out.trigger_length = out.trigger.size();
            return out;
        }
        const Move mv = moves.front();
        out.trigger.push_back({orig[mv.step], mv.user});
        orig.erase(orig.begin() + static_cast<std::ptrdiff_t>(mv.step));
        w = project(w, mv.step, mv.user);
    }
}

// ---------------------------------------------------------------------------
// Decremental and dynamic games: minimax over configurations.
// ---------------------------------------------------------------------------

class ValidMoves {
public:
    explicit ValidMoves(const WorkflowPolicy& p) : p_(p) {}

    // Valid single-step extensions of plan using users outside removed.
    template <class F>
    bool any(PartialPlan& plan, const UserSet& removed, F&& f) const {
        for (StepIndex s = 0; s < p_.step_count(); ++s) {
            if (plan.assigned(s)) continue;
            const auto& preds = p_.predecessors(s);
            if (!std::all_of(preds.begin(), preds.end(), [&](StepIndex x) { return plan.assigned(x); })) continue;
            for (UserIndex u : p_.authorized_users(s)) {
                if (removed.contains(u)) continue;
                plan.assign(s, u);
                bool hit = permits_at(p_, plan, s) && f(plan);
                plan.clear(s);
                if (hit) return true;
            }
        }
        return false;
    }

private:
    const WorkflowPolicy& p_;
};

class CrcpSearch {
public:
    CrcpSearch(const WorkflowPolicy& policy, std::size_t t, const GameConfig& config, Counter& counter)
        : p_(policy), t_(std::min(t, policy.user_count())), config_(config), counter_(counter), moves_(policy) {}

    bool run() {
        PartialPlan plan(p_.step_count());
        return player2(UserSet(p_.user_count()), plan);
    }

private:
    // Player 2 to move; true iff Player 1 still wins.
    bool player2(const UserSet& removed, PartialPlan& plan) {
        counter_.tick();
        if (plan.complete()) return true;
        std::pair<UserSet, std::vector<UserIndex>> key{removed, {plan.slots().begin(), plan.slots().end()}};
        if (config_.memoize) {
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        bool result = true;
        auto free = [&] {
            std::vector<UserIndex> v;
            for (UserIndex u = 0; u < p_.user_count(); ++u)
                if (!removed.contains(u)) v.push_back(u);
            return v;
        }();
        std::size_t room = t_ - removed.size();
        for (std::size_t extra = 0; extra <= room && result; ++extra) {
            if (extra > free.size()) break;
            for_each_subset_of_size(free.size(), extra, [&](const UserSet& pick) {
                UserSet next = removed;
                for (auto i : pick.members()) next.insert(free[i]);
                if (!player1(next, plan)) result = false;
                return result;
            });
        }
        if (config_.memoize) memo_.emplace(std::move(key), result);
        return result;
    }

    bool player1(const UserSet& removed, PartialPlan& plan) {
        return moves_.any(plan, removed, [&](PartialPlan& next) { return player2(removed, next); });
    }

    const WorkflowPolicy& p_;
    std::size_t t_;
    const GameConfig& config_;
    Counter& counter_;
    ValidMoves moves_;
    std::map<std::pair<UserSet, std::vector<UserIndex>>, bool> memo_;
};

class DrcpSearch {
public:
    DrcpSearch(const WorkflowPolicy& policy, std::size_t t, const GameConfig& config, Counter& counter)
        : p_(policy), k_(std::min(t, policy.user_count())), config_(config), counter_(counter), moves_(policy) {}

    bool run() {
        PartialPlan plan(p_.step_count());
        return player2(plan);
    }

private:
    bool player2(PartialPlan& plan) {
        counter_.tick();
        if (plan.complete()) return true;
        std::vector<UserIndex> key(plan.slots().begin(), plan.slots().end());
        if (config_.memoize) {
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        bool result = true;
        // A larger blocked set only narrows Player 1's move this round.
        for_each_subset_of_size(p_.user_count(), k_, [&](const UserSet& blocked) {
            if (!moves_.any(plan, blocked, [&](PartialPlan& next) { return player2(next); })) result = false;
            return result;
        });
        if (config_.memoize) memo_.emplace(std::move(key), result);
        return result;
    }

    const WorkflowPolicy& p_;
    std::size_t k_;
    const GameConfig& config_;
    Counter& counter_;
    ValidMoves moves_;
    std::unordered_map<std::vector<UserIndex>, bool, SlotsHash> memo_;
};

} // namespace

GameVerdict decide_wsp(const WorkflowPolicy& policy, const GameConfig& config) {
    Counter counter(config.max_states);
    GameVerdict v;
    if (auto plan = find_plan(policy, counter)) {
        v.decision = true;
        v.witness = ValidPlan{*plan};
    }
    v.states = counter.count();
    return v;
}

GameVerdict decide_srcp(const WorkflowPolicy& policy, Budget t, const GameConfig& config) {
    Counter counter(config.max_states);
    GameVerdict v;
    if (auto delta = find_counterexample(policy, t.t, counter)) {
        v.witness = Counterexample{*delta};
    } else {
        v.decision = true;
    }
    v.states = counter.count();
    return v;
}

GameVerdict decide_orcp(const WorkflowPolicy& policy, Budget t, const GameConfig& config) {
    Counter counter(config.max_states);
    GameVerdict v;
    OrcpSearch search(policy, t.t, config, counter);
    if (search.run()) {
        v.decision = true;
        v.witness = WinningPlay{search.play()};
    } else {
        v.witness = locate_strike(policy, t.t, counter);
    }
    v.states = counter.count();
    return v;
}

GameVerdict decide_crcp(const WorkflowPolicy& policy, Budget t, const GameConfig& config) {
    Counter counter(config.max_states);
    GameVerdict v;
    v.decision = CrcpSearch(policy, t.t, config, counter).run();
    v.states = counter.count();
    return v;
}

GameVerdict decide_drcp(const WorkflowPolicy& policy, Budget t, const GameConfig& config) {
    Counter counter(config.max_states);
    GameVerdict v;
    v.decision = DrcpSearch(policy, t.t, config, counter).run();
    v.states = counter.count();
    return v;
}

GameVerdict decide(Analysis analysis, const WorkflowPolicy& policy, Budget t, const GameConfig& config) {
    switch (analysis) {
    case Analysis::Wsp: return decide_wsp(policy, config);
    case Analysis::Srcp: return decide_srcp(policy, t, config);
    case Analysis::Orcp: return decide_orcp(policy, t, config);
    case Analysis::Crcp: return decide_crcp(policy, t, config);
    case Analysis::Drcp: return decide_drcp(policy, t, config);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown analysis");
}

void for_each_valid_plan(const WorkflowPolicy& policy, const std::function<bool(const PartialPlan&)>& visit) {
    PartialPlan plan(policy.step_count());
    bool stop = false;
    std::function<void(StepIndex)> dfs = [&](StepIndex s) {
        if (s == policy.step_count()) {
            stop = !visit(plan);
            return;
        }
        for (UserIndex u : policy.authorized_users(s)) {
            plan.assign(s, u);
            if (permits_at(policy, plan, s)) dfs(s + 1);
            plan.clear(s);
            if (stop) return;
        }
    };
    dfs(0);
}

std::vector<PartialPlan> enumerate_valid_plans(const WorkflowPolicy& policy) {
    std::vector<PartialPlan> out;
    for_each_valid_plan(policy, [&](const PartialPlan& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

bool verify_counterexample(const WorkflowPolicy& policy, const UserSet& removed, const GameConfig& config) {
    return !decide_wsp(without_users(policy, removed), config).decision;
}

WorkflowPolicy project_play(const WorkflowPolicy& policy, const Play& play) {
    WorkflowPolicy w = policy;
    for (const auto& mv : play) {
        if (mv.step >= policy.step_count())
            throw Error(ErrorCode::InvalidSeed, "play references an undeclared step");
        auto s = w.find_step(policy.step_name(mv.step));
        if (!s) throw Error(ErrorCode::InvalidSeed, "step '" + policy.step_name(mv.step) + "' assigned twice");
        w = project(w, *s, mv.user);
    }
    return w;
}

bool verify_winning_play(const WorkflowPolicy& policy, const Play& play, Budget t, const GameConfig& config) {
    if (!is_functional(play) || play.size() != policy.step_count()) return false;
    for (const auto& mv : play)
        if (mv.step >= policy.step_count() || mv.user >= policy.user_count()) return false;
    if (!check_validity(policy, plan_of(play, policy.step_count())).valid_complete()) return false;
    try {
        for (std::size_t i = 0; i < play.size(); ++i) {
            Play prefix(play.begin(), play.begin() + static_cast<std::ptrdiff_t>(i));
            if (!decide_srcp(project_play(policy, prefix), t, config).decision) return false;
        }
        (void)project_play(policy, play);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidSeed) return false;
        throw;
    }
    return true;
}

bool verify_strike(const WorkflowPolicy& policy, const StrikeFound& strike, Budget t, const GameConfig& config) {
    if (strike.removed.universe() != policy.user_count() || strike.removed.size() > std::min(t.t, policy.user_count()))
        return false;
    if (strike.trigger_length != strike.trigger.size()) return false;
    try {
        return verify_counterexample(project_play(policy, strike.trigger), strike.removed, config);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidSeed) return false;
        throw;
    }
}

} // namespace wfresil
