#pragma once

// Seeded random policies and cross-checks between the game oracles and the
// ASP pipeline.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wfresil/asp_codegen.hpp"
#include "wfresil/games.hpp"
#include "wfresil/model.hpp"
#include "wfresil/solver_bridge.hpp"

namespace wfresil {

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

struct GenParams {
    Range steps{1, 3};
    Range users{1, 4};
    double order_density = 0.3;
    double auth_density = 0.7;
    Range sod{0, 2};
    Range bod{0, 0};
    Range entailment{0, 0}; // type-1, each over a fresh random relation
    std::uint64_t seed = 0;
};

// Throws Error{InvalidArgument} when a range is empty or a density is out of bounds.
void check_params(const GenParams& params);

// Deterministic in params. Constraint pairs are drawn among distinct steps;
// fewer are produced when there are too few steps.
[[nodiscard]] WorkflowPolicy random_policy(const GenParams& params);

struct XCheckReport {
    std::uint64_t seed = 0;
    std::string check; // "srcp", "orcp" or "chain"
    std::size_t budget = 0;
    std::string policy; // serialized

    std::optional<bool> oracle;
    std::optional<bool> asp;
    bool agree = true;
    std::string oracle_witness;
    std::string asp_witness;
    std::optional<bool> witness_valid; // re-check of the witness that was produced

    // chain: wsp, srcp, orcp, crcp, drcp
    std::vector<std::optional<bool>> chain;
    bool chain_ok = true;
    bool collapse_ok = true; // t = 0: srcp = orcp = crcp = wsp

    std::optional<std::string> skipped;
    double millis = 0;

    // No disagreement, violation or failed witness re-check.
    [[nodiscard]] bool ok() const noexcept;
};

[[nodiscard]] std::string describe_witness(const WorkflowPolicy& policy, const Witness& witness);

// Requires a separation-of-duty-only policy.
[[nodiscard]] XCheckReport xcheck_srcp(const WorkflowPolicy& policy, Budget t, const SolverConfig& solver,
                                       SrcpEncoding encoding = SrcpEncoding::Guarded,
                                       const GameConfig& config = {});

// Requires separation/binding of duty and type-1 entailment only.
[[nodiscard]] XCheckReport xcheck_orcp(const WorkflowPolicy& policy, Budget t, const SolverConfig& solver,
                                       const GameConfig& config = {});

// StateBudgetExceeded marks the report skipped.
[[nodiscard]] XCheckReport inclusion_chain_check(const WorkflowPolicy& policy, Budget t,
                                                 const GameConfig& config = {});

// One JSON object, no trailing newline.
[[nodiscard]] std::string to_json_line(const XCheckReport& report);

enum class CampaignKind { Srcp, Orcp, Chain };

struct CampaignConfig {
    CampaignKind kind = CampaignKind::Srcp;
    std::uint64_t first_seed = 1;
    std::uint64_t last_seed = 500;
    GenParams params;            // seed is overwritten per instance
    std::vector<std::size_t> budgets{0, 1, 2}; // picked per instance from the seed
    SolverConfig solver;
    SrcpEncoding encoding = SrcpEncoding::Guarded;
    GameConfig game{200'000, true};
};

// Defaults sized for each kind: SoD-only with |S| <= 3, |U| <= 4, t in {0,1,2}
// for srcp and chain; SoD, BoD and entailment with |U| <= 3, t in {0,1} for orcp.
[[nodiscard]] CampaignConfig default_campaign(CampaignKind kind);

struct CampaignSummary {
    std::size_t instances = 0;
    std::size_t disagreements = 0;
    std::size_t chain_violations = 0;
    std::size_t collapse_violations = 0;
    std::size_t witness_failures = 0;
    std::size_t skipped = 0;
    std::vector<XCheckReport> failures;

    [[nodiscard]] bool ok() const noexcept {
        return disagreements == 0 && chain_violations == 0 && collapse_violations == 0 && witness_failures == 0;
    }
};

// Runs seeds in order, writing one JSON line per instance to `out` when
// given. Solver errors propagate.
CampaignSummary run_campaign(const CampaignConfig& config, std::ostream* out = nullptr);

// Instance and budget used for `seed` by run_campaign.
[[nodiscard]] std::pair<WorkflowPolicy, Budget> campaign_instance(const CampaignConfig& config, std::uint64_t seed);

} // namespace wfresil
