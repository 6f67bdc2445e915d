#pragma once

#include <string>

#include "json.hpp"

#include "tlab/campaign.hpp"
#include "tlab/cover.hpp"
#include "tlab/hypergeom.hpp"
#include "tlab/hypergraph.hpp"
#include "tlab/thresholds.hpp"
#include "tlab/weights.hpp"

// Typed entry points behind the CLI subcommands. The binary itself only
// parses flags, reads files, and prints what these return.

namespace tlab {

// 0 ok, 1 a checked inequality failed, 2 bad input, 3 capacity/guard
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitCapacity = 3 };

struct CommandResult {
    int code = kExitOk;
    std::string output;
};

enum class SampleModel { gnm, gnq };

inline CommandResult cmd_sample(unsigned n, unsigned k, SampleModel model, unsigned long m,
                                double q, std::uint64_t seed) {
    Hypergraph h = (model == SampleModel::gnm) ? sample_hnm(n, k, m, SeedSpec{seed, 0})
                                               : sample_hnq(n, k, q, SeedSpec{seed, 0});
    return {kExitOk, hypergraph_to_json(h).dump() + "\n"};
}

enum class VerifyMode { automatic, exhaustive, sampled };

inline CommandResult cmd_verify(const Hypergraph& h, unsigned r, double L, VerifyMode mode,
                                std::uint64_t trials, std::uint64_t seed,
                                unsigned long long node_budget = kDefaultNodeBudget) {
    CoveringReport rep;
    const bool exhaustive =
        mode == VerifyMode::exhaustive ||
        (mode == VerifyMode::automatic && h.n <= kExhaustiveWidthLimit);
    if (exhaustive) {
        rep = verify_covering_exhaustive(h, r, L, node_budget);
    } else {
        rep = verify_covering_sampled(h, r, L, trials, SeedSpec{seed, 0}, node_budget);
    }
    nlohmann::ordered_json j = covering_report_json(rep);
    j["mode"] = exhaustive ? "exhaustive" : "sampled";
    return {rep.ok() ? kExitOk : kExitCheckFailed, j.dump(2) + "\n"};
}

inline CommandResult cmd_weights(const Hypergraph& h, unsigned r, double L, WeightMode mode,
                                 std::uint64_t trials, std::uint64_t seed) {
    Cover c = build_cover(h, r, L);
    auto wb = weight_cover(h, r, c, mode, trials, SeedSpec{seed, 0});
    nlohmann::ordered_json j;
    j["cover"] = cover_summary_json(c);
    j["weights"] = weight_breakdown_json(wb);
    return {kExitOk, j.dump(2) + "\n"};
}

inline CommandResult cmd_claims(unsigned n, unsigned k, unsigned long m, unsigned r, double L) {
    auto certs = claim_certificates(n, k, m, r, L);
    nlohmann::ordered_json j = certificates_json(certs);
    return {all_in_regime_pass(certs) ? kExitOk : kExitCheckFailed, j.dump(2) + "\n"};
}

inline CommandResult cmd_lemmas(unsigned grid_max) {
    if (grid_max > 30) throw ValidationError("cmd_lemmas: grid-max must be <= 30");
    auto tails = sweep_tail_lemma(grid_max);
    auto covs = sweep_covariance_lemma(std::min(grid_max, 24u));
    nlohmann::ordered_json j;
    j["tail_lemma"] = {{"checked", tails.checked},
                       {"violations", tails.violations},
                       {"first_violation", tails.first_violation}};
    j["covariance_lemma"] = {{"checked", covs.checked},
                             {"violations", covs.violations},
                             {"first_violation", covs.first_violation}};
    const bool ok = tails.ok() && covs.ok();
    return {ok ? kExitOk : kExitCheckFailed, j.dump(2) + "\n"};
}

inline CommandResult cmd_thresholds(const MonotoneFamily& f, double tol) {
    auto r = talagrand_ratio(f, tol);
    return {kExitOk, thresholds_json(r).dump(2) + "\n"};
}

struct CampaignOutput {
    int code = kExitOk;
    std::string csv;
    std::string summary;
};

inline CampaignOutput cmd_campaign(const CampaignConfig& cfg, unsigned workers,
                                   bool with_timings = false) {
    auto outcome = run_campaign(cfg, workers);
    return {outcome.exit_code, outcome.csv(with_timings), outcome.summary_json().dump(2) + "\n"};
}

inline CampaignConfig campaign_config_from_json(const nlohmann::json& j) {
    CampaignConfig cfg;
    try {
        cfg.n_grid = j.at("n_grid").get<std::vector<unsigned>>();
        cfg.k = j.at("k").get<unsigned>();
        cfg.r = j.at("r").get<unsigned>();
        cfg.m_rule = j.at("m_rule").get<std::string>();
        if (j.contains("L")) cfg.L = j.at("L").get<double>();
        if (j.contains("seeds_per_cell")) cfg.seeds_per_cell = j.at("seeds_per_cell").get<unsigned>();
        if (j.contains("trials_mc")) cfg.trials_mc = j.at("trials_mc").get<std::uint64_t>();
        if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("campaign config JSON: ") + ex.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace tlab
