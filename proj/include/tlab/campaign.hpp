#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "tlab/cover.hpp"
#include "tlab/errors.hpp"
#include "tlab/hypergraph.hpp"
#include "tlab/stats.hpp"
#include "tlab/weights.hpp"

namespace tlab {

inline constexpr double kCampaignFreqSlack = 0.05;
inline constexpr double kCampaignCpAlpha = 0.01;  // one-sided 99% exact bounds
inline constexpr std::uint64_t kSeedLanesPerTask = 4;

// One grid of experiments: for each n in n_grid, an edge count m given by
// m_rule, seeds_per_cell independent instances.
//
// m_rule forms:
//   "list:a,b,c"  explicit m per n_grid entry
//   "frac:x"      m = round(x * C(n,k)), clamped to [r, C(n,k)]
//   "npj:x"       m chosen so that n*p/j_top is approximately x, where
//                 j_top = k*r - ceil(r/2) and p = (r/m)^{1/k}
struct CampaignConfig {
    std::vector<unsigned> n_grid;
    unsigned k = 2;
    unsigned r = 2;
    std::string m_rule = "frac:0.5";
    double L = 4.0 * std::exp(3.0);
    unsigned seeds_per_cell = 1;
    std::uint64_t trials_mc = 10'000;
    std::uint64_t master_seed = 0;
    std::string output_path;  // empty: CSV to stdout

    void validate() const {
        if (n_grid.empty()) throw ValidationError("CampaignConfig: empty n_grid");
        if (k < 1 || r < 1) throw ValidationError("CampaignConfig: need k >= 1 and r >= 1");
        if (seeds_per_cell < 1) throw ValidationError("CampaignConfig: seeds_per_cell >= 1");
        if (L <= 0.0) throw ValidationError("CampaignConfig: L must be positive");
    }
};

struct CampaignRow {
    unsigned n = 0, k = 0, r = 0;
    unsigned long m = 0;
    double L = 0.0;
    unsigned seed_index = 0;
    double p = 0.0;
    double w_total = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    bool success = false;  // upper confidence end below 1
    std::uint64_t g0_count = 0;
    std::int64_t runtime_ms = 0;
};

namespace detail {

inline unsigned long resolve_m_rule(const std::string& rule, std::size_t cell, unsigned n,
                                    unsigned k, unsigned r) {
    auto parse_double = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw ValidationError("m_rule: trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ValidationError("m_rule: cannot parse number in '" + s + "'");
        }
    };
    const BigInt total = binom(n, k);
    auto clamp_m = [&](double want) -> unsigned long {
        double lo = static_cast<double>(r);
        double hi = total.fits_ulong_p() ? static_cast<double>(total.get_ui()) : 1e18;
        double v = std::max(lo, std::min(hi, std::round(want)));
        return static_cast<unsigned long>(v);
    };

    if (rule.rfind("list:", 0) == 0) {
        std::vector<unsigned long> ms;
        std::stringstream ss(rule.substr(5));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                ms.push_back(std::stoul(item));
            } catch (const std::exception&) {
                throw ValidationError("m_rule: bad list entry '" + item + "'");
            }
        }
        if (cell >= ms.size()) throw ValidationError("m_rule: list shorter than n_grid");
        if (BigInt(ms[cell]) > total) throw ValidationError("m_rule: m exceeds C(n,k)");
        return ms[cell];
    }
    if (rule.rfind("frac:", 0) == 0) {
        double x = parse_double(rule.substr(5));
        if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("m_rule: frac outside [0,1]");
        return clamp_m(x * total.get_d());
    }
    if (rule.rfind("npj:", 0) == 0) {
        double x = parse_double(rule.substr(4));
        if (!(x > 0.0)) throw ValidationError("m_rule: npj target must be positive");
        unsigned j_top = k * r - (r + 1) / 2;
        if (j_top < k + 1) j_top = k + 1;  // degenerate ranges fall back to the first level
        double want = static_cast<double>(r) *
                      std::pow(static_cast<double>(n) / (x * static_cast<double>(j_top)),
                               static_cast<double>(k));
        return clamp_m(want);
    }
    throw ValidationError("m_rule: unknown form '" + rule + "'");
}

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

struct CampaignCell {
    unsigned n = 0;
    unsigned long m = 0;
    std::uint64_t seeds = 0;
    std::uint64_t failures = 0;
    std::uint64_t errors = 0;
    double fail_freq = 0.0;
    double cp_upper = 1.0, cp_lower = 0.0;
    double target = 0.0;  // 1 / ln n
};

struct CampaignOutcome {
    std::vector<CampaignRow> rows;
    std::vector<CampaignCell> cells;
    int exit_code = 0;

    std::string csv(bool with_timings = false) const;
    nlohmann::ordered_json summary_json() const;
};

// Runs every (cell, seed) task: sample H(n, m), build the cover, evaluate
// w(G, p/L) with exact parts where guards allow and Monte Carlo elsewhere.
// Tasks are deterministic functions of (master_seed, task index), results
// are emitted in task order, so output does not depend on the worker count.
inline CampaignOutcome run_campaign(const CampaignConfig& cfg, unsigned workers = 0) {
    cfg.validate();
    const std::size_t cells = cfg.n_grid.size();
    std::vector<unsigned long> cell_m(cells);
    for (std::size_t c = 0; c < cells; ++c)
        cell_m[c] = detail::resolve_m_rule(cfg.m_rule, c, cfg.n_grid[c], cfg.k, cfg.r);

    const std::size_t tasks = cells * cfg.seeds_per_cell;
    CampaignOutcome out;
    out.rows.resize(tasks);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t t = next.fetch_add(1);
            if (t >= tasks) return;
            const std::size_t cell = t / cfg.seeds_per_cell;
            const unsigned seed_index = static_cast<unsigned>(t % cfg.seeds_per_cell);
            const unsigned n = cfg.n_grid[cell];
            const unsigned long m = cell_m[cell];

            CampaignRow row;
            row.n = n;
            row.k = cfg.k;
            row.r = cfg.r;
            row.m = m;
            row.L = cfg.L;
            row.seed_index = seed_index;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const std::uint64_t base = static_cast<std::uint64_t>(t) * kSeedLanesPerTask;
                Hypergraph h = sample_hnm(n, cfg.k, m, SeedSpec{cfg.master_seed, base});
                Cover c = build_cover(h, cfg.r, cfg.L);
                row.p = c.density.p;
                row.g0_count = c.g0_sets.size();
                auto wb = weight_cover(h, cfg.r, c, WeightMode::automatic, cfg.trials_mc,
                                       SeedSpec{cfg.master_seed, base + 1});
                row.w_total = wb.total.value;
                row.ci_low = wb.total.ci_low;
                row.ci_high = wb.total.ci_high;
                row.success = wb.total.ci_high < 1.0;
            } catch (const std::exception&) {
                row.p = std::nan("");
                row.w_total = std::nan("");
                row.ci_low = std::nan("");
                row.ci_high = std::nan("");
                row.success = false;
            }
            row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
            out.rows[t] = std::move(row);
        }
    };

    unsigned w = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
    if (w <= 1 || tasks <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < w; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // per-cell aggregation with exact binomial bounds
    for (std::size_t c = 0; c < cells; ++c) {
        CampaignCell cc;
        cc.n = cfg.n_grid[c];
        cc.m = cell_m[c];
        cc.seeds = cfg.seeds_per_cell;
        for (unsigned s = 0; s < cfg.seeds_per_cell; ++s) {
            const auto& row = out.rows[c * cfg.seeds_per_cell + s];
            if (std::isnan(row.w_total)) ++cc.errors;
            if (!row.success) ++cc.failures;
        }
        cc.fail_freq = static_cast<double>(cc.failures) / static_cast<double>(cc.seeds);
        cc.cp_upper = clopper_pearson_upper(cc.failures, cc.seeds, kCampaignCpAlpha);
        cc.cp_lower = clopper_pearson_lower(cc.failures, cc.seeds, kCampaignCpAlpha);
        cc.target = 1.0 / std::log(static_cast<double>(cc.n));
        if (cc.cp_lower > cc.target + kCampaignFreqSlack) out.exit_code = 1;
        out.cells.push_back(cc);
    }
    return out;
}

inline std::string CampaignOutcome::csv(bool with_timings) const {
    std::string s = "n,k,r,m,L,seed_index,p,w_total,ci_low,ci_high,success,g0_count,runtime_ms\n";
    for (const auto& r : rows) {
        s += std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + std::to_string(r.r) + ',' +
             std::to_string(r.m) + ',' + detail::format_double(r.L) + ',' +
             std::to_string(r.seed_index) + ',' + detail::format_double(r.p) + ',' +
             detail::format_double(r.w_total) + ',' + detail::format_double(r.ci_low) + ',' +
             detail::format_double(r.ci_high) + ',' + (r.success ? "true" : "false") + ',' +
             std::to_string(r.g0_count) + ',' +
             std::to_string(with_timings ? r.runtime_ms : 0) + '\n';
    }
    return s;
}

inline nlohmann::ordered_json CampaignOutcome::summary_json() const {
    nlohmann::ordered_json cells_j = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        nlohmann::ordered_json e;
        e["n"] = c.n;
        e["m"] = c.m;
        e["seeds"] = c.seeds;
        e["failures"] = c.failures;
        e["errors"] = c.errors;
        e["fail_freq"] = c.fail_freq;
        e["cp99_lower"] = c.cp_lower;
        e["cp99_upper"] = c.cp_upper;
        e["target_inv_ln_n"] = c.target;
        e["within_slack"] = c.cp_lower <= c.target + kCampaignFreqSlack;
        cells_j.push_back(e);
    }
    nlohmann::ordered_json j;
    j["cells"] = cells_j;
    j["exit_code"] = exit_code;
    return j;
}

}  // namespace tlab
