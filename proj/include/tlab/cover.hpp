#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tlab/hypergraph.hpp"
#include "tlab/rng.hpp"
#include "tlab/subsets.hpp"

namespace tlab {

inline const double kESquared = std::exp(2.0);
inline constexpr double kBoundaryGuardBand = 1e-12;

// The density solving m * p^k / r = 1, i.e. p = (r/m)^{1/k}. When m < r no
// p in [0,1] reaches weight 1; then p = 1 and the upset of g is empty.
struct CriticalDensity {
    double p = 1.0;
    bool upset_empty = false;
};

inline CriticalDensity compute_p(unsigned r, unsigned long m, unsigned k) {
    if (r < 1 || k < 1) throw ValidationError("compute_p: need r >= 1 and k >= 1");
    if (m < r) return {1.0, true};
    if (m == r) return {1.0, false};
    return {std::pow(static_cast<double>(r) / static_cast<double>(m),
                     1.0 / static_cast<double>(k)),
            false};
}

enum class LevelMode { full, restricted };

// One size class j of the cover. Full levels hold every j-subset of X;
// restricted levels hold only the j-subsets that already contain r edges
// and are never materialized. near_boundary marks n*p/j within a relative
// 1e-12 band of the e^2 cut, where the classification is rounding-sensitive.
struct LevelSpec {
    unsigned j = 0;
    LevelMode mode = LevelMode::full;
    bool near_boundary = false;
};

struct Cover {
    unsigned n = 0, k = 0, r = 1;
    double L = 1.0;
    CriticalDensity density;
    std::vector<SubsetMask> g0_sets;  // deduplicated unions of ceil(r/2)-matchings
    std::vector<LevelSpec> levels;    // j ascending, k+1 .. k*r - ceil(r/2)

    unsigned matching_size() const { return (r + 1) / 2; }  // ceil(r/2)
    unsigned level_j_min() const { return k + 1; }
    unsigned level_j_max() const { return k * r - matching_size(); }

    const LevelSpec* find_level(unsigned j) const {
        for (const auto& lv : levels)
            if (lv.j == j) return &lv;
        return nullptr;
    }
};

// Builds G = G0 union the levels G_{k+1} .. G_{kr - ceil(r/2)}: G0 is the
// set of unions of all ceil(r/2)-edge matchings in the support; level j is
// full when n*p/j <= e^2 and restricted otherwise. If the upset of g is
// empty (m < r) the cover is empty. For r = 1 this degenerates to G0 = the
// support with no levels.
inline Cover build_cover(const Hypergraph& h, unsigned r, double L,
                         unsigned long long node_budget = kDefaultNodeBudget) {
    if (L <= 0.0) throw ValidationError("build_cover: L must be positive");
    if (r < 1) throw ValidationError("build_cover: r must be >= 1");
    h.validate();
    if (h.k < 1) throw ValidationError("build_cover: k must be >= 1");

    Cover c;
    c.n = h.n;
    c.k = h.k;
    c.r = r;
    c.L = L;
    c.density = compute_p(r, h.m(), h.k);
    if (c.density.upset_empty) return c;

    const unsigned s = c.matching_size();
    if (s == 1) {
        c.g0_sets = h.edges;  // single-edge matchings: G0 is the support
    } else {
        std::set<SubsetMask> unions;
        try {
            enumerate_matchings(
                h.edges, s,
                [&](const std::vector<unsigned>& ix) {
                    SubsetMask u(h.n);
                    for (unsigned i : ix) u |= h.edges[i];
                    unions.insert(u);
                },
                node_budget);
        } catch (const BudgetError& e) {
            throw BudgetError("build_cover: matching enumeration exceeded node budget (" +
                                  std::to_string(unions.size()) + " unions found so far)",
                              e.nodes);
        }
        c.g0_sets.assign(unions.begin(), unions.end());
    }

    const double np = static_cast<double>(h.n) * c.density.p;
    for (unsigned j = c.level_j_min(); j <= c.level_j_max(); ++j) {
        double ratio = np / static_cast<double>(j);
        LevelSpec lv;
        lv.j = j;
        lv.mode = (ratio <= kESquared) ? LevelMode::full : LevelMode::restricted;
        lv.near_boundary = std::fabs(ratio - kESquared) <= kBoundaryGuardBand * kESquared;
        c.levels.push_back(lv);
    }
    return c;
}

namespace detail {

// Decision: does S contain r distinct edges whose union has at most
// union_limit vertices? Exact depth-first search over the edges inside S,
// pruning any branch whose running union already exceeds the limit.
inline bool has_r_edges_with_small_union(const SubsetMask& S, const Hypergraph& h, unsigned r,
                                         unsigned union_limit,
                                         unsigned long long node_budget = kDefaultNodeBudget) {
    std::vector<const SubsetMask*> within;
    for (const auto& e : h.edges)
        if (e.is_subset_of(S)) within.push_back(&e);
    if (within.size() < r) return false;

    // cheap witness first: greedily grow a union by least-increment edges
    {
        SubsetMask u(h.n);
        std::vector<bool> used(within.size(), false);
        unsigned size = 0;
        bool ok = true;
        for (unsigned pick = 0; pick < r && ok; ++pick) {
            long best = -1;
            unsigned best_inc = ~0u;
            for (std::size_t i = 0; i < within.size(); ++i) {
                if (used[i]) continue;
                unsigned inc = (*within[i] | u).popcount() - size;
                if (inc < best_inc) {
                    best_inc = inc;
                    best = static_cast<long>(i);
                }
            }
            if (best < 0) { ok = false; break; }
            used[static_cast<std::size_t>(best)] = true;
            u |= *within[static_cast<std::size_t>(best)];
            size = u.popcount();
            if (size > union_limit) { ok = false; break; }
        }
        if (ok && size <= union_limit) return true;
    }

    unsigned long long nodes = 0;
    auto rec = [&](auto&& self, std::size_t start, unsigned picked, const SubsetMask& u) -> bool {
        if (picked == r) return true;
        for (std::size_t i = start; i < within.size(); ++i) {
            if (within.size() - i < r - picked) return false;
            if (++nodes > node_budget)
                throw BudgetError("member_upset_cover: union search budget exceeded", nodes);
            SubsetMask nu = u | *within[i];
            if (nu.popcount() > union_limit) continue;
            if (self(self, i + 1, picked + 1, nu)) return true;
        }
        return false;
    };
    return rec(rec, 0, 0, SubsetMask(h.n));
}

}  // namespace detail

// True iff S is a superset of some member of the cover: a G0 union, any
// j-subset at a full level, or a j-subset with r edges at a restricted level.
inline bool member_upset_cover(const SubsetMask& S, const Cover& c, const Hypergraph& h,
                               unsigned long long node_budget = kDefaultNodeBudget) {
    if (S.width() != c.n) throw ValidationError("member_upset_cover: width mismatch");
    if (c.density.upset_empty) return false;

    for (const auto& u : c.g0_sets)
        if (u.is_subset_of(S)) return true;

    const unsigned pc = S.popcount();
    unsigned max_restricted = 0;
    for (const auto& lv : c.levels) {
        if (lv.mode == LevelMode::full && pc >= lv.j) return true;
        if (lv.mode == LevelMode::restricted && lv.j <= pc)
            max_restricted = std::max(max_restricted, lv.j);
    }
    if (max_restricted == 0) return false;
    // A j-subset T of S with >= r edges exists iff some r edges inside S
    // have a union of at most j vertices (pad the union to size j within S).
    return detail::has_r_edges_with_small_union(S, h, c.r, max_restricted, node_budget);
}

struct CoveringReport {
    std::uint64_t checked = 0;
    std::uint64_t members_g = 0;
    std::uint64_t violations = 0;
    std::vector<SubsetMask> violating;  // capped sample for diagnostics
    bool upset_empty = false;

    bool ok() const { return violations == 0; }
};

inline constexpr unsigned kExhaustiveWidthLimit = 22;
inline constexpr std::size_t kViolationSampleCap = 64;

// Checks the covering inclusion (S has >= r edges implies S is covered) over
// every one of the 2^n subsets, with subset-sum transforms over the lattice
// rather than per-S scans.
inline CoveringReport verify_covering_exhaustive(const Hypergraph& h, unsigned r, double L,
                                                 unsigned long long node_budget = kDefaultNodeBudget) {
    if (h.n > kExhaustiveWidthLimit)
        throw CapacityError("verify_covering_exhaustive: n exceeds the 2^n enumeration guard");
    Cover c = build_cover(h, r, L, node_budget);

    const std::size_t size = std::size_t{1} << h.n;
    CoveringReport rep;
    rep.checked = size;
    rep.upset_empty = c.density.upset_empty;

    // edge counts: zeta transform of the edge indicator
    std::vector<std::uint32_t> cnt(size, 0);
    for (const auto& e : h.edges) cnt[e.word0()] += 1;
    for (unsigned b = 0; b < h.n; ++b)
        for (std::size_t mask = 0; mask < size; ++mask)
            if (mask & (std::size_t{1} << b)) cnt[mask] += cnt[mask ^ (std::size_t{1} << b)];

    std::vector<std::uint8_t> covered(size, 0);
    if (!c.density.upset_empty) {
        for (const auto& u : c.g0_sets) covered[u.word0()] = 1;
        unsigned min_full = h.n + 1;
        for (const auto& lv : c.levels) {
            if (lv.mode == LevelMode::full) min_full = std::min(min_full, lv.j);
        }
        for (std::size_t mask = 0; mask < size; ++mask) {
            if (covered[mask]) continue;
            const unsigned pc = static_cast<unsigned>(std::popcount(mask));
            if (pc >= min_full) { covered[mask] = 1; continue; }
            if (cnt[mask] >= r) {
                for (const auto& lv : c.levels)
                    if (lv.mode == LevelMode::restricted && lv.j == pc) { covered[mask] = 1; break; }
            }
        }
        for (unsigned b = 0; b < h.n; ++b)
            for (std::size_t mask = 0; mask < size; ++mask)
                if (mask & (std::size_t{1} << b)) covered[mask] |= covered[mask ^ (std::size_t{1} << b)];
    }

    for (std::size_t mask = 0; mask < size; ++mask) {
        if (cnt[mask] < r) continue;
        ++rep.members_g;
        if (!covered[mask]) {
            ++rep.violations;
            if (rep.violating.size() < kViolationSampleCap) {
                SubsetMask s(h.n);
                for (unsigned b = 0; b < h.n; ++b)
                    if (mask & (std::size_t{1} << b)) s.set(b);
                rep.violating.push_back(s);
            }
        }
    }
    return rep;
}

// Spot-check at widths beyond enumeration: members of the upset of g are
// sampled as unions of r random support edges plus random vertex padding.
inline CoveringReport verify_covering_sampled(const Hypergraph& h, unsigned r, double L,
                                              std::uint64_t trials, SeedSpec seed,
                                              unsigned long long node_budget = kDefaultNodeBudget) {
    Cover c = build_cover(h, r, L, node_budget);
    CoveringReport rep;
    rep.upset_empty = c.density.upset_empty;
    if (c.density.upset_empty || trials == 0) return rep;

    CounterRng rng(seed);
    const std::size_t m = h.m();
    for (std::uint64_t t = 0; t < trials; ++t) {
        // r distinct edge indices by partial Fisher-Yates over a small buffer
        std::vector<std::size_t> ix(r);
        {
            std::vector<std::pair<std::size_t, std::size_t>> perm;  // tiny; linear scan
            auto at = [&](std::size_t i) {
                for (auto& kv : perm)
                    if (kv.first == i) return kv.second;
                return i;
            };
            auto set_at = [&](std::size_t key, std::size_t val) {
                for (auto& kv : perm)
                    if (kv.first == key) { kv.second = val; return; }
                perm.emplace_back(key, val);
            };
            for (unsigned i = 0; i < r; ++i) {
                std::size_t j = i + static_cast<std::size_t>(rng.next_below(m - i));
                std::size_t rank_j = at(j);
                set_at(j, at(i));
                ix[i] = rank_j;
            }
        }
        SubsetMask S(h.n);
        for (unsigned i = 0; i < r; ++i) S |= h.edges[ix[i]];
        const unsigned pad = static_cast<unsigned>(rng.next_below(h.k + 1));
        for (unsigned i = 0; i < pad; ++i) S.set(static_cast<unsigned>(rng.next_below(h.n)));

        ++rep.checked;
        GFunction g{h, r};
        if (!member_upset_g(S, g)) continue;  // cannot happen; counted for honesty
        ++rep.members_g;
        if (!member_upset_cover(S, c, h, node_budget)) {
            ++rep.violations;
            if (rep.violating.size() < kViolationSampleCap) rep.violating.push_back(S);
        }
    }
    return rep;
}

inline nlohmann::ordered_json cover_summary_json(const Cover& c) {
    nlohmann::ordered_json j;
    j["p"] = c.density.p;
    j["upset_empty"] = c.density.upset_empty;
    j["L"] = c.L;
    j["g0_count"] = c.g0_sets.size();
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto& lv : c.levels) {
        nlohmann::ordered_json e;
        e["j"] = lv.j;
        e["mode"] = (lv.mode == LevelMode::full) ? "full" : "restricted";
        if (lv.near_boundary) e["near_boundary"] = true;  // classification is rounding-sensitive
        levels.push_back(e);
    }
    j["levels"] = levels;
    return j;
}

inline nlohmann::ordered_json covering_report_json(const CoveringReport& rep) {
    nlohmann::ordered_json j;
    j["checked"] = rep.checked;
    j["members_g"] = rep.members_g;
    j["violations"] = rep.violations;
    j["upset_empty"] = rep.upset_empty;
    nlohmann::ordered_json viol = nlohmann::ordered_json::array();
    for (const auto& s : rep.violating) viol.push_back(s.vertices());
    j["violating"] = viol;
    return j;
}

}  // namespace tlab
