#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "tlab/errors.hpp"
#include "tlab/subsets.hpp"

namespace tlab {

inline constexpr unsigned kFractionalWidthLimit = 14;
inline constexpr unsigned kIntegerWidthLimit = 10;
inline constexpr double kLpTolerance = 1e-9;
inline constexpr double kWitnessSlack = 1e-9;

// A nontrivial monotone family given by its antichain of minimal sets. The
// family is every superset of a minimal set.
struct MonotoneFamily {
    unsigned n = 0;
    std::vector<SubsetMask> minimal_sets;

    void validate() const {
        if (minimal_sets.empty()) throw ValidationError("MonotoneFamily: no minimal sets");
        for (const auto& s : minimal_sets) {
            if (s.width() != n) throw ValidationError("MonotoneFamily: width mismatch");
            if (s.empty())
                throw ValidationError("MonotoneFamily: empty minimal set makes the family trivial");
        }
        for (std::size_t i = 0; i < minimal_sets.size(); ++i)
            for (std::size_t j = 0; j < minimal_sets.size(); ++j)
                if (i != j && minimal_sets[i].is_subset_of(minimal_sets[j]))
                    throw ValidationError("MonotoneFamily: minimal sets are not an antichain");
    }
};

struct FractionalCover {
    std::vector<std::pair<SubsetMask, double>> values;
};

namespace detail {

// Candidate sets for covers: the nonempty subsets of the minimal sets. Any
// set contained in no minimal member covers nothing that needs covering.
struct CandidatePool {
    std::vector<std::uint64_t> masks;    // subset words, width <= 64
    std::vector<unsigned> sizes;         // popcounts
    std::vector<std::vector<unsigned>> constraint_vars;  // per minimal set

    static CandidatePool build(const MonotoneFamily& f) {
        CandidatePool pool;
        std::unordered_set<std::uint64_t> seen;
        for (const auto& s : f.minimal_sets) {
            const std::uint64_t w = s.word0();
            for (std::uint64_t sub = w;; sub = (sub - 1) & w) {
                if (sub != 0 && seen.insert(sub).second) {
                    pool.masks.push_back(sub);
                    pool.sizes.push_back(static_cast<unsigned>(std::popcount(sub)));
                }
                if (sub == 0) break;
            }
        }
        pool.constraint_vars.resize(f.minimal_sets.size());
        for (std::size_t ci = 0; ci < f.minimal_sets.size(); ++ci) {
            const std::uint64_t w = f.minimal_sets[ci].word0();
            for (unsigned vi = 0; vi < pool.masks.size(); ++vi)
                if ((pool.masks[vi] & ~w) == 0) pool.constraint_vars[ci].push_back(vi);
        }
        return pool;
    }
};

// Dense two-phase tableau simplex for: minimize c.x subject to A x >= 1,
// x >= 0, where A is the 0/1 covering matrix given by constraint_vars.
// Bland's rule throughout, so it terminates. Sizes here are tiny.
class CoveringSimplex {
public:
    CoveringSimplex(const std::vector<std::vector<unsigned>>& constraint_vars,
                    const std::vector<double>& costs, std::size_t num_vars)
        : rows_(constraint_vars.size()), pool_(num_vars) {
        cols_ = pool_ + rows_ + rows_;  // pool, surplus, artificial
        tab_.assign(rows_ + 1, std::vector<double>(cols_ + 1, 0.0));
        basis_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (unsigned v : constraint_vars[i]) tab_[i][v] = 1.0;
            tab_[i][pool_ + i] = -1.0;          // surplus
            tab_[i][pool_ + rows_ + i] = 1.0;   // artificial
            tab_[i][cols_] = 1.0;               // rhs
            basis_[i] = static_cast<unsigned>(pool_ + rows_ + i);
        }
        phase1();
        phase2(costs);
    }

    bool feasible() const { return feasible_; }
    double objective() const { return objective_; }
    std::vector<double> solution() const {
        std::vector<double> x(pool_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] < pool_) x[basis_[i]] = tab_[i][cols_];
        return x;
    }

private:
    std::size_t rows_, pool_, cols_;
    std::vector<std::vector<double>> tab_;
    std::vector<unsigned> basis_;
    bool feasible_ = false;
    double objective_ = std::numeric_limits<double>::infinity();

    void set_objective_row(const std::vector<double>& cost, std::size_t limit_cols) {
        auto& z = tab_[rows_];
        std::fill(z.begin(), z.end(), 0.0);
        for (std::size_t jx = 0; jx < limit_cols; ++jx) z[jx] = (jx < cost.size()) ? cost[jx] : 0.0;
        // canonicalize: subtract cost of basic variables times their rows
        for (std::size_t i = 0; i < rows_; ++i) {
            double cb = (basis_[i] < cost.size()) ? cost[basis_[i]] : 0.0;
            if (cb == 0.0) continue;
            for (std::size_t jx = 0; jx <= cols_; ++jx) z[jx] -= cb * tab_[i][jx];
        }
    }

    void pivot(std::size_t pr, std::size_t pc) {
        double pv = tab_[pr][pc];
        for (std::size_t jx = 0; jx <= cols_; ++jx) tab_[pr][jx] /= pv;
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == pr) continue;
            double f = tab_[i][pc];
            if (f == 0.0) continue;
            for (std::size_t jx = 0; jx <= cols_; ++jx) tab_[i][jx] -= f * tab_[pr][jx];
        }
        basis_[pr] = static_cast<unsigned>(pc);
    }

    // Bland: entering = lowest-index column with negative reduced cost;
    // leaving = lowest basis index among the ratio-test minimizers.
    bool iterate(std::size_t allowed_cols) {
        const auto& z = tab_[rows_];
        std::size_t pc = cols_;
        for (std::size_t jx = 0; jx < allowed_cols; ++jx) {
            if (z[jx] < -kLpTolerance) { pc = jx; break; }
        }
        if (pc == cols_) return false;
        std::size_t pr = rows_;
        double best = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (tab_[i][pc] <= kLpTolerance) continue;
            double ratio = tab_[i][cols_] / tab_[i][pc];
            if (pr == rows_ || ratio < best - kLpTolerance ||
                (std::fabs(ratio - best) <= kLpTolerance && basis_[i] < basis_[pr])) {
                pr = i;
                best = ratio;
            }
        }
        if (pr == rows_) throw ValidationError("CoveringSimplex: unbounded (unexpected)");
        pivot(pr, pc);
        return true;
    }

    void phase1() {
        std::vector<double> cost(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) cost[pool_ + rows_ + i] = 1.0;
        set_objective_row(cost, cols_);
        while (iterate(cols_)) {}
        if (tab_[rows_][cols_] < -1e-7) { feasible_ = false; return; }
        // drive leftover artificial basics out where possible
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < pool_ + rows_) continue;
            for (std::size_t jx = 0; jx < pool_ + rows_; ++jx) {
                if (std::fabs(tab_[i][jx]) > 1e-7) { pivot(i, jx); break; }
            }
        }
        feasible_ = true;
    }

    void phase2(const std::vector<double>& costs) {
        if (!feasible_) return;
        std::vector<double> cost(cols_, 0.0);
        for (std::size_t jx = 0; jx < pool_ && jx < costs.size(); ++jx) cost[jx] = costs[jx];
        set_objective_row(cost, pool_ + rows_);
        while (iterate(pool_ + rows_)) {}  // artificials stay out
        objective_ = -tab_[rows_][cols_];
    }
};

inline std::vector<double> pool_costs(const CandidatePool& pool, double p) {
    std::vector<double> c(pool.masks.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = std::pow(p, static_cast<double>(pool.sizes[i]));
    return c;
}

}  // namespace detail

struct FractionalResult {
    double weight = 0.0;
    FractionalCover witness;
};

// Least w(g,p) over fractional covers g of F, by LP over the candidate pool.
// The witness is clamped to [0,1] (clamping never breaks a covering
// constraint and never raises the objective) and re-verified directly.
inline FractionalResult min_fractional_weight(const MonotoneFamily& f, double p) {
    f.validate();
    if (f.n > kFractionalWidthLimit)
        throw CapacityError("min_fractional_weight: n exceeds the LP guard");
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("min_fractional_weight: need 0 < p <= 1");

    const auto pool = detail::CandidatePool::build(f);
    const auto costs = detail::pool_costs(pool, p);
    detail::CoveringSimplex lp(pool.constraint_vars, costs, pool.masks.size());
    if (!lp.feasible()) throw ValidationError("min_fractional_weight: infeasible (no cover)");

    FractionalResult out;
    out.weight = lp.objective();
    auto x = lp.solution();
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = std::clamp(x[i], 0.0, 1.0);
        if (v > 0.0) {
            SubsetMask m(f.n);
            std::uint64_t w = pool.masks[i];
            while (w) {
                m.set(static_cast<unsigned>(std::countr_zero(w)));
                w &= w - 1;
            }
            out.witness.values.emplace_back(std::move(m), v);
        }
    }

    // independent feasibility check of the witness
    for (const auto& s : f.minimal_sets) {
        double acc = 0.0;
        for (const auto& [t, v] : out.witness.values)
            if (t.is_subset_of(s)) acc += v;
        if (acc < 1.0 - kWitnessSlack)
            throw ValidationError("min_fractional_weight: witness fails re-verification");
    }
    return out;
}

struct IntegerResult {
    double weight = 0.0;
    std::vector<SubsetMask> witness;
};

namespace detail {

struct BnBState {
    const CandidatePool* pool = nullptr;
    const std::vector<double>* costs = nullptr;
    std::vector<char> covered;
    std::vector<unsigned> chosen;
    double best = std::numeric_limits<double>::infinity();
    std::vector<unsigned> best_set;

    double lp_bound(const std::vector<std::vector<unsigned>>& live) const {
        if (live.empty()) return 0.0;
        CoveringSimplex lp(live, *costs, pool->masks.size());
        return lp.feasible() ? lp.objective() : std::numeric_limits<double>::infinity();
    }

    void search(double acc) {
        std::size_t pick = covered.size();
        std::size_t fewest = ~std::size_t{0};
        std::vector<std::vector<unsigned>> live;
        for (std::size_t ci = 0; ci < covered.size(); ++ci) {
            if (covered[ci]) continue;
            live.push_back(pool->constraint_vars[ci]);
            if (pool->constraint_vars[ci].size() < fewest) {
                fewest = pool->constraint_vars[ci].size();
                pick = ci;
            }
        }
        if (pick == covered.size()) {
            if (acc < best) {
                best = acc;
                best_set = chosen;
            }
            return;
        }
        if (acc + lp_bound(live) >= best - 1e-12) return;

        auto cands = pool->constraint_vars[pick];
        std::sort(cands.begin(), cands.end(), [&](unsigned a, unsigned b) {
            return (*costs)[a] < (*costs)[b];
        });
        for (unsigned v : cands) {
            std::vector<std::size_t> newly;
            for (std::size_t ci = 0; ci < covered.size(); ++ci) {
                if (covered[ci]) continue;
                bool hits = false;
                for (unsigned u : pool->constraint_vars[ci])
                    if (u == v) { hits = true; break; }
                if (hits) {
                    covered[ci] = 1;
                    newly.push_back(ci);
                }
            }
            chosen.push_back(v);
            search(acc + (*costs)[v]);
            chosen.pop_back();
            for (std::size_t ci : newly) covered[ci] = 0;
        }
    }
};

}  // namespace detail

// Least w(G,p) over integer covers G of F: exact branch and bound over the
// candidate pool with the LP relaxation as the admissible bound.
inline IntegerResult min_integer_weight(const MonotoneFamily& f, double p) {
    f.validate();
    if (f.n > kIntegerWidthLimit)
        throw CapacityError("min_integer_weight: n exceeds the search guard");
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("min_integer_weight: need 0 < p <= 1");

    const auto pool = detail::CandidatePool::build(f);
    const auto costs = detail::pool_costs(pool, p);

    detail::BnBState st;
    st.pool = &pool;
    st.costs = &costs;
    st.covered.assign(f.minimal_sets.size(), 0);
    st.search(0.0);

    IntegerResult out;
    out.weight = st.best;
    for (unsigned v : st.best_set) {
        SubsetMask m(f.n);
        std::uint64_t w = pool.masks[v];
        while (w) {
            m.set(static_cast<unsigned>(std::countr_zero(w)));
            w &= w - 1;
        }
        out.witness.push_back(std::move(m));
    }
    return out;
}

enum class ThresholdKind { integer, fractional };

struct ThresholdResult {
    double value = 0.0;  // midpoint of the final bracket
    double lo = 0.0, hi = 1.0;
    double tol = 0.0;
};

// Bisection on p for the monotone predicate min_weight(F, p) <= 1/2. The
// weight is increasing in p term by term, so the predicate flips once.
inline ThresholdResult q_threshold(const MonotoneFamily& f, ThresholdKind kind, double tol) {
    if (tol < 1e-6) throw ValidationError("q_threshold: tol must be >= 1e-6");
    f.validate();

    auto weight_at = [&](double p) -> double {
        if (kind == ThresholdKind::fractional) return min_fractional_weight(f, p).weight;
        return min_integer_weight(f, p).weight;
    };

    double lo = 0.0, hi = 1.0;  // predicate true at lo (weight -> 0), false at hi
    const int iters = static_cast<int>(std::ceil(std::log2(1.0 / tol))) + 2;
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (weight_at(mid) <= 0.5) lo = mid;
        else hi = mid;
    }
    return {0.5 * (lo + hi), lo, hi, tol};
}

struct RatioResult {
    double q = 0.0;
    double q_f = 0.0;
    double ratio = 0.0;
    double ratio_lo = 0.0, ratio_hi = 0.0;
    double tol = 0.0;
    bool reliable = true;
};

// q_f(F) / q(F) with interval arithmetic through the bisection brackets.
inline RatioResult talagrand_ratio(const MonotoneFamily& f, double tol) {
    auto qi = q_threshold(f, ThresholdKind::integer, tol);
    auto qf = q_threshold(f, ThresholdKind::fractional, tol);
    RatioResult out;
    out.q = qi.value;
    out.q_f = qf.value;
    out.tol = tol;
    out.reliable = qi.value >= 2.0 * tol;
    if (out.reliable) {
        out.ratio = qf.value / qi.value;
        out.ratio_lo = qf.lo / qi.hi;
        out.ratio_hi = qf.hi / qi.lo;
    }
    return out;
}

// --- family file I/O ---------------------------------------------------------
//
// {"n": int, "minimal_sets": [[int,...],...]}

inline MonotoneFamily family_from_json(const nlohmann::json& j) {
    MonotoneFamily f;
    try {
        f.n = j.at("n").get<unsigned>();
        for (const auto& lst : j.at("minimal_sets")) {
            SubsetMask m(f.n);
            for (const auto& v : lst) {
                long vi = v.get<long>();
                if (vi < 0 || static_cast<unsigned long>(vi) >= f.n)
                    throw ValidationError("family JSON: vertex out of range");
                m.set(static_cast<unsigned>(vi));
            }
            f.minimal_sets.push_back(m);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("family JSON: ") + ex.what());
    }
    f.validate();
    return f;
}

inline nlohmann::ordered_json thresholds_json(const RatioResult& r) {
    nlohmann::ordered_json j;
    j["q"] = r.q;
    j["q_f"] = r.q_f;
    j["ratio"] = r.ratio;
    j["tol"] = r.tol;
    return j;
}

}  // namespace tlab
