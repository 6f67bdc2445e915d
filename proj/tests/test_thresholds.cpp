#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "tlab/rng.hpp"
#include "tlab/thresholds.hpp"

using namespace tlab;

namespace {

MonotoneFamily family_from(unsigned n, const std::vector<std::vector<unsigned>>& sets) {
    MonotoneFamily f;
    f.n = n;
    for (const auto& s : sets) f.minimal_sets.push_back(SubsetMask::from_vertices(n, s));
    f.validate();
    return f;
}

// Random antichain: sample masks, drop any that contains or is contained in
// an accepted one.
MonotoneFamily random_antichain(unsigned n, CounterRng& rng) {
    MonotoneFamily f;
    f.n = n;
    const unsigned want = 1 + static_cast<unsigned>(rng.next_below(4));
    for (unsigned tries = 0; tries < 60 && f.minimal_sets.size() < want; ++tries) {
        SubsetMask m(n);
        unsigned size = 1 + static_cast<unsigned>(rng.next_below(std::min(n, 4u)));
        while (m.popcount() < size) m.set(static_cast<unsigned>(rng.next_below(n)));
        bool ok = true;
        for (const auto& s : f.minimal_sets)
            if (s.is_subset_of(m) || m.is_subset_of(s)) ok = false;
        if (ok) f.minimal_sets.push_back(m);
    }
    f.validate();
    return f;
}

}  // namespace

TEST_CASE("family validation") {
    CHECK_THROWS_AS(family_from(3, {}), ValidationError);
    CHECK_THROWS_AS(family_from(3, {{0}, {0, 1}}), ValidationError);  // not an antichain
    CHECK_THROWS_AS(family_from(3, {{}}), ValidationError);           // empty minimal set
    auto f = family_from(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(f.minimal_sets.size() == 3);
}

TEST_CASE("min_fractional_weight on pinned families") {
    SUBCASE("single top set: the whole set is the cheapest candidate") {
        auto f = family_from(3, {{0, 1, 2}});
        auto res = min_fractional_weight(f, 0.5);
        CHECK(res.weight == doctest::Approx(0.125).epsilon(1e-7));
        auto one = family_from(1, {{0}});
        CHECK(min_fractional_weight(one, 0.37).weight == doctest::Approx(0.37).epsilon(1e-7));
    }
    SUBCASE("the pair family puts all mass on the pair") {
        auto f = family_from(2, {{0, 1}});
        auto res = min_fractional_weight(f, 0.5);
        CHECK(res.weight == doctest::Approx(0.25).epsilon(1e-7));
    }
    SUBCASE("all singletons force g = 1 on each singleton") {
        auto f = family_from(4, {{0}, {1}, {2}, {3}});
        auto res = min_fractional_weight(f, 0.2);
        CHECK(res.weight == doctest::Approx(4 * 0.2).epsilon(1e-7));
    }
}

TEST_CASE("fractional witness re-verifies and stays within [0,1]") {
    CounterRng rng(SeedSpec{41, 0});
    for (int t = 0; t < 30; ++t) {
        auto f = random_antichain(6 + static_cast<unsigned>(rng.next_below(3)), rng);
        auto res = min_fractional_weight(f, 0.3 + 0.1 * static_cast<double>(t % 5));
        double recompute = 0.0;
        for (const auto& [mask, v] : res.witness.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            recompute += v * std::pow(0.3 + 0.1 * static_cast<double>(t % 5),
                                      static_cast<double>(mask.popcount()));
        }
        CHECK(recompute == doctest::Approx(res.weight).epsilon(1e-6));
        for (const auto& s : f.minimal_sets) {
            double acc = 0.0;
            for (const auto& [mask, v] : res.witness.values)
                if (mask.is_subset_of(s)) acc += v;
            CHECK(acc >= 1.0 - 1e-7);
        }
    }
}

TEST_CASE("min_integer_weight pinned families") {
    auto f = family_from(2, {{0, 1}});
    auto res = min_integer_weight(f, 0.7);
    CHECK(res.weight == doctest::Approx(0.49).epsilon(1e-9));
    REQUIRE(res.witness.size() == 1);
    CHECK(res.witness[0].popcount() == 2);

    auto all = family_from(5, {{0}, {1}, {2}, {3}, {4}});
    CHECK(min_integer_weight(all, 0.3).weight == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("integer weight dominates fractional weight") {
    CounterRng rng(SeedSpec{42, 0});
    for (int t = 0; t < 30; ++t) {
        auto f = random_antichain(5 + static_cast<unsigned>(rng.next_below(4)), rng);
        double p = 0.15 + 0.1 * static_cast<double>(t % 8);
        auto frac = min_fractional_weight(f, p);
        auto integer = min_integer_weight(f, p);
        CHECK(integer.weight >= frac.weight - 1e-7);
    }
}

TEST_CASE("restricting candidates to subsets of minimal sets loses nothing (n <= 5)") {
    // oracle: the same branch-and-bound, but with every nonempty subset of
    // the ground set as a candidate
    CounterRng rng(SeedSpec{43, 0});
    for (int t = 0; t < 12; ++t) {
        const unsigned n = 4 + static_cast<unsigned>(rng.next_below(2));
        auto f = random_antichain(n, rng);
        const double p = 0.2 + 0.15 * static_cast<double>(t % 4);

        double best_unrestricted = 1e18;
        std::vector<std::uint64_t> pool;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) pool.push_back(mask);
        // exact search: depth-first over constraints, any candidate covering
        std::vector<std::uint64_t> mins;
        for (const auto& s : f.minimal_sets) mins.push_back(s.word0());
        auto rec = [&](auto&& self, std::uint64_t coveredMask, double acc,
                       std::set<std::uint64_t> used) -> void {
            if (acc >= best_unrestricted) return;
            std::size_t pick = mins.size();
            for (std::size_t i = 0; i < mins.size(); ++i)
                if (!(coveredMask & (std::uint64_t{1} << i))) { pick = i; break; }
            if (pick == mins.size()) {
                best_unrestricted = acc;
                return;
            }
            for (std::uint64_t cand : pool) {
                if ((cand & ~mins[pick]) != 0) continue;  // must sit inside the minimal set
                double cost = used.count(cand) ? 0.0
                                               : std::pow(p, static_cast<double>(
                                                                 std::popcount(cand)));
                std::uint64_t nc = coveredMask;
                for (std::size_t i = 0; i < mins.size(); ++i)
                    if ((cand & ~mins[i]) == 0) nc |= (std::uint64_t{1} << i);
                auto nu = used;
                nu.insert(cand);
                self(self, nc, acc + cost, std::move(nu));
            }
        };
        rec(rec, 0, 0.0, {});
        auto restricted = min_integer_weight(f, p);
        CHECK(restricted.weight == doctest::Approx(best_unrestricted).epsilon(1e-9));
    }
}

TEST_CASE("q_threshold pinned crossings") {
    auto pair = family_from(2, {{0, 1}});
    auto qf = q_threshold(pair, ThresholdKind::fractional, 1e-5);
    CHECK(qf.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
    auto qi = q_threshold(pair, ThresholdKind::integer, 1e-5);
    CHECK(qi.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));

    auto single = family_from(3, {{1}});
    CHECK(q_threshold(single, ThresholdKind::integer, 1e-5).value ==
          doctest::Approx(0.5).epsilon(1e-4));
    CHECK(q_threshold(single, ThresholdKind::fractional, 1e-5).value ==
          doctest::Approx(0.5).epsilon(1e-4));

    CHECK_THROWS_AS(q_threshold(pair, ThresholdKind::integer, 1e-7), ValidationError);
}

TEST_CASE("bisection predicate is monotone on sampled pairs") {
    CounterRng rng(SeedSpec{44, 0});
    for (int t = 0; t < 15; ++t) {
        auto f = random_antichain(6, rng);
        double p1 = 0.2 + 0.1 * static_cast<double>(rng.next_below(7));
        double p2 = p1 * 0.6;
        double w1 = min_fractional_weight(f, p1).weight;
        double w2 = min_fractional_weight(f, p2).weight;
        if (w1 <= 0.5) CHECK(w2 <= 0.5 + 1e-9);
    }
}

TEST_CASE("talagrand ratio on pinned and random families") {
    auto pair = family_from(2, {{0, 1}});
    auto r = talagrand_ratio(pair, 1e-5);
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.reliable);

    auto single = family_from(3, {{2}});
    CHECK(talagrand_ratio(single, 1e-5).ratio == doctest::Approx(1.0).epsilon(1e-3));

    CounterRng rng(SeedSpec{45, 0});
    for (int t = 0; t < 10; ++t) {
        auto f = random_antichain(6, rng);
        auto rr = talagrand_ratio(f, 1e-4);
        CHECK(rr.q <= rr.q_f + 1e-6);
        if (rr.reliable) CHECK(rr.ratio >= 1.0 - 1e-4);
    }
}

TEST_CASE("family JSON parsing") {
    auto f = family_from_json(nlohmann::json::parse(R"({"n":4,"minimal_sets":[[0,1],[2,3]]})"));
    CHECK(f.minimal_sets.size() == 2);
    CHECK_THROWS_AS(
        family_from_json(nlohmann::json::parse(R"({"n":4,"minimal_sets":[[0],[0,1]]})")),
        ValidationError);
    CHECK_THROWS_AS(family_from_json(nlohmann::json::parse(R"({"n":4})")), ValidationError);
}

TEST_CASE("LP handles the widest allowed pool") {
    // single top set on n = 14: the pool is every nonempty subset (16383
    // variables); the optimum puts all mass on the top set
    MonotoneFamily f;
    f.n = 14;
    std::vector<unsigned> all;
    for (unsigned v = 0; v < 14; ++v) all.push_back(v);
    f.minimal_sets.push_back(SubsetMask::from_vertices(14, all));
    auto res = min_fractional_weight(f, 0.5);
    CHECK(res.weight == doctest::Approx(std::pow(0.5, 14.0)).epsilon(1e-6));

    // several mid-size overlapping minimal sets
    MonotoneFamily g;
    g.n = 12;
    g.minimal_sets.push_back(SubsetMask::from_vertices(12, {0, 1, 2, 3, 4, 5}));
    g.minimal_sets.push_back(SubsetMask::from_vertices(12, {4, 5, 6, 7, 8, 9}));
    g.minimal_sets.push_back(SubsetMask::from_vertices(12, {0, 2, 8, 9, 10, 11}));
    auto res2 = min_fractional_weight(g, 0.4);
    CHECK(res2.weight > 0.0);
    // cheapest conceivable cover: one full six-set per constraint, shared mass
    CHECK(res2.weight <= 3.0 * std::pow(0.4, 6.0) + 1e-9);
}

TEST_CASE("capacity guards") {
    MonotoneFamily big;
    big.n = 15;
    big.minimal_sets.push_back(SubsetMask::from_vertices(15, {0, 1}));
    CHECK_THROWS_AS(min_fractional_weight(big, 0.5), CapacityError);
    MonotoneFamily wide;
    wide.n = 11;
    wide.minimal_sets.push_back(SubsetMask::from_vertices(11, {0, 1}));
    CHECK_THROWS_AS(min_integer_weight(wide, 0.5), CapacityError);
}
