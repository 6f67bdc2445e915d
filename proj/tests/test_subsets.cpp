#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "tlab/exact.hpp"
#include "tlab/rng.hpp"
#include "tlab/subsets.hpp"

using namespace tlab;

TEST_CASE("SubsetMask basics across the word boundary") {
    SubsetMask m(130);
    m.set(0);
    m.set(63);
    m.set(64);
    m.set(129);
    CHECK(m.popcount() == 4);
    CHECK(m.test(63));
    CHECK(m.test(64));
    CHECK_FALSE(m.test(1));
    CHECK(m.vertices() == std::vector<unsigned>{0, 63, 64, 129});

    SubsetMask sub(130);
    sub.set(63);
    sub.set(129);
    CHECK(sub.is_subset_of(m));
    CHECK_FALSE(m.is_subset_of(sub));
    CHECK((m & sub) == sub);
    CHECK((m | sub) == m);
    CHECK(sub < m);
    CHECK_THROWS_AS(m.set(130), ValidationError);
}

TEST_CASE("mask order is colex on equal-size subsets") {
    // {1,2} before {0,3}: the larger top element decides
    auto a = SubsetMask::from_vertices(4, {1, 2});
    auto b = SubsetMask::from_vertices(4, {0, 3});
    CHECK(a < b);
}

TEST_CASE("enumerate_ksubsets yields C(n,k) distinct masks in increasing order") {
    for (unsigned n = 0; n <= 16; ++n) {
        for (unsigned k = 0; k <= n; ++k) {
            std::vector<SubsetMask> seen;
            enumerate_ksubsets(n, k, [&](const SubsetMask& m) {
                CHECK(m.popcount() == k);
                if (!seen.empty()) CHECK(seen.back() < m);
                seen.push_back(m);
            });
            CHECK(BigInt(static_cast<unsigned long>(seen.size())) == binom(n, k));
        }
    }
    CHECK_THROWS_AS(all_ksubsets(65, 2), CapacityError);
}

TEST_CASE("enumeration at the 64-bit word boundary") {
    std::uint64_t count = 0;
    enumerate_ksubsets(64, 1, [&](const SubsetMask&) { ++count; });
    CHECK(count == 64);
    count = 0;
    enumerate_ksubsets(64, 2, [&](const SubsetMask&) { ++count; });
    CHECK(count == 2016);
    count = 0;
    enumerate_ksubsets(64, 63, [&](const SubsetMask&) { ++count; });
    CHECK(count == 64);
    count = 0;
    enumerate_ksubsets(64, 64, [&](const SubsetMask& m) {
        CHECK(m.popcount() == 64);
        ++count;
    });
    CHECK(count == 1);
}

TEST_CASE("mask ordering across word boundaries") {
    SubsetMask lo(130), hi(130);
    lo.set(63);
    hi.set(64);
    CHECK(lo < hi);
    SubsetMask top(130);
    top.set(129);
    CHECK(hi < top);
    CHECK(lo < top);
}

TEST_CASE("enumerate_ksubsets frozen small cases") {
    auto three_choose_two = all_ksubsets(3, 2);
    REQUIRE(three_choose_two.size() == 3);
    CHECK(three_choose_two[0].vertices() == std::vector<unsigned>{0, 1});
    CHECK(three_choose_two[1].vertices() == std::vector<unsigned>{0, 2});
    CHECK(three_choose_two[2].vertices() == std::vector<unsigned>{1, 2});

    auto empty = all_ksubsets(6, 0);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].popcount() == 0);

    CHECK(all_ksubsets(10, 3).size() == 120);
}

namespace {

std::vector<SubsetMask> edges_from(unsigned n, const std::vector<std::vector<unsigned>>& vs) {
    std::vector<SubsetMask> out;
    for (const auto& v : vs) out.push_back(SubsetMask::from_vertices(n, v));
    return out;
}

// Brute-force oracle: filter all index combinations for pairwise disjointness.
unsigned long long count_matchings_brute(const std::vector<SubsetMask>& edges, unsigned s) {
    unsigned long long count = 0;
    std::vector<unsigned> ix(s);
    auto rec = [&](auto&& self, unsigned start, unsigned depth) -> void {
        if (depth == s) {
            for (unsigned a = 0; a < s; ++a)
                for (unsigned b = a + 1; b < s; ++b)
                    if (edges[ix[a]].intersects(edges[ix[b]])) return;
            ++count;
            return;
        }
        for (unsigned i = start; i < edges.size(); ++i) {
            ix[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    if (s == 0) return 1;
    rec(rec, 0, 0);
    return count;
}

}  // namespace

TEST_CASE("enumerate_matchings frozen examples") {
    {
        auto edges = edges_from(4, {{0, 1}, {2, 3}, {0, 2}});
        std::vector<std::vector<unsigned>> found;
        enumerate_matchings(edges, 2, [&](const std::vector<unsigned>& ix) { found.push_back(ix); });
        REQUIRE(found.size() == 1);
        CHECK(found[0] == std::vector<unsigned>{0, 1});
    }
    {
        auto edges = edges_from(3, {{0, 1}, {0, 2}, {1, 2}});
        CHECK(enumerate_matchings(edges, 2, [](const std::vector<unsigned>&) {}) == 0);
        CHECK(enumerate_matchings(edges, 1, [](const std::vector<unsigned>&) {}) == 3);
    }
}

TEST_CASE("enumerate_matchings agrees with the brute-force filter") {
    CounterRng rng(SeedSpec{7, 0});
    for (int trial = 0; trial < 40; ++trial) {
        const unsigned n = 6 + static_cast<unsigned>(rng.next_below(4));
        const unsigned k = 2 + static_cast<unsigned>(rng.next_below(2));
        std::vector<SubsetMask> edges;
        std::set<std::vector<unsigned>> used;
        const unsigned m = 3 + static_cast<unsigned>(rng.next_below(12));  // <= 15 edges
        while (edges.size() < m && edges.size() < 15) {
            std::vector<unsigned> vs;
            std::set<unsigned> s;
            while (s.size() < k) s.insert(static_cast<unsigned>(rng.next_below(n)));
            vs.assign(s.begin(), s.end());
            if (used.insert(vs).second) edges.push_back(SubsetMask::from_vertices(n, vs));
        }
        for (unsigned sz = 0; sz <= 3; ++sz) {
            unsigned long long got = 0;
            enumerate_matchings(edges, sz, [&](const std::vector<unsigned>& ix) {
                // every yielded matching satisfies pairwise disjointness
                SubsetMask u(n);
                unsigned total = 0;
                for (unsigned i : ix) {
                    CHECK_FALSE(u.intersects(edges[i]));
                    u |= edges[i];
                    total += k;
                }
                CHECK(u.popcount() == total);
                ++got;
            });
            CHECK(got == count_matchings_brute(edges, sz));
        }
    }
}

TEST_CASE("union_of covers the matching invariant") {
    Matching m;
    m.edges = edges_from(8, {{0, 1}, {4, 5}, {6, 7}});
    CHECK(union_of(m, 8).popcount() == 6);
    Matching empty;
    CHECK(union_of(empty, 8).popcount() == 0);
    Matching pair;
    pair.edges = edges_from(4, {{0, 1}, {2, 3}});
    CHECK(union_of(pair, 4).vertices() == std::vector<unsigned>{0, 1, 2, 3});
}

TEST_CASE("matching node budget trips as BudgetError") {
    std::vector<SubsetMask> edges;
    for (unsigned i = 0; i < 20; ++i) {
        SubsetMask e(64);
        e.set(2 * i);
        e.set(2 * i + 1);
        edges.push_back(e);
    }
    CHECK_THROWS_AS(
        enumerate_matchings(edges, 5, [](const std::vector<unsigned>&) {}, 50),
        BudgetError);
}
