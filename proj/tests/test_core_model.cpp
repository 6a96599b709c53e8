#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "fpp/core_model.hpp"
#include "fpp/parallel.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

std::uint64_t weight_hash(const WeightField& f) {
    const int n = f.dimension();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
        for (int j = 0; j < n; ++j) {
            if (v >> j & 1u) continue;
            const auto b = std::bit_cast<std::uint64_t>(f.weight({v, j}));
            for (int k = 0; k < 8; ++k) {
                h ^= (b >> (8 * k)) & 0xffu;
                h *= 0x100000001b3ull;
            }
        }
    }
    return h;
}

}  // namespace

TEST_CASE("edge code layout is frozen") {
    CHECK(edge_code(5, {3, 2}) == 17);
    CHECK(edge_code(20, {0, 19}) == 19);
    CHECK(edge_code(20, {1, 0}) == 20);
    CHECK(edge_count(1) == 1);
    CHECK(edge_count(10) == 10 * 512);
}

TEST_CASE("edge validity") {
    CHECK(is_valid_edge(3, {0b010, 0}));
    CHECK_FALSE(is_valid_edge(3, {0b001, 0}));
    CHECK_FALSE(is_valid_edge(3, {0b000, 3}));
    CHECK_FALSE(is_valid_edge(3, {0b1000, 0}));
    const WeightField f({3, 1, 0});
    CHECK_THROWS_AS(edge_weight(f, {0b001, 0}), ContractViolation);
    CHECK_THROWS_AS(f.weight({0b100, 2}), ContractViolation);
}

TEST_CASE("weights are deterministic and positive") {
    const WeightField a({10, 1, 0});
    const WeightField b({10, 1, 0});
    CHECK(std::bit_cast<std::uint64_t>(a.weight({5, 1})) == std::bit_cast<std::uint64_t>(b.weight({5, 1})));
    CHECK(a.weight({0, 0}) == 0.67292355419407768);
    CHECK(a.weight({5, 1}) == 1.5477913293478249);
    CHECK(WeightField({10, 2, 0}).weight({5, 1}) != a.weight({5, 1}));
    CHECK(WeightField({10, 1, 1}).weight({5, 1}) != a.weight({5, 1}));
}

TEST_CASE("weight hash for (n=10, seed=1, replica=0) is stable across threads") {
    const std::uint64_t frozen = 0x8ba5840b43a4dfaeull;
    CHECK(weight_hash(WeightField({10, 1, 0})) == frozen);
    std::vector<std::uint64_t> got(8);
    parallel_for(got.size(), 4, [&](std::size_t i) { got[i] = weight_hash(WeightField({10, 1, 0})); });
    for (const auto h : got) CHECK(h == frozen);
}

TEST_CASE("weight is -ln(1 - U) of the PRF uniform") {
    const WeightField f({12, 5, 3});
    for (std::uint32_t v = 0; v < 4096; v += 37) {
        for (int j = 0; j < 12; ++j) {
            if (v >> j & 1u) continue;
            const double u = f.uniform({v, j});
            REQUIRE(u > 0.0);
            REQUIRE(u < 1.0);
            CHECK(f.weight({v, j}) == -std::log1p(-u));
            CHECK(f.weight_unchecked(v, j) == f.weight({v, j}));
        }
    }
}

TEST_CASE("vertex batches agree with single-edge lookups") {
    for (const int n : {1, 5, 16, 20, 28}) {
        const WeightField f({n, 9, 2});
        WeightField::VertexWords vw;
        for (const std::uint32_t v : {0u, 1u, 6u, full_mask(n) >> 1}) {
            f.load_vertex(v, vw);
            for (int j = 0; j < n; ++j) {
                if (v >> j & 1u) continue;
                CHECK(f.vertex_uniform(vw, v, j) == f.uniform_unchecked(v, j));
            }
        }
    }
}

TEST_CASE("10^6 distinct edges have mean 1 within 3 standard errors") {
    const WeightField f({20, 3, 0});
    double sum = 0.0;
    double sq = 0.0;
    int count = 0;
    for (std::uint32_t v = 0; count < 1'000'000; ++v) {
        for (int j = 0; j < 20 && count < 1'000'000; ++j) {
            if (v >> j & 1u) continue;
            const double w = f.weight_unchecked(v, j);
            sum += w;
            sq += w * w;
            ++count;
        }
    }
    CHECK(std::fabs(sum / count - 1.0) < 3e-3);
    CHECK(std::fabs(sq / count - 2.0) < 0.02);
}

TEST_CASE("no tied weights in a full environment") {
    const WeightField f({14, 4, 0});
    std::vector<double> all;
    for (std::uint32_t v = 0; v < (1u << 14); ++v) {
        for (int j = 0; j < 14; ++j) {
            if (!(v >> j & 1u)) all.push_back(f.weight_unchecked(v, j));
        }
    }
    CHECK(all.size() == edge_count(14));
    CHECK(*std::min_element(all.begin(), all.end()) > 0.0);
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
}

TEST_CASE("path encoding") {
    CHECK_THROWS_AS(PathPerm({0, 0, 1}), ContractViolation);
    CHECK_THROWS_AS(PathPerm({0, 3, 1}), ContractViolation);
    const PathPerm p({2, 0, 1});
    const auto e = p.edges();
    REQUIRE(e.size() == 3);
    CHECK(e[0].tail == 0b000);
    CHECK(e[0].dir == 2);
    CHECK(e[1].tail == 0b100);
    CHECK(e[2].tail == 0b101);
    for (const auto& ed : e) CHECK(is_valid_edge(3, ed));
    CHECK(PathPerm::identity(4) == PathPerm({0, 1, 2, 3}));
}

TEST_CASE("path weight") {
    const WeightField f1({1, 8, 0});
    CHECK(path_weight(f1, PathPerm::identity(1)) == f1.weight({0, 0}));

    const WeightField f({6, 8, 0});
    std::vector<std::uint8_t> order(6);
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    int paths = 0;
    do {
        const PathPerm p(order);
        CHECK(path_weight(f, p) == oracle::naive_path_weight(f, order));
        ++paths;
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(paths == 720);
    CHECK_THROWS_AS(path_weight(f, PathPerm::identity(5)), ContractViolation);
}

TEST_CASE("shared edges examples") {
    const PathPerm a({0, 1, 2});
    CHECK(shared_edges(a, a) == 3);
    CHECK(shared_edges(a, PathPerm({0, 2, 1})) == 1);
    CHECK(shared_edges(a, PathPerm({2, 1, 0})) == 0);
    CHECK_THROWS_AS(shared_edges(a, PathPerm::identity(4)), ContractViolation);
}

TEST_CASE("shared edges: n iff identical, never n - 1 (all pairs for n <= 7)") {
    for (int n = 1; n <= 7; ++n) {
        const auto paths = oracle::all_paths(n);
        long bad = 0;
        for (const auto& p : paths) {
            for (const auto& q : paths) {
                const int s = shared_edges(p, q);
                if (s != shared_edges(q, p)) ++bad;
                if ((s == n) != (p == q)) ++bad;
                if (n > 1 && s == n - 1) ++bad;
                if (n <= 5 && s != oracle::naive_shared_edges(p, q)) ++bad;
            }
        }
        CHECK_MESSAGE(bad == 0, "n = " << n);
    }
}

TEST_CASE("shared edges at n = 8 against every path from relabelled references") {
    // Relabelling coordinates preserves overlaps and maps (p, q) to
    // (id, p^-1 q), so the identity reference alone covers all pairs.
    const auto paths = oracle::all_paths(8);
    for (const std::size_t ref : {std::size_t{0}, std::size_t{1234}, std::size_t{40319}}) {
        for (const auto& q : paths) {
            const int s = shared_edges(paths[ref], q);
            REQUIRE((s == 8) == (paths[ref] == q));
            REQUIRE(s != 7);
        }
    }
}

TEST_CASE("middle steps and middle overlap") {
    CHECK_FALSE(is_middle_step(8, 1, 0));
    CHECK(is_middle_step(8, 1, 1));
    CHECK(is_middle_step(8, 1, 6));
    CHECK_FALSE(is_middle_step(8, 1, 7));
    const PathPerm a = PathPerm::identity(5);
    const PathPerm b({0, 2, 1, 3, 4});  // shares steps 0, 3 and 4
    CHECK(shared_edges(a, b) == 3);
    CHECK(shared_middle_edges(a, b, 1) == 1);
    CHECK(shared_middle_edges(a, b, 0) == 3);
    CHECK(shared_middle_edges(a, b, 2) == 0);
}
