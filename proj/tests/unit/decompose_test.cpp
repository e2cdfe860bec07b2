#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "uptail/bounds.hpp"
#include "uptail/decompose.hpp"
#include "uptail/errors.hpp"
#include "uptail/families.hpp"

using namespace uptail;

namespace {

Hypergraph to_library(const oracle::Graph& g) {
    std::vector<std::vector<Vertex>> edges;
    for (const auto& e : g.edges) edges.emplace_back(e.begin(), e.end());
    return Hypergraph(static_cast<std::size_t>(g.k), static_cast<std::size_t>(g.n), edges);
}

VertexSet random_set(std::mt19937_64& gen, std::size_t n, double p) {
    VertexSet s(n);
    std::bernoulli_distribution coin(p);
    for (std::size_t v = 0; v < n; ++v)
        if (coin(gen)) s.insert(static_cast<Vertex>(v));
    return s;
}

std::size_t induced_max_degree(const Hypergraph& h, const VertexSet& s) {
    const auto ids = induced_edges(h, s);
    return max_degree_of(h, ids);
}

}  // namespace

TEST_SUITE("decompose") {
    TEST_CASE("xr_exact examples") {
        const auto h = build_ap(4, 3);
        const auto full = VertexSet::full(4);
        CHECK(xr_exact(h, full, 2.0) == 2);
        CHECK(xr_exact(h, full, 1.0) == 1);
        CHECK(xr_exact(h, full, 5.0) == 2);
        const auto big = build_ap(20, 3);
        CHECK_THROWS_AS(xr_exact(big, VertexSet::full(20), 2.0), CapacityError);
    }

    TEST_CASE("greedy star matching examples") {
        const auto h = build_ap(4, 3);
        const auto full = VertexSet::full(4);
        CHECK(greedy_star_matching(h, full, 3.0).size() == 0);
        const auto m = greedy_star_matching(h, full, 1.0);
        REQUIRE(m.size() == 1);
        CHECK(m.stars[0].center == 0);
        REQUIRE(m.stars[0].edge_ids.size() == 1);
        const auto f = h.edge(m.stars[0].edge_ids[0]);
        CHECK(std::vector<Vertex>(f.begin(), f.end()) == std::vector<Vertex>{0, 1, 2});
        const Hypergraph two(3, 6, {{0, 1, 2}, {3, 4, 5}});
        CHECK(greedy_star_matching(two, VertexSet::full(6), 1.0).size() == 2);
    }

    TEST_CASE("mr_exact examples") {
        const auto h = build_ap(4, 3);
        CHECK(mr_exact(h, VertexSet::full(4), 1.0) == 1);
        CHECK(mr_exact(h, VertexSet(4), 1.0) == 0);
        CHECK(mr_exact(build_ap(30, 3), VertexSet(30), 2.0) == 0);
    }

    TEST_CASE("mr_exact honours its budget") {
        const auto h = build_ap(60, 3);
        MrBudget tiny;
        tiny.max_candidates = 10;
        CHECK_THROWS_AS(mr_exact(h, VertexSet::full(60), 1.0, tiny), CapacityError);
    }

    TEST_CASE("degree prune examples") {
        const auto h = build_ap(4, 3);
        const auto full = VertexSet::full(4);
        const auto none = degree_prune(h, full, 2.0);
        CHECK(none.kept.size() == 2);
        CHECK(none.matching.size() == 0);
        const auto all = degree_prune(h, full, 1.0);
        CHECK(all.kept.empty());
        CHECK(all.max_degree_after == 0);
        CHECK(all.max_degree_before == 2);
    }

    TEST_CASE("cascade examples") {
        const auto h = build_ap(30, 3);
        std::mt19937_64 gen(41);
        const auto s = random_set(gen, 30, 0.6);
        CascadeParams cp;
        cp.r = 3.0;
        cp.t = 4.0;
        cp.p = 0.6;
        const auto c = cascade_prune(h, s, cp);
        CHECK(c.top_level == 0);
        const auto pr = degree_prune(h, s, 3.0);
        CHECK(c.g0 == pr.kept);
        cp.r = 50.0;
        cp.t = 1e4;
        const auto id = cascade_prune(h, s, cp);
        CHECK(id.g0 == induced_edges(h, s));
        for (const auto& l : id.levels) CHECK(l.matching_size == 0);
        cp.r = 0.5;
        CHECK_THROWS_AS(cascade_prune(h, s, cp), ContractViolation);
    }

    TEST_CASE("cascade params") {
        CascadeParams cp;
        cp.p = std::exp(-8.0);
        cp.gamma = 0.125;
        CHECK(cp.s() == doctest::Approx(2.0));
        cp.r = 1.5;
        cp.t = 100.0;
        CHECK(cp.r_at(3) == 12.0);
        CHECK(cp.top_level() == 3);
        cp.gamma = 0.2;
        CHECK_THROWS_AS(cp.validate(), ContractViolation);
    }

    TEST_CASE("cascade event examples") {
        const auto h = build_ap(12, 3);
        CascadeParams cp;
        cp.p = 0.5;
        cp.r = 20.0;
        cp.t = 4.0;
        cp.beta = 1.0 / 96.0;
        CHECK(check_cascade_event(h, VertexSet::full(12), cp).verdict == Verdict::holds);
        cp.r = 1.0;
        cp.t = 1.0;
        // beta sqrt(t) s / r < 1 with an r-star present
        CHECK(check_cascade_event(h, VertexSet::full(12), cp).verdict == Verdict::fails);
    }

    TEST_CASE("property: sandwich X_r <= X <= X_r + slack") {
        std::mt19937_64 gen(42);
        for (int trial = 0; trial < 1500; ++trial) {
            const int n = 3 + static_cast<int>(gen() % 20);
            const auto h = build_ap(n, 3);
            const auto s = random_set(gen, n, 0.3 + 0.6 * std::uniform_real_distribution<double>()(gen));
            const double r = 1.0 + static_cast<double>(gen() % 8) / 2.0;
            const auto x = induced_edge_count(h, s);
            if (x > kXrEdgeBudget) continue;
            const auto xr = xr_exact(h, s, r);
            const auto delta = induced_max_degree(h, s);
            const auto m = greedy_star_matching(h, s, r).size();
            const double slack = delta > r ? 3.0 * std::ceil(r) * m * delta : 0.0;
            CHECK(xr <= x);
            CHECK(x <= xr + slack);
            if (delta <= r) CHECK(xr == x);
            if (x <= 12) {
                const auto mask = s.words()[0];
                CHECK(xr == static_cast<std::size_t>(oracle::xr(oracle::ap(n, 3), oracle::induced_ids(oracle::ap(n, 3), mask), r)));
            }
        }
    }

    TEST_CASE("property: degree and star matching equivalence") {
        std::mt19937_64 gen(43);
        for (int trial = 0; trial < 1500; ++trial) {
            const int n = 3 + static_cast<int>(gen() % 25);
            const auto h = gen() % 2 ? build_ap(n, 3) : build_schur(n);
            const auto s = random_set(gen, n, 0.5);
            const double z = 0.5 + static_cast<double>(gen() % 8) / 2.0;
            const auto delta = induced_max_degree(h, s);
            const auto mz = mr_exact(h, s, z);
            CHECK((delta >= std::ceil(z)) == (mz >= 1));
            CHECK(mz >= greedy_star_matching(h, s, z).size());
        }
    }

    TEST_CASE("property: mr_exact equals naive star packing") {
        std::mt19937_64 gen(44);
        int compared = 0;
        for (int trial = 0; trial < 3000 && compared < 600; ++trial) {
            const int n = 4 + static_cast<int>(gen() % 14);
            const auto g = gen() % 2 ? oracle::ap(n, 3) : oracle::ell_sum(n, 1 + static_cast<int>(gen() % 2));
            const auto h = to_library(g);
            const auto s = random_set(gen, n, 0.7);
            const double r = 1.0 + static_cast<double>(gen() % 3);
            const auto ids = oracle::induced_ids(g, s.words()[0]);
            const auto stars = oracle::star_masks(g, ids, r);
            if (stars.size() > 12) continue;
            ++compared;
            CHECK(static_cast<int>(mr_exact(h, s, r)) == oracle::max_disjoint(stars));
        }
        CHECK(compared >= 300);
    }

    TEST_CASE("property: prune postcondition and determinism") {
        std::mt19937_64 gen(45);
        for (int trial = 0; trial < 800; ++trial) {
            const std::size_t n = 5 + gen() % 80;
            const auto h = build_ap(n, 3);
            const auto s = random_set(gen, n, 0.6);
            const double r = 0.5 + static_cast<double>(gen() % 10) / 2.0;
            const auto pr = degree_prune(h, s, r);
            CHECK(pr.max_degree_after <= r);
            CHECK(max_degree_of(h, pr.kept) == pr.max_degree_after);
            const double removed = static_cast<double>(induced_edge_count(h, s) - pr.kept.size());
            CHECK(removed <= pr.matching.size() * std::ceil(r) * 3.0 * pr.max_degree_before);
            const auto first = greedy_star_matching(h, s, r);
            const auto again = greedy_star_matching(h, s, r);
            REQUIRE(again.size() == first.size());
            for (std::size_t i = 0; i < again.size(); ++i) {
                CHECK(again.stars[i].center == first.stars[i].center);
                CHECK(again.stars[i].edge_ids == first.stars[i].edge_ids);
            }
            if (pr.max_degree_before <= r) {
                CHECK(pr.matching.size() == 0);
                CHECK(pr.kept == induced_edges(h, s));
            } else {
                CHECK(pr.matching.size() == first.size());
                CHECK(pr.max_degree_after + 1 <= std::ceil(r));
            }
        }
    }

    TEST_CASE("property: cascade accounting") {
        std::mt19937_64 gen(46);
        for (int trial = 0; trial < 400; ++trial) {
            const std::size_t n = 10 + gen() % 50;
            const auto h = build_ap(n, 3);
            CascadeParams cp;
            cp.p = 0.3 + 0.6 * std::uniform_real_distribution<double>()(gen);
            cp.r = 1.0 + static_cast<double>(gen() % 4);
            cp.t = std::pow(2.0, static_cast<double>(gen() % 14));
            const auto s = random_set(gen, n, cp.p);
            const auto c = cascade_prune(h, s, cp);
            CHECK(c.top_level == cp.top_level());
            CHECK(max_degree_of(h, c.g0) <= std::floor(cp.r));
            const double removed = static_cast<double>(induced_edge_count(h, s) - c.g0.size());
            CHECK(removed <= c.removal_bound(3));
            const bool dyadic = std::all_of(c.levels.begin(), c.levels.end(),
                                            [](const CascadeLevel& l) { return l.degree_above <= 2.0 * l.r_j; });
            if (dyadic) CHECK(removed <= c.dyadic_removal_bound(3));
        }
    }

    TEST_CASE("degree tail sum matches per-vertex enumeration") {
        const auto g = oracle::ap(10, 3);
        const auto h = to_library(g);
        for (double p : {0.2, 0.6})
            for (double r : {1.0, 2.5}) {
                long double ref = 0.0L;
                for (std::uint64_t mask = 0; mask < (1ULL << 10); ++mask) {
                    const auto ids = oracle::induced_ids(g, mask);
                    std::vector<int> deg(10, 0);
                    for (int i : ids)
                        for (int v : g.edges[i]) ++deg[v];
                    int c = 0;
                    for (int d : deg) c += d >= std::ceil(r);
                    ref += c * oracle::weight(10, mask, p);
                }
                CHECK(oracle::rel_close(degree_tail_sum(h, p, r), ref, 1e-12L));
            }
    }

    TEST_CASE("star size and verdict names") {
        CHECK(star_size(1.0) == 1);
        CHECK(star_size(1.2) == 2);
        CHECK(star_size(0.3) == 1);
        CHECK_THROWS_AS(star_size(0.0), ContractViolation);
        CHECK(to_string(Verdict::holds) == "holds");
        CHECK(to_string(Verdict::indeterminate) == "indeterminate");
    }
}
