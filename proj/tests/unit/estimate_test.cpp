#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "uptail/bounds.hpp"
#include "uptail/errors.hpp"
#include "uptail/estimate.hpp"
#include "uptail/families.hpp"
#include "uptail/verify.hpp"

using namespace uptail;

namespace {

Hypergraph to_library(const oracle::Graph& g) {
    std::vector<std::vector<Vertex>> edges;
    for (const auto& e : g.edges) edges.emplace_back(e.begin(), e.end());
    return Hypergraph(static_cast<std::size_t>(g.k), static_cast<std::size_t>(g.n), edges);
}

void check_interval(const TailEstimate& t) {
    CHECK(t.ci_low <= t.p_hat);
    CHECK(t.p_hat <= t.ci_high);
    CHECK(t.ci_low >= 0.0);
    CHECK(t.ci_high <= 1.0);
}

}  // namespace

TEST_SUITE("estimate") {
    TEST_CASE("exact tail examples") {
        const auto h = build_ap(4, 3);
        const auto a = exact_tail(h, 0.5, 1.0);
        CHECK(a.p_hat == doctest::Approx(3.0 / 16.0).epsilon(1e-15));
        CHECK(a.ci_low == a.p_hat);
        CHECK(a.ci_high == a.p_hat);
        CHECK(a.method == Method::exact);
        CHECK(exact_tail(h, 0.5, 0.0).p_hat == 1.0);
        CHECK(exact_tail(h, 0.5, 3.0).p_hat == 0.0);
        CHECK_THROWS_AS(exact_tail(build_ap(27, 3), 0.5, 1.0), CapacityError);
    }

    TEST_CASE("exact counts are independent of the worker count") {
        const auto h = build_schur(20);
        const auto one = exact_counts(h, 1);
        for (std::size_t w : {2u, 3u, 5u}) {
            const auto many = exact_counts(h, w);
            for (std::size_t x = 0; x <= one.max_x(); ++x)
                for (std::size_t s = 0; s <= 20; ++s) CHECK(many.count(x, s) == one.count(x, s));
        }
        CHECK(exact_tail(h, 0.3, 4.0, 1).p_hat == exact_tail(h, 0.3, 4.0, 4).p_hat);
    }

    TEST_CASE("property: exact tail matches naive enumeration") {
        std::mt19937_64 gen(61);
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 3 + static_cast<int>(gen() % 14);
            const auto g = gen() % 2 ? oracle::ap(n, 3) : oracle::schur(n);
            const auto h = to_library(g);
            const double p = std::uniform_real_distribution<double>(0.05, 0.95)(gen);
            const auto dist = oracle::distribution(g, p);
            const auto counts = exact_counts(h);
            for (std::size_t x = 0; x <= g.edges.size(); ++x) {
                CHECK(oracle::rel_close(counts.tail(p, static_cast<double>(x)), oracle::tail(dist, static_cast<double>(x)), 1e-12L));
                CHECK(oracle::rel_close(counts.pmf(p, x), dist[x], 1e-12L));
            }
        }
    }

    TEST_CASE("mc examples") {
        const auto h = build_ap(10, 3);
        const auto one = mc_tail(h, 1.0, static_cast<double>(h.num_edges()), 500, 3);
        CHECK(one.p_hat == 1.0);
        CHECK(mc_tail(h, 0.0, 1.0, 500, 3).p_hat == 0.0);
        const auto big = mc_tail(build_ap(4, 3), 0.5, 1.0, 1000000, 42);
        CHECK(big.ci_low <= 3.0 / 16.0);
        CHECK(3.0 / 16.0 <= big.ci_high);
        check_interval(big);
        CHECK(big.samples == 1000000);
        CHECK(big.method == Method::mc);
        CHECK_THROWS_AS(mc_tail(h, 0.5, 1.0, 0, 3), ContractViolation);
    }

    TEST_CASE("mc results do not depend on the worker count") {
        const auto h = build_ap(40, 3);
        const auto a = mc_tail(h, 0.3, 10.0, 30000, 9, 1);
        for (std::size_t w : {2u, 3u, 7u}) {
            const auto b = mc_tail(h, 0.3, 10.0, 30000, 9, w);
            CHECK(a.p_hat == b.p_hat);
            CHECK(a.ci_low == b.ci_low);
            CHECK(a.ci_high == b.ci_high);
        }
    }

    TEST_CASE("property: mc 99% interval covers the exact tail") {
        struct Instance {
            Hypergraph h;
            double p;
            double threshold;
        };
        const std::vector<Instance> cases{{build_ap(12, 3), 0.5, 4.0},
                                          {build_schur(14), 0.3, 2.0},
                                          {build_ell_sum(16, 2), 0.4, 3.0},
                                          {build_ap(16, 3), 0.2, 2.0},
                                          {build_ap(10, 4), 0.7, 3.0}};
        for (const auto& c : cases) {
            const double exact = exact_tail(c.h, c.p, c.threshold).p_hat;
            int covered = 0;
            for (std::uint64_t seed = 1; seed <= 100; ++seed) {
                const auto est = mc_tail(c.h, c.p, c.threshold, 2000, seed * 7919);
                covered += est.ci_low <= exact && exact <= est.ci_high;
            }
            CHECK(covered >= 98);
        }
    }

    TEST_CASE("wilson interval") {
        const auto [lo, hi] = wilson_interval(0, 100);
        CHECK(lo == 0.0);
        CHECK(hi > 0.0);
        const auto [lo2, hi2] = wilson_interval(100, 100);
        CHECK(hi2 == doctest::Approx(1.0));
        CHECK(lo2 < 1.0);
        const auto [lo3, hi3] = wilson_interval(50, 100);
        CHECK(lo3 == doctest::Approx(1.0 - hi3));
        CHECK_THROWS_AS(wilson_interval(5, 0), ContractViolation);
    }

    TEST_CASE("planted examples") {
        const auto h = build_ap(12, 3);
        VertexSet w(12);
        for (Vertex v = 0; v < 5; ++v) w.insert(v);
        const auto sure = planted_tail(h, 0.3, 4.0, w, 1000, 5);
        CHECK(sure.p_hat == doctest::Approx(std::pow(0.3, 5.0)));
        CHECK(sure.method == Method::planted);
        const auto plain = planted_tail(h, 0.4, 2.0, VertexSet(12), 5000, 5);
        const auto mc = mc_tail(h, 0.4, 2.0, 5000, 5);
        CHECK(plain.p_hat == mc.p_hat);
        const double mu = exact_mean(h, 0.3);
        const auto wit = interval_witness(FamilySpec::ap(12, 3), mu + 3.0);
        REQUIRE(wit);
        const auto est = planted_tail(h, 0.3, mu + 3.0, wit->w, 100000, 6);
        CHECK(est.p_hat <= exact_tail(h, 0.3, mu + 3.0).p_hat + 1e-12);
        check_interval(est);
    }

    TEST_CASE("conditioned examples") {
        const auto h = build_ap(12, 3);
        CHECK(conditioned_size(12, 0.5, 1.0) == 12);
        const auto full = conditioned_tail(h, 0.5, 10.0, 1.0, 1000, 2);
        CHECK(full.p_hat == doctest::Approx(std::pow(0.5, 12.0)));
        const auto none = conditioned_tail(h, 0.5, 31.0, 1.0, 1000, 2);
        CHECK(none.p_hat == 0.0);
        const auto zero = conditioned_tail(h, 0.3, 0.0, 0.0, 1000, 2);
        CHECK(zero.p_hat == doctest::Approx(binomial_upper_tail(12, 0.3, 4)));
        const double mu = exact_mean(h, 0.4);
        const auto est = conditioned_tail(h, 0.4, mu + 2.0, 0.5, 100000, 3);
        CHECK(est.p_hat <= exact_tail(h, 0.4, mu + 2.0).p_hat + 1e-12);
        check_interval(est);
        CHECK_THROWS_AS(conditioned_tail(h, 0.5, 1.0, 1.5, 100, 1), ContractViolation);
    }

    TEST_CASE("planted target and witness") {
        CHECK(planted_target(10.0, 2.0, 0.5, 3) == std::ceil(std::min(2.0 * 4.0 / (1.0 - 0.125), 12.0)));
        CHECK(planted_target(1.0, 5.0, 0.5, 3) == 6.0);
        const auto h = build_ap(20, 3);
        const auto spec = FamilySpec::ap(20, 3);
        const auto a = planted_witness(&spec, h, 7.0);
        REQUIRE(a);
        CHECK(a->valid_for(h));
        const auto b = planted_witness(nullptr, h, 7.0);
        REQUIRE(b);
        CHECK(induced_edge_count(h, b->w) >= 7);
    }

    TEST_CASE("clean configuration examples") {
        CHECK(count_clean_configs(build_ap(10, 3), 0) == 1);
        CHECK(enumerate_clean_configs(build_ap(10, 3), 0).size() == 1);
        CHECK(count_clean_configs(build_ap(4, 3), 1) == 2);
        const auto h5 = build_ap(5, 3);
        // {1,3,5} contains no other progression
        for (EdgeId e = 0; e < h5.num_edges(); ++e) {
            const std::vector<EdgeId> one{e};
            CHECK(is_clean(h5, one));
        }
        // {1,2,3} and {3,4,5} cover {1,3,5}
        const std::vector<EdgeId> pair{0, 3};
        CHECK(h5.edge(0)[0] == 0);
        CHECK(!is_clean(h5, pair) == (h5.edge(3)[0] == 2));
        CHECK_THROWS_AS(count_clean_configs(build_ap(200, 3), 4), CapacityError);
    }

    TEST_CASE("clean configuration bound examples") {
        const auto h = build_ap(4, 3);
        const double p0 = exact_tail(h, 0.3, 0.0).p_hat - exact_tail(h, 0.3, 1.0).p_hat;
        CHECK(clean_config_point_lower(h, 0.3, 0) == doctest::Approx(p0).epsilon(1e-13));
        CHECK(clean_config_point_lower(h, 0.0, 0) == 1.0);
        const double bound = clean_config_point_lower(h, 0.5, 1, false);
        CHECK(bound <= 0.125 + 1e-15);
        CHECK(bound == doctest::Approx(0.125));
        CHECK(clean_config_harris_lower(h, 0.5, 1, false) <= bound);
    }

    TEST_CASE("property: clean configurations match the definition") {
        std::mt19937_64 gen(62);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t n = 4 + gen() % 10;
            const auto h = gen() % 2 ? build_ap(n, 3) : build_schur(n);
            const std::size_t m = gen() % 3;
            const auto configs = enumerate_clean_configs(h, m);
            CHECK(configs.size() == count_clean_configs(h, m));
            for (const auto& c : configs) {
                CHECK(c.edge_ids.size() == m);
                VertexSet u(n);
                for (EdgeId e : c.edge_ids)
                    for (Vertex v : h.edge(e)) u.insert(v);
                CHECK(induced_edge_count(h, u) == m);
            }
        }
    }

    TEST_CASE("property: planted and conditioned stay below exact") {
        std::mt19937_64 gen(63);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t n = 8 + gen() % 9;
            const auto spec = gen() % 2 ? FamilySpec::ap(n, 3) : FamilySpec::schur(n);
            const auto h = build(spec);
            const double p = std::uniform_real_distribution<double>(0.15, 0.8)(gen);
            const double mu = exact_mean(h, p);
            const double t = 0.5 + static_cast<double>(gen() % 4);
            const double exact = exact_tail(h, p, mu + t).p_hat;
            if (auto w = planted_witness(&spec, h, planted_target(mu, t, p, 3)))
                CHECK(planted_tail(h, p, mu + t, w->w, 20000, trial).p_hat <= exact + 1e-12);
            if (mu > 0 && conditioned_size(n, p, 0.0) <= n && std::ceil((1.0 + t / mu) * n * p) <= n)
                CHECK(conditioned_tail(h, p, mu + t, t / mu, 20000, trial).p_hat <= exact + 1e-12);
        }
    }

    TEST_CASE("frozen upper-tail fit for AP(n,3), 16 <= n <= 24") {
        for (std::size_t n = 16; n <= 24; ++n) {
            const auto h = build_ap(n, 3);
            const auto counts = exact_counts(h);
            for (int i = 2; i <= 10; ++i) {
                const double p = 0.05 * i;
                const double mu = exact_mean(h, p);
                const double rate = std::min(mu, std::sqrt(mu) * log_factor(p, LogForm::e_over_p));
                for (const auto& fit : kApUpperTailFit) {
                    const double tail = counts.tail(p, (1.0 + fit.eps) * mu);
                    if (tail < 1e-9) continue;
                    CHECK(std::log(tail) <= -fit.c * rate);
                }
            }
        }
    }

    TEST_CASE("method names") {
        for (auto m : {Method::exact, Method::mc, Method::planted, Method::conditioned})
            CHECK(parse_method(to_string(m)) == m);
        CHECK_THROWS_AS(parse_method("splitting"), ContractViolation);
    }
}
