#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "uptail/decompose.hpp"
#include "uptail/disjointness.hpp"
#include "uptail/errors.hpp"
#include "uptail/families.hpp"

using namespace uptail;

namespace {

oracle::Event to_oracle(const EventTable& t) {
    oracle::Event e(t.outcomes());
    for (Outcome w = 0; w < t.outcomes(); ++w) e[w] = t.contains(w);
    return e;
}

}  // namespace

TEST_SUITE("disjointness") {
    TEST_CASE("box examples") {
        const auto a = EventTable::coordinate(2, 0);
        const auto b = EventTable::coordinate(2, 1);
        const auto ab = box(a, b);
        CHECK(ab.count() == 1);
        CHECK(ab.contains(0b11));
        CHECK(box(a, a).count() == 0);
        CHECK(box(EventTable::full(2), b) == b);
        CHECK_THROWS_AS(box(a, EventTable::coordinate(3, 0)), ContractViolation);
        CHECK_THROWS_AS(box(EventTable(15), EventTable(15)), ContractViolation);
    }

    TEST_CASE("z_disjoint examples") {
        const std::vector<EventTable> full(3, EventTable::full(4));
        CHECK(z_disjoint(full, 0b0000) == 3);
        const std::vector<EventTable> same(2, EventTable::coordinate(4, 0));
        CHECK(z_disjoint(same, 0b0001) == 1);
        const std::vector<EventTable> two{EventTable::coordinate(4, 0), EventTable::coordinate(4, 1)};
        CHECK(z_disjoint(two, 0b0011) == 2);
        CHECK(z_disjoint(two, 0b0001) == 1);
        const std::vector<EventTable> many(9, EventTable::full(3));
        CHECK_THROWS_AS(z_disjoint(many, 0), CapacityError);
    }

    TEST_CASE("bk examples") {
        const std::vector<double> half(2, 0.5);
        const auto a = EventTable::coordinate(2, 0);
        const auto b = EventTable::coordinate(2, 1);
        const auto r = bk_check(a, b, half);
        CHECK(r.lhs == doctest::Approx(0.25));
        CHECK(r.rhs == doctest::Approx(0.25));
        const auto s = bk_check(a, a, half);
        CHECK(s.lhs == 0.0);
        CHECK(s.rhs == doctest::Approx(0.25));
    }

    TEST_CASE("mr <= z examples") {
        const auto h = build_ap(4, 3);
        const auto none = mr_le_z_check(h, VertexSet(4), 1.0);
        CHECK(none.mr == 0);
        CHECK(none.z == 0);
        const auto full = mr_le_z_check(h, VertexSet::full(4), 1.0);
        CHECK(full.mr == 1);
        CHECK(full.holds());
        CHECK_THROWS_AS(mr_le_z_check(build_ap(15, 3), VertexSet(15), 1.0), ContractViolation);
    }

    TEST_CASE("property: box agrees with the naive definition") {
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            CounterRng rng(seed, 3);
            const std::size_t m = 2 + seed % 6;
            const auto a = seed % 2 ? EventTable::random(m, 0.5, rng) : EventTable::random_increasing(m, 3, rng);
            const auto b = seed % 3 ? EventTable::random(m, 0.6, rng) : EventTable::random_increasing(m, 2, rng);
            const auto ref = oracle::box(to_oracle(a), to_oracle(b), static_cast<int>(m));
            CHECK(to_oracle(box(a, b)) == ref);
        }
    }

    TEST_CASE("property: box is monotone and inside the intersection") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            CounterRng rng(seed, 5);
            const std::size_t m = 3 + seed % 5;
            const auto a = EventTable::random(m, 0.4, rng);
            const auto b = EventTable::random(m, 0.4, rng);
            auto a2 = a, b2 = b;
            for (Outcome w = 0; w < a.outcomes(); ++w) {
                if (rng.uniform01() < 0.3) a2.set(w, true);
                if (rng.uniform01() < 0.3) b2.set(w, true);
            }
            const auto ab = box(a, b);
            CHECK(ab.subset_of(box(a2, b2)));
            const auto both = EventTable::from_predicate(m, [&](Outcome w) { return a.contains(w) && b.contains(w); });
            CHECK(ab.subset_of(both));
        }
    }

    TEST_CASE("property: BK inequality on random pairs") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            CounterRng rng(seed, 7);
            const std::size_t m = 8;
            const auto a = seed % 2 ? EventTable::random_increasing(m, 3, rng) : EventTable::random(m, 0.5, rng);
            const auto b = seed % 2 ? EventTable::random_increasing(m, 2, rng) : EventTable::random(m, 0.7, rng);
            std::vector<double> probs(m);
            for (auto& q : probs) q = rng.uniform01();
            const auto r = bk_check(a, b, probs);
            CHECK(r.lhs <= r.rhs + 1e-12);
            CHECK(r.rhs == doctest::Approx(a.probability(probs) * b.probability(probs)));
        }
    }

    TEST_CASE("property: z_disjoint bounded by the events that occur") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            CounterRng rng(seed, 9);
            const std::size_t m = 5;
            std::vector<EventTable> events;
            for (int i = 0; i < 4; ++i) events.push_back(EventTable::random_increasing(m, 2, rng));
            const Outcome w = static_cast<Outcome>(rng.below(1U << m));
            std::size_t occurring = 0;
            for (const auto& e : events) occurring += e.contains(w);
            const auto z = z_disjoint(events, w);
            CHECK(z <= occurring);
            CHECK((z >= 1) == (occurring >= 1));
            if (events.size() >= 2 && z >= 2) CHECK(box(events[0], events[1]).count() <= events[0].count());
        }
    }

    TEST_CASE("property: mr <= z on random small instances") {
        std::mt19937_64 gen(51);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = 4 + gen() % 11;
            const auto h = gen() % 2 ? build_ap(n, 3) : build_schur(n);
            const auto s = VertexSet::from_mask(n, gen());
            const double r = 1.0 + static_cast<double>(gen() % 3);
            const auto res = mr_le_z_check(h, s, r);
            CHECK(res.holds());
            CHECK(res.mr == mr_exact(h, s, r));
        }
    }

    TEST_CASE("certificates") {
        const auto a = EventTable::coordinate(3, 1);
        CHECK(certifies(a, 0b010, 0b010));
        CHECK(!certifies(a, 0b010, 0b001));
        CHECK(certifies(EventTable::full(3), 0, 0));
    }
}
