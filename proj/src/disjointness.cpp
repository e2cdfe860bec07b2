#include "uptail/disjointness.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "uptail/decompose.hpp"
#include "uptail/errors.hpp"

namespace uptail {

namespace {

void check_dims(std::size_t m) { require(m <= EventTable::kMaxDims, "EventTable supports at most 20 coordinates"); }

std::vector<double> outcome_weights(std::size_t m, std::span<const double> probs) {
    require(probs.size() == m, "need one probability per coordinate");
    for (double q : probs) require(q >= 0.0 && q <= 1.0, "coordinate probability must lie in [0,1]");
    std::vector<double> w(std::size_t{1} << m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t x = 0; x < w.size(); ++x) w[x] *= (x & bit) ? probs[i] : 1.0 - probs[i];
    }
    return w;
}

// cyl[x] over ternary patterns x (digit 0, 1, or 2 = free): whether every
// completion of the pattern lies in the event.
std::vector<std::uint8_t> cylinder_table(const EventTable& a) {
    const std::size_t m = a.dims();
    std::vector<std::size_t> pow3(m + 1, 1);
    for (std::size_t i = 1; i <= m; ++i) pow3[i] = pow3[i - 1] * 3;
    std::vector<std::uint8_t> cyl(pow3[m], 0);
    for (std::size_t x = 0; x < cyl.size(); ++x) {
        std::size_t rest = x;
        std::size_t free_pos = m;
        Outcome w = 0;
        for (std::size_t i = 0; i < m; ++i, rest /= 3) {
            const std::size_t d = rest % 3;
            if (d == 2) {
                free_pos = i;
                break;
            }
            if (d == 1) w |= Outcome{1} << i;
        }
        if (free_pos == m)
            cyl[x] = a.contains(w) ? 1 : 0;
        else
            cyl[x] = cyl[x - 2 * pow3[free_pos]] & cyl[x - pow3[free_pos]];
    }
    return cyl;
}

}  // namespace

EventTable::EventTable(std::size_t m) : m_(m) {
    check_dims(m);
    table_.assign(std::size_t{1} << m, 0);
}

EventTable EventTable::full(std::size_t m) {
    EventTable e(m);
    std::fill(e.table_.begin(), e.table_.end(), 1);
    return e;
}

EventTable EventTable::coordinate(std::size_t m, std::size_t i) {
    require(i < m, "coordinate index out of range");
    return from_predicate(m, [i](Outcome w) { return ((w >> i) & 1U) != 0; });
}

EventTable EventTable::from_predicate(std::size_t m, const std::function<bool(Outcome)>& pred) {
    EventTable e(m);
    for (std::size_t w = 0; w < e.table_.size(); ++w) e.table_[w] = pred(static_cast<Outcome>(w)) ? 1 : 0;
    return e;
}

EventTable EventTable::random(std::size_t m, double density, CounterRng& rng) {
    EventTable e(m);
    for (auto& x : e.table_) x = rng.uniform01() < density ? 1 : 0;
    return e;
}

EventTable EventTable::random_increasing(std::size_t m, std::size_t generators, CounterRng& rng) {
    EventTable e(m);
    const std::size_t n = e.table_.size();
    for (std::size_t g = 0; g < generators; ++g) {
        const auto base = static_cast<Outcome>(rng.below(n));
        for (std::size_t w = 0; w < n; ++w)
            if ((w & base) == base) e.table_[w] = 1;
    }
    return e;
}

std::size_t EventTable::count() const {
    return static_cast<std::size_t>(std::count(table_.begin(), table_.end(), std::uint8_t{1}));
}

bool EventTable::subset_of(const EventTable& o) const {
    require(m_ == o.m_, "event dimension mismatch");
    for (std::size_t w = 0; w < table_.size(); ++w)
        if (table_[w] && !o.table_[w]) return false;
    return true;
}

double EventTable::probability(std::span<const double> probs) const {
    const auto w = outcome_weights(m_, probs);
    double sum = 0.0;
    for (std::size_t x = 0; x < table_.size(); ++x)
        if (table_[x]) sum += w[x];
    return sum;
}

bool certifies(const EventTable& a, Outcome omega, Outcome fixed) {
    const Outcome full = static_cast<Outcome>(a.outcomes() - 1);
    const Outcome freec = full & ~fixed;
    const Outcome base = omega & fixed;
    Outcome sub = 0;
    while (true) {
        if (!a.contains(base | sub)) return false;
        if (sub == freec) return true;
        sub = (sub - freec) & freec;
    }
}

EventTable box(const EventTable& a, const EventTable& b) {
    require(a.dims() == b.dims(), "box needs events on the same space");
    require(a.dims() <= kBoxMaxDims, "box supports at most 14 coordinates");
    const std::size_t m = a.dims();
    const auto cyl_a = cylinder_table(a);
    const auto cyl_b = cylinder_table(b);
    std::vector<std::size_t> pow3(m, 1);
    for (std::size_t i = 1; i < m; ++i) pow3[i] = pow3[i - 1] * 3;
    std::size_t all_free = 0;
    for (std::size_t i = 0; i < m; ++i) all_free += 2 * pow3[i];

    EventTable out(m);
    const std::size_t n = std::size_t{1} << m;
    std::vector<std::size_t> pattern(n);
    for (std::size_t w = 0; w < n; ++w) {
        if (!a.contains(static_cast<Outcome>(w)) || !b.contains(static_cast<Outcome>(w))) continue;
        // pattern[K] fixes the coordinates in K to omega and frees the rest.
        pattern[0] = all_free;
        for (std::size_t k = 1; k < n; ++k) {
            const auto low = static_cast<std::size_t>(std::countr_zero(k));
            const std::size_t digit = (w >> low) & 1U;
            pattern[k] = pattern[k & (k - 1)] - 2 * pow3[low] + digit * pow3[low];
        }
        const std::size_t full = n - 1;
        for (std::size_t k = 0; k < n; ++k) {
            if (cyl_a[pattern[k]] && cyl_b[pattern[full ^ k]]) {
                out.set(static_cast<Outcome>(w), true);
                break;
            }
        }
    }
    return out;
}

std::size_t z_disjoint(std::span<const EventTable> events, Outcome omega, ZBudget budget) {
    if (events.size() > budget.max_events)
        throw CapacityError("z_disjoint: more events than the search budget allows");
    if (events.empty()) return 0;
    const std::size_t m = events[0].dims();
    for (const auto& e : events) require(e.dims() == m, "z_disjoint needs events on the same space");
    require(m <= kBoxMaxDims, "z_disjoint supports at most 14 coordinates");
    require(omega < (Outcome{1} << m), "outcome out of range");

    std::vector<std::vector<Outcome>> minimal(events.size());
    const std::size_t n = std::size_t{1} << m;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (!events[i].contains(omega)) continue;
        std::vector<std::uint8_t> ok(n, 0);
        for (std::size_t k = 0; k < n; ++k) ok[k] = certifies(events[i], omega, static_cast<Outcome>(k)) ? 1 : 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (!ok[k]) continue;
            bool is_min = true;
            for (std::size_t rest = k; rest && is_min; rest &= rest - 1)
                if (ok[k & ~(rest & (~rest + 1))]) is_min = false;
            if (is_min) minimal[i].push_back(static_cast<Outcome>(k));
        }
    }

    std::size_t best = 0;
    std::size_t nodes = 0;
    const std::size_t count = events.size();
    auto search = [&](auto&& self, std::size_t i, Outcome used, std::size_t cur) -> void {
        if (++nodes > budget.max_nodes) throw CapacityError("z_disjoint: search node budget exceeded");
        if (cur + (count - i) <= best) return;
        if (i == count) {
            best = cur;
            return;
        }
        for (Outcome k : minimal[i])
            if ((k & used) == 0) self(self, i + 1, used | k, cur + 1);
        self(self, i + 1, used, cur);
    };
    search(search, 0, 0, 0);
    return best;
}

BkResult bk_check(const EventTable& a, const EventTable& b, std::span<const double> probs) {
    const EventTable ab = box(a, b);
    BkResult r;
    r.lhs = ab.probability(probs);
    r.rhs = a.probability(probs) * b.probability(probs);
    if (r.lhs > r.rhs + 1e-12) throw std::logic_error("bk_check: Pr(A box B) exceeds Pr(A) Pr(B)");
    return r;
}

MrZResult mr_le_z_check(const Hypergraph& h, const VertexSet& s, double r) {
    const std::size_t n = h.num_vertices();
    require(n <= kBoxMaxDims, "mr_le_z_check needs v(H) <= 14");
    const std::size_t need = star_size(r);
    Outcome omega = 0;
    for (Vertex v : s.members()) omega |= Outcome{1} << v;

    std::vector<Outcome> masks;
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
        Outcome m = 0;
        for (Vertex v : h.edge(e)) m |= Outcome{1} << v;
        masks.push_back(m);
    }
    std::vector<EventTable> events;
    for (Vertex v = 0; v < n; ++v) {
        auto inc = h.incident(v);
        if (inc.size() < need) continue;
        auto ev = EventTable::from_predicate(n, [&](Outcome w) {
            std::size_t c = 0;
            for (EdgeId e : inc) c += (masks[e] & w) == masks[e];
            return c >= need;
        });
        if (ev.contains(omega)) events.push_back(std::move(ev));
    }
    MrZResult out;
    out.mr = mr_exact(h, s, r);
    ZBudget budget;
    budget.max_events = n;
    out.z = z_disjoint(events, omega, budget);
    return out;
}

}  // namespace uptail
