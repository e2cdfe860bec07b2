#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "uptail/hypergraph.hpp"
#include "uptail/rng.hpp"

namespace uptail {

using Outcome = std::uint32_t;

/// An event on {0,1}^M stored as an explicit membership table. Bit i of an
/// Outcome is coordinate i.
class EventTable {
public:
    static constexpr std::size_t kMaxDims = 20;

    EventTable() = default;
    /// The empty event.
    explicit EventTable(std::size_t m);

    static EventTable full(std::size_t m);
    /// {omega : omega_i = 1}.
    static EventTable coordinate(std::size_t m, std::size_t i);
    static EventTable from_predicate(std::size_t m, const std::function<bool(Outcome)>& pred);
    /// Each outcome included independently with probability density.
    static EventTable random(std::size_t m, double density, CounterRng& rng);
    /// Up-closure of a random family of generators.
    static EventTable random_increasing(std::size_t m, std::size_t generators, CounterRng& rng);

    std::size_t dims() const { return m_; }
    std::size_t outcomes() const { return table_.size(); }
    bool contains(Outcome w) const { return table_[w] != 0; }
    void set(Outcome w, bool in) { table_[w] = in ? 1 : 0; }
    std::size_t count() const;
    bool subset_of(const EventTable& o) const;

    /// Probability under the product measure with Pr(omega_i = 1) = probs[i].
    double probability(std::span<const double> probs) const;

    friend bool operator==(const EventTable&, const EventTable&) = default;

private:
    std::size_t m_ = 0;
    std::vector<std::uint8_t> table_;
};

/// True iff every outcome agreeing with omega on the coordinates in `fixed`
/// lies in A.
bool certifies(const EventTable& a, Outcome omega, Outcome fixed);

/// Disjoint occurrence: omega is in the result iff some disjoint K, L have
/// [omega]_K inside A and [omega]_L inside B. Needs M <= 14.
EventTable box(const EventTable& a, const EventTable& b);
inline constexpr std::size_t kBoxMaxDims = 14;

struct ZBudget {
    std::size_t max_events = 8;
    std::size_t max_nodes = 5000000;
};

/// Largest number of the events that hold at omega with pairwise disjoint
/// certificates. Throws CapacityError past the budget.
std::size_t z_disjoint(std::span<const EventTable> events, Outcome omega, ZBudget budget = {});

struct BkResult {
    double lhs = 0.0;  // Pr(A box B)
    double rhs = 0.0;  // Pr(A) Pr(B)
};

/// Exact evaluation of both sides of the BK inequality; throws
/// std::logic_error if lhs exceeds rhs by more than 1e-12.
BkResult bk_check(const EventTable& a, const EventTable& b, std::span<const double> probs);

struct MrZResult {
    std::size_t mr = 0;
    std::size_t z = 0;
    bool holds() const { return mr <= z; }
};

/// Compares M_r(H[S]) with Z over the degree events
/// {omega : vertex v has at least ceil(r) induced edges}. Needs v(H) <= 14.
MrZResult mr_le_z_check(const Hypergraph& h, const VertexSet& s, double r);

}  // namespace uptail
