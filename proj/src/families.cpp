#include "uptail/families.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "uptail/errors.hpp"

namespace uptail {

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::ap: return "ap";
        case FamilyKind::schur: return "schur";
        case FamilyKind::ell_sum: return "ell_sum";
    }
    return "?";
}

FamilyKind parse_family_kind(const std::string& name) {
    if (name == "ap") return FamilyKind::ap;
    if (name == "schur") return FamilyKind::schur;
    if (name == "ell_sum" || name == "ell") return FamilyKind::ell_sum;
    throw ContractViolation("unknown family kind: " + name);
}

void FamilySpec::validate() const {
    require(n >= 1, "family needs n >= 1");
    if (kind == FamilyKind::ap) require(k >= 2, "ap family needs k >= 2");
    if (kind == FamilyKind::ell_sum) require(ell >= 1, "ell_sum family needs ell >= 1");
}

Hypergraph build_ap(std::size_t n, std::size_t k) {
    require(n >= 1 && k >= 2, "build_ap needs n >= 1, k >= 2");
    std::vector<std::vector<Vertex>> edges;
    for (std::size_t d = 1; (k - 1) * d < n; ++d) {
        for (std::size_t a = 1; a + (k - 1) * d <= n; ++a) {
            std::vector<Vertex> e(k);
            for (std::size_t i = 0; i < k; ++i) e[i] = static_cast<Vertex>(a - 1 + i * d);
            edges.push_back(std::move(e));
        }
    }
    return Hypergraph(k, n, std::move(edges));
}

Hypergraph build_schur(std::size_t n) {
    require(n >= 1, "build_schur needs n >= 1");
    std::vector<std::vector<Vertex>> edges;
    for (std::size_t x = 1; 2 * x + 1 <= n; ++x)
        for (std::size_t y = x + 1; x + y <= n; ++y)
            edges.push_back({static_cast<Vertex>(x - 1), static_cast<Vertex>(y - 1),
                             static_cast<Vertex>(x + y - 1)});
    return Hypergraph(3, n, std::move(edges));
}

namespace {
// Calls f(x, y, z) once per unordered triple {x, y, z} of distinct elements
// of [m] with x < y and x + y = ell * z. A triple admits at most one such z.
template <typename F>
void for_each_ell_triple(std::size_t m, std::size_t ell, F&& f) {
    for (std::size_t z = 1; z <= m; ++z) {
        const std::size_t sum = ell * z;
        for (std::size_t x = 1; 2 * x < sum; ++x) {
            const std::size_t y = sum - x;
            if (y > m) continue;
            if (x == z || y == z) continue;
            f(x, y, z);
        }
    }
}
}  // namespace

Hypergraph build_ell_sum(std::size_t n, std::size_t ell) {
    require(n >= 1 && ell >= 1, "build_ell_sum needs n >= 1, ell >= 1");
    std::vector<std::vector<Vertex>> edges;
    for_each_ell_triple(n, ell, [&](std::size_t x, std::size_t y, std::size_t z) {
        edges.push_back({static_cast<Vertex>(x - 1), static_cast<Vertex>(y - 1), static_cast<Vertex>(z - 1)});
    });
    return Hypergraph(3, n, std::move(edges));
}

Hypergraph build(const FamilySpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case FamilyKind::ap: return build_ap(spec.n, spec.k);
        case FamilyKind::schur: return build_schur(spec.n);
        case FamilyKind::ell_sum: return build_ell_sum(spec.n, spec.ell);
    }
    throw ContractViolation("unknown family");
}

std::size_t prefix_edge_count(const FamilySpec& spec, std::size_t m) {
    spec.validate();
    m = std::min(m, spec.n);
    std::size_t count = 0;
    switch (spec.kind) {
        case FamilyKind::ap:
            for (std::size_t d = 1; (spec.k - 1) * d < m; ++d) count += m - (spec.k - 1) * d;
            break;
        case FamilyKind::schur:
            for (std::size_t x = 1; 2 * x < m; ++x) count += m - 2 * x;
            break;
        case FamilyKind::ell_sum:
            for_each_ell_triple(m, spec.ell, [&](std::size_t, std::size_t, std::size_t) { ++count; });
            break;
    }
    return count;
}

bool Witness::valid_for(const Hypergraph& h) const {
    if (w.universe() != h.num_vertices()) return false;
    const double e = static_cast<double>(induced_edge_count(h, w));
    const double size = static_cast<double>(w.count());
    return e >= x && size <= d_used * std::max(std::sqrt(x), 1.0) * (1 + 1e-12);
}

Witness make_witness(const Hypergraph& h, VertexSet w, double x) {
    require(x >= 0.0, "witness target must be nonnegative");
    require(static_cast<double>(induced_edge_count(h, w)) >= x, "witness set induces too few edges");
    Witness out;
    out.d_used = static_cast<double>(w.count()) / std::max(std::sqrt(x), 1.0);
    out.x = x;
    out.w = std::move(w);
    return out;
}

std::optional<Witness> interval_witness(const FamilySpec& spec, double x) {
    require(x >= 0.0, "witness target must be nonnegative");
    spec.validate();
    if (static_cast<double>(prefix_edge_count(spec, spec.n)) < x) return std::nullopt;
    // prefix counts are nondecreasing in m
    std::size_t lo = 0, hi = spec.n;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (static_cast<double>(prefix_edge_count(spec, mid)) >= x)
            hi = mid;
        else
            lo = mid + 1;
    }
    VertexSet w(spec.n);
    for (std::size_t v = 0; v < lo; ++v) w.insert(static_cast<Vertex>(v));
    Witness out;
    out.d_used = static_cast<double>(lo) / std::max(std::sqrt(x), 1.0);
    out.x = x;
    out.w = std::move(w);
    return out;
}

std::optional<Witness> greedy_witness(const Hypergraph& h, double x) {
    require(x >= 0.0, "witness target must be nonnegative");
    const std::size_t n = h.num_vertices();
    VertexSet w(n);
    std::size_t have = 0;
    std::vector<std::size_t> inside(h.num_edges(), 0);  // |e ∩ W|
    const std::size_t k = h.k();
    while (static_cast<double>(have) < x) {
        // Rank by (newly completed edges, partial progress, degree); ties to lowest id.
        std::tuple<std::size_t, std::size_t, std::size_t> best{0, 0, 0};
        long best_v = -1;
        for (Vertex v = 0; v < n; ++v) {
            if (w.contains(v)) continue;
            std::size_t completed = 0, progress = 0;
            for (EdgeId e : h.incident(v)) {
                if (inside[e] + 1 == k)
                    ++completed;
                else
                    progress += inside[e];
            }
            std::tuple<std::size_t, std::size_t, std::size_t> score{completed, progress, h.incident(v).size()};
            if (best_v < 0 || score > best) {
                best = score;
                best_v = v;
            }
        }
        if (best_v < 0) return std::nullopt;
        const auto v = static_cast<Vertex>(best_v);
        w.insert(v);
        for (EdgeId e : h.incident(v))
            if (++inside[e] == k) ++have;
    }
    return make_witness(h, std::move(w), x);
}

}  // namespace uptail
