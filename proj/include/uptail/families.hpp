#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "uptail/hypergraph.hpp"

namespace uptail {

enum class FamilyKind { ap, schur, ell_sum };

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& name);

/// Parameters of a concrete family over the ground set [n] = {1, ..., n}.
/// Vertex i of the built hypergraph stands for the integer i + 1.
struct FamilySpec {
    FamilyKind kind = FamilyKind::ap;
    std::size_t n = 1;
    std::size_t k = 3;    // progression length, ap only
    std::size_t ell = 1;  // ell_sum only

    static FamilySpec ap(std::size_t n, std::size_t k) { return {FamilyKind::ap, n, k, 1}; }
    static FamilySpec schur(std::size_t n) { return {FamilyKind::schur, n, 3, 1}; }
    static FamilySpec ell_sum(std::size_t n, std::size_t ell) { return {FamilyKind::ell_sum, n, 3, ell}; }

    /// Edge uniformity of the built hypergraph.
    std::size_t uniformity() const { return kind == FamilyKind::ap ? k : 3; }
    void validate() const;
};

/// k-term arithmetic progressions {a, a+d, ..., a+(k-1)d} in [n], d >= 1.
Hypergraph build_ap(std::size_t n, std::size_t k);
/// Schur triples {x, y, x+y} with 1 <= x < y and x + y <= n.
Hypergraph build_schur(std::size_t n);
/// Triples of distinct {x, y, z} in [n] with x + y = ell * z.
Hypergraph build_ell_sum(std::size_t n, std::size_t ell);
Hypergraph build(const FamilySpec& spec);

/// e(H[[m]]) for the family's hypergraph, computed without building it.
std::size_t prefix_edge_count(const FamilySpec& spec, std::size_t m);

/// Clustering witness: a vertex set W inducing at least x edges, with the
/// size ratio D_used = |W| / max(sqrt(x), 1) recorded.
struct Witness {
    VertexSet w;
    double d_used = 0.0;
    double x = 0.0;

    /// Recomputes both invariants against h.
    bool valid_for(const Hypergraph& h) const;
};

/// Builds a witness for W after checking e(H[W]) >= x; throws otherwise.
Witness make_witness(const Hypergraph& h, VertexSet w, double x);

/// Smallest prefix interval [m] with e(H[[m]]) >= x.
std::optional<Witness> interval_witness(const FamilySpec& spec, double x);
/// Greedy vertex growth; no size guarantee.
std::optional<Witness> greedy_witness(const Hypergraph& h, double x);

}  // namespace uptail
