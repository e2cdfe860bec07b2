#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uptail/hypergraph.hpp"

namespace uptail {

/// A center vertex with ceil(r) distinct edges through it.
struct Star {
    Vertex center = 0;
    std::vector<EdgeId> edge_ids;
};

/// Vertex-disjoint collection of r-stars.
struct StarMatching {
    double r = 1.0;
    std::vector<Star> stars;

    std::size_t size() const { return stars.size(); }
    /// Union of the vertices of all stars.
    VertexSet vertices(const Hypergraph& h) const;
};

/// ceil(r) as an edge count; r must be positive.
std::size_t star_size(double r);

struct CascadeParams {
    double beta = 1.0;
    double gamma = 0.125;
    double r = 1.0;
    double t = 1.0;
    double p = 0.5;

    void validate() const;
    /// s = ln(e / p^gamma).
    double s() const;
    /// r_j = 2^j r.
    double r_at(std::size_t j) const;
    /// Smallest J with r_J >= sqrt(t).
    std::size_t top_level() const;
};

/// Largest number of induced edges forming a subhypergraph of maximum degree
/// <= r. Throws CapacityError when H[S] has more than 22 edges.
std::size_t xr_exact(const Hypergraph& h, const VertexSet& s, double r);
std::size_t xr_exact_edges(const Hypergraph& h, std::span<const EdgeId> edges, double r);
inline constexpr std::size_t kXrEdgeBudget = 22;

/// Maximal vertex-disjoint ceil(r)-star collection from one scan of centers
/// in increasing id order, taking the lowest-indexed free edges.
StarMatching greedy_star_matching(const Hypergraph& h, const VertexSet& s, double r);
/// Same scan restricted to an ascending list of edge ids.
StarMatching greedy_star_matching_edges(const Hypergraph& h, std::span<const EdgeId> edges, double r);

struct MrBudget {
    std::size_t max_candidates = 10000;
    std::size_t max_nodes = 2000000;
};

/// Exact maximum number of vertex-disjoint ceil(r)-stars (set packing by
/// branch and bound). Throws CapacityError outside the budget.
std::size_t mr_exact(const Hypergraph& h, const VertexSet& s, double r, MrBudget budget = {});
std::size_t mr_exact_edges(const Hypergraph& h, std::span<const EdgeId> edges, double r,
                           MrBudget budget = {});

struct PruneResult {
    std::vector<EdgeId> kept;
    StarMatching matching;
    std::size_t max_degree_before = 0;
    std::size_t max_degree_after = 0;
};

/// Removes every induced edge meeting a vertex of the greedy matching.
PruneResult degree_prune(const Hypergraph& h, const VertexSet& s, double r);
PruneResult degree_prune_edges(const Hypergraph& h, std::span<const EdgeId> edges, double r);

struct CascadeLevel {
    std::size_t j = 0;
    double r_j = 0.0;
    std::size_t matching_size = 0;
    /// Maximum degree of the edge set pruned at this level.
    std::size_t degree_above = 0;
    std::size_t removed = 0;
};

struct CascadeResult {
    std::size_t top_level = 0;
    std::vector<EdgeId> g0;
    /// Ordered from level J-1 down to 0.
    std::vector<CascadeLevel> levels;

    /// Sum of m_j ceil(r_j) k Delta_1(G_{j+1}): always an upper bound on the
    /// number of removed edges.
    double removal_bound(std::size_t k) const;
    /// Sum of m_j 4k r_j^2, valid when every level has Delta_1(G_{j+1}) <= 2 r_j.
    double dyadic_removal_bound(std::size_t k) const;
};

CascadeResult cascade_prune(const Hypergraph& h, const VertexSet& s, const CascadeParams& params);

enum class Verdict { holds, fails, indeterminate };
std::string to_string(Verdict v);

struct LevelCheck {
    std::size_t j = 0;
    double r_j = 0.0;
    double bound = 0.0;
    std::size_t greedy = 0;
    std::optional<std::size_t> exact;
    Verdict verdict = Verdict::holds;
};

struct CascadeCheck {
    Verdict verdict = Verdict::holds;
    std::vector<LevelCheck> levels;
};

/// Evaluates the cascade event: M_{r_j} < beta sqrt(t) s / r_j for r_j < sqrt(t)/s
/// and M_{r_j} < beta sqrt(t) / r_j otherwise, over r_j <= max{2 sqrt(t), Delta_1(H[S])}.
CascadeCheck check_cascade_event(const Hypergraph& h, const VertexSet& s, const CascadeParams& params,
                                 MrBudget budget = {});

/// Phi_r = sum_v Pr(|Gamma_v(H_p)| >= ceil(r)), exact by enumerating each
/// vertex's neighbourhood. Throws CapacityError past 24 neighbours.
double degree_tail_sum(const Hypergraph& h, double p, double r);

}  // namespace uptail
