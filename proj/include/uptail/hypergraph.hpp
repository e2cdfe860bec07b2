#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uptail/rng.hpp"

namespace uptail {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

/// Subset of {0, ..., N-1} stored as a packed bit vector.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static VertexSet full(std::size_t n);
    /// Low n bits of mask; n <= 64.
    static VertexSet from_mask(std::size_t n, std::uint64_t mask);
    static VertexSet from_list(std::size_t n, std::span<const Vertex> vs);

    std::size_t universe() const { return n_; }
    bool contains(Vertex v) const { return (words_[v >> 6] >> (v & 63)) & 1ULL; }
    void insert(Vertex v) { words_[v >> 6] |= 1ULL << (v & 63); }
    void erase(Vertex v) { words_[v >> 6] &= ~(1ULL << (v & 63)); }
    void clear();
    std::size_t count() const;
    bool empty() const { return count() == 0; }

    bool intersects(const VertexSet& o) const;
    bool subset_of(const VertexSet& o) const;
    VertexSet& operator|=(const VertexSet& o);
    VertexSet& operator&=(const VertexSet& o);

    std::vector<Vertex> members() const;
    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Immutable k-uniform hypergraph on {0, ..., N-1}. Edges are stored sorted
/// internally and in lexicographic order across the edge list.
class Hypergraph {
public:
    Hypergraph() = default;
    /// Canonicalizes `edges` (sorts each edge, then the list). Throws
    /// ContractViolation on wrong arity, repeated or out-of-range vertices,
    /// or duplicate edges.
    Hypergraph(std::size_t k, std::size_t num_vertices, std::vector<std::vector<Vertex>> edges);

    std::size_t k() const { return k_; }
    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return k_ == 0 ? 0 : verts_.size() / k_; }

    std::span<const Vertex> edge(EdgeId e) const {
        return {verts_.data() + static_cast<std::size_t>(e) * k_, k_};
    }
    std::span<const EdgeId> incident(Vertex v) const {
        return {inc_.data() + inc_start_[v], inc_start_[v + 1] - inc_start_[v]};
    }

    /// Per-edge bit masks, available when N <= 64.
    bool has_masks() const { return n_ <= 64; }
    std::span<const std::uint64_t> edge_masks() const { return masks_; }

    VertexSet edge_set(EdgeId e) const;

    friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
        return a.k_ == b.k_ && a.n_ == b.n_ && a.verts_ == b.verts_;
    }

private:
    std::size_t k_ = 0;
    std::size_t n_ = 0;
    std::vector<Vertex> verts_;
    std::vector<std::size_t> inc_start_{0};
    std::vector<EdgeId> inc_;
    std::vector<std::uint64_t> masks_;
};

/// e(H[S]) via k bit tests per edge.
std::size_t induced_edge_count(const Hypergraph& h, const VertexSet& s);
/// Same count, skipping edges whose lowest vertex is absent from S first.
/// Must agree with induced_edge_count on every input.
std::size_t induced_edge_count_filtered(const Hypergraph& h, const VertexSet& s);
/// Mask form for N <= 64.
std::size_t induced_edge_count(const Hypergraph& h, std::uint64_t mask);
/// Ids of the edges of H[S], ascending.
std::vector<EdgeId> induced_edges(const Hypergraph& h, const VertexSet& s);

std::size_t degree(const Hypergraph& h, Vertex v);
std::size_t max_degree(const Hypergraph& h);
/// Maximum number of edges containing a common j-set of vertices, 1 <= j <= k.
std::size_t delta_j(const Hypergraph& h, std::size_t j);

/// Degree of v and maximum degree within an edge subset.
std::size_t max_degree_of(const Hypergraph& h, std::span<const EdgeId> edges);

/// Each vertex independently with probability p.
VertexSet sample_vp(const Hypergraph& h, double p, CounterRng& rng);
void sample_vp_into(VertexSet& out, double p, CounterRng& rng);
/// Uniform m-subset via partial Fisher-Yates.
VertexSet sample_vm(const Hypergraph& h, std::size_t m, CounterRng& rng);

/// Text format: header "k N E", then E lines of k space-separated 0-based ids.
std::string to_text(const Hypergraph& h);
Hypergraph from_text(const std::string& text);
void save_text(const Hypergraph& h, const std::string& path);
Hypergraph load_text(const std::string& path);

}  // namespace uptail
