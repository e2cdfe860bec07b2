#include "uptail/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "uptail/errors.hpp"

namespace uptail {

VertexSet VertexSet::full(std::size_t n) {
    VertexSet s(n);
    for (auto& w : s.words_) w = ~0ULL;
    if (n % 64 != 0 && !s.words_.empty()) s.words_.back() = (1ULL << (n % 64)) - 1;
    return s;
}

VertexSet VertexSet::from_mask(std::size_t n, std::uint64_t mask) {
    require(n <= 64, "VertexSet::from_mask needs n <= 64");
    VertexSet s(n);
    if (n > 0) s.words_[0] = n == 64 ? mask : (mask & ((1ULL << n) - 1));
    return s;
}

VertexSet VertexSet::from_list(std::size_t n, std::span<const Vertex> vs) {
    VertexSet s(n);
    for (Vertex v : vs) {
        require(v < n, "vertex id out of range");
        s.insert(v);
    }
    return s;
}

void VertexSet::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t VertexSet::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool VertexSet::intersects(const VertexSet& o) const {
    require(n_ == o.n_, "VertexSet universe mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & o.words_[i]) return true;
    return false;
}

bool VertexSet::subset_of(const VertexSet& o) const {
    require(n_ == o.n_, "VertexSet universe mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

VertexSet& VertexSet::operator|=(const VertexSet& o) {
    require(n_ == o.n_, "VertexSet universe mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

VertexSet& VertexSet::operator&=(const VertexSet& o) {
    require(n_ == o.n_, "VertexSet universe mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

std::vector<Vertex> VertexSet::members() const {
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        auto w = words_[i];
        while (w) {
            out.push_back(static_cast<Vertex>(i * 64 + std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

Hypergraph::Hypergraph(std::size_t k, std::size_t num_vertices,
                       std::vector<std::vector<Vertex>> edges)
    : k_(k), n_(num_vertices) {
    require(k >= 1, "hypergraph uniformity must be positive");
    require(num_vertices >= 1, "hypergraph needs at least one vertex");
    for (auto& e : edges) {
        require(e.size() == k, "edge has wrong number of vertices");
        std::sort(e.begin(), e.end());
        require(std::adjacent_find(e.begin(), e.end()) == e.end(), "edge repeats a vertex");
        require(e.back() < num_vertices, "edge vertex out of range");
    }
    std::sort(edges.begin(), edges.end());
    require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(), "duplicate edge");

    verts_.reserve(edges.size() * k);
    for (const auto& e : edges) verts_.insert(verts_.end(), e.begin(), e.end());

    std::vector<std::size_t> deg(n_, 0);
    for (Vertex v : verts_) ++deg[v];
    inc_start_.assign(n_ + 1, 0);
    for (std::size_t v = 0; v < n_; ++v) inc_start_[v + 1] = inc_start_[v] + deg[v];
    inc_.resize(verts_.size());
    std::vector<std::size_t> fill(inc_start_.begin(), inc_start_.end() - 1);
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (Vertex v : edges[e]) inc_[fill[v]++] = static_cast<EdgeId>(e);

    if (n_ <= 64) {
        masks_.reserve(edges.size());
        for (const auto& e : edges) {
            std::uint64_t m = 0;
            for (Vertex v : e) m |= 1ULL << v;
            masks_.push_back(m);
        }
    }
}

VertexSet Hypergraph::edge_set(EdgeId e) const { return VertexSet::from_list(n_, edge(e)); }

namespace {
void check_universe(const Hypergraph& h, const VertexSet& s) {
    require(s.universe() == h.num_vertices(), "vertex set size does not match hypergraph");
}
}  // namespace

std::size_t induced_edge_count(const Hypergraph& h, const VertexSet& s) {
    check_universe(h, s);
    std::size_t count = 0;
    const std::size_t m = h.num_edges();
    for (EdgeId e = 0; e < m; ++e) {
        bool in = true;
        for (Vertex v : h.edge(e)) {
            if (!s.contains(v)) {
                in = false;
                break;
            }
        }
        count += in;
    }
    return count;
}

std::size_t induced_edge_count_filtered(const Hypergraph& h, const VertexSet& s) {
    check_universe(h, s);
    // Every edge is listed in the incidence list of its lowest vertex exactly
    // once with that vertex first; iterate only present vertices.
    std::size_t count = 0;
    for (Vertex v : s.members()) {
        for (EdgeId e : h.incident(v)) {
            auto f = h.edge(e);
            if (f[0] != v) continue;
            bool in = true;
            for (std::size_t i = 1; i < f.size(); ++i) {
                if (!s.contains(f[i])) {
                    in = false;
                    break;
                }
            }
            count += in;
        }
    }
    return count;
}

std::size_t induced_edge_count(const Hypergraph& h, std::uint64_t mask) {
    require(h.has_masks(), "mask form needs N <= 64");
    std::size_t count = 0;
    for (auto m : h.edge_masks()) count += (m & mask) == m;
    return count;
}

std::vector<EdgeId> induced_edges(const Hypergraph& h, const VertexSet& s) {
    check_universe(h, s);
    std::vector<EdgeId> out;
    const std::size_t m = h.num_edges();
    for (EdgeId e = 0; e < m; ++e) {
        auto f = h.edge(e);
        if (std::all_of(f.begin(), f.end(), [&](Vertex v) { return s.contains(v); }))
            out.push_back(e);
    }
    return out;
}

std::size_t degree(const Hypergraph& h, Vertex v) {
    require(v < h.num_vertices(), "vertex out of range");
    return h.incident(v).size();
}

std::size_t max_degree(const Hypergraph& h) {
    std::size_t best = 0;
    for (Vertex v = 0; v < h.num_vertices(); ++v) best = std::max(best, h.incident(v).size());
    return best;
}

std::size_t max_degree_of(const Hypergraph& h, std::span<const EdgeId> edges) {
    std::vector<std::size_t> deg(h.num_vertices(), 0);
    std::size_t best = 0;
    for (EdgeId e : edges)
        for (Vertex v : h.edge(e)) best = std::max(best, ++deg[v]);
    return best;
}

std::size_t delta_j(const Hypergraph& h, std::size_t j) {
    require(j >= 1 && j <= h.k(), "delta_j needs 1 <= j <= k");
    if (j == 1) return max_degree(h);
    std::map<std::vector<Vertex>, std::size_t> counts;
    std::size_t best = 0;
    const std::size_t k = h.k();
    std::vector<std::size_t> idx(j);
    std::vector<Vertex> key(j);
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
        auto f = h.edge(e);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            for (std::size_t i = 0; i < j; ++i) key[i] = f[idx[i]];
            best = std::max(best, ++counts[key]);
            // next j-combination of {0..k-1} in lexicographic order
            std::size_t i = j;
            while (i > 0 && idx[i - 1] == k - j + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t t = i; t < j; ++t) idx[t] = idx[t - 1] + 1;
        }
    }
    return best;
}

void sample_vp_into(VertexSet& out, double p, CounterRng& rng) {
    require(p >= 0.0 && p <= 1.0, "probability must lie in [0,1]");
    out.clear();
    const std::size_t n = out.universe();
    for (std::size_t v = 0; v < n; ++v)
        if (rng.uniform01() < p) out.insert(static_cast<Vertex>(v));
}

VertexSet sample_vp(const Hypergraph& h, double p, CounterRng& rng) {
    VertexSet s(h.num_vertices());
    sample_vp_into(s, p, rng);
    return s;
}

VertexSet sample_vm(const Hypergraph& h, std::size_t m, CounterRng& rng) {
    const std::size_t n = h.num_vertices();
    require(m <= n, "cannot sample more vertices than exist");
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    VertexSet s(n);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(perm[i], perm[j]);
        s.insert(perm[i]);
    }
    return s;
}

std::string to_text(const Hypergraph& h) {
    std::string out = std::to_string(h.k()) + ' ' + std::to_string(h.num_vertices()) + ' ' +
                      std::to_string(h.num_edges()) + '\n';
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
        auto f = h.edge(e);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(f[i]);
        }
        out += '\n';
    }
    return out;
}

Hypergraph from_text(const std::string& text) {
    std::istringstream in(text);
    long long k = -1, n = -1, e = -1;
    if (!(in >> k >> n >> e) || k < 1 || n < 1 || e < 0)
        throw ContractViolation("hypergraph text: bad header");
    std::vector<std::vector<Vertex>> edges(static_cast<std::size_t>(e));
    for (auto& f : edges) {
        f.resize(static_cast<std::size_t>(k));
        for (auto& v : f) {
            long long x = -1;
            if (!(in >> x) || x < 0 || x >= n) throw ContractViolation("hypergraph text: bad vertex id");
            v = static_cast<Vertex>(x);
        }
    }
    std::string rest;
    if (in >> rest) throw ContractViolation("hypergraph text: trailing data");
    return Hypergraph(static_cast<std::size_t>(k), static_cast<std::size_t>(n), std::move(edges));
}

void save_text(const Hypergraph& h, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << to_text(h);
}

Hypergraph load_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

}  // namespace uptail
