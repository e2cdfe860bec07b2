#include "uptail/decompose.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "uptail/bounds.hpp"
#include "uptail/errors.hpp"

namespace uptail {

namespace {

std::vector<std::size_t> degrees_of(const Hypergraph& h, std::span<const EdgeId> edges) {
    std::vector<std::size_t> deg(h.num_vertices(), 0);
    for (EdgeId e : edges)
        for (Vertex v : h.edge(e)) ++deg[v];
    return deg;
}

bool disjoint_words(const VertexSet& a, const VertexSet& b) { return !a.intersects(b); }

struct Candidate {
    VertexSet verts;
    std::size_t size = 0;
};

}  // namespace

VertexSet StarMatching::vertices(const Hypergraph& h) const {
    VertexSet out(h.num_vertices());
    for (const auto& st : stars)
        for (EdgeId e : st.edge_ids)
            for (Vertex v : h.edge(e)) out.insert(v);
    return out;
}

std::size_t star_size(double r) {
    require(r > 0.0 && std::isfinite(r), "star threshold r must be positive and finite");
    return static_cast<std::size_t>(std::ceil(r));
}

void CascadeParams::validate() const {
    require(beta > 0.0 && beta <= 1.0, "beta must lie in (0,1]");
    require(gamma > 0.0 && gamma <= 0.125, "gamma must lie in (0,1/8]");
    require(r > 0.0 && std::isfinite(r), "r must be positive");
    require(t > 0.0 && std::isfinite(t), "t must be positive");
    require(p > 0.0 && p <= 1.0, "p must lie in (0,1]");
}

double CascadeParams::s() const { return 1.0 - gamma * std::log(p); }

double CascadeParams::r_at(std::size_t j) const { return std::ldexp(r, static_cast<int>(j)); }

std::size_t CascadeParams::top_level() const {
    const double target = std::sqrt(t);
    std::size_t j = 0;
    while (r_at(j) < target) ++j;
    return j;
}

std::size_t xr_exact(const Hypergraph& h, const VertexSet& s, double r) {
    const auto edges = induced_edges(h, s);
    return xr_exact_edges(h, edges, r);
}

std::size_t xr_exact_edges(const Hypergraph& h, std::span<const EdgeId> edges, double r) {
    require(r > 0.0, "X_r needs r > 0");
    const std::size_t m = edges.size();
    if (m > kXrEdgeBudget)
        throw CapacityError("xr_exact: " + std::to_string(m) + " induced edges exceed the budget of " +
                            std::to_string(kXrEdgeBudget));
    const double cap_real = std::floor(r);
    if (cap_real >= static_cast<double>(m)) return m;
    const auto cap = static_cast<std::size_t>(cap_real);
    if (max_degree_of(h, edges) <= cap) return m;
    if (cap == 0) return 0;

    std::vector<std::size_t> deg(h.num_vertices(), 0);
    std::size_t best = degree_prune_edges(h, edges, r).kept.size();
    std::function<void(std::size_t, std::size_t)> search = [&](std::size_t i, std::size_t cur) {
        if (cur + (m - i) <= best) return;
        if (i == m) {
            best = cur;
            return;
        }
        auto f = h.edge(edges[i]);
        if (std::all_of(f.begin(), f.end(), [&](Vertex v) { return deg[v] < cap; })) {
            for (Vertex v : f) ++deg[v];
            search(i + 1, cur + 1);
            for (Vertex v : f) --deg[v];
        }
        search(i + 1, cur);
    };
    search(0, 0);
    return best;
}

StarMatching greedy_star_matching(const Hypergraph& h, const VertexSet& s, double r) {
    const auto edges = induced_edges(h, s);
    return greedy_star_matching_edges(h, edges, r);
}

StarMatching greedy_star_matching_edges(const Hypergraph& h, std::span<const EdgeId> edges, double r) {
    const std::size_t need = star_size(r);
    StarMatching out;
    out.r = r;
    std::vector<char> member(h.num_edges(), 0);
    for (EdgeId e : edges) member[e] = 1;
    std::vector<char> blocked(h.num_vertices(), 0);
    std::vector<EdgeId> free_edges;
    for (Vertex v = 0; v < h.num_vertices(); ++v) {
        if (blocked[v]) continue;
        free_edges.clear();
        for (EdgeId e : h.incident(v)) {
            if (!member[e]) continue;
            auto f = h.edge(e);
            if (std::any_of(f.begin(), f.end(), [&](Vertex u) { return blocked[u] != 0; })) continue;
            free_edges.push_back(e);
            if (free_edges.size() == need) break;
        }
        if (free_edges.size() < need) continue;
        for (EdgeId e : free_edges)
            for (Vertex u : h.edge(e)) blocked[u] = 1;
        out.stars.push_back(Star{v, free_edges});
    }
    return out;
}

std::size_t mr_exact(const Hypergraph& h, const VertexSet& s, double r, MrBudget budget) {
    const auto edges = induced_edges(h, s);
    return mr_exact_edges(h, edges, r, budget);
}

std::size_t mr_exact_edges(const Hypergraph& h, std::span<const EdgeId> edges, double r, MrBudget budget) {
    const std::size_t need = star_size(r);
    const std::size_t n = h.num_vertices();
    const auto deg = degrees_of(h, edges);

    double total = 0.0;
    for (Vertex v = 0; v < n; ++v)
        if (deg[v] >= need) total += std::exp(log_choose(static_cast<double>(deg[v]), static_cast<double>(need)));
    if (total > static_cast<double>(budget.max_candidates) + 0.5)
        throw CapacityError("mr_exact: candidate star count exceeds the budget");
    if (total < 0.5) return 0;

    std::vector<char> member(h.num_edges(), 0);
    for (EdgeId e : edges) member[e] = 1;

    std::vector<Candidate> cands;
    std::vector<EdgeId> inc;
    std::vector<std::size_t> pick;
    for (Vertex v = 0; v < n; ++v) {
        if (deg[v] < need) continue;
        inc.clear();
        for (EdgeId e : h.incident(v))
            if (member[e]) inc.push_back(e);
        pick.resize(need);
        for (std::size_t i = 0; i < need; ++i) pick[i] = i;
        while (true) {
            Candidate c{VertexSet(n), 0};
            for (std::size_t i : pick)
                for (Vertex u : h.edge(inc[i])) c.verts.insert(u);
            c.size = c.verts.count();
            cands.push_back(std::move(c));
            std::size_t i = need;
            while (i > 0 && pick[i - 1] == inc.size() - need + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t q = i; q < need; ++q) pick[q] = pick[q - 1] + 1;
        }
    }

    auto word_less = [](const Candidate& a, const Candidate& b) {
        auto wa = a.verts.words(), wb = b.verts.words();
        return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
    };
    std::sort(cands.begin(), cands.end(), word_less);
    cands.erase(std::unique(cands.begin(), cands.end(),
                            [](const Candidate& a, const Candidate& b) { return a.verts == b.verts; }),
                cands.end());
    // A star whose vertex set contains another star's can always be swapped out.
    if (cands.size() <= 2000) {
        std::vector<char> dominated(cands.size(), 0);
        for (std::size_t i = 0; i < cands.size(); ++i)
            for (std::size_t j = 0; j < cands.size() && !dominated[i]; ++j)
                if (i != j && !dominated[j] && cands[j].size < cands[i].size && cands[j].verts.subset_of(cands[i].verts))
                    dominated[i] = 1;
        std::vector<Candidate> kept;
        for (std::size_t i = 0; i < cands.size(); ++i)
            if (!dominated[i]) kept.push_back(std::move(cands[i]));
        cands = std::move(kept);
    }

    std::size_t best = greedy_star_matching_edges(h, edges, r).size();
    std::size_t nodes = 0;
    std::function<void(const std::vector<std::size_t>&, std::size_t)> search =
        [&](const std::vector<std::size_t>& alive, std::size_t cur) {
            if (++nodes > budget.max_nodes) throw CapacityError("mr_exact: search node budget exceeded");
            if (alive.empty()) {
                best = std::max(best, cur);
                return;
            }
            VertexSet uni(n);
            std::size_t min_size = n + 1;
            for (std::size_t i : alive) {
                uni |= cands[i].verts;
                min_size = std::min(min_size, cands[i].size);
            }
            const std::size_t cap = std::min(alive.size(), uni.count() / min_size);
            if (cur + cap <= best) return;
            const Vertex v = uni.members().front();
            std::vector<std::size_t> without;
            std::vector<std::size_t> through;
            for (std::size_t i : alive) (cands[i].verts.contains(v) ? through : without).push_back(i);
            std::vector<std::size_t> next;
            for (std::size_t i : through) {
                next.clear();
                for (std::size_t j : without)
                    if (disjoint_words(cands[i].verts, cands[j].verts)) next.push_back(j);
                search(next, cur + 1);
            }
            search(without, cur);
        };
    std::vector<std::size_t> all(cands.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    search(all, 0);
    return best;
}

PruneResult degree_prune(const Hypergraph& h, const VertexSet& s, double r) {
    const auto edges = induced_edges(h, s);
    return degree_prune_edges(h, edges, r);
}

PruneResult degree_prune_edges(const Hypergraph& h, std::span<const EdgeId> edges, double r) {
    PruneResult out;
    out.matching.r = r;
    out.max_degree_before = max_degree_of(h, edges);
    if (static_cast<double>(out.max_degree_before) <= r) {
        // already of maximum degree <= r, so it counts towards X_r as it is
        out.kept.assign(edges.begin(), edges.end());
        out.max_degree_after = out.max_degree_before;
        return out;
    }
    out.matching = greedy_star_matching_edges(h, edges, r);
    const VertexSet blocked = out.matching.vertices(h);
    for (EdgeId e : edges) {
        auto f = h.edge(e);
        if (std::none_of(f.begin(), f.end(), [&](Vertex v) { return blocked.contains(v); }))
            out.kept.push_back(e);
    }
    out.max_degree_after = max_degree_of(h, out.kept);
    if (out.max_degree_after + 1 > star_size(r))
        throw std::logic_error("degree_prune: pruned graph still has a vertex of degree ceil(r)");
    return out;
}

double CascadeResult::removal_bound(std::size_t k) const {
    double total = 0.0;
    for (const auto& lv : levels)
        total += static_cast<double>(lv.matching_size) * static_cast<double>(star_size(lv.r_j)) *
                 static_cast<double>(k) * static_cast<double>(lv.degree_above);
    return total;
}

double CascadeResult::dyadic_removal_bound(std::size_t k) const {
    double total = 0.0;
    for (const auto& lv : levels)
        total += static_cast<double>(lv.matching_size) * 4.0 * static_cast<double>(k) * lv.r_j * lv.r_j;
    return total;
}

CascadeResult cascade_prune(const Hypergraph& h, const VertexSet& s, const CascadeParams& params) {
    params.validate();
    require(params.r >= 1.0, "cascade_prune needs r >= 1");
    CascadeResult out;
    out.top_level = params.top_level();
    std::vector<EdgeId> current = induced_edges(h, s);
    const std::size_t start = std::max<std::size_t>(out.top_level, 1);
    for (std::size_t j = start; j-- > 0;) {
        const double rj = params.r_at(j);
        auto pr = degree_prune_edges(h, current, rj);
        CascadeLevel lv;
        lv.j = j;
        lv.r_j = rj;
        lv.matching_size = pr.matching.size();
        lv.degree_above = pr.max_degree_before;
        lv.removed = current.size() - pr.kept.size();
        out.levels.push_back(lv);
        current = std::move(pr.kept);
    }
    out.g0 = std::move(current);
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

CascadeCheck check_cascade_event(const Hypergraph& h, const VertexSet& s, const CascadeParams& params,
                                 MrBudget budget) {
    params.validate();
    CascadeCheck out;
    const auto edges = induced_edges(h, s);
    const double delta = static_cast<double>(max_degree_of(h, edges));
    const double sqrt_t = std::sqrt(params.t);
    const double sp = params.s();
    const double limit = std::max(2.0 * sqrt_t, delta);
    bool failed = false, unknown = false;
    for (std::size_t j = 0; j < 64 && params.r_at(j) <= limit; ++j) {
        LevelCheck lc;
        lc.j = j;
        lc.r_j = params.r_at(j);
        lc.bound = lc.r_j < sqrt_t / sp ? params.beta * sqrt_t * sp / lc.r_j : params.beta * sqrt_t / lc.r_j;
        if (static_cast<double>(star_size(lc.r_j)) > delta) {
            lc.exact = 0;
        } else {
            lc.greedy = greedy_star_matching_edges(h, edges, lc.r_j).size();
            if (static_cast<double>(lc.greedy) >= lc.bound) {
                lc.verdict = Verdict::fails;
            } else {
                try {
                    lc.exact = mr_exact_edges(h, edges, lc.r_j, budget);
                    if (static_cast<double>(*lc.exact) >= lc.bound) lc.verdict = Verdict::fails;
                } catch (const CapacityError&) {
                    lc.verdict = Verdict::indeterminate;
                }
            }
        }
        failed |= lc.verdict == Verdict::fails;
        unknown |= lc.verdict == Verdict::indeterminate;
        out.levels.push_back(lc);
    }
    out.verdict = failed ? Verdict::fails : (unknown ? Verdict::indeterminate : Verdict::holds);
    return out;
}

double degree_tail_sum(const Hypergraph& h, double p, double r) {
    require(p >= 0.0 && p <= 1.0, "probability must lie in [0,1]");
    const std::size_t need = star_size(r);
    double total = 0.0;
    std::vector<std::uint32_t> local(h.num_vertices(), 0);
    std::vector<Vertex> nbrs;
    std::vector<std::uint32_t> link;
    for (Vertex v = 0; v < h.num_vertices(); ++v) {
        auto inc = h.incident(v);
        if (inc.size() < need) continue;
        nbrs.clear();
        for (EdgeId e : inc)
            for (Vertex u : h.edge(e))
                if (u != v && local[u] == 0) {
                    nbrs.push_back(u);
                    local[u] = static_cast<std::uint32_t>(nbrs.size());
                }
        if (nbrs.size() > 24) {
            for (Vertex u : nbrs) local[u] = 0;
            throw CapacityError("degree_tail_sum: neighbourhood larger than 24 vertices");
        }
        link.clear();
        for (EdgeId e : inc) {
            std::uint32_t m = 0;
            for (Vertex u : h.edge(e))
                if (u != v) m |= 1U << (local[u] - 1);
            link.push_back(m);
        }
        for (Vertex u : nbrs) local[u] = 0;

        const std::size_t d = nbrs.size();
        std::vector<double> weight(d + 1);
        for (std::size_t c = 0; c <= d; ++c)
            weight[c] = std::pow(p, static_cast<double>(c)) * std::pow(1.0 - p, static_cast<double>(d - c));
        double prob = 0.0;
        for (std::uint32_t mask = 0; mask < (1U << d); ++mask) {
            std::size_t cnt = 0;
            for (auto m : link) cnt += (m & mask) == m;
            if (cnt >= need) prob += weight[static_cast<std::size_t>(std::popcount(mask))];
        }
        total += p * prob;
    }
    return total;
}

}  // namespace uptail
