#pragma once

// Deliberately naive reference implementations. Nothing here calls the
// library's algorithms; the hypergraphs are plain edge lists and every
// quantity is recomputed by brute force.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

using Edge = std::vector<int>;

struct Graph {
    int n = 0;
    int k = 0;
    std::vector<Edge> edges;
};

inline bool is_ap(const std::vector<int>& s) {
    // s sorted ascending
    for (std::size_t i = 2; i < s.size(); ++i)
        if (s[i] - s[i - 1] != s[1] - s[0]) return false;
    return s.size() < 2 || s[1] > s[0];
}

// All k-subsets of {0..n-1} accepted by pred, in lexicographic order.
inline std::vector<Edge> subsets_where(int n, int k, const std::function<bool(const Edge&)>& pred) {
    std::vector<Edge> out;
    Edge cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            if (pred(cur)) out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

inline Graph ap(int n, int k) { return {n, k, subsets_where(n, k, [](const Edge& e) { return is_ap(e); })}; }

// Vertex i stands for the integer i + 1.
inline Graph schur(int n) {
    return {n, 3, subsets_where(n, 3, [](const Edge& e) {
                const int a = e[0] + 1, b = e[1] + 1, c = e[2] + 1;
                return a + b == c;
            })};
}

inline Graph ell_sum(int n, int ell) {
    return {n, 3, subsets_where(n, 3, [ell](const Edge& e) {
                const int v[3] = {e[0] + 1, e[1] + 1, e[2] + 1};
                for (int z = 0; z < 3; ++z) {
                    const int x = v[(z + 1) % 3], y = v[(z + 2) % 3];
                    if (x + y == ell * v[z]) return true;
                }
                return false;
            })};
}

inline bool inside(const Edge& e, std::uint64_t mask) {
    for (int v : e)
        if (!((mask >> v) & 1ULL)) return false;
    return true;
}

inline int induced(const Graph& g, std::uint64_t mask) {
    int c = 0;
    for (const auto& e : g.edges) c += inside(e, mask);
    return c;
}

inline long double weight(int n, std::uint64_t mask, long double p) {
    long double w = 1.0L;
    for (int v = 0; v < n; ++v) w *= ((mask >> v) & 1ULL) ? p : 1.0L - p;
    return w;
}

// Pr(X = x) for every x by visiting all 2^n subsets.
inline std::vector<long double> distribution(const Graph& g, long double p) {
    std::vector<long double> d(g.edges.size() + 1, 0.0L);
    for (std::uint64_t m = 0; m < (1ULL << g.n); ++m) d[induced(g, m)] += weight(g.n, m, p);
    return d;
}

inline long double tail(const std::vector<long double>& dist, double threshold) {
    long double s = 0.0L;
    for (std::size_t x = 0; x < dist.size(); ++x)
        if (static_cast<double>(x) >= threshold) s += dist[x];
    return s;
}

inline long double variance(const std::vector<long double>& dist) {
    long double m1 = 0.0L, m2 = 0.0L;
    for (std::size_t x = 0; x < dist.size(); ++x) {
        m1 += x * dist[x];
        m2 += static_cast<long double>(x) * x * dist[x];
    }
    return m2 - m1 * m1;
}

inline std::vector<int> induced_ids(const Graph& g, std::uint64_t mask) {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
        if (inside(g.edges[i], mask)) ids.push_back(i);
    return ids;
}

inline int max_degree(const Graph& g, const std::vector<int>& ids) {
    std::vector<int> deg(g.n, 0);
    int best = 0;
    for (int i : ids)
        for (int v : g.edges[i]) best = std::max(best, ++deg[v]);
    return best;
}

// X_r by trying every subset of the given edges.
inline int xr(const Graph& g, const std::vector<int>& ids, double r) {
    const int m = static_cast<int>(ids.size());
    int best = 0;
    for (std::uint64_t sub = 0; sub < (1ULL << m); ++sub) {
        std::vector<int> chosen;
        for (int i = 0; i < m; ++i)
            if ((sub >> i) & 1ULL) chosen.push_back(ids[i]);
        if (max_degree(g, chosen) <= r) best = std::max(best, static_cast<int>(chosen.size()));
    }
    return best;
}

// Every ceil(r)-star, as a vertex mask, over the given edges.
inline std::vector<std::uint64_t> star_masks(const Graph& g, const std::vector<int>& ids, double r) {
    const int need = static_cast<int>(std::ceil(r));
    std::vector<std::uint64_t> out;
    for (int v = 0; v < g.n; ++v) {
        std::vector<int> through;
        for (int i : ids)
            if (std::find(g.edges[i].begin(), g.edges[i].end(), v) != g.edges[i].end()) through.push_back(i);
        const int d = static_cast<int>(through.size());
        if (d < need) continue;
        for (std::uint64_t sub = 0; sub < (1ULL << d); ++sub) {
            if (__builtin_popcountll(sub) != need) continue;
            std::uint64_t m = 0;
            for (int j = 0; j < d; ++j)
                if ((sub >> j) & 1ULL)
                    for (int u : g.edges[through[j]]) m |= 1ULL << u;
            out.push_back(m);
        }
    }
    return out;
}

// Largest pairwise-disjoint subfamily by trying every subset of stars.
inline int max_disjoint(const std::vector<std::uint64_t>& stars) {
    const int s = static_cast<int>(stars.size());
    int best = 0;
    for (std::uint64_t sub = 0; sub < (1ULL << s); ++sub) {
        std::uint64_t used = 0;
        bool ok = true;
        for (int i = 0; i < s && ok; ++i) {
            if (!((sub >> i) & 1ULL)) continue;
            if (used & stars[i]) ok = false;
            used |= stars[i];
        }
        if (ok) best = std::max(best, __builtin_popcountll(sub));
    }
    return best;
}

inline long double binomial_tail(int n, long double q, double threshold) {
    long double s = 0.0L;
    for (int j = 0; j <= n; ++j) {
        if (static_cast<double>(j) < threshold) continue;
        long double c = 1.0L;
        for (int i = 0; i < j; ++i) c = c * (n - i) / (i + 1);
        s += c * std::pow(q, static_cast<long double>(j)) * std::pow(1.0L - q, static_cast<long double>(n - j));
    }
    return s;
}

// Product-space events on {0,1}^M as membership vectors.
using Event = std::vector<char>;

// Does fixing the coordinates in K to omega force membership in A?
inline bool forced(const Event& a, int m, std::uint32_t omega, std::uint32_t k) {
    for (std::uint32_t w = 0; w < (1U << m); ++w)
        if ((w & k) == (omega & k) && !a[w]) return false;
    return true;
}

// Disjoint occurrence by trying every pair of disjoint coordinate sets.
inline Event box(const Event& a, const Event& b, int m) {
    const std::uint32_t n = 1U << m;
    // fa[k * n + v]: fixing coordinates k to the values v forces A.
    std::vector<char> fa(static_cast<std::size_t>(n) * n, 0), fb(fa.size(), 0);
    for (std::uint32_t k = 0; k < n; ++k)
        for (std::uint32_t v = 0; v < n; ++v) {
            if ((v & ~k) != 0) continue;
            fa[k * n + v] = forced(a, m, v, k);
            fb[k * n + v] = forced(b, m, v, k);
        }
    Event out(n, 0);
    for (std::uint32_t omega = 0; omega < n; ++omega)
        for (std::uint32_t k = 0; k < n && !out[omega]; ++k) {
            if (!fa[k * n + (omega & k)]) continue;
            for (std::uint32_t l = 0; l < n; ++l)
                if ((k & l) == 0 && fb[l * n + (omega & l)]) {
                    out[omega] = 1;
                    break;
                }
        }
    return out;
}

inline long double measure(const Event& a, int m, const std::vector<double>& probs) {
    long double s = 0.0L;
    for (std::uint32_t w = 0; w < (1U << m); ++w) {
        if (!a[w]) continue;
        long double x = 1.0L;
        for (int i = 0; i < m; ++i) x *= ((w >> i) & 1U) ? probs[i] : 1.0L - probs[i];
        s += x;
    }
    return s;
}

inline bool rel_close(long double a, long double b, long double rel) {
    const long double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= rel * scale;
}

}  // namespace oracle
