#include "uptail/estimate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>

#include "uptail/bounds.hpp"
#include "uptail/errors.hpp"

namespace uptail {

namespace {

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

void require_prob(double p) { require(p >= 0.0 && p <= 1.0, "probability must lie in [0,1]"); }

// Runs fn(begin, end) on `workers` threads over contiguous slices of [0, n)
// and returns the per-slice results in slice order.
template <class Fn>
auto run_slices(std::uint64_t n, std::size_t workers, Fn fn) {
    using R = decltype(fn(std::uint64_t{0}, std::uint64_t{0}));
    workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
    std::vector<R> out(workers);
    if (workers == 1) {
        out[0] = fn(0, n);
        return out;
    }
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::uint64_t b = n * w / workers, e = n * (w + 1) / workers;
        threads.emplace_back([&out, &fn, w, b, e] { out[w] = fn(b, e); });
    }
    for (auto& t : threads) t.join();
    return out;
}

std::vector<std::vector<std::uint32_t>> edges_by_top_vertex(const Hypergraph& h) {
    std::vector<std::vector<std::uint32_t>> by_top(h.num_vertices());
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
        std::uint32_t m = 0;
        for (Vertex v : h.edge(e)) m |= 1U << v;
        by_top[h.edge(e).back()].push_back(m);
    }
    return by_top;
}

std::uint64_t sample_mask(std::size_t n, double p, CounterRng& rng) {
    std::uint64_t m = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (rng.uniform01() < p) m |= 1ULL << v;
    return m;
}

std::uint64_t mask_of(const VertexSet& s) { return s.words().empty() ? 0 : s.words()[0]; }

// Counts samples i in [0, samples) with fn(rng_i) true, split over workers.
template <class Pred>
std::uint64_t count_hits(std::uint64_t samples, std::uint64_t seed, std::size_t workers, Pred pred) {
    auto parts = run_slices(samples, workers, [&](std::uint64_t b, std::uint64_t e) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = b; i < e; ++i) {
            CounterRng rng(seed, i);
            hits += pred(rng) ? 1 : 0;
        }
        return hits;
    });
    std::uint64_t total = 0;
    for (auto c : parts) total += c;
    return total;
}

TailEstimate from_hits(Method method, double threshold, std::uint64_t hits, std::uint64_t samples, double scale) {
    TailEstimate est;
    est.method = method;
    est.threshold = threshold;
    est.samples = samples;
    const double freq = static_cast<double>(hits) / static_cast<double>(samples);
    auto [lo, hi] = wilson_interval(hits, samples);
    est.p_hat = scale * freq;
    est.ci_low = std::min(scale * lo, est.p_hat);
    est.ci_high = std::max(scale * hi, est.p_hat);
    return est;
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::mc: return "mc";
        case Method::planted: return "planted";
        case Method::conditioned: return "conditioned";
    }
    return "exact";
}

Method parse_method(const std::string& name) {
    if (name == "exact") return Method::exact;
    if (name == "mc") return Method::mc;
    if (name == "planted") return Method::planted;
    if (name == "conditioned") return Method::conditioned;
    throw ContractViolation("unknown method: " + name);
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    require(trials >= 1 && successes <= trials, "wilson_interval needs 0 <= successes <= trials, trials >= 1");
    const double n = static_cast<double>(trials);
    const double x = static_cast<double>(successes);
    const double z2 = z * z;
    const double centre = (x + z2 / 2.0) / (n + z2);
    const double half = z / (n + z2) * std::sqrt(x * (n - x) / n + z2 / 4.0);
    double lo = std::max(0.0, centre - half), hi = std::min(1.0, centre + half);
    if (successes == 0) lo = 0.0;
    if (successes == trials) hi = 1.0;
    const double phat = x / n;
    return {std::min(lo, phat), std::max(hi, phat)};
}

ExactCounts::ExactCounts(std::size_t n, std::size_t max_x, std::vector<std::uint64_t> counts)
    : n_(n), max_x_(max_x), counts_(std::move(counts)) {
    require(counts_.size() == (max_x_ + 1) * (n_ + 1), "ExactCounts table has the wrong size");
}

double ExactCounts::pmf(double p, std::size_t x) const {
    require_prob(p);
    if (x > max_x_) return 0.0;
    Neumaier acc;
    for (std::size_t s = 0; s <= n_; ++s) {
        const auto c = count(x, s);
        if (c == 0) continue;
        acc.add(static_cast<double>(c) * std::pow(p, static_cast<double>(s)) *
                std::pow(1.0 - p, static_cast<double>(n_ - s)));
    }
    return acc.value();
}

std::vector<double> ExactCounts::distribution(double p) const {
    std::vector<double> out(max_x_ + 1);
    for (std::size_t x = 0; x <= max_x_; ++x) out[x] = pmf(p, x);
    return out;
}

double ExactCounts::tail(double p, double threshold) const {
    require_prob(p);
    if (threshold <= 0.0) return 1.0;
    std::vector<double> w(n_ + 1);
    for (std::size_t s = 0; s <= n_; ++s)
        w[s] = std::pow(p, static_cast<double>(s)) * std::pow(1.0 - p, static_cast<double>(n_ - s));
    Neumaier acc;
    for (std::size_t x = 0; x <= max_x_; ++x) {
        if (static_cast<double>(x) < threshold) continue;
        for (std::size_t s = 0; s <= n_; ++s) {
            const auto c = count(x, s);
            if (c != 0) acc.add(static_cast<double>(c) * w[s]);
        }
    }
    return std::min(1.0, acc.value());
}

ExactCounts exact_counts(const Hypergraph& h, std::size_t workers) {
    const std::size_t n = h.num_vertices();
    if (n > kExactMaxVertices)
        throw CapacityError("exact enumeration needs N <= 26, got " + std::to_string(n));
    const std::size_t max_x = h.num_edges();
    const std::size_t stride = n + 1;
    const auto by_top = edges_by_top_vertex(h);

    auto walk = [&](auto&& self, std::size_t v, std::uint32_t mask, std::size_t x, std::size_t size,
                    std::vector<std::uint64_t>& cnt) -> void {
        if (v == n) {
            ++cnt[x * stride + size];
            return;
        }
        self(self, v + 1, mask, x, size, cnt);
        const std::uint32_t with = mask | (1U << v);
        std::size_t add = 0;
        for (auto em : by_top[v]) add += (em & with) == em;
        self(self, v + 1, with, x + add, size + 1, cnt);
    };

    // Split on the decisions for the first `prefix` vertices.
    std::size_t prefix = 0;
    while (prefix < n && (std::size_t{1} << prefix) < 8 * std::max<std::size_t>(workers, 1) && workers > 1) ++prefix;
    const std::uint64_t tasks = std::uint64_t{1} << prefix;
    auto parts = run_slices(tasks, workers, [&](std::uint64_t b, std::uint64_t e) {
        std::vector<std::uint64_t> cnt((max_x + 1) * stride, 0);
        for (std::uint64_t task = b; task < e; ++task) {
            std::uint32_t mask = 0;
            std::size_t x = 0, size = 0;
            for (std::size_t v = 0; v < prefix; ++v) {
                if (!((task >> v) & 1U)) continue;
                mask |= 1U << v;
                ++size;
                for (auto em : by_top[v]) x += (em & mask) == em;
            }
            walk(walk, prefix, mask, x, size, cnt);
        }
        return cnt;
    });
    std::vector<std::uint64_t> total((max_x + 1) * stride, 0);
    for (const auto& part : parts)
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
    return ExactCounts(n, max_x, std::move(total));
}

TailEstimate exact_tail(const Hypergraph& h, double p, double threshold, std::size_t workers) {
    require_prob(p);
    const auto counts = exact_counts(h, workers);
    TailEstimate est;
    est.method = Method::exact;
    est.threshold = threshold;
    est.samples = std::uint64_t{1} << h.num_vertices();
    est.p_hat = counts.tail(p, threshold);
    est.ci_low = est.ci_high = est.p_hat;
    return est;
}

TailEstimate mc_tail(const Hypergraph& h, double p, double threshold, std::uint64_t samples, std::uint64_t seed,
                     std::size_t workers) {
    return planted_tail(h, p, threshold, VertexSet(h.num_vertices()), samples, seed, workers);
}

TailEstimate planted_tail(const Hypergraph& h, double p, double threshold, const VertexSet& w,
                          std::uint64_t samples, std::uint64_t seed, std::size_t workers) {
    require_prob(p);
    require(samples >= 1, "need at least one sample");
    require(w.universe() == h.num_vertices(), "witness set does not match hypergraph");
    const std::size_t n = h.num_vertices();
    std::uint64_t hits;
    if (h.has_masks()) {
        const std::uint64_t forced = mask_of(w);
        hits = count_hits(samples, seed, workers, [&](CounterRng& rng) {
            const std::uint64_t s = sample_mask(n, p, rng) | forced;
            return static_cast<double>(induced_edge_count(h, s)) >= threshold;
        });
    } else {
        hits = count_hits(samples, seed, workers, [&](CounterRng& rng) {
            VertexSet s = sample_vp(h, p, rng);
            s |= w;
            return static_cast<double>(induced_edge_count_filtered(h, s)) >= threshold;
        });
    }
    const std::size_t size = w.count();
    const Method method = size == 0 ? Method::mc : Method::planted;
    return from_hits(method, threshold, hits, samples, std::pow(p, static_cast<double>(size)));
}

std::size_t conditioned_size(std::size_t n, double p, double eps) {
    require_prob(p);
    require(eps >= 0.0, "eps must be nonnegative");
    const double m = std::ceil((1.0 + eps) * static_cast<double>(n) * p);
    require(m <= static_cast<double>(n), "conditioned size (1+eps)Np exceeds N");
    return static_cast<std::size_t>(m);
}

TailEstimate conditioned_tail(const Hypergraph& h, double p, double threshold, double eps,
                              std::uint64_t samples, std::uint64_t seed, std::size_t workers) {
    require(samples >= 1, "need at least one sample");
    const std::size_t n = h.num_vertices();
    const std::size_t m = conditioned_size(n, p, eps);
    const std::uint64_t hits = count_hits(samples, seed, workers, [&](CounterRng& rng) {
        const VertexSet s = sample_vm(h, m, rng);
        const std::size_t x = h.has_masks() ? induced_edge_count(h, mask_of(s)) : induced_edge_count_filtered(h, s);
        return static_cast<double>(x) >= threshold;
    });
    return from_hits(Method::conditioned, threshold, hits, samples, binomial_upper_tail(n, p, m));
}

double planted_target(double mu, double t, double p, std::size_t k) {
    require_prob(p);
    require(t >= 0.0 && mu >= 0.0, "planted_target needs mu, t >= 0");
    const double pk = std::pow(p, static_cast<double>(k));
    const double lambda = pk < 1.0 ? 4.0 / (1.0 - pk) : std::numeric_limits<double>::infinity();
    return std::ceil(std::min(lambda * t, mu + t));
}

std::optional<Witness> planted_witness(const FamilySpec* spec, const Hypergraph& h, double x) {
    if (spec != nullptr) {
        if (auto w = interval_witness(*spec, x)) return w;
    }
    return greedy_witness(h, x);
}

bool is_clean(const Hypergraph& h, std::span<const EdgeId> edge_ids) {
    VertexSet u(h.num_vertices());
    for (EdgeId e : edge_ids)
        for (Vertex v : h.edge(e)) u.insert(v);
    return induced_edge_count(h, u) == edge_ids.size();
}

namespace {

void check_clean_budget(const Hypergraph& h, std::size_t m) {
    const auto e = static_cast<double>(h.num_edges());
    if (static_cast<double>(m) > e) return;
    if (log_choose(e, static_cast<double>(m)) > std::log(kCleanConfigBudget) + 1e-9)
        throw CapacityError("clean configuration enumeration exceeds C(e(H), m) <= 10^7");
}

// Calls fn(ids, union) for every clean m-configuration.
template <class Fn>
void for_each_clean(const Hypergraph& h, std::size_t m, bool vertex_disjoint, Fn fn) {
    check_clean_budget(h, m);
    const std::size_t e = h.num_edges();
    if (m > e) return;
    std::vector<EdgeId> ids(m);
    const std::size_t n = h.num_vertices();
    auto rec = [&](auto&& self, std::size_t depth, EdgeId start, const VertexSet& uni) -> void {
        if (depth == m) {
            if (induced_edge_count(h, uni) == m) fn(std::span<const EdgeId>(ids), uni);
            return;
        }
        for (EdgeId f = start; f + (m - depth) <= e; ++f) {
            VertexSet next = uni;
            bool clash = false;
            for (Vertex v : h.edge(f)) {
                if (vertex_disjoint && next.contains(v)) clash = true;
                next.insert(v);
            }
            if (clash) continue;
            ids[depth] = f;
            self(self, depth + 1, f + 1, next);
        }
    };
    rec(rec, 0, 0, VertexSet(n));
}

// c ln(q) and c ln(1-q), with 0 when c = 0.
double scaled_log(std::size_t c, double q) { return c == 0 ? 0.0 : static_cast<double>(c) * std::log(q); }
double scaled_log1m(std::size_t c, double q) { return c == 0 ? 0.0 : static_cast<double>(c) * std::log1p(-q); }

double exact_clean_mass(const Hypergraph& h, double p, std::size_t m, bool vertex_disjoint) {
    const std::size_t n = h.num_vertices();
    const auto by_top = edges_by_top_vertex(h);
    std::vector<std::uint64_t> cnt(n + 1, 0);
    auto walk = [&](auto&& self, std::size_t v, std::uint32_t mask, std::uint32_t covered, std::size_t x,
                    std::size_t size) -> void {
        if (v == n) {
            if (x == m) ++cnt[size];
            return;
        }
        self(self, v + 1, mask, covered, x, size);
        const std::uint32_t with = mask | (1U << v);
        std::size_t add = x;
        std::uint32_t cov = covered;
        for (auto em : by_top[v]) {
            if ((em & with) != em) continue;
            if (vertex_disjoint && (cov & em) != 0) return;
            cov |= em;
            if (++add > m) return;
        }
        self(self, v + 1, with, cov, add, size + 1);
    };
    walk(walk, 0, 0, 0, 0, 0);
    Neumaier acc;
    for (std::size_t s = 0; s <= n; ++s)
        if (cnt[s] != 0)
            acc.add(static_cast<double>(cnt[s]) * std::pow(p, static_cast<double>(s)) *
                    std::pow(1.0 - p, static_cast<double>(n - s)));
    return acc.value();
}

}  // namespace

std::vector<CleanConfig> enumerate_clean_configs(const Hypergraph& h, std::size_t m) {
    std::vector<CleanConfig> out;
    for_each_clean(h, m, false, [&](std::span<const EdgeId> ids, const VertexSet&) {
        out.push_back(CleanConfig{std::vector<EdgeId>(ids.begin(), ids.end())});
    });
    return out;
}

std::size_t count_clean_configs(const Hypergraph& h, std::size_t m) {
    std::size_t count = 0;
    for_each_clean(h, m, false, [&](std::span<const EdgeId>, const VertexSet&) { ++count; });
    return count;
}

double clean_config_harris_lower(const Hypergraph& h, double p, std::size_t m, bool vertex_disjoint) {
    require_prob(p);
    const std::size_t k = h.k();
    const double dk = static_cast<double>(k);
    Neumaier acc;
    std::vector<char> chosen(h.num_edges(), 0);
    for_each_clean(h, m, vertex_disjoint, [&](std::span<const EdgeId> ids, const VertexSet& uni) {
        for (EdgeId e : ids) chosen[e] = 1;
        std::size_t f0 = 0, f1 = 0, f2 = 0;
        for (EdgeId g = 0; g < h.num_edges(); ++g) {
            if (chosen[g]) continue;
            std::size_t meet = 0;
            for (Vertex v : h.edge(g)) meet += uni.contains(v);
            if (meet == 0)
                ++f0;
            else if (meet == 1)
                ++f1;
            else
                ++f2;
        }
        for (EdgeId e : ids) chosen[e] = 0;
        const double log_term = scaled_log(uni.count(), p) + scaled_log1m(f0, std::pow(p, dk)) +
                                scaled_log1m(f1, std::pow(p, dk - 1.0)) + scaled_log1m(f2, p);
        acc.add(std::exp(log_term));
    });
    return acc.value();
}

double clean_config_point_lower(const Hypergraph& h, double p, std::size_t m, bool vertex_disjoint) {
    require_prob(p);
    check_clean_budget(h, m);
    if (h.num_vertices() <= kExactMaxVertices) return exact_clean_mass(h, p, m, vertex_disjoint);
    return clean_config_harris_lower(h, p, m, vertex_disjoint);
}

}  // namespace uptail
