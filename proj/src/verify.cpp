#include "uptail/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "uptail/bounds.hpp"
#include "uptail/decompose.hpp"
#include "uptail/disjointness.hpp"
#include "uptail/errors.hpp"
#include "uptail/estimate.hpp"
#include "uptail/families.hpp"

namespace uptail {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::size_t scaled(double base, const VerifyOptions& o) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(base * o.scale)));
}

bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

// Small family instances with at most max_n vertices.
std::vector<FamilySpec> small_families(std::size_t max_n) {
    std::vector<FamilySpec> out;
    for (std::size_t n = 3; n <= max_n; ++n) {
        out.push_back(FamilySpec::ap(n, 3));
        if (n >= 4) out.push_back(FamilySpec::ap(n, 4));
        out.push_back(FamilySpec::schur(n));
        for (std::size_t ell = 1; ell <= 3; ++ell) out.push_back(FamilySpec::ell_sum(n, ell));
    }
    return out;
}

VertexSet mask_set(std::size_t n, std::uint64_t mask) { return VertexSet::from_mask(n, mask); }

}  // namespace

void SuiteResult::check(bool cond, const std::string& what) {
    ++checks;
    if (cond) return;
    ++failures;
    if (messages.size() < 10) messages.push_back(what);
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"phi", "variance", "sandwich", "bk", "cascade", "lowerbounds"};
    return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opts) {
    if (name == "phi") return verify_phi(opts);
    if (name == "variance") return verify_variance(opts);
    if (name == "sandwich") return verify_sandwich(opts);
    if (name == "bk") return verify_bk(opts);
    if (name == "cascade") return verify_cascade(opts);
    if (name == "lowerbounds") return verify_lowerbounds(opts);
    throw ContractViolation("unknown verify suite: " + name);
}

SuiteResult verify_phi(const VerifyOptions&) {
    SuiteResult res;
    res.name = "phi";
    constexpr std::size_t points = 10000;
    // Right-hand sides are evaluated in extended precision and rounded once, so
    // a correctly rounded phi satisfies each inequality exactly.
    const long double e2 = std::exp(2.0L);
    for (std::size_t i = 0; i < points; ++i) {
        const double x = std::pow(10.0, -8.0 + 12.0 * static_cast<double>(i) / (points - 1));
        const long double y = x;
        const double f = phi(x);
        auto rounded = [](long double v) { return static_cast<double>(v); };
        res.check(f >= rounded(y * y / (2.0L + 2.0L * y / 3.0L)), fmt("phi(x) >= x^2/(2+2x/3) fails at x=%.17g", x));
        res.check(phi(x / 2.0) >= f / 4.0, fmt("phi(x/2) >= phi(x)/4 fails at x=%.17g", x));
        res.check(f <= rounded(y * y), fmt("phi(x) <= x^2 fails at x=%.17g", x));
        res.check(f >= rounded(std::min(y, y * y) / 3.0L), fmt("phi(x) >= min{x,x^2}/3 fails at x=%.17g", x));
        if (y >= e2) res.check(f >= rounded(y * std::log(y) / 2.0L), fmt("phi(x) >= x ln(x)/2 fails at x=%.17g", x));
    }
    for (double mu : {0.0, 0.01, 0.5, 1.0, 7.0, 100.0, 1e4})
        for (double c : {0.25, 1.0, 3.0})
            for (double t : {1e-3, 0.5, 1.0, 3.0, 40.0, 1e3}) {
                try {
                    auto r = theorem_c_bound(mu, c, t);
                    res.check(r.log_value <= 0.0, fmt("theorem_c_bound positive at mu=%.17g t=%.17g", mu, t));
                } catch (const std::logic_error& e) {
                    res.check(false, e.what());
                }
            }
    for (double mu : {0.1, 1.0, 10.0, 1000.0})
        for (double t : {0.01, 1.0, 10.0, 1e4})
            for (double p : {0.01, 0.3, 1.0}) {
                const double lambda = mu * 1.5;
                res.check(exponent_hg(mu, lambda, p, t, false) <= exponent_hg(mu, lambda, p, t, true),
                          fmt("phi(t/mu) mu^2 > t^2 at mu=%.17g t=%.17g", mu, t));
            }
    return res;
}

SuiteResult verify_variance(const VerifyOptions& opts) {
    SuiteResult res;
    res.name = "variance";
    for (const auto& spec : small_families(16)) {
        const auto h = build(spec);
        const auto counts = exact_counts(h, opts.workers);
        for (int i = 0; i <= 10; ++i) {
            const double p = i / 10.0;
            const auto dist = counts.distribution(p);
            const double mu = exact_mean(h, p);
            double var = 0.0, mean = 0.0;
            for (std::size_t x = 0; x < dist.size(); ++x) {
                mean += static_cast<double>(x) * dist[x];
                var += (static_cast<double>(x) - mu) * (static_cast<double>(x) - mu) * dist[x];
            }
            const double exact = exact_variance(h, p);
            res.check(rel_close(exact, var, 1e-10),
                      fmt("variance mismatch: formula %.17g vs enumeration %.17g (p=%.17g)", exact, var, p));
            res.check(rel_close(mean, mu, 1e-10), fmt("mean mismatch %.17g vs %.17g", mean, mu));
        }
    }
    for (std::size_t n = 50; n <= 200; n += 10) {
        const auto h = build_ap(n, 3);
        for (double p = 0.05; p <= 0.5 + 1e-9; p += 0.05) {
            const auto m = moments(h, p, n);
            const double ratio = m.var / ((1.0 - p) * m.lambda);
            res.check(ratio >= kApVarianceRatioLow && ratio <= kApVarianceRatioHigh,
                      fmt("AP variance ratio %.17g outside frozen bracket (n=%.17g p=%.17g)", ratio,
                          static_cast<double>(n), p));
        }
    }
    return res;
}

SuiteResult verify_sandwich(const VerifyOptions& opts) {
    SuiteResult res;
    res.name = "sandwich";
    const std::size_t samples = scaled(2000, opts);
    const double rs[] = {1.0, 2.0, 3.0, 5.0};
    for (std::size_t i = 0; i < samples; ++i) {
        CounterRng rng(opts.seed, 0x5a00000 + i);
        const std::size_t n = 5 + rng.below(36);
        const auto h = build_ap(n, 3);
        const double p = 0.2 + 0.7 * rng.uniform01();
        const double r = rs[rng.below(4)];
        const auto s = sample_vp(h, p, rng);
        const std::size_t x = induced_edge_count(h, s);
        const auto pr = degree_prune(h, s, r);
        const std::size_t delta = pr.max_degree_before;
        const double slack = static_cast<double>(delta) > r
                                 ? static_cast<double>(h.k() * star_size(r) * pr.matching.size() * delta)
                                 : 0.0;
        std::size_t xr = pr.kept.size();
        if (x <= kXrEdgeBudget) {
            xr = xr_exact(h, s, r);
            res.check(pr.kept.size() <= xr, "pruned edge set larger than X_r");
        }
        res.check(xr <= x, "X_r exceeds X");
        res.check(static_cast<double>(x) <= static_cast<double>(xr) + slack,
                  fmt("X <= X_r + k ceil(r) M Delta fails (n=%.17g r=%.17g)", static_cast<double>(n), r));
    }
    const std::vector<Hypergraph> graphs{build_ap(12, 3), build_schur(12), build_ell_sum(12, 2)};
    for (const auto& h : graphs) {
        const std::size_t n = h.num_vertices();
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            const auto s = mask_set(n, mask);
            const auto edges = induced_edges(h, s);
            const std::size_t delta = max_degree_of(h, edges);
            for (double z : {1.0, 2.0, 3.0}) {
                const bool lhs = delta >= star_size(z);
                const bool rhs = mr_exact_edges(h, edges, z) >= 1;
                res.check(lhs == rhs, fmt("Delta_1 >= ceil(z) <=> M_z >= 1 fails (mask=%.17g z=%.17g)",
                                          static_cast<double>(mask), z));
            }
        }
    }
    return res;
}

SuiteResult verify_bk(const VerifyOptions& opts) {
    SuiteResult res;
    res.name = "bk";
    constexpr std::size_t m = 8;
    const std::vector<double> uniform(m, 0.5), low(m, 0.2);
    std::vector<double> mixed(m);
    CounterRng prng(opts.seed, 0xb0000);
    for (auto& q : mixed) q = 0.05 + 0.9 * prng.uniform01();
    const std::size_t pairs = scaled(200, opts);
    for (std::size_t i = 0; i < pairs; ++i) {
        CounterRng rng(opts.seed, 0xb1000 + i);
        EventTable a, b;
        if (i % 2 == 0) {
            a = EventTable::random_increasing(m, 1 + rng.below(4), rng);
            b = EventTable::random_increasing(m, 1 + rng.below(4), rng);
        } else {
            a = EventTable::random(m, 0.3 + 0.6 * rng.uniform01(), rng);
            b = EventTable::random(m, 0.3 + 0.6 * rng.uniform01(), rng);
        }
        const EventTable ab = box(a, b);
        EventTable both(m);
        for (Outcome w = 0; w < (1U << m); ++w) both.set(w, a.contains(w) && b.contains(w));
        res.check(ab.subset_of(both), "box(A,B) not inside A and B");
        const std::vector<double>* measures[] = {&uniform, &low, &mixed};
        for (const auto* probs : measures) {
            try {
                bk_check(a, b, *probs);
                res.check(true, "");
            } catch (const std::logic_error& e) {
                res.check(false, e.what());
            }
        }
        EventTable a2 = a;
        for (Outcome w = 0; w < (1U << m); ++w)
            if (rng.uniform01() < 0.2) a2.set(w, true);
        res.check(ab.subset_of(box(a2, b)), "box not monotone");
        res.check(box(a, EventTable::full(m)) == a, "A box Omega != A");
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto ci = EventTable::coordinate(m, i);
        res.check(box(ci, ci).count() == 0, "box(A,A) nonempty for a single-coordinate A");
        const auto cj = EventTable::coordinate(m, (i + 1) % m);
        const auto both = EventTable::from_predicate(m, [&](Outcome w) { return ((w >> i) & 1U) && ((w >> ((i + 1) % m)) & 1U); });
        res.check(box(ci, cj) == both, "box of two coordinates is not their intersection");
    }
    const std::size_t instances = scaled(300, opts);
    for (std::size_t i = 0; i < instances; ++i) {
        CounterRng rng(opts.seed, 0xb2000 + i);
        const std::size_t n = 5 + rng.below(6);
        std::vector<std::vector<Vertex>> edges;
        const std::size_t want = 2 + rng.below(2 * n);
        for (std::size_t t = 0; t < want * 3 && edges.size() < want; ++t) {
            std::vector<Vertex> e{static_cast<Vertex>(rng.below(n)), static_cast<Vertex>(rng.below(n)),
                                  static_cast<Vertex>(rng.below(n))};
            std::sort(e.begin(), e.end());
            if (std::adjacent_find(e.begin(), e.end()) != e.end()) continue;
            if (std::find(edges.begin(), edges.end(), e) != edges.end()) continue;
            edges.push_back(e);
        }
        const Hypergraph h(3, n, edges);
        const auto s = sample_vp(h, 0.5 + 0.5 * rng.uniform01(), rng);
        const double r = 1.0 + static_cast<double>(rng.below(2));
        const auto out = mr_le_z_check(h, s, r);
        res.check(out.holds(), fmt("M_r > Z (M_r=%.17g Z=%.17g)", static_cast<double>(out.mr), static_cast<double>(out.z)));
    }
    return res;
}

SuiteResult verify_cascade(const VerifyOptions& opts) {
    SuiteResult res;
    res.name = "cascade";
    // Star-matching tail against the degree-tail sum.
    const std::vector<Hypergraph> small{build_ap(12, 3), build_schur(12), build_ap(10, 4)};
    for (const auto& h : small) {
        const std::size_t n = h.num_vertices();
        for (double r : {1.0, 2.0, 3.0}) {
            std::vector<std::vector<std::uint64_t>> by_size(n + 1);
            for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
                const std::size_t mr = mr_exact(h, mask_set(n, mask), r);
                auto& row = by_size[static_cast<std::size_t>(std::popcount(mask))];
                if (row.size() <= mr) row.resize(mr + 1, 0);
                ++row[mr];
            }
            for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const double phi_r = degree_tail_sum(h, p, r);
                for (double y : {1.0, 2.0, 3.0}) {
                    double prob = 0.0;
                    for (std::size_t sz = 0; sz <= n; ++sz)
                        for (std::size_t mr = 0; mr < by_size[sz].size(); ++mr)
                            if (static_cast<double>(mr) >= y)
                                prob += static_cast<double>(by_size[sz][mr]) * std::pow(p, static_cast<double>(sz)) *
                                        std::pow(1.0 - p, static_cast<double>(n - sz));
                    const double bound = std::exp(star_matching_tail_bound(phi_r, y).form("raw"));
                    res.check(prob <= bound * (1.0 + 1e-12),
                              fmt("Pr(M_r >= y) = %.17g exceeds Phi_r^y/y! = %.17g (y=%.17g)", prob, bound, y));
                }
            }
        }
    }
    // Truncated-hypergraph tail: X_r (or X where X_r is out of budget, which
    // only over-estimates) against exp(-phi(t/mu) mu / (4kr)).
    for (const auto& h : {build_ap(12, 3), build_schur(12)}) {
        const std::size_t n = h.num_vertices();
        for (double r : {1.0, 2.0, 3.0}) {
            std::vector<std::pair<std::size_t, std::size_t>> values;  // (X_r proxy, |S|)
            for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
                const auto s = mask_set(n, mask);
                const auto edges = induced_edges(h, s);
                const std::size_t xr = edges.size() <= kXrEdgeBudget ? xr_exact_edges(h, edges, r) : edges.size();
                values.emplace_back(xr, static_cast<std::size_t>(std::popcount(mask)));
            }
            for (double p : {0.2, 0.4, 0.6}) {
                const double mu = exact_mean(h, p);
                for (double t : {0.5 * mu, mu, 2.0 * mu, 4.0 * mu}) {
                    if (t <= 0.0) continue;
                    double prob = 0.0;
                    for (auto [xr, sz] : values)
                        if (static_cast<double>(xr) >= mu + t / 2.0)
                            prob += std::pow(p, static_cast<double>(sz)) * std::pow(1.0 - p, static_cast<double>(n - sz));
                    const double bound = std::exp(xr_tail_bound(mu, h.k(), r, t).log_value);
                    res.check(prob <= bound * (1.0 + 1e-12),
                              fmt("Pr(X_r >= mu+t/2) = %.17g exceeds %.17g (t=%.17g)", prob, bound, t));
                }
            }
        }
    }
    // Codegree-based star-matching bound under its technical condition.
    {
        const std::size_t n = 12;
        const auto h = build_ap(n, 3);
        const double k = 3.0;
        const double d = std::max<double>(static_cast<double>(delta_j(h, 2)), 1.0);
        const double big_b = std::exp(3.0) * std::pow(d, 4) * (k * d) * (k * d);
        for (double p : {1e-5, 1e-4}) {
            for (double r = 1.0; r <= 64.0; r *= 2.0) {
                if (!t_condition_holds(big_b, n, p, 3, r, d)) continue;
                for (double x : {r, 2.0 * r})
                    for (double y : {0.5, 1.0, 2.0}) {
                        double prob = 0.0;
                        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
                            const auto s = mask_set(n, mask);
                            if (static_cast<double>(max_degree_of(h, induced_edges(h, s))) < std::ceil(x)) continue;
                            if (static_cast<double>(mr_exact(h, s, x)) < y) continue;
                            const double sz = std::popcount(mask);
                            prob += std::pow(p, sz) * std::pow(1.0 - p, static_cast<double>(n) - sz);
                        }
                        const double bound = std::exp(mrh_bound(n, p, 3, d, x, y).log_value);
                        res.check(prob <= bound, fmt("Pr(M_x >= y) = %.17g exceeds codegree bound %.17g", prob, bound));
                    }
            }
        }
    }
    // Pruning accounting and the cascade conclusion X <= X_r + t/2.
    const std::size_t samples = scaled(400, opts);
    for (std::size_t i = 0; i < samples; ++i) {
        CounterRng rng(opts.seed, 0xc0000 + i);
        const std::size_t n = 6 + rng.below(15);
        const auto h = build_ap(n, 3);
        CascadeParams cp;
        cp.p = 0.3 + 0.6 * rng.uniform01();
        cp.beta = 1.0 / (32.0 * 3.0);
        cp.gamma = 0.125;
        cp.r = 1.0 + static_cast<double>(rng.below(6));
        cp.t = std::pow(2.0, -1.0 + 12.0 * rng.uniform01());
        const auto s = sample_vp(h, cp.p, rng);
        const std::size_t x = induced_edge_count(h, s);
        const auto cr = cascade_prune(h, s, cp);
        const double removed = static_cast<double>(x - cr.g0.size());
        res.check(removed <= cr.removal_bound(h.k()), "cascade removal exceeds its accounting bound");
        const bool dyadic = std::all_of(cr.levels.begin(), cr.levels.end(),
                                        [](const CascadeLevel& lv) { return static_cast<double>(lv.degree_above) <= 2.0 * lv.r_j; });
        if (dyadic) res.check(removed <= cr.dyadic_removal_bound(h.k()), "cascade removal exceeds sum m_j 4k r_j^2");
        res.check(static_cast<double>(max_degree_of(h, cr.g0)) <= std::floor(cp.r), "cascade output degree exceeds r");
        const auto check = check_cascade_event(h, s, cp);
        if (check.verdict == Verdict::holds && x <= kXrEdgeBudget) {
            const std::size_t xr = xr_exact(h, s, cp.r);
            res.check(static_cast<double>(x) <= static_cast<double>(xr) + cp.t / 2.0,
                      fmt("cascade event holds but X > X_r + t/2 (t=%.17g r=%.17g)", cp.t, cp.r));
        }
    }
    return res;
}

SuiteResult verify_lowerbounds(const VerifyOptions& opts) {
    SuiteResult res;
    res.name = "lowerbounds";
    const std::size_t samples = scaled(20000, opts);
    std::size_t idx = 0;
    for (const auto& spec : {FamilySpec::ap(12, 3), FamilySpec::ap(14, 3), FamilySpec::schur(13),
                             FamilySpec::ell_sum(12, 2), FamilySpec::ap(12, 4)}) {
        const auto h = build(spec);
        const auto counts = exact_counts(h, opts.workers);
        for (double p : {0.2, 0.3, 0.5}) {
            const double mu = exact_mean(h, p);
            for (double t : {1.0, 2.0, 3.0}) {
                const double threshold = mu + t;
                const double exact = counts.tail(p, threshold);
                const auto target = planted_target(mu, t, p, h.k());
                if (auto w = planted_witness(&spec, h, target)) {
                    const auto est = planted_tail(h, p, threshold, w->w, samples, opts.seed + idx, opts.workers);
                    res.check(est.p_hat <= exact + 1e-12,
                              fmt("planted %.17g exceeds exact %.17g (t=%.17g)", est.p_hat, exact, t));
                }
                const double eps = t / mu;
                if (std::ceil((1.0 + eps) * static_cast<double>(h.num_vertices()) * p) <= static_cast<double>(h.num_vertices())) {
                    const auto est = conditioned_tail(h, p, threshold, eps, samples, opts.seed + idx, opts.workers);
                    res.check(est.p_hat <= exact + 1e-12,
                              fmt("conditioned %.17g exceeds exact %.17g (t=%.17g)", est.p_hat, exact, t));
                }
                if (auto w = interval_witness(spec, threshold)) {
                    const double d = static_cast<double>(w->w.count()) / std::sqrt(threshold);
                    const double lb = std::exp(lb_cluster_bound(d, mu, t, p).log_value);
                    res.check(lb <= exact * (1.0 + 1e-12), fmt("cluster bound %.17g exceeds exact %.17g", lb, exact));
                }
                ++idx;
            }
            for (std::size_t m = 0; m <= 3; ++m) {
                const double point = counts.pmf(p, m);
                const double clean = clean_config_point_lower(h, p, m);
                const double harris = clean_config_harris_lower(h, p, m);
                res.check(clean <= point * (1.0 + 1e-12) + 1e-300, fmt("clean-config bound %.17g exceeds Pr(X=m) %.17g", clean, point));
                res.check(harris <= clean * (1.0 + 1e-12) + 1e-300, "Harris product exceeds exact configuration mass");
                if (clean > 0.0) {
                    const double binom = binomial_pmf(h.num_edges(), std::pow(p, static_cast<double>(h.k())), m);
                    const double b = std::max(0.0, std::log(binom / clean));
                    const double chained = std::exp(binomial_point_lower(h.num_edges(), std::pow(p, static_cast<double>(h.k())), m, b).log_value);
                    res.check(chained <= clean * (1.0 + 1e-9), "e^{-b} binomial point mass exceeds the clean bound");
                }
            }
        }
        const std::size_t n = h.num_vertices();
        std::vector<double> total(n + 1, 0.0), ways(n + 1, 0.0);
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            const auto c = static_cast<std::size_t>(std::popcount(mask));
            total[c] += static_cast<double>(induced_edge_count(h, mask));
            ways[c] += 1.0;
        }
        for (std::size_t m = 0; m <= n; ++m)
            res.check(rel_close(hypergeom_conditional_mean(h, m), total[m] / ways[m], 1e-12), "hypergeometric mean mismatch");
    }
    for (std::size_t n = 16; n <= 24; ++n) {
        const auto h = build_ap(n, 3);
        const auto counts = exact_counts(h, opts.workers);
        for (int i = 2; i <= 10; ++i) {
            const double p = 0.05 * i;
            const double mu = exact_mean(h, p);
            const double rate = std::min(mu, std::sqrt(mu) * log_factor(p, LogForm::e_over_p));
            for (const auto& fit : kApUpperTailFit) {
                const double tail = counts.tail(p, (1.0 + fit.eps) * mu);
                if (tail < 1e-9) continue;
                res.check(std::log(tail) <= -fit.c * rate,
                          "AP(" + std::to_string(n) + ",3)" + fmt(" tail %.17g above the frozen fit at p=%.17g eps=%.17g", tail, p, fit.eps));
            }
        }
    }
    for (std::size_t n : {10, 50, 200})
        for (double q : {0.05, 0.3, 0.7})
            for (double t : {0.5, 2.0, 10.0}) {
                const double mu = static_cast<double>(n) * q;
                const double tail = binomial_upper_tail(n, q, static_cast<std::size_t>(std::ceil(mu + t)));
                res.check(tail <= std::exp(theorem_c_bound(mu, 1.0, t).log_value) * (1.0 + 1e-12),
                          fmt("binomial tail %.17g exceeds Chernoff bound (mu=%.17g t=%.17g)", tail, mu, t));
            }
    return res;
}

}  // namespace uptail
