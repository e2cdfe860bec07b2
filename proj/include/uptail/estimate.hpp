#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uptail/families.hpp"
#include "uptail/hypergraph.hpp"

namespace uptail {

enum class Method { exact, mc, planted, conditioned };
std::string to_string(Method m);
Method parse_method(const std::string& name);

/// Estimate of Pr(X >= threshold) for X = e(H_p).
struct TailEstimate {
    double threshold = 0.0;
    double p_hat = 0.0;
    Method method = Method::exact;
    std::uint64_t samples = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

/// Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ99);

inline constexpr std::size_t kExactMaxVertices = 26;

/// Number of vertex subsets S with e(H[S]) = x and |S| = s, for every (x, s).
/// Independent of p, so one enumeration serves a whole p-grid.
class ExactCounts {
public:
    ExactCounts(std::size_t n, std::size_t max_x, std::vector<std::uint64_t> counts);

    std::size_t num_vertices() const { return n_; }
    std::size_t max_x() const { return max_x_; }
    std::uint64_t count(std::size_t x, std::size_t s) const { return counts_[x * (n_ + 1) + s]; }

    /// Pr(X = x).
    double pmf(double p, std::size_t x) const;
    /// Pr(X = x) for x = 0..max_x.
    std::vector<double> distribution(double p) const;
    /// Pr(X >= threshold), compensated summation.
    double tail(double p, double threshold) const;

private:
    std::size_t n_;
    std::size_t max_x_;
    std::vector<std::uint64_t> counts_;
};

/// Enumerates all 2^N vertex subsets (N <= 26, else CapacityError). With
/// several workers the subsets are split by a prefix of vertex decisions;
/// counts are integers, so the result is identical for every worker count.
ExactCounts exact_counts(const Hypergraph& h, std::size_t workers = 1);

TailEstimate exact_tail(const Hypergraph& h, double p, double threshold, std::size_t workers = 1);

/// Plain Monte Carlo. Sample i draws from CounterRng(seed, i).
TailEstimate mc_tail(const Hypergraph& h, double p, double threshold, std::uint64_t samples, std::uint64_t seed,
                     std::size_t workers = 1);

/// p^{|W|} Pr(X >= threshold | W inside V_p), a lower bound on the tail.
/// Samples use the same streams as mc_tail, with W forced in afterwards.
TailEstimate planted_tail(const Hypergraph& h, double p, double threshold, const VertexSet& w,
                          std::uint64_t samples, std::uint64_t seed, std::size_t workers = 1);

/// m = ceil((1+eps) N p); Pr_m(X >= threshold) estimated from uniform
/// m-subsets, times the exact Pr(Bin(N,p) >= m). A lower bound on the tail.
TailEstimate conditioned_tail(const Hypergraph& h, double p, double threshold, double eps,
                              std::uint64_t samples, std::uint64_t seed, std::size_t workers = 1);
std::size_t conditioned_size(std::size_t n, double p, double eps);

/// Default number of edges a planted witness should induce:
/// ceil(min{lambda t, mu + t}) with lambda = 4 / (1 - p^k).
double planted_target(double mu, double t, double p, std::size_t k);
/// Interval witness for families, greedy witness otherwise.
std::optional<Witness> planted_witness(const FamilySpec* spec, const Hypergraph& h, double x);

/// An m-set of edges whose vertex union induces no other edge.
struct CleanConfig {
    std::vector<EdgeId> edge_ids;
};

inline constexpr double kCleanConfigBudget = 1e7;

/// All clean m-configurations in lexicographic order of edge ids. Throws
/// CapacityError when C(e(H), m) exceeds 10^7.
std::vector<CleanConfig> enumerate_clean_configs(const Hypergraph& h, std::size_t m);
std::size_t count_clean_configs(const Hypergraph& h, std::size_t m);
bool is_clean(const Hypergraph& h, std::span<const EdgeId> edge_ids);

/// Lower bound on Pr(X = m) from clean configurations (optionally only those
/// with pairwise vertex-disjoint edges). For N <= 26 each configuration's
/// probability Pr(H_p = I) is computed exactly; beyond that the Harris product
/// p^{|U|} (1-p^k)^{|F0|} (1-p^{k-1})^{|F1|} (1-p)^{|F2|} is used.
double clean_config_point_lower(const Hypergraph& h, double p, std::size_t m, bool vertex_disjoint = true);
/// The Harris-product form regardless of N.
double clean_config_harris_lower(const Hypergraph& h, double p, std::size_t m, bool vertex_disjoint = true);

}  // namespace uptail
