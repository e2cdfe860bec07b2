#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "uptail/hypergraph.hpp"

namespace uptail {

/// Chernoff rate function (1+x)ln(1+x) - x, accurate for tiny x.
double phi(double x);

double exact_mean(const Hypergraph& h, double p);
/// Exact Var e(H_p), summing p^{|e∪f|} - p^{2k} over ordered intersecting pairs.
double exact_variance(const Hypergraph& h, double p);

/// Number of ordered edge pairs (e, f) with |e ∩ f| = i, for i = 0..k
/// (index 0 counts disjoint pairs).
std::vector<std::size_t> intersection_profile(const Hypergraph& h);

struct MomentReport {
    double mu = 0.0;
    double var = 0.0;
    double lambda = 0.0;
};

/// mu, exact variance and Lambda = mu (1 + n p^{k-1}); n is the ground-set
/// parameter of the family (pass h.num_vertices() for generic H).
MomentReport moments(const Hypergraph& h, double p, std::size_t n);

using NamedValues = std::vector<std::pair<std::string, double>>;

/// A closed-form bound evaluated in natural-log space.
struct BoundReport {
    std::string tag;
    double log_value = 0.0;
    NamedValues inputs;
    /// Alternative (weaker or refined) forms of the same bound, log-scale.
    NamedValues forms;

    double form(const std::string& name) const;
};

/// Pr(Z_C >= mu + t) <= exp(-phi(t/mu) mu / C), with both weaker forms.
BoundReport theorem_c_bound(double mu, double c, double t);
/// Pr(Z_C >= xC) <= (mu/C)^x / x!, with the Stirling form.
BoundReport et_bound(double mu, double c, long x);

/// min{mu, sqrt(mu) ln(1/p)}.
double exponent_appp(double mu, double p);
/// min{phi(eps) mu^2 / var, sqrt(eps mu) ln(1/p)}.
double exponent_ap(double mu, double var, double p, double eps);
/// min{t^2 / var, sqrt(t) ln(1/p)}.
double exponent_apt(double var, double p, double t);

enum class LogForm { e_over_p, one_over_p };
double log_factor(double p, LogForm form);

/// min{phi(t/mu) mu^2 / lambda, sqrt(t) ln(e/p)}; with use_remark the first
/// term is t^2 / lambda. The lower-bound variant uses ln(1/p).
double exponent_hg(double mu, double lambda, double p, double t, bool use_remark,
                   LogForm form = LogForm::e_over_p);
/// min{mu, sqrt(mu) log-factor}: the exponent for relative deviations.
double exponent_hgp(double mu, double p, LogForm form);

/// exp(-c(eps) min{mu, sqrt(mu) ln(e/p)}) with c(eps) = b min{eps^3, eps^{1/2}}.
BoundReport hgp_upper_bound(double mu, double p, double eps, double b = 1.0);
/// exp(-C(eps) min{mu, sqrt(mu) ln(1/p)}) with C(eps) = B max{1, eps^2}.
BoundReport hgp_lower_bound(double mu, double p, double eps, double big_b = 1.0);
/// (1 + 1/n) exp(-c min{phi(t/mu) mu^2/Lambda, sqrt(t) ln(e/p)}).
BoundReport hg_upper_bound(double mu, double lambda, double p, double t, std::size_t n, double c = 1.0);
/// d exp(-C min{phi(t/mu) mu^2/Lambda, sqrt(t) ln(1/p)}).
BoundReport hg_lower_bound(double mu, double lambda, double p, double t, double big_c = 1.0, double d = 1.0);

/// Planted-cluster lower bound exp(-D sqrt(mu+t) ln(1/p)).
BoundReport lb_cluster_bound(double d, double mu, double t, double p);
/// e^{-b} C(N,m) q^m (1-q)^{N-m}, with the Stirling-refined lower forms
/// (available when m >= Nq and 1 <= m < N).
BoundReport binomial_point_lower(std::size_t n, double q, std::size_t m, double b);
/// t^2 / (var + t^2).
double paley_zygmund_lower(double var, double t);
/// E e(H[V_m]) = e(H) prod_{i<k} (m-i)/(N-i).
double hypergeom_conditional_mean(const Hypergraph& h, std::size_t m);

/// Pr(X_r >= mu + t/2) <= exp(-phi(t/mu) mu / (4kr)) <= exp(-min{t, t^2/mu}/(12kr)).
BoundReport xr_tail_bound(double mu, std::size_t k, double r, double t);
/// Pr(M_r >= y) <= Phi_r^{ceil y} / ceil(y)!, with the Stirling form.
BoundReport star_matching_tail_bound(double phi_r, double y);
/// Pr(M_x >= y) <= (n^2 max{y,1}^{3/2})^{-1} (n p^{k-1} / (e x))^{xy/(2kD)}.
BoundReport mrh_bound(std::size_t n, double p, std::size_t k, double d, double x, double y);
/// (B n p^{k-1} / r)^r <= n^{-8kD}, evaluated in log space.
bool t_condition_holds(double big_b, std::size_t n, double p, std::size_t k, double r, double d);
/// Pr(not T) <= (1/n) exp(-(min{a,beta}/(2kD)) min{phi(t/mu) mu^2/Lambda, sqrt(t) s}).
BoundReport cascade_failure_bound(std::size_t n, double a, double beta, std::size_t k, double d,
                                  double mu, double lambda, double t, double s);

/// ln C(n, m) via lgamma.
double log_choose(double n, double m);
/// Exact Pr(Bin(n, q) >= m), summing log-space point masses.
double binomial_upper_tail(std::size_t n, double q, std::size_t m);
/// Exact Pr(Bin(n, q) = m).
double binomial_pmf(std::size_t n, double q, std::size_t m);

}  // namespace uptail
