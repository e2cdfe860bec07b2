#include "uptail/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "uptail/errors.hpp"

namespace uptail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_prob(double p) { require(p >= 0.0 && p <= 1.0, "probability must lie in [0,1]"); }

// ln of a quantity that may be zero.
double safe_log(double x) { return x > 0.0 ? std::log(x) : -kInf; }

bool le_with_slack(double a, double b) {
    if (a <= b) return true;
    return a - b <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace

double BoundReport::form(const std::string& name) const {
    for (const auto& [k, v] : forms)
        if (k == name) return v;
    throw std::out_of_range("BoundReport has no form " + name);
}

double phi(double x) {
    require(x >= 0.0, "phi needs x >= 0");
    if (std::isinf(x)) return kInf;
    if (x < 0.25) {
        // x^2 * sum_{n>=2} (-x)^(n-2) / (n (n-1)), Horner in extended precision
        const long double y = x;
        int last = 2;
        for (long double term = 1.0L; last < 80 && term > 1e-22L; ++last) term *= y;
        long double acc = 0.0L;
        for (int n = last; n >= 2; --n) acc = 1.0L / (static_cast<long double>(n) * (n - 1)) - y * acc;
        return static_cast<double>(y * y * acc);
    }
    return (1.0 + x) * std::log1p(x) - x;
}

double exact_mean(const Hypergraph& h, double p) {
    require_prob(p);
    return static_cast<double>(h.num_edges()) * std::pow(p, static_cast<double>(h.k()));
}

std::vector<std::size_t> intersection_profile(const Hypergraph& h) {
    const std::size_t k = h.k();
    const std::size_t m = h.num_edges();
    std::vector<std::size_t> profile(k + 1, 0);
    std::vector<std::uint32_t> shared(m, 0);
    std::vector<EdgeId> touched;
    std::size_t intersecting = 0;
    for (EdgeId e = 0; e < m; ++e) {
        touched.clear();
        for (Vertex v : h.edge(e)) {
            for (EdgeId f : h.incident(v)) {
                if (shared[f]++ == 0) touched.push_back(f);
            }
        }
        for (EdgeId f : touched) {
            ++profile[shared[f]];
            shared[f] = 0;
        }
        intersecting += touched.size();
    }
    profile[0] = m * m - intersecting;
    return profile;
}

double exact_variance(const Hypergraph& h, double p) {
    require_prob(p);
    if (p == 0.0 || p == 1.0) return 0.0;
    const auto profile = intersection_profile(h);
    const double lp = std::log(p);
    const double two_k = 2.0 * static_cast<double>(h.k());
    double var = 0.0;
    for (std::size_t i = 1; i < profile.size(); ++i) {
        if (profile[i] == 0) continue;
        const double di = static_cast<double>(i);
        var += static_cast<double>(profile[i]) * std::exp((two_k - di) * lp) * -std::expm1(di * lp);
    }
    return var;
}

MomentReport moments(const Hypergraph& h, double p, std::size_t n) {
    MomentReport r;
    r.mu = exact_mean(h, p);
    r.var = exact_variance(h, p);
    r.lambda = r.mu * (1.0 + static_cast<double>(n) * std::pow(p, static_cast<double>(h.k()) - 1.0));
    return r;
}

BoundReport theorem_c_bound(double mu, double c, double t) {
    require(c > 0.0 && t > 0.0 && mu >= 0.0, "theorem_c_bound needs C > 0, t > 0, mu >= 0");
    BoundReport r;
    r.tag = "chernoff_c";
    r.inputs = {{"mu", mu}, {"C", c}, {"t", t}};
    const double bernstein = -t * t / (2.0 * c * (mu + t / 3.0));
    if (mu == 0.0) {
        r.log_value = -kInf;
        r.forms = {{"bernstein", bernstein}, {"log_ratio", -kInf}};
        return r;
    }
    r.log_value = -phi(t / mu) * mu / c;
    const double log_ratio = -(t / (2.0 * c)) * std::log1p(t / (2.0 * mu));
    r.forms = {{"bernstein", bernstein}, {"log_ratio", log_ratio}};
    if (!le_with_slack(r.log_value, bernstein) || !le_with_slack(r.log_value, log_ratio))
        throw std::logic_error("theorem_c_bound: inequality chain violated");
    return r;
}

BoundReport et_bound(double mu, double c, long x) {
    require(c > 0.0 && mu >= 0.0 && x >= 1, "et_bound needs C > 0, mu >= 0, x >= 1");
    BoundReport r;
    r.tag = "erdos_tetali";
    const double dx = static_cast<double>(x);
    r.inputs = {{"mu", mu}, {"C", c}, {"x", dx}};
    const double raw = dx * safe_log(mu / c) - std::lgamma(dx + 1.0);
    const double stirling = mu == 0.0 ? -kInf
                                      : dx * std::log(std::numbers::e * mu / (dx * c)) -
                                            0.5 * std::log(2.0 * std::numbers::pi * dx);
    r.log_value = std::min(0.0, raw);
    r.forms = {{"raw", raw}, {"stirling", stirling}};
    return r;
}

double exponent_appp(double mu, double p) {
    require(p > 0.0 && p <= 1.0 && mu >= 0.0, "exponent_appp needs p in (0,1], mu >= 0");
    return std::min(mu, std::sqrt(mu) * -std::log(p));
}

double exponent_ap(double mu, double var, double p, double eps) {
    require(var > 0.0 && eps > 0.0 && p > 0.0 && p <= 1.0, "exponent_ap needs var > 0, eps > 0, p in (0,1]");
    return std::min(phi(eps) * mu * mu / var, std::sqrt(eps * mu) * -std::log(p));
}

double exponent_apt(double var, double p, double t) {
    require(var > 0.0 && t > 0.0 && p > 0.0 && p <= 1.0, "exponent_apt needs var > 0, t > 0, p in (0,1]");
    return std::min(t * t / var, std::sqrt(t) * -std::log(p));
}

double log_factor(double p, LogForm form) {
    require(p > 0.0 && p <= 1.0, "log factor needs p in (0,1]");
    return form == LogForm::e_over_p ? 1.0 - std::log(p) : -std::log(p);
}

double exponent_hg(double mu, double lambda, double p, double t, bool use_remark, LogForm form) {
    require(lambda > 0.0 && t > 0.0 && mu >= 0.0, "exponent_hg needs lambda > 0, t > 0");
    double first;
    if (use_remark)
        first = t * t / lambda;
    else
        first = mu == 0.0 ? 0.0 : phi(t / mu) * mu * mu / lambda;
    return std::min(first, std::sqrt(t) * log_factor(p, form));
}

double exponent_hgp(double mu, double p, LogForm form) {
    require(mu >= 0.0, "exponent_hgp needs mu >= 0");
    return std::min(mu, std::sqrt(mu) * log_factor(p, form));
}

BoundReport hgp_upper_bound(double mu, double p, double eps, double b) {
    require(eps > 0.0 && b > 0.0, "hgp_upper_bound needs eps > 0, b > 0");
    BoundReport r;
    r.tag = "hgp_upper";
    r.inputs = {{"mu", mu}, {"p", p}, {"eps", eps}, {"b", b}};
    const double c = b * std::min(eps * eps * eps, std::sqrt(eps));
    r.log_value = -c * exponent_hgp(mu, p, LogForm::e_over_p);
    r.forms = {{"c_eps", c}};
    return r;
}

BoundReport hgp_lower_bound(double mu, double p, double eps, double big_b) {
    require(eps > 0.0 && big_b > 0.0, "hgp_lower_bound needs eps > 0, B > 0");
    BoundReport r;
    r.tag = "hgp_lower";
    r.inputs = {{"mu", mu}, {"p", p}, {"eps", eps}, {"B", big_b}};
    const double c = big_b * std::max(1.0, eps * eps);
    r.log_value = -c * exponent_hgp(mu, p, LogForm::one_over_p);
    r.forms = {{"C_eps", c}};
    return r;
}

BoundReport hg_upper_bound(double mu, double lambda, double p, double t, std::size_t n, double c) {
    require(n >= 1 && c > 0.0, "hg_upper_bound needs n >= 1, c > 0");
    BoundReport r;
    r.tag = "hg_upper";
    r.inputs = {{"mu", mu}, {"lambda", lambda}, {"p", p}, {"t", t}, {"n", static_cast<double>(n)}, {"c", c}};
    const double raw = std::log1p(1.0 / static_cast<double>(n)) - c * exponent_hg(mu, lambda, p, t, false);
    r.log_value = std::min(0.0, raw);
    r.forms = {{"raw", raw},
               {"remark_form", std::min(0.0, std::log1p(1.0 / static_cast<double>(n)) -
                                                 c * exponent_hg(mu, lambda, p, t, true))}};
    return r;
}

BoundReport hg_lower_bound(double mu, double lambda, double p, double t, double big_c, double d) {
    require(big_c > 0.0 && d > 0.0, "hg_lower_bound needs C > 0, d > 0");
    BoundReport r;
    r.tag = "hg_lower";
    r.inputs = {{"mu", mu}, {"lambda", lambda}, {"p", p}, {"t", t}, {"C", big_c}, {"d", d}};
    r.log_value = std::log(d) - big_c * exponent_hg(mu, lambda, p, t, false, LogForm::one_over_p);
    r.forms = {{"remark_form", std::log(d) - big_c * exponent_hg(mu, lambda, p, t, true, LogForm::one_over_p)}};
    return r;
}

BoundReport lb_cluster_bound(double d, double mu, double t, double p) {
    require(p > 0.0 && p <= 1.0 && t >= 0.0 && mu + t >= 1.0, "lb_cluster_bound needs p in (0,1], t >= 0, mu+t >= 1");
    BoundReport r;
    r.tag = "lb_cluster";
    r.inputs = {{"D", d}, {"mu", mu}, {"t", t}, {"p", p}};
    r.log_value = -d * std::sqrt(mu + t) * -std::log(p);
    return r;
}

double log_choose(double n, double m) {
    return std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
}

BoundReport binomial_point_lower(std::size_t n, double q, std::size_t m, double b) {
    require(q > 0.0 && q < 1.0 && m <= n && b >= 0.0, "binomial_point_lower needs 0 < q < 1, m <= N, b >= 0");
    BoundReport r;
    r.tag = "binomial_point_lower";
    const double dn = static_cast<double>(n), dm = static_cast<double>(m);
    r.inputs = {{"N", dn}, {"q", q}, {"m", dm}, {"b", b}};
    r.log_value = -b + log_choose(dn, dm) + dm * std::log(q) + (dn - dm) * std::log1p(-q);
    if (m >= 1 && m < n) {
        const double mu = dn * q;
        const double rest = dn - dm;
        const double first = -1.0 / (12.0 * dm) - 1.0 / (12.0 * rest) -
                             0.5 * std::log(2.0 * std::numbers::pi * dm * rest / dn) - dm * std::log(dm / mu) -
                             rest * std::log(rest / (dn - mu));
        r.forms.emplace_back("stirling", first - b);
        const double j = dm - mu;
        if (j >= 0.0) {
            const double second = -1.0 / 6.0 - phi(j / mu) * mu - j * j / ((1.0 - q) * dn) -
                                  0.5 * std::log(2.0 * std::numbers::pi * dm);
            r.forms.emplace_back("stirling_phi", second - b);
        }
    }
    return r;
}

double paley_zygmund_lower(double var, double t) {
    require(t > 0.0 && var >= 0.0, "paley_zygmund_lower needs t > 0, var >= 0");
    return t * t / (var + t * t);
}

double hypergeom_conditional_mean(const Hypergraph& h, std::size_t m) {
    const std::size_t n = h.num_vertices();
    require(m <= n, "hypergeom_conditional_mean needs m <= N");
    const std::size_t k = h.k();
    if (m < k) return 0.0;
    double value = static_cast<double>(h.num_edges());
    for (std::size_t i = 0; i < k; ++i) value *= static_cast<double>(m - i) / static_cast<double>(n - i);
    return value;
}

BoundReport xr_tail_bound(double mu, std::size_t k, double r, double t) {
    require(r > 0.0 && t > 0.0 && mu >= 0.0 && k >= 1, "xr_tail_bound needs r, t > 0");
    BoundReport rep;
    rep.tag = "xr_tail";
    const double c = 4.0 * static_cast<double>(k) * r;
    rep.inputs = {{"mu", mu}, {"k", static_cast<double>(k)}, {"r", r}, {"t", t}};
    rep.log_value = mu == 0.0 ? -kInf : -phi(t / mu) * mu / c;
    const double weak = mu == 0.0 ? t : std::min(t, t * t / mu);
    rep.forms = {{"min_form", -weak / (3.0 * c)}};
    return rep;
}

BoundReport star_matching_tail_bound(double phi_r, double y) {
    require(phi_r >= 0.0 && y > 0.0, "star_matching_tail_bound needs Phi_r >= 0, y > 0");
    BoundReport r;
    r.tag = "star_matching_tail";
    const double c = std::ceil(y);
    r.inputs = {{"Phi_r", phi_r}, {"y", y}};
    const double raw = c * safe_log(phi_r) - std::lgamma(c + 1.0);
    r.log_value = std::min(0.0, raw);
    const double stirling = phi_r == 0.0 ? -kInf
                                          : -0.5 * std::log(2.0 * std::numbers::pi * c) +
                                                c * std::log(std::numbers::e * phi_r / c);
    r.forms = {{"raw", raw}, {"stirling", stirling}};
    return r;
}

BoundReport mrh_bound(std::size_t n, double p, std::size_t k, double d, double x, double y) {
    require(n >= 1 && k >= 2 && d >= 1.0 && x > 0.0 && y > 0.0, "mrh_bound: bad parameters");
    require_prob(p);
    BoundReport r;
    r.tag = "star_matching_codegree";
    const double dn = static_cast<double>(n), dk = static_cast<double>(k);
    r.inputs = {{"n", dn}, {"p", p}, {"k", dk}, {"D", d}, {"x", x}, {"y", y}};
    const double base = safe_log(dn * std::pow(p, dk - 1.0) / (std::numbers::e * x));
    r.log_value = -2.0 * std::log(dn) - 1.5 * std::log(std::max(y, 1.0)) + (x * y / (2.0 * dk * d)) * base;
    return r;
}

bool t_condition_holds(double big_b, std::size_t n, double p, std::size_t k, double r, double d) {
    require(r > 0.0 && n >= 1, "t_condition_holds needs r > 0");
    require_prob(p);
    const double dn = static_cast<double>(n), dk = static_cast<double>(k);
    const double lhs = r * safe_log(big_b * dn * std::pow(p, dk - 1.0) / r);
    return lhs <= -8.0 * dk * d * std::log(dn);
}

BoundReport cascade_failure_bound(std::size_t n, double a, double beta, std::size_t k, double d, double mu,
                                  double lambda, double t, double s) {
    require(n >= 1 && lambda > 0.0 && t > 0.0, "cascade_failure_bound: bad parameters");
    BoundReport r;
    r.tag = "cascade_failure";
    r.inputs = {{"n", static_cast<double>(n)}, {"a", a},   {"beta", beta}, {"k", static_cast<double>(k)},
                {"D", d},                      {"mu", mu}, {"lambda", lambda}, {"t", t}, {"s", s}};
    const double first = mu == 0.0 ? 0.0 : phi(t / mu) * mu * mu / lambda;
    r.log_value = -std::log(static_cast<double>(n)) -
                  (std::min(a, beta) / (2.0 * static_cast<double>(k) * d)) * std::min(first, std::sqrt(t) * s);
    return r;
}

double binomial_pmf(std::size_t n, double q, std::size_t m) {
    require_prob(q);
    if (m > n) return 0.0;
    if (q == 0.0) return m == 0 ? 1.0 : 0.0;
    if (q == 1.0) return m == n ? 1.0 : 0.0;
    const double dn = static_cast<double>(n), dm = static_cast<double>(m);
    return std::exp(log_choose(dn, dm) + dm * std::log(q) + (dn - dm) * std::log1p(-q));
}

double binomial_upper_tail(std::size_t n, double q, std::size_t m) {
    require_prob(q);
    if (m == 0) return 1.0;
    if (m > n) return 0.0;
    double sum = 0.0, comp = 0.0;
    for (std::size_t j = m; j <= n; ++j) {
        const double term = binomial_pmf(n, q, j);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::min(1.0, sum);
}

}  // namespace uptail
