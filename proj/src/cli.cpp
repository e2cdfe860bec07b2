#include "uptail/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "uptail/bounds.hpp"
#include "uptail/decompose.hpp"
#include "uptail/errors.hpp"
#include "uptail/estimate.hpp"
#include "uptail/verify.hpp"

namespace uptail {

namespace {

using json = nlohmann::ordered_json;
using Row = std::vector<std::pair<std::string, json>>;

std::string cell_text(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_number(v.get<double>());
    return v.dump();
}

class Emitter {
public:
    Emitter(OutputFormat fmt, std::ostream& os, bool header = true) : fmt_(fmt), os_(os), header_(header) {}

    void emit(const Row& row) {
        if (fmt_ == OutputFormat::json) {
            json obj = json::object();
            for (const auto& [k, v] : row) obj[k] = v;
            os_ << obj.dump() << '\n';
            return;
        }
        if (header_) {
            for (std::size_t i = 0; i < row.size(); ++i) os_ << (i ? "," : "") << row[i].first;
            os_ << '\n';
            header_ = false;
        }
        for (std::size_t i = 0; i < row.size(); ++i) os_ << (i ? "," : "") << cell_text(row[i].second);
        os_ << '\n';
    }

private:
    OutputFormat fmt_;
    std::ostream& os_;
    bool header_;
};

struct Instance {
    std::string label;
    std::size_t n = 0;
    std::size_t k = 0;
    std::optional<FamilySpec> spec;
    Hypergraph h;
};

Instance make_instance(const RunConfig& c, std::optional<std::size_t> n_override = std::nullopt) {
    Instance inst;
    if (!c.graph_path.empty()) {
        inst.h = load_text(c.graph_path);
        inst.label = "file";
        inst.n = inst.h.num_vertices();
        inst.k = inst.h.k();
        return inst;
    }
    FamilySpec spec = c.family;
    if (n_override) spec.n = *n_override;
    spec.validate();
    inst.spec = spec;
    inst.h = build(spec);
    inst.label = to_string(spec.kind);
    inst.n = spec.n;
    inst.k = spec.uniformity();
    return inst;
}

std::vector<double> t_values(const RunConfig& c, double mu) {
    if (!c.t_grid.empty()) return c.t_grid;
    if (!c.eps_grid.empty()) {
        std::vector<double> out;
        for (double e : c.eps_grid) out.push_back(e * mu);
        return out;
    }
    return {mu > 0.0 ? mu : 1.0};
}

std::uint64_t sample_count(double s) {
    require(std::isfinite(s) && s >= 1.0 && s <= 1e15, "--samples must be a count between 1 and 1e15");
    return static_cast<std::uint64_t>(std::llround(s));
}

Row tail_row(const Instance& inst, double p, double t, const RunConfig& c) {
    const Hypergraph& h = inst.h;
    const double mu = exact_mean(h, p);
    const double threshold = mu + t;
    const Method method = parse_method(c.method);
    TailEstimate est;
    switch (method) {
        case Method::exact: est = exact_tail(h, p, threshold, c.workers); break;
        case Method::mc: est = mc_tail(h, p, threshold, sample_count(c.samples), c.seed, c.workers); break;
        case Method::planted: {
            const double x = c.witness_x.value_or(planted_target(mu, t, p, h.k()));
            auto w = planted_witness(inst.spec ? &*inst.spec : nullptr, h, x);
            if (!w) throw CapacityError("no witness set inducing " + format_number(x) + " edges");
            est = planted_tail(h, p, threshold, w->w, sample_count(c.samples), c.seed, c.workers);
            est.method = Method::planted;
            break;
        }
        case Method::conditioned: {
            require(mu > 0.0, "conditioned method needs mu > 0");
            const double eps = t / mu;
            est = conditioned_tail(h, p, threshold, eps, sample_count(c.samples), c.seed, c.workers);
            break;
        }
    }
    return {{"family", inst.label},          {"n", inst.n},
            {"k", inst.k},                   {"p", p},
            {"threshold", est.threshold},    {"method", to_string(est.method)},
            {"p_hat", est.p_hat},            {"ci_low", est.ci_low},
            {"ci_high", est.ci_high},        {"samples", est.samples},
            {"seed", c.seed}};
}

int cmd_family(const RunConfig& c, Emitter& em) {
    const auto inst = make_instance(c);
    const Hypergraph& h = inst.h;
    const std::size_t d1 = max_degree(h);
    const std::size_t d2 = h.k() >= 2 ? delta_j(h, 2) : d1;
    for (double p : c.p_grid) {
        const auto m = moments(h, p, inst.n);
        em.emit({{"family", inst.label},
                 {"n", inst.n},
                 {"k", inst.k},
                 {"vertices", h.num_vertices()},
                 {"edges", h.num_edges()},
                 {"delta1", d1},
                 {"delta2", d2},
                 {"p", p},
                 {"mu", m.mu},
                 {"var", m.var},
                 {"lambda", m.lambda}});
    }
    return 0;
}

int cmd_bounds(const RunConfig& c, Emitter& em) {
    const auto inst = make_instance(c);
    const Hypergraph& h = inst.h;
    for (double p : c.p_grid) {
        const auto m = moments(h, p, inst.n);
        for (double t : t_values(c, m.mu)) {
            std::vector<BoundReport> reports;
            reports.push_back(theorem_c_bound(m.mu, c.constant_c, t));
            if (m.mu > 0.0 && p > 0.0) {
                reports.push_back(hgp_upper_bound(m.mu, p, t / m.mu));
                reports.push_back(hgp_lower_bound(m.mu, p, t / m.mu));
            }
            if (m.lambda > 0.0 && p > 0.0) {
                reports.push_back(hg_upper_bound(m.mu, m.lambda, p, t, inst.n, c.constant_c));
                reports.push_back(hg_lower_bound(m.mu, m.lambda, p, t, c.constant_c, c.constant_d));
            }
            reports.push_back(xr_tail_bound(m.mu, h.k(), c.r, t));
            if (p > 0.0 && m.mu + t >= 1.0) {
                std::optional<Witness> w = inst.spec ? interval_witness(*inst.spec, m.mu + t) : greedy_witness(h, m.mu + t);
                if (w) {
                    const double d = static_cast<double>(w->w.count()) / std::sqrt(m.mu + t);
                    reports.push_back(lb_cluster_bound(d, m.mu, t, p));
                }
            }
            for (const auto& r : reports)
                em.emit({{"family", inst.label},
                         {"n", inst.n},
                         {"k", inst.k},
                         {"p", p},
                         {"t", t},
                         {"tag", r.tag},
                         {"log_value", r.log_value}});
        }
    }
    return 0;
}

int cmd_tail(const RunConfig& c, Emitter& em) {
    const auto inst = make_instance(c);
    for (double p : c.p_grid) {
        const double mu = exact_mean(inst.h, p);
        for (double t : t_values(c, mu)) em.emit(tail_row(inst, p, t, c));
    }
    return 0;
}

int cmd_decompose(const RunConfig& c, Emitter& em) {
    const auto inst = make_instance(c);
    const Hypergraph& h = inst.h;
    const std::uint64_t samples = sample_count(c.samples);
    for (double p : c.p_grid) {
        const double mu = exact_mean(h, p);
        for (double t : t_values(c, mu)) {
            CascadeParams cp;
            cp.p = p;
            cp.r = c.r;
            cp.t = t;
            cp.gamma = c.gamma;
            cp.beta = c.beta.value_or(1.0 / (32.0 * static_cast<double>(h.k())));
            for (std::uint64_t i = 0; i < samples; ++i) {
                CounterRng rng(c.seed, i);
                const auto s = sample_vp(h, p, rng);
                const std::size_t x = induced_edge_count(h, s);
                const auto pr = degree_prune(h, s, c.r);
                json xr = pr.kept.size();
                std::string xr_kind = "lower";
                try {
                    xr = xr_exact(h, s, c.r);
                    xr_kind = "exact";
                } catch (const CapacityError&) {
                }
                json mr_exact_cell = "budget";
                try {
                    mr_exact_cell = mr_exact(h, s, c.r);
                } catch (const CapacityError&) {
                }
                std::string verdict = "n/a";
                if (c.r >= 1.0) verdict = to_string(check_cascade_event(h, s, cp).verdict);
                em.emit({{"family", inst.label},
                         {"n", inst.n},
                         {"k", inst.k},
                         {"p", p},
                         {"t", t},
                         {"r", c.r},
                         {"sample", i},
                         {"x", x},
                         {"x_r", xr},
                         {"x_r_kind", xr_kind},
                         {"m_r_greedy", pr.matching.size()},
                         {"m_r_exact", mr_exact_cell},
                         {"cascade", verdict},
                         {"seed", c.seed}});
            }
        }
    }
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    std::vector<std::string> names = c.suites;
    if (names.empty() || std::find(names.begin(), names.end(), "all") != names.end()) names = suite_names();
    VerifyOptions opts;
    opts.seed = c.seed;
    opts.workers = c.workers;
    opts.scale = c.scale;
    std::size_t checks = 0, failures = 0;
    for (const auto& name : names) {
        const auto res = run_suite(name, opts);
        checks += res.checks;
        failures += res.failures;
        out << "suite " << res.name << ": " << (res.ok() ? "PASS" : "FAIL") << " (" << res.checks - res.failures
            << "/" << res.checks << " checks passed)\n";
        for (const auto& msg : res.messages) out << "  " << msg << '\n';
    }
    out << "verify: " << checks - failures << "/" << checks << " checks passed\n";
    return failures == 0 ? 0 : 1;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

const std::vector<std::string> kSweepKey{"family", "n", "k", "p", "t", "method", "seed"};

std::string sweep_key(const Row& row) {
    std::string key;
    for (const auto& name : kSweepKey)
        for (const auto& [k, v] : row)
            if (k == name) key += cell_text(v) + "|";
    return key;
}

std::set<std::string> existing_sweep_keys(const std::string& path, OutputFormat fmt) {
    std::set<std::string> keys;
    std::ifstream in(path);
    if (!in) return keys;
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row row;
        if (fmt == OutputFormat::json) {
            const auto obj = json::parse(line, nullptr, false);
            if (!obj.is_object()) continue;
            for (auto it = obj.begin(); it != obj.end(); ++it) row.emplace_back(it.key(), it.value());
        } else {
            if (header.empty()) {
                header = split_csv_line(line);
                continue;
            }
            const auto cells = split_csv_line(line);
            if (cells.size() != header.size()) continue;
            for (std::size_t i = 0; i < cells.size(); ++i) row.emplace_back(header[i], cells[i]);
        }
        keys.insert(sweep_key(row));
    }
    return keys;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    std::vector<std::optional<std::size_t>> ns;
    if (c.n_grid.empty())
        ns.push_back(std::nullopt);
    else
        for (auto n : c.n_grid) ns.emplace_back(n);

    std::set<std::string> done;
    std::ofstream file;
    std::ostream* os = &out;
    bool header = true;
    if (!c.output_path.empty()) {
        done = existing_sweep_keys(c.output_path, c.format);
        std::ifstream probe(c.output_path);
        header = !probe || probe.peek() == std::ifstream::traits_type::eof();
        file.open(c.output_path, std::ios::app | std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + c.output_path);
        os = &file;
    }
    Emitter em(c.format, *os, header);
    for (const auto& n : ns) {
        const auto inst = make_instance(c, n);
        for (double p : c.p_grid) {
            const double mu = exact_mean(inst.h, p);
            for (double t : t_values(c, mu)) {
                Row key{{"family", inst.label}, {"n", inst.n},        {"k", inst.k},      {"p", p},
                        {"t", t},               {"method", c.method}, {"seed", c.seed}};
                if (done.count(sweep_key(key))) continue;
                Row row{{"family", inst.label}, {"n", inst.n}, {"k", inst.k}, {"p", p}, {"t", t}};
                try {
                    const Row tail = tail_row(inst, p, t, c);
                    for (const auto& [k, v] : tail)
                        if (k != "family" && k != "n" && k != "k" && k != "p") row.emplace_back(k, v);
                    row.emplace_back("status", "ok");
                } catch (const CapacityError&) {
                    row.emplace_back("threshold", mu + t);
                    row.emplace_back("method", c.method);
                    for (const char* k : {"p_hat", "ci_low", "ci_high", "samples"}) row.emplace_back(k, nullptr);
                    row.emplace_back("seed", c.seed);
                    row.emplace_back("status", "budget");
                }
                em.emit(row);
                os->flush();
            }
        }
    }
    return 0;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::size_t default_workers() {
    if (const char* env = std::getenv("UPTAIL_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void RunConfig::validate() const {
    static const std::set<std::string> subs{"family", "bounds", "tail", "decompose", "verify", "sweep"};
    require(subs.count(subcommand) == 1, "unknown subcommand: " + subcommand);
    require(!p_grid.empty(), "p grid must be nonempty");
    for (double p : p_grid) require(p >= 0.0 && p <= 1.0, "p values must lie in [0,1]");
    for (double t : t_grid) require(t > 0.0 && std::isfinite(t), "t values must be positive");
    for (double e : eps_grid) require(e > 0.0 && std::isfinite(e), "eps values must be positive");
    require(!(t_grid.size() && eps_grid.size()), "give either a t grid or an eps grid, not both");
    require(workers >= 1, "workers must be at least 1");
    require(r > 0.0, "r must be positive");
    parse_method(method);
    if (graph_path.empty()) family.validate();
    for (const auto& s : suites) {
        const auto& names = suite_names();
        require(s == "all" || std::find(names.begin(), names.end(), s) != names.end(), "unknown verify suite: " + s);
    }
    if (subcommand == "sweep") require(graph_path.empty() || n_grid.empty(), "an n grid needs a built-in family");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        std::ofstream file;
        std::ostream* os = &out;
        if (!config.output_path.empty() && config.subcommand != "sweep") {
            file.open(config.output_path, std::ios::binary);
            if (!file) throw ContractViolation("cannot open output file " + config.output_path);
            os = &file;
        }
        Emitter em(config.format, *os);
        if (config.subcommand == "family") return cmd_family(config, em);
        if (config.subcommand == "bounds") return cmd_bounds(config, em);
        if (config.subcommand == "tail") return cmd_tail(config, em);
        if (config.subcommand == "decompose") return cmd_decompose(config, em);
        if (config.subcommand == "verify") return cmd_verify(config, *os);
        return cmd_sweep(config, out);
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Upper tails of induced edge counts in random vertex subsets"};
    app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    cfg.workers = default_workers();
    std::string family = "ap";
    std::string format = "csv";

    auto add_family = [&](CLI::App* sub) {
        sub->add_option("--family", family, "ap, schur or ell_sum")->capture_default_str();
        sub->add_option("--n", cfg.family.n, "ground set size [n]")->capture_default_str();
        sub->add_option("--k", cfg.family.k, "progression length (ap)")->capture_default_str();
        sub->add_option("--ell", cfg.family.ell, "multiplier in x + y = ell z (ell_sum)")->capture_default_str();
        sub->add_option("--graph", cfg.graph_path, "read the hypergraph from a text file instead");
        sub->add_option("--p", cfg.p_grid, "vertex probability grid")->delimiter(',');
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--out", format, "csv or json (JSON lines)")->capture_default_str();
        sub->add_option("--output", cfg.output_path, "write rows to this file instead of stdout");
        sub->add_option("--workers", cfg.workers, "worker threads (default: UPTAIL_WORKERS or all cores)");
        sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    };
    auto add_t = [&](CLI::App* sub) {
        sub->add_option("--t", cfg.t_grid, "deviation grid t (threshold = mu + t)")->delimiter(',');
        sub->add_option("--eps", cfg.eps_grid, "relative deviation grid (t = eps mu)")->delimiter(',');
    };

    auto* fam = app.add_subcommand("family", "hypergraph statistics and moments");
    add_family(fam);
    add_output(fam);

    auto* bnd = app.add_subcommand("bounds", "closed-form bounds in log space");
    add_family(bnd);
    add_output(bnd);
    add_t(bnd);
    bnd->add_option("--C", cfg.constant_c, "constant in the upper bounds")->capture_default_str();
    bnd->add_option("--d", cfg.constant_d, "prefactor in the lower bound")->capture_default_str();
    bnd->add_option("--r", cfg.r, "degree cap for the truncated count")->capture_default_str();

    auto* tail = app.add_subcommand("tail", "estimate Pr(X >= mu + t)");
    add_family(tail);
    add_output(tail);
    add_t(tail);
    tail->add_option("--method", cfg.method, "exact, mc, planted or conditioned")->capture_default_str();
    tail->add_option("--samples", cfg.samples, "Monte Carlo sample count (1e6 accepted)")->capture_default_str();
    tail->add_option("--witness-x", cfg.witness_x, "edges the planted witness must induce");

    auto* dec = app.add_subcommand("decompose", "per-sample sparsification diagnostics");
    add_family(dec);
    add_output(dec);
    add_t(dec);
    dec->add_option("--r", cfg.r, "star size threshold r")->capture_default_str();
    dec->add_option("--beta", cfg.beta, "cascade beta (default 1/(32k))");
    dec->add_option("--gamma", cfg.gamma, "cascade gamma")->capture_default_str();
    dec->add_option("--samples", cfg.samples, "number of sampled vertex sets")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "run property suites");
    ver->add_option("suites", cfg.suites, "phi, variance, sandwich, bk, cascade, lowerbounds or all");
    ver->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    ver->add_option("--workers", cfg.workers, "worker threads");
    ver->add_option("--scale", cfg.scale, "multiplier for randomized instance counts")->capture_default_str();
    ver->add_option("--output", cfg.output_path, "write the summary to this file");

    auto* swp = app.add_subcommand("sweep", "resumable grid of tail estimates");
    add_family(swp);
    add_output(swp);
    add_t(swp);
    swp->add_option("--ns", cfg.n_grid, "grid of n values")->delimiter(',');
    swp->add_option("--method", cfg.method, "exact, mc, planted or conditioned")->capture_default_str();
    swp->add_option("--samples", cfg.samples, "Monte Carlo sample count")->capture_default_str();
    swp->add_option("--witness-x", cfg.witness_x, "edges the planted witness must induce");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
    try {
        cfg.family.kind = parse_family_kind(family);
        if (cfg.family.kind != FamilyKind::ap) cfg.family.k = 3;
        if (format == "csv")
            cfg.format = OutputFormat::csv;
        else if (format == "json")
            cfg.format = OutputFormat::json;
        else
            throw ContractViolation("--out must be csv or json");
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return run(cfg, out, err);
}

}  // namespace uptail
