#include <cmath>
#include <filesystem>
#include <tuple>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lblab/approx_bounds.hpp"
#include "lblab/approx_oracle.hpp"
#include "lblab/harness.hpp"
#include "lblab/symbolic_trace.hpp"

namespace lblab::harness {

namespace {

std::string fmt(double v) { return format_double(v); }

// Hash for commands driven by flags rather than a config file.
std::string flags_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::vector<GridPoint> config_grid(const ExperimentConfig& c) { return family_grid(c.problem, c.grid_points); }

ErrorMeasure measure_of(const EnvelopeSpec& env) {
    return env.measure == "distance" ? ErrorMeasure::distance : ErrorMeasure::suboptimality;
}

std::string units_of(const std::string& measure) {
    return measure == "distance" ? "err = distance to minimizer (parameter units); k = iterations"
                                 : "err = suboptimality F(w)-F* (objective units); k = iterations";
}

struct LogFit {
    double slope = 0.0, r2 = 0.0;
    std::size_t used = 0;
};

// Least squares of log(err) on k over [from, to], skipping entries that have
// reached the roundoff floor.
LogFit fit_log_linear(const std::vector<double>& err, std::size_t from, std::size_t to, double floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t m = 0;
    for (std::size_t k = from; k <= to && k < err.size(); ++k) {
        if (!(err[k] > floor)) continue;
        const double x = static_cast<double>(k), y = std::log(err[k]);
        sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
        ++m;
    }
    LogFit f;
    f.used = m;
    if (m < 3) return f;
    const double md = static_cast<double>(m);
    const double cov = sxy - sx * sy / md, vx = sxx - sx * sx / md, vy = syy - sy * sy / md;
    f.slope = cov / vx;
    f.r2 = vy > 0 ? cov * cov / (vx * vy) : 1.0;
    return f;
}

}  // namespace

EnvelopeSpec family_envelope(const FamilySpec& spec, std::size_t iterations) {
    EnvelopeSpec env;
    env.values.resize(iterations + 1);
    switch (spec.kind) {
        case FamilyKind::fsm:
            env.measure = "suboptimality";
            for (std::size_t k = 0; k <= iterations; ++k)
                env.values[k] = fsm_value_envelope(spec.L, spec.mu, spec.R, static_cast<int>(spec.n), k);
            break;
        case FamilyKind::toy:
            env.measure = "distance";
            for (std::size_t k = 0; k <= iterations; ++k)
                env.values[k] = spec.L > spec.mu ? maxnorm_lb(spec.mu, spec.L, 0.0, static_cast<int>(k)) : 0.0;
            break;
        case FamilyKind::rlm:
            env.measure = "distance";
            for (std::size_t k = 0; k <= iterations; ++k)
                env.values[k] = rlm_distance_envelope(spec.lambda, static_cast<int>(spec.n), k);
            break;
        default: throw ConfigError("no rate envelope for family " + to_string(spec.kind));
    }
    return env;
}

// ------------------------------------------------------------ bounds

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
    ProblemParams p{a.L, a.mu, a.n, a.R, a.lambda, a.eps, a.alpha};
    const auto kind = theorem_kind_from_string(a.kind);
    const auto b = theorem_bounds(p, kind);
    std::ostringstream key;
    key << a.kind;
    for (const auto& v : {a.L, a.mu, a.n, a.R, a.lambda, a.eps, a.alpha}) key << "," << (v ? fmt(*v) : "-");
    CsvTable t({"quantity", "value"}, "iteration counts (dimensionless)", flags_hash(key.str()));
    t.add_row(std::vector<std::string>{"bound", fmt(b.value)});
    t.add_row(std::vector<std::string>{"raw", fmt(b.raw)});
    t.add_row(std::vector<std::string>{"rate_arm", fmt(b.rate_arm)});
    if (b.count_arm) t.add_row(std::vector<std::string>{"count_arm", fmt(*b.count_arm)});
    if (kind == TheoremKind::smooth && a.L && a.alpha && a.eps)
        t.add_row(std::vector<std::string>{"delta_form", fmt(smooth_bound_delta_form(*a.L, p.delta(), *a.eps))});
    out << t.str();
    return kOk;
}

// ------------------------------------------------------------ approx-check

int cmd_approx_check(const ApproxCheckArgs& a, std::ostream& out) {
    std::ostringstream key;
    key << a.norm << "," << a.k_max << "," << a.uniform_grid << "," << a.l1_grid;
    CsvTable t({"norm", "k", "analytic_lb", "bruteforce", "ratio"}, "errors in the norm named per row",
               flags_hash(key.str()));
    bool ok = true;
    auto row = [&](const std::string& label, int k, double lb, double bf) {
        if (bf < lb * (1.0 - 1e-9)) ok = false;
        t.add_row(std::vector<std::string>{label, std::to_string(k), fmt(lb), fmt(bf), fmt(lb > 0 ? bf / lb : INFINITY)});
    };
    const bool all = a.norm == "all";
    if (!all && a.norm != "uniform" && a.norm != "l1" && a.norm != "l2")
        throw ConfigError("approx-check: norm must be uniform, l1, l2 or all");
    if (all || a.norm == "uniform") {
        for (auto [lo, hi, c] : {std::tuple{1.0, 4.0, 0.0}, {1.0, 10.0, 0.0}, {1.0, 100.0, 0.0}, {2.0, 5.0, -1.0}}) {
            std::ostringstream label;
            label << "uniform(a=" << lo << ";b=" << hi << ";c=" << c << ")";
            const double shift = c;
            for (int k = 0; k <= a.k_max; ++k) {
                const auto r = best_uniform([shift](double x) { return 1.0 / (x + shift); }, lo, hi, k, a.uniform_grid);
                row(label.str(), k, maxnorm_lb(lo, hi, c, k), r.error);
            }
        }
    }
    if (all || a.norm == "l1") {
        for (auto [L, mu, alpha] : {std::tuple{4.0, 1.0, 2.5}, {3.0, 1.0, 2.0}, {10.0, 1.0, 5.5}, {100.0, 1.0, 57.5}}) {
            std::ostringstream label;
            label << "l1(L=" << L << ";mu=" << mu << ";alpha=" << alpha << ")";
            const double h = (L - mu) / 2.0, shift = alpha;
            for (int k = 0; k <= a.k_max; ++k) {
                const auto r = best_l1([shift](double x) { return 1.0 / (x + shift); }, -h, h, k, a.l1_grid);
                row(label.str(), k, l1_lb(L, mu, alpha, k), r.error);
            }
        }
    }
    if (all || a.norm == "l2") {
        for (double alpha : {-0.9, -0.5, -0.1}) {
            std::ostringstream label;
            label << "l2(alpha=" << alpha << ")";
            for (int k = 0; k <= a.k_max; ++k) row(label.str(), k, l2_weighted_lb(alpha, k), best_weighted_l2(alpha, k).error);
        }
    }
    out << t.str();
    return ok ? kOk : kFailure;
}

// ------------------------------------------------------------ trace

int cmd_trace(const TraceArgs& a, std::ostream& out) {
    a.config.validate();
    const auto sched = make_optimizer(a.optimizer, optimizer_params(a.config));
    const auto tr = trace_oblivious(sched, a.config.problem, a.k, a.seed);

    nlohmann::json j;
    j["schedule"] = tr.schedule;
    j["family"] = to_string(tr.family.kind);
    j["seed"] = tr.seed;
    j["steps"] = tr.steps;
    j["config_hash"] = a.config.hash();
    j["points"] = nlohmann::json::array();
    for (const auto& p : tr.points) {
        auto entries = nlohmann::json::array();
        for (const auto& e : p.entries) entries.push_back(nlohmann::json::parse(to_json(e)));
        j["points"].push_back({{"entries", entries}, {"max_total_degree", p.max_total_degree().str()},
                               {"degree_sum", p.degree_sum()}});
    }

    CsvTable t({"coordinate", "value", "error"}, "error = distance of traced iterate to minimizer", a.config.hash());
    for (const auto& g : config_grid(a.config)) {
        const double e = trace_sup_error(tr.points[0], a.config.problem, {g});
        t.add_row(std::vector<double>{static_cast<double>(g.coordinate), g.value, e});
    }
    emit(a.config.output_dir, "trace.json", j.dump(2) + "\n", out);
    emit(a.config.output_dir, "trace.csv", t.str(), out);
    return kOk;
}

// ------------------------------------------------------------ fig2

int cmd_fig2(const Fig2Args& a, std::ostream& out) {
    const auto tb = fig2_data(a.L, a.mu, a.k_max, a.points);
    std::ostringstream key;
    key << a.L << "," << a.mu << "," << a.k_max << "," << a.points;
    std::vector<std::string> cols{"eta"};
    for (std::size_t k = 1; k <= a.k_max; ++k) cols.push_back("gd_k" + std::to_string(k));
    for (std::size_t k = 1; k <= a.k_max; ++k) cols.push_back("agd_k" + std::to_string(k));
    cols.push_back("target");
    CsvTable t(cols, "iterate values w(eta) and target 1/eta (dimensionless)", flags_hash(key.str()));
    for (std::size_t r = 0; r < tb.eta.size(); ++r) {
        std::vector<double> row{tb.eta[r]};
        for (const auto& c : tb.gd) row.push_back(c[r]);
        for (const auto& c : tb.agd) row.push_back(c[r]);
        row.push_back(tb.target[r]);
        t.add_row(row);
    }
    out << t.str();
    if (!a.svg_path.empty()) {
        std::vector<Series> series;
        for (std::size_t k = 0; k < a.k_max; ++k) {
            series.push_back({"GD k=" + std::to_string(k + 1), tb.eta, tb.gd[k]});
            series.push_back({"AGD k=" + std::to_string(k + 1), tb.eta, tb.agd[k]});
        }
        series.push_back({"1/eta", tb.eta, tb.target});
        const auto path = std::filesystem::path(a.svg_path);
        emit(path.has_parent_path() ? path.parent_path().string() : ".", path.filename().string(),
             svg_line_plot("GD and AGD iterates as polynomials in eta", "eta", "w(eta)", series, false), out);
    }
    return kOk;
}

// ------------------------------------------------------------ fig1

int cmd_fig1(const Fig1Args& a, std::ostream& out) {
    if (a.kappa <= 1.0) throw ConfigError("fig1: kappa must exceed 1");
    const auto inst = nesterov_chain(a.d, a.kappa * a.mu, a.mu);
    auto p = params_for(inst);
    p.memory = a.memory;
    const std::vector<std::string> names{"gd", "agd", "hb", "lbfgs"};
    std::vector<std::vector<double>> curves;
    for (const auto& n : names) curves.push_back(run(make_optimizer(n, p), inst, a.iterations, 0).suboptimality);

    std::ostringstream key;
    key << a.d << "," << a.kappa << "," << a.mu << "," << a.iterations << "," << a.memory;
    const auto hash = flags_hash(key.str());
    CsvTable t({"k", "gd", "agd", "hb", "lbfgs"}, units_of("suboptimality"), hash);
    for (std::size_t k = 0; k <= a.iterations; ++k)
        t.add_row(std::vector<double>{static_cast<double>(k), curves[0][k], curves[1][k], curves[2][k], curves[3][k]});

    CsvTable fit({"optimizer", "slope", "r2", "first_k_below_1e-10"}, "slope per iteration of log suboptimality", hash);
    const double rk = std::sqrt(a.kappa);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto f = fit_log_linear(curves[i], 50, std::min<std::size_t>(300, a.iterations), 1e-13 * curves[i][0]);
        long hit = -1;
        for (std::size_t k = 0; k < curves[i].size(); ++k)
            if (curves[i][k] <= 1e-10) {
                hit = static_cast<long>(k);
                break;
            }
        fit.add_row(std::vector<std::string>{names[i], fmt(f.slope), fmt(f.r2), std::to_string(hit)});
    }
    fit.add_row(std::vector<std::string>{"reference", fmt(2.0 * std::log((rk - 1.0) / (rk + 1.0))), "", ""});

    std::vector<Series> series;
    std::vector<double> ks(a.iterations + 1);
    for (std::size_t k = 0; k <= a.iterations; ++k) ks[k] = static_cast<double>(k);
    for (std::size_t i = 0; i < names.size(); ++i) series.push_back({names[i], ks, curves[i]});
    emit(a.output_dir, "fig1.csv", t.str(), out);
    emit(a.output_dir, "fig1_fit.csv", fit.str(), out);
    if (!a.output_dir.empty())
        emit(a.output_dir, "fig1.svg",
             svg_line_plot("Chain quadratic, d=" + std::to_string(a.d), "iteration", "F(w)-F*", series, true), out);
    return kOk;
}

// ------------------------------------------------------------ run / envelope

int cmd_run(const ExperimentConfig& c, std::ostream& out) {
    c.validate();
    const auto grid = config_grid(c);
    const std::string measure = (c.problem.kind == FamilyKind::toy || c.problem.kind == FamilyKind::rlm)
                                    ? "distance"
                                    : "suboptimality";
    for (const auto& name : c.optimizers) {
        const auto sched = make_optimizer(name, optimizer_params(c));
        const auto curve = expected_error_curve(sched, c.problem, grid, c.iterations, c.seeds,
                                                measure == "distance" ? ErrorMeasure::distance
                                                                      : ErrorMeasure::suboptimality);
        CsvTable t({"k", "err_mean", "err_stderr", "worst_eta"}, units_of(measure) + "; optimizer = " + name, c.hash());
        for (std::size_t k = 0; k <= c.iterations; ++k) {
            const auto& pt = curve.points[k];
            t.add_row(std::vector<double>{static_cast<double>(k), pt.mean, pt.std_error, grid[pt.worst_index].value});
        }
        emit(c.output_dir, "run_" + name + ".csv", t.str(), out);
    }
    return kOk;
}

int cmd_envelope(const ExperimentConfig& c, std::ostream& out) {
    c.validate();
    const auto env = family_envelope(c.problem, c.iterations);
    const auto grid = config_grid(c);
    bool violated = false;
    CsvTable summary({"optimizer", "violations", "min_margin"}, "margin in " + env.measure + " units", c.hash());
    for (const auto& name : c.optimizers) {
        const auto sched = make_optimizer(name, optimizer_params(c));
        const auto curve = expected_error_curve(sched, c.problem, grid, c.iterations, c.seeds, measure_of(env));
        CsvTable t({"k", "empirical_worst", "envelope", "margin"}, units_of(env.measure) + "; optimizer = " + name +
                                                                       "; margin = mean - 3 stderr - envelope",
                   c.hash());
        std::size_t violations = 0;
        double min_margin = INFINITY;
        for (std::size_t k = 0; k <= c.iterations; ++k) {
            const auto& pt = curve.points[k];
            const double margin = pt.mean - 3.0 * pt.std_error - env.values[k];
            if (margin < 0.0) ++violations;
            min_margin = std::min(min_margin, margin);
            t.add_row(std::vector<double>{static_cast<double>(k), pt.mean, env.values[k], margin});
        }
        violated = violated || violations > 0;
        summary.add_row(std::vector<std::string>{name, std::to_string(violations), fmt(min_margin)});
        emit(c.output_dir, "envelope_" + name + ".csv", t.str(), out);
    }
    emit(c.output_dir, "envelope_summary.csv", summary.str(), out);
    return violated ? kEnvelopeViolation : kOk;
}

int cmd_sampling_compare(const ExperimentConfig& c, std::ostream& out) {
    c.validate();
    const auto env = family_envelope(c.problem, c.iterations);
    const auto grid = config_grid(c);
    bool violated = false;
    CsvTable t({"optimizer", "k", "with_mean", "without_mean", "ratio", "envelope"},
               units_of(env.measure) + "; ratio = without/with", c.hash());
    for (const auto& name : c.optimizers) {
        auto with = c;
        with.sampling = "with";
        auto without = c;
        without.sampling = "without";
        const auto a = expected_error_curve(make_optimizer(name, optimizer_params(with)), c.problem, grid, c.iterations,
                                            c.seeds, measure_of(env));
        const auto b = expected_error_curve(make_optimizer(name, optimizer_params(without)), c.problem, grid,
                                            c.iterations, c.seeds, measure_of(env));
        for (std::size_t k = 0; k <= c.iterations; ++k) {
            const auto& pa = a.points[k];
            const auto& pb = b.points[k];
            if (pa.mean - 3 * pa.std_error < env.values[k] || pb.mean - 3 * pb.std_error < env.values[k])
                violated = true;
            t.add_row(std::vector<std::string>{name, std::to_string(k), fmt(pa.mean), fmt(pb.mean),
                                               fmt(pa.mean > 0 ? pb.mean / pa.mean : NAN), fmt(env.values[k])});
        }
    }
    emit(c.output_dir, "sampling_compare.csv", t.str(), out);
    return violated ? kEnvelopeViolation : kOk;
}

}  // namespace lblab::harness
