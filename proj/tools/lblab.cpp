// Command-line front end: one subcommand per experiment or check.

#include <iostream>

#include <CLI11.hpp>

#include "lblab/harness.hpp"

using namespace lblab;
using namespace lblab::harness;

namespace {

// Flags shared by the Monte-Carlo subcommands; values override the config file.
struct ExperimentFlags {
    std::string config_path, family, opt, out, sampling;
    std::optional<double> kappa, mu, L, R, lambda;
    std::optional<std::size_t> n, d, iters, seeds, grid;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "INI experiment file");
        cmd->add_option("--opt", opt, "optimizer, or comma-separated list");
        cmd->add_option("--family", family, "toy, fsm, smooth, rlm");
        cmd->add_option("--n", n, "components (fsm) or samples (rlm)");
        cmd->add_option("--d", d, "dimension");
        cmd->add_option("--kappa", kappa, "condition number L/mu");
        cmd->add_option("--mu", mu, "strong convexity");
        cmd->add_option("--L", L, "smoothness");
        cmd->add_option("--R", R, "minimizer scale");
        cmd->add_option("--lambda", lambda, "regularization (rlm)");
        cmd->add_option("--iters", iters, "iterations");
        cmd->add_option("--seeds", seeds, "Monte-Carlo seeds");
        cmd->add_option("--eta-grid", grid, "grid points per varied parameter");
        cmd->add_option("--out", out, "output directory (default: stdout)");
        cmd->add_option("--sampling", sampling, "with or without replacement");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (!family.empty()) {
            try {
                c.problem.kind = family_from_string(family);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
        }
        if (!opt.empty()) {
            c.optimizers.clear();
            std::stringstream ss(opt);
            for (std::string item; std::getline(ss, item, ',');)
                if (!item.empty()) c.optimizers.push_back(item);
        }
        if (mu) c.problem.mu = *mu;
        if (L) c.problem.L = *L;
        if (kappa) c.problem.L = *kappa * c.problem.mu;
        if (R) c.problem.R = *R;
        if (lambda) c.problem.lambda = *lambda;
        if (n) c.problem.n = *n;
        if (d) c.problem.d = *d;
        if (iters) c.iterations = *iters;
        if (seeds) c.seeds = *seeds;
        if (grid) c.grid_points = *grid;
        if (!out.empty()) c.output_dir = out;
        if (!sampling.empty()) c.sampling = sampling;
        c.validate();
        return c;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lower-bound laboratory for oblivious first-order methods"};
    app.require_subcommand(1);

    BoundsArgs bounds;
    auto* c_bounds = app.add_subcommand("bounds", "iteration lower bounds of the theorems");
    c_bounds->add_option("--kind", bounds.kind, "toy, fsm, smooth, rlm");
    c_bounds->add_option("--L", bounds.L);
    c_bounds->add_option("--mu", bounds.mu);
    c_bounds->add_option("--n", bounds.n);
    c_bounds->add_option("--R", bounds.R);
    c_bounds->add_option("--lambda", bounds.lambda);
    c_bounds->add_option("--eps", bounds.eps);
    c_bounds->add_option("--alpha", bounds.alpha);

    ApproxCheckArgs approx;
    auto* c_approx = app.add_subcommand("approx-check", "analytic bounds vs brute-force best approximations");
    c_approx->add_option("--norm", approx.norm, "uniform, l1, l2, all");
    c_approx->add_option("--kmax", approx.k_max);
    c_approx->add_option("--uniform-grid", approx.uniform_grid);
    c_approx->add_option("--l1-grid", approx.l1_grid);

    ExperimentFlags trace_flags;
    TraceArgs trace;
    auto* c_trace = app.add_subcommand("trace", "symbolic iterates as polynomials in the instance parameters");
    trace_flags.attach(c_trace);
    c_trace->add_option("--k", trace.k, "steps");
    c_trace->add_option("--seed", trace.seed);

    Fig2Args fig2;
    auto* c_fig2 = app.add_subcommand("fig2", "GD and AGD iterate polynomials on [mu, L]");
    c_fig2->add_option("--L", fig2.L);
    c_fig2->add_option("--mu", fig2.mu);
    c_fig2->add_option("--kmax", fig2.k_max);
    c_fig2->add_option("--points", fig2.points);
    c_fig2->add_option("--svg", fig2.svg_path, "also write an SVG plot here");

    Fig1Args fig1;
    std::string fig1_config;
    auto* c_fig1 = app.add_subcommand("fig1", "GD, AGD, HB and L-BFGS on the chain quadratic");
    c_fig1->add_option("--config", fig1_config, "INI file; [problem] d, kappa/L, mu; [experiment] iterations; [lbfgs] memory");
    c_fig1->add_option("--d", fig1.d);
    c_fig1->add_option("--kappa", fig1.kappa);
    c_fig1->add_option("--iters", fig1.iterations);
    c_fig1->add_option("--memory", fig1.memory);
    c_fig1->add_option("--out", fig1.output_dir);

    ExperimentFlags run_flags, env_flags, cmp_flags;
    auto* c_run = app.add_subcommand("run", "Monte-Carlo worst-case error curve");
    run_flags.attach(c_run);
    auto* c_env = app.add_subcommand("envelope", "audit error curves against the rate envelope");
    env_flags.attach(c_env);
    auto* c_cmp = app.add_subcommand("sampling-compare", "with- vs without-replacement sampling");
    cmp_flags.attach(c_cmp);

    VerifyOptions verify;
    auto* c_verify = app.add_subcommand("verify-all", "run the invariant suite");
    c_verify->add_option("--mutate", verify.mutate, "inject a fault: maxnorm-prefactor");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_bounds) return cmd_bounds(bounds, std::cout);
        if (*c_approx) return cmd_approx_check(approx, std::cout);
        if (*c_trace) {
            trace.config = trace_flags.resolve();
            trace.optimizer = trace.config.optimizers.front();
            return cmd_trace(trace, std::cout);
        }
        if (*c_fig2) return cmd_fig2(fig2, std::cout);
        if (*c_fig1) {
            if (!fig1_config.empty()) {
                const auto c = load_config(fig1_config);
                fig1.d = c.problem.d;
                fig1.mu = c.problem.mu;
                fig1.kappa = c.problem.L / c.problem.mu;
                fig1.iterations = c.iterations;
                fig1.memory = c.memory;
                if (fig1.output_dir.empty()) fig1.output_dir = c.output_dir;
            }
            return cmd_fig1(fig1, std::cout);
        }
        if (*c_run) return cmd_run(run_flags.resolve(), std::cout);
        if (*c_env) return cmd_envelope(env_flags.resolve(), std::cout);
        if (*c_cmp) return cmd_sampling_compare(cmp_flags.resolve(), std::cout);
        if (*c_verify) return cmd_verify_all(verify, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
