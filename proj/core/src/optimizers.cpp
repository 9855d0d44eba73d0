#include "lblab/optimizers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <thread>

namespace lblab {

Schedule make_lbfgs(const OptimizerParams& params);  // lbfgs.cpp

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double need(const std::optional<double>& v, const char* what, const std::string& name) {
    if (!v) throw std::invalid_argument(name + ": missing parameter " + what);
    return *v;
}

std::size_t need(const std::optional<std::size_t>& v, const char* what, const std::string& name) {
    if (!v || *v == 0) throw std::invalid_argument(name + ": missing parameter " + what);
    return *v;
}

FirstOrder fo(double a, double b, std::size_t j) { return FirstOrder{LinearMap::scalar(a), LinearMap::scalar(b), {}, j}; }

// Index picker shared by the stochastic methods.
class Sampler {
public:
    Sampler(std::size_t n, Sampling mode) : n_(n), mode_(mode) {}

    std::size_t next(CounterRng& rng) {
        if (mode_ == Sampling::with_replacement) return rng.below(n_);
        if (pos_ == perm_.size()) {
            perm_.resize(n_);
            std::iota(perm_.begin(), perm_.end(), std::size_t{0});
            for (std::size_t i = n_; i > 1; --i) std::swap(perm_[i - 1], perm_[rng.below(i)]);
            pos_ = 0;
        }
        return perm_[pos_++];
    }

private:
    std::size_t n_;
    Sampling mode_;
    std::vector<std::size_t> perm_;
    std::size_t pos_ = 0;
};

Schedule oblivious(std::string name, std::size_t tracked, OracleFamily family, std::function<StepFn()> factory) {
    Schedule s;
    s.name = std::move(name);
    s.tracked = tracked;
    s.family = family;
    s.oblivious = true;
    s.make_generator = std::move(factory);
    return s;
}

Schedule make_gd(const OptimizerParams& p) {
    const double L = need(p.L, "L", "gd");
    const std::size_t n = need(p.n, "n", "gd");
    const double s = p.step.value_or(1.0 / L);
    const double nn = static_cast<double>(n);
    return oblivious("gd", 1, p.family, [=] {
        return [=](std::size_t, CounterRng&) {
            Update up{0, {}};
            for (std::size_t j = 0; j < n; ++j) up.terms.push_back({0, fo(-s / nn, 1.0 / nn, j)});
            return Step{up};
        };
    });
}

Schedule make_agd(const OptimizerParams& p) {
    const double L = need(p.L, "L", "agd"), mu = need(p.mu, "mu", "agd");
    const std::size_t n = need(p.n, "n", "agd");
    const double s = p.step.value_or(1.0 / L);
    const double rk = std::sqrt(L / mu);
    const double beta = (rk - 1.0) / (rk + 1.0);
    const double nn = static_cast<double>(n);
    // Points: 0 = x_k, 1 = x_{k-1}. x_{k+1} = y - s∇F(y), y = (1+β)x_k - βx_{k-1}.
    return oblivious("agd", 2, p.family, [=] {
        return [=](std::size_t, CounterRng&) {
            Update x{0, {}};
            for (std::size_t j = 0; j < n; ++j) {
                x.terms.push_back({0, fo(-(1.0 + beta) * s / nn, (1.0 + beta) / nn, j)});
                x.terms.push_back({1, fo(beta * s / nn, -beta / nn, j)});
            }
            return Step{x, Update{1, {{0, fo(0.0, 1.0, 0)}}}};
        };
    });
}

Schedule make_hb(const OptimizerParams& p) {
    const double L = need(p.L, "L", "hb"), mu = need(p.mu, "mu", "hb");
    const std::size_t n = need(p.n, "n", "hb");
    const double alpha = p.step.value_or(4.0 / std::pow(std::sqrt(L) + std::sqrt(mu), 2));
    const double rk = std::sqrt(L / mu);
    const double beta = std::pow((rk - 1.0) / (rk + 1.0), 2);
    const double nn = static_cast<double>(n);
    return oblivious("hb", 2, p.family, [=] {
        return [=](std::size_t, CounterRng&) {
            Update x{0, {}};
            for (std::size_t j = 0; j < n; ++j) x.terms.push_back({0, fo(-alpha / nn, (1.0 + beta) / nn, j)});
            x.terms.push_back({1, fo(0.0, -beta, 0)});
            return Step{x, Update{1, {{0, fo(0.0, 1.0, 0)}}}};
        };
    });
}

Schedule make_sgd(const OptimizerParams& p) {
    const double L = need(p.L, "L", "sgd"), mu = need(p.mu, "mu", "sgd");
    const std::size_t n = need(p.n, "n", "sgd");
    const auto fixed = p.step;
    const Sampling mode = p.sampling;
    return oblivious("sgd", 1, p.family, [=] {
        return [=, pick = Sampler(n, mode)](std::size_t k, CounterRng& rng) mutable {
            const double s = fixed.value_or(1.0 / (L + mu * static_cast<double>(k)));
            return Step{Update{0, {{0, fo(-s, 1.0, pick.next(rng))}}}};
        };
    });
}

// Points: 0 = w, 1+m = stored gradient of component m.
Schedule make_sag(const OptimizerParams& p) {
    const double L = need(p.L, "L", "sag");
    const std::size_t n = need(p.n, "n", "sag");
    const double s = p.step.value_or(1.0 / (16.0 * L));
    const double nn = static_cast<double>(n);
    const Sampling mode = p.sampling;
    return oblivious("sag", n + 1, p.family, [=] {
        return [=, pick = Sampler(n, mode)](std::size_t, CounterRng& rng) mutable {
            const std::size_t j = pick.next(rng);
            Update w{0, {{0, fo(-s / nn, 1.0, j)}}};
            for (std::size_t m = 0; m < n; ++m)
                if (m != j) w.terms.push_back({1 + m, fo(0.0, -s / nn, 0)});
            return Step{w, Update{1 + j, {{0, fo(1.0, 0.0, j)}}}};
        };
    });
}

Schedule make_saga(const OptimizerParams& p) {
    const double L = need(p.L, "L", "saga");
    const std::size_t n = need(p.n, "n", "saga");
    const double s = p.step.value_or(1.0 / (3.0 * L));
    const double nn = static_cast<double>(n);
    const Sampling mode = p.sampling;
    return oblivious("saga", n + 1, p.family, [=] {
        return [=, pick = Sampler(n, mode)](std::size_t, CounterRng& rng) mutable {
            const std::size_t j = pick.next(rng);
            // w - s(∇f_j(w) - g_j + (1/n)Σ g_m)
            Update w{0, {{0, fo(-s, 1.0, j)}, {1 + j, fo(0.0, s - s / nn, 0)}}};
            for (std::size_t m = 0; m < n; ++m)
                if (m != j) w.terms.push_back({1 + m, fo(0.0, -s / nn, 0)});
            return Step{w, Update{1 + j, {{0, fo(1.0, 0.0, j)}}}};
        };
    });
}

// Points: 0 = w, 1 = snapshot w̃, 2 = snapshot gradient g̃. An epoch is n
// snapshot iterations (one component each) followed by m inner iterations.
Schedule make_svrg(const OptimizerParams& p) {
    const double L = need(p.L, "L", "svrg");
    const std::size_t n = need(p.n, "n", "svrg");
    const double s = p.step.value_or(1.0 / (10.0 * L));
    const std::size_t m = p.epoch.value_or(2 * n);
    const double nn = static_cast<double>(n);
    const Sampling mode = p.sampling;
    return oblivious("svrg", 3, p.family, [=] {
        return [=, pick = Sampler(n, mode)](std::size_t k, CounterRng& rng) mutable {
            const std::size_t phase = k % (n + m);
            if (phase == 0)
                return Step{Update{1, {{0, fo(0.0, 1.0, 0)}}}, Update{2, {{0, fo(1.0 / nn, 0.0, 0)}}}};
            if (phase < n) return Step{Update{2, {{2, fo(0.0, 1.0, 0)}, {1, fo(1.0 / nn, 0.0, phase)}}}};
            const std::size_t j = pick.next(rng);
            return Step{Update{0, {{0, fo(-s, 1.0, j)}, {1, fo(s, 0.0, j)}, {2, fo(0.0, -s, 0)}}}};
        };
    });
}

// Dual-free SDCA with λ = μ: f_j = φ_j + (μ/2)‖·‖², pseudo-duals a_j.
// Points: 0 = w, 1+j = a_j.
Schedule make_sdca_primal(const OptimizerParams& p) {
    const double L = need(p.L, "L", "sdca_primal"), mu = need(p.mu, "mu", "sdca_primal");
    const std::size_t n = need(p.n, "n", "sdca_primal");
    const double lambda = p.lambda.value_or(mu);
    const double nn = static_cast<double>(n);
    double s = 1.0 / (4.0 * lambda * nn);
    if (L > mu) s = std::min(s, 1.0 / (4.0 * (L - mu)));
    if (p.step) s = *p.step;
    const double sln = s * lambda * nn;
    const Sampling mode = p.sampling;
    return oblivious("sdca_primal", n + 1, p.family, [=] {
        return [=, pick = Sampler(n, mode)](std::size_t, CounterRng& rng) mutable {
            const std::size_t j = pick.next(rng);
            // v = ∇f_j(w) - μw + a_j;  w -= s v;  a_j -= sλn v
            Update w{0, {{0, fo(-s, 1.0 + s * mu, j)}, {1 + j, fo(0.0, -s, 0)}}};
            Update a{1 + j, {{1 + j, fo(0.0, 1.0 - sln, 0)}, {0, fo(-sln, sln * mu, j)}}};
            return Step{w, a};
        };
    });
}

Schedule make_cd(const std::string& name, const OptimizerParams& p, bool random) {
    const Sampling mode = p.sampling;
    if (p.family == OracleFamily::dual) {
        const std::size_t n = need(p.n, "n", name);
        return oblivious(name, 1, OracleFamily::dual, [=] {
            return [=, pick = Sampler(n, mode)](std::size_t k, CounterRng& rng) mutable {
                const std::size_t j = random ? pick.next(rng) : k % n;
                return Step{Update{0, {{0, DualExactCD{j}}}}};
            };
        });
    }
    const std::size_t n = need(p.n, "n", name);
    const std::size_t d = need(p.d, "d", name);
    const double w = 1.0 / static_cast<double>(n);
    // Averaging the n component line minima along e_i gives the exact line
    // minimum of F whenever the diagonal entry agrees across components.
    return oblivious(name, 1, OracleFamily::primal, [=] {
        return [=, pick = Sampler(d, mode)](std::size_t k, CounterRng& rng) mutable {
            const std::size_t i = random ? pick.next(rng) : k % d;
            Update up{0, {}};
            for (std::size_t j = 0; j < n; ++j) up.terms.push_back({0, SteepestCD{i, j}, w});
            return Step{up};
        };
    });
}

Schedule make_sdca(const OptimizerParams& p) {
    OptimizerParams q = p;
    q.family = OracleFamily::dual;
    auto s = make_cd("sdca", q, true);
    return s;
}

}  // namespace

// ------------------------------------------------------------ RNG

CounterRng::CounterRng(std::uint64_t seed, const std::string& stream)
    : key_(splitmix64(splitmix64(seed) ^ fnv1a(stream))) {}

std::uint64_t CounterRng::next() { return splitmix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t CounterRng::below(std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("CounterRng::below: empty range");
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t b = bound;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return static_cast<std::size_t>(x % b);
}

// ------------------------------------------------------------ factory

const std::vector<std::string>& optimizer_names() {
    static const std::vector<std::string> names{"gd",   "agd",  "hb",          "sgd",       "sag",       "saga",
                                                "svrg", "sdca", "sdca_primal", "cd_cyclic", "cd_random", "lbfgs"};
    return names;
}

Schedule make_optimizer(const std::string& name, const OptimizerParams& params) {
    if (name == "gd") return make_gd(params);
    if (name == "agd") return make_agd(params);
    if (name == "hb") return make_hb(params);
    if (name == "sgd") return make_sgd(params);
    if (name == "sag") return make_sag(params);
    if (name == "saga") return make_saga(params);
    if (name == "svrg") return make_svrg(params);
    if (name == "sdca") return make_sdca(params);
    if (name == "sdca_primal") return make_sdca_primal(params);
    if (name == "cd_cyclic") return make_cd(name, params, false);
    if (name == "cd_random") return make_cd(name, params, true);
    if (name == "lbfgs") return make_lbfgs(params);
    throw std::invalid_argument("unknown optimizer: " + name);
}

OptimizerParams params_for(const QuadraticInstance& inst) {
    OptimizerParams p;
    p.L = inst.L;
    p.mu = inst.mu;
    p.family = inst.model.family;
    p.n = inst.model.family == OracleFamily::dual ? inst.dim() : inst.n();
    p.d = inst.dim();
    return p;
}

// ------------------------------------------------------------ runs

namespace {

void check_family(const Schedule& schedule, const QuadraticInstance& instance) {
    if (schedule.family != instance.model.family)
        throw IncompatibleOracle(schedule.name + ": schedule and instance use different oracle families");
}

AdaptiveContext adaptive_context(CliExecutor<double>& ex, bool spoof) {
    auto ask = [&ex, spoof](const std::vector<double>& at, const OracleQuery& q) {
        ex.log().record(q);
        if (spoof) return std::vector<double>(at.size(), 0.0);
        return answer(ex.model(), at, q);
    };
    return AdaptiveContext{ex.points(), ask, ex.model().n()};
}

}  // namespace

namespace {

RunRecord run_impl(const Schedule& schedule, const QuadraticInstance& instance, std::size_t iterations,
                   std::uint64_t seed, bool want_value, bool want_distance) {
    check_family(schedule, instance);
    const auto t0 = std::chrono::steady_clock::now();
    CliExecutor<double> ex(instance.model, schedule.tracked);
    CounterRng rng(seed, schedule.name);
    RunRecord rec;
    rec.seed = seed;
    rec.suboptimality.reserve(iterations + 1);
    rec.distance.reserve(iterations + 1);
    auto measure = [&] {
        if (want_value) rec.suboptimality.push_back(instance.suboptimality(ex.point(0)));
        if (want_distance) rec.distance.push_back(instance.distance(ex.point(0)));
    };
    measure();
    if (schedule.oblivious) {
        auto gen = schedule.make_generator();
        for (std::size_t k = 0; k < iterations; ++k) {
            ex.apply(gen(k, rng));
            measure();
        }
    } else {
        auto policy = schedule.make_adaptive();
        for (std::size_t k = 0; k < iterations; ++k) {
            auto ctx = adaptive_context(ex, false);
            ex.apply(policy(k, rng, ctx));
            measure();
        }
        ex.log().set_oblivious(false);
    }
    rec.log = ex.log();
    rec.wall = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
    return rec;
}

}  // namespace

RunRecord run(const Schedule& schedule, const QuadraticInstance& instance, std::size_t iterations,
              std::uint64_t seed) {
    return run_impl(schedule, instance, iterations, seed, true, true);
}

RunRecord run(const Schedule& schedule, const QuadraticInstance& instance, std::size_t iterations, std::uint64_t seed,
              ErrorMeasure only) {
    return run_impl(schedule, instance, iterations, seed, only == ErrorMeasure::suboptimality,
                    only == ErrorMeasure::distance);
}

RunRecord run(const Schedule& schedule, const RlmInstance& instance, std::size_t iterations, std::uint64_t seed) {
    return run(schedule, instance.dual, iterations, seed);
}

namespace {

std::vector<std::string> stream_impl(const Schedule& schedule, const QuadraticInstance& instance,
                                     std::size_t iterations, std::uint64_t seed, bool spoof) {
    check_family(schedule, instance);
    CliExecutor<double> ex(instance.model, schedule.tracked);
    CounterRng rng(seed, schedule.name);
    std::vector<std::string> out;
    StepFn gen;
    AdaptiveFn policy;
    if (schedule.oblivious)
        gen = schedule.make_generator();
    else
        policy = schedule.make_adaptive();
    for (std::size_t k = 0; k < iterations; ++k) {
        Step step;
        if (schedule.oblivious) {
            step = gen(k, rng);
        } else {
            auto ctx = adaptive_context(ex, spoof);
            step = policy(k, rng, ctx);
        }
        for (const auto& up : step)
            for (const auto& t : up.terms)
                out.push_back(std::to_string(k) + ":" + std::to_string(up.target) + "<-" + std::to_string(t.source) +
                              ":" + describe(t.query));
        if (!spoof) ex.apply(step);
    }
    return out;
}

}  // namespace

std::vector<std::string> query_stream(const Schedule& schedule, const QuadraticInstance& instance,
                                      std::size_t iterations, std::uint64_t seed) {
    return stream_impl(schedule, instance, iterations, seed, false);
}

bool audit_obliviousness(const Schedule& schedule, const QuadraticInstance& instance, std::size_t iterations,
                         std::uint64_t seed) {
    return stream_impl(schedule, instance, iterations, seed, false) ==
           stream_impl(schedule, instance, iterations, seed, true);
}

// ------------------------------------------------------------ Monte Carlo

std::size_t worker_count() {
    if (const char* env = std::getenv("LBLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ErrorCurve expected_error_curve(const Schedule& schedule, const FamilySpec& family, const std::vector<GridPoint>& grid,
                                std::size_t iterations, std::size_t seeds, ErrorMeasure measure) {
    if (grid.empty()) throw std::invalid_argument("expected_error_curve: empty grid");
    if (seeds == 0) throw std::invalid_argument("expected_error_curve: seeds must be >= 1");

    ErrorCurve curve;
    curve.per_grid.assign(grid.size(), {});
    curve.per_grid_stderr.assign(grid.size(), {});
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (std::size_t g; (g = next.fetch_add(1)) < grid.size();) {
            try {
                const auto inst = make_instance(family, grid[g].params);
                std::vector<double> mean(iterations + 1, 0.0), m2(iterations + 1, 0.0);
                for (std::size_t s = 0; s < seeds; ++s) {
                    const auto rec = run(schedule, inst, iterations, s, measure);
                    const auto& err = measure == ErrorMeasure::suboptimality ? rec.suboptimality : rec.distance;
                    const double count = static_cast<double>(s + 1);
                    for (std::size_t k = 0; k <= iterations; ++k) {
                        const double delta = err[k] - mean[k];
                        mean[k] += delta / count;
                        m2[k] += delta * (err[k] - mean[k]);
                    }
                }
                std::vector<double> se(iterations + 1, 0.0);
                if (seeds > 1) {
                    const double ns = static_cast<double>(seeds);
                    for (std::size_t k = 0; k <= iterations; ++k) se[k] = std::sqrt(m2[k] / (ns - 1.0) / ns);
                }
                curve.per_grid[g] = std::move(mean);
                curve.per_grid_stderr[g] = std::move(se);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = grid.size();
            }
        }
    };

    const std::size_t workers = std::min(worker_count(), grid.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    curve.points.resize(iterations + 1);
    for (std::size_t k = 0; k <= iterations; ++k) {
        auto& pt = curve.points[k];
        pt.mean = -1.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (curve.per_grid[g][k] > pt.mean) {
                pt.mean = curve.per_grid[g][k];
                pt.std_error = curve.per_grid_stderr[g][k];
                pt.worst_index = g;
            }
        }
    }
    return curve;
}

}  // namespace lblab
