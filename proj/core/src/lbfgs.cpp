#include <cmath>
#include <deque>
#include <sstream>

#include "lblab/optimizers.hpp"

namespace lblab {

namespace {

struct Pair {
    std::vector<double> s, y;
    double rho;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i] * b[i];
    return t;
}

// Two-loop recursion: returns H v for the inverse-Hessian estimate H.
std::vector<double> two_loop(const std::deque<Pair>& mem, double gamma, std::vector<double> v) {
    std::vector<double> a(mem.size());
    for (std::size_t i = mem.size(); i-- > 0;) {
        a[i] = mem[i].rho * dot(mem[i].s, v);
        for (std::size_t r = 0; r < v.size(); ++r) v[r] -= a[i] * mem[i].y[r];
    }
    for (auto& x : v) x *= gamma;
    for (std::size_t i = 0; i < mem.size(); ++i) {
        const double b = mem[i].rho * dot(mem[i].y, v);
        for (std::size_t r = 0; r < v.size(); ++r) v[r] += (a[i] - b) * mem[i].s[r];
    }
    return v;
}

std::vector<double> full_gradient(AdaptiveContext& ctx, const std::vector<double>& at) {
    std::vector<double> g(at.size(), 0.0);
    const double inv = 1.0 / static_cast<double>(ctx.components);
    for (std::size_t j = 0; j < ctx.components; ++j) {
        const auto gj = ctx.ask(at, FirstOrder{LinearMap::identity(), LinearMap::zero(), {}, j});
        for (std::size_t r = 0; r < g.size(); ++r) g[r] += inv * gj[r];
    }
    return g;
}

}  // namespace

// Not oblivious: the step operator is built from earlier answers. The line
// search is exact, using the curvature along p measured as ∇F(w+p) - ∇F(w).
Schedule make_lbfgs(const OptimizerParams& params) {
    const std::size_t memory = params.memory;
    if (memory == 0) throw std::invalid_argument("lbfgs: memory must be >= 1");
    Schedule sched;
    sched.name = "lbfgs";
    sched.tracked = 1;
    sched.oblivious = false;
    sched.family = OracleFamily::primal;
    sched.make_adaptive = [memory] {
        struct State {
            std::deque<Pair> mem;
            std::vector<double> w_prev, g_prev;
        };
        auto st = std::make_shared<State>();
        return AdaptiveFn([st, memory](std::size_t k, CounterRng&, AdaptiveContext& ctx) {
            const auto& w = ctx.points[0];
            const auto g = full_gradient(ctx, w);
            if (!st->w_prev.empty()) {
                Pair p{std::vector<double>(w.size()), std::vector<double>(w.size()), 0.0};
                for (std::size_t r = 0; r < w.size(); ++r) {
                    p.s[r] = w[r] - st->w_prev[r];
                    p.y[r] = g[r] - st->g_prev[r];
                }
                const double sy = dot(p.s, p.y);
                if (sy > 0.0) {
                    p.rho = 1.0 / sy;
                    st->mem.push_back(std::move(p));
                    if (st->mem.size() > memory) st->mem.pop_front();
                }
            }
            double gamma = 1.0;
            if (!st->mem.empty()) {
                const auto& last = st->mem.back();
                gamma = dot(last.s, last.y) / dot(last.y, last.y);
            }
            auto dir = two_loop(st->mem, gamma, g);
            for (auto& x : dir) x = -x;

            std::vector<double> probe = w;
            for (std::size_t r = 0; r < w.size(); ++r) probe[r] += dir[r];
            const auto gp = full_gradient(ctx, probe);
            double curvature = 0.0;
            for (std::size_t r = 0; r < w.size(); ++r) curvature += dir[r] * (gp[r] - g[r]);
            const double alpha = curvature > 0.0 ? -dot(g, dir) / curvature : 0.0;

            st->w_prev = w;
            st->g_prev = g;

            auto snapshot = std::make_shared<const std::deque<Pair>>(st->mem);
            const double nn = static_cast<double>(ctx.components);
            auto op = [snapshot, gamma, alpha, nn](const std::vector<double>& v) {
                auto hv = two_loop(*snapshot, gamma, v);
                for (auto& x : hv) x *= -alpha / nn;
                return hv;
            };
            std::ostringstream sig;
            sig.precision(17);
            sig << "k=" << k << ",alpha=" << alpha << ",gamma=" << gamma << ",m=" << snapshot->size();
            const auto A = LinearMap::operator_map(op, sig.str());
            Update up{0, {}};
            for (std::size_t j = 0; j < ctx.components; ++j)
                up.terms.push_back({0, FirstOrder{A, LinearMap::scalar(1.0 / nn), {}, j}});
            return Step{up};
        });
    };
    return sched;
}

}  // namespace lblab
