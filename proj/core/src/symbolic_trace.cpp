#include "lblab/symbolic_trace.hpp"

#include <cmath>
#include <sstream>

namespace lblab {

UniPoly trace_gd_toy(std::size_t k, const Rational& L) {
    if (L <= 0) throw DomainError("trace_gd_toy: requires L > 0");
    const UniPoly contraction = UniPoly::constant(1) - UniPoly::monomial(1, Rational(1) / L);
    const UniPoly offset = UniPoly::constant(Rational(1) / L);
    UniPoly w;
    for (std::size_t i = 0; i < k; ++i) w = contraction * w + offset;
    return w;
}

UniPoly gd_toy_closed_form(std::size_t k, const Rational& L) {
    if (L <= 0) throw DomainError("gd_toy_closed_form: requires L > 0");
    UniPoly sum;
    Rational binom = k;  // C(k, 1)
    Rational power = 1;  // L^-i
    for (std::size_t i = 0; i < k; ++i) {
        const Rational sign = (i % 2 == 0) ? 1 : -1;
        sum += UniPoly::monomial(static_cast<int>(i), sign * binom * power / L);
        // C(k, i+2) = C(k, i+1) (k-i-1)/(i+2)
        binom = binom * Rational(static_cast<long long>(k - i - 1)) / Rational(static_cast<long long>(i + 2));
        power /= L;
    }
    return sum;
}

void check_degree_budget(const PolyVector& v, FamilyKind kind, std::size_t step) {
    auto fail = [&](const std::string& what) {
        throw InvariantViolation("degree budget broken at step " + std::to_string(step) + ": " + what);
    };
    switch (kind) {
        case FamilyKind::toy:
        case FamilyKind::fsm:
            if (!v.within_budget_max()) fail("total degree " + v.max_total_degree().str() + " exceeds step count");
            break;
        case FamilyKind::smooth:
            if (!v.within_budget_max()) fail("total degree " + v.max_total_degree().str() + " exceeds step count");
            for (const auto& e : v.entries)
                if (e.constant_term() != 0) fail("nonzero constant term");
            break;
        case FamilyKind::rlm:
            if (!v.within_budget_sum()) fail("degree sum " + std::to_string(v.degree_sum()) + " exceeds step count");
            break;
        case FamilyKind::chain: fail("chain family has no parameters");
    }
}

Trace trace_oblivious(const Schedule& schedule, const FamilySpec& family, std::size_t k, std::uint64_t seed) {
    if (!schedule.oblivious || !schedule.make_generator)
        throw std::invalid_argument("trace_oblivious: " + schedule.name + " is not oblivious");
    const auto model = lift_family(family);
    if (schedule.family != model.family)
        throw IncompatibleOracle(schedule.name + ": schedule and family use different oracle families");

    CliExecutor<MultiPoly> ex(model, schedule.tracked);
    CounterRng rng(seed, schedule.name);
    auto gen = schedule.make_generator();

    Trace tr;
    tr.schedule = schedule.name;
    tr.family = family;
    tr.seed = seed;
    tr.steps = k;
    tr.history.push_back(PolyVector{ex.point(0), 0});
    for (std::size_t step = 1; step <= k; ++step) {
        ex.apply(gen(step - 1, rng));
        for (const auto& p : ex.points()) check_degree_budget(PolyVector{p, step}, family.kind, step);
        tr.history.push_back(PolyVector{ex.point(0), step});
    }
    for (const auto& p : ex.points()) tr.points.push_back(PolyVector{p, k});
    return tr;
}

std::vector<double> evaluate_trace(const PolyVector& v, FamilyKind kind, const std::vector<double>& params) {
    std::vector<double> at = params;
    if (kind == FamilyKind::rlm)
        for (auto& x : at) x = std::sin(x);
    std::vector<double> out;
    out.reserve(v.entries.size());
    for (const auto& e : v.entries) out.push_back(e.eval(at));
    return out;
}

double trace_sup_error(const PolyVector& trace, const FamilySpec& family, const std::vector<GridPoint>& grid) {
    if (grid.empty()) throw DomainError("trace_sup_error: empty grid");
    double worst = 0.0;
    for (const auto& g : grid) {
        const auto inst = make_instance(family, g.params);
        const auto w = evaluate_trace(trace, family.kind, g.params);
        if (w.size() != inst.minimizer.size()) throw DomainError("trace_sup_error: trace dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += (w[i] - inst.minimizer[i]) * (w[i] - inst.minimizer[i]);
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

Fig2Table fig2_data(double L, double mu, std::size_t k_max, std::size_t points) {
    if (k_max < 1) throw DomainError("fig2_data: requires k_max >= 1");
    if (points < 2) throw DomainError("fig2_data: requires at least two grid points");
    FamilySpec spec;
    spec.kind = FamilyKind::toy;
    spec.mu = mu;
    spec.L = L;
    spec.validate();
    OptimizerParams p;
    p.L = L;
    p.mu = mu;
    p.n = 1;
    const auto gd = trace_oblivious(make_optimizer("gd", p), spec, k_max, 0);
    const auto agd = trace_oblivious(make_optimizer("agd", p), spec, k_max, 0);

    Fig2Table t;
    t.gd.assign(k_max, {});
    t.agd.assign(k_max, {});
    for (std::size_t r = 0; r < points; ++r) {
        const double eta = r + 1 == points ? L : mu + (L - mu) * static_cast<double>(r) / static_cast<double>(points - 1);
        t.eta.push_back(eta);
        t.target.push_back(1.0 / eta);
        for (std::size_t k = 1; k <= k_max; ++k) {
            t.gd[k - 1].push_back(gd.history[k].entries[0].eval(std::vector<double>{eta}));
            t.agd[k - 1].push_back(agd.history[k].entries[0].eval(std::vector<double>{eta}));
        }
    }
    return t;
}

std::string Fig2Table::csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "eta";
    for (std::size_t k = 1; k <= gd.size(); ++k) os << ",gd_k" << k;
    for (std::size_t k = 1; k <= agd.size(); ++k) os << ",agd_k" << k;
    os << ",target\n";
    for (std::size_t r = 0; r < eta.size(); ++r) {
        os << eta[r];
        for (const auto& c : gd) os << "," << c[r];
        for (const auto& c : agd) os << "," << c[r];
        os << "," << target[r] << "\n";
    }
    return os.str();
}

}  // namespace lblab
