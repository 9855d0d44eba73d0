#include "lblab/instances.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace lblab {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

SymTridiag<double> diagonal_matrix(std::vector<double> d) {
    SymTridiag<double> m;
    m.off.assign(d.empty() ? 0 : d.size() - 1, 0.0);
    m.diag = std::move(d);
    return m;
}

void finish(QuadraticInstance& inst) {
    // Optimal value from the minimizer: F* = -½ q̄ᵀw*.
    inst.optimal_value = -0.5 * inst.mean_linear_term().dot(
                                    Eigen::Map<const Eigen::VectorXd>(inst.minimizer.data(), inst.minimizer.size()));
}

}  // namespace

// ------------------------------------------------------------ QuadraticInstance

double QuadraticInstance::objective(const std::vector<double>& w) const {
    double total = 0.0;
    for (const auto& c : model.components) {
        const auto Qw = c.Q.apply(w);
        for (std::size_t i = 0; i < w.size(); ++i) total += 0.5 * w[i] * Qw[i] - c.q[i] * w[i];
    }
    return total / static_cast<double>(n());
}

std::vector<double> QuadraticInstance::component_gradient(std::size_t j, const std::vector<double>& w) const {
    const auto& c = model.components.at(j);
    auto g = c.Q.apply(w);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= c.q[i];
    return g;
}

std::vector<double> QuadraticInstance::gradient(const std::vector<double>& w) const {
    std::vector<double> g(dim(), 0.0);
    for (std::size_t j = 0; j < n(); ++j) {
        const auto gj = component_gradient(j, w);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += gj[i];
    }
    for (auto& v : g) v /= static_cast<double>(n());
    return g;
}

double QuadraticInstance::suboptimality(const std::vector<double>& w) const {
    std::vector<double> e(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) e[i] = w[i] - minimizer[i];
    double total = 0.0;
    for (const auto& c : model.components) {
        const auto Qe = c.Q.apply(e);
        for (std::size_t i = 0; i < e.size(); ++i) total += e[i] * Qe[i];
    }
    return 0.5 * total / static_cast<double>(n());
}

double QuadraticInstance::distance(const std::vector<double>& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += (w[i] - minimizer[i]) * (w[i] - minimizer[i]);
    return std::sqrt(s);
}

Eigen::MatrixXd QuadraticInstance::dense_component(std::size_t j) const {
    const auto& Q = model.components.at(j).Q;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        M(i, i) = Q.diag[i];
        if (i + 1 < dim()) M(i, i + 1) = M(i + 1, i) = Q.off[i];
    }
    return M;
}

Eigen::MatrixXd QuadraticInstance::dense_hessian() const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim(), dim());
    for (std::size_t j = 0; j < n(); ++j) H += dense_component(j);
    return H / static_cast<double>(n());
}

Eigen::VectorXd QuadraticInstance::mean_linear_term() const {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(dim());
    for (const auto& c : model.components) q += Eigen::Map<const Eigen::VectorXd>(c.q.data(), c.q.size());
    return q / static_cast<double>(n());
}

std::string QuadraticInstance::describe_json() const {
    nlohmann::json j;
    j["family"] = family;
    j["params"] = params;
    j["n"] = n();
    j["d"] = dim();
    j["mu"] = mu;
    j["L"] = L;
    return j.dump();
}

// ------------------------------------------------------------ RlmInstance

double RlmInstance::primal_objective(const Eigen::VectorXd& w) const {
    double loss = 0.0;
    for (const auto& x : data) {
        const double z = x.dot(w) + 1.0;
        loss += 0.5 * z * z;
    }
    return loss / static_cast<double>(n) + 0.5 * lambda * w.squaredNorm();
}

double RlmInstance::dual_objective(const std::vector<double>& alpha) const { return dual.objective(alpha); }

Eigen::VectorXd RlmInstance::primal_from_dual(const std::vector<double>& alpha) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < n; ++i) w -= alpha[i] * data[i];
    return w / (lambda * static_cast<double>(n));
}

// ------------------------------------------------------------ constructions

QuadraticInstance toy_instance(double eta, double mu, double L) {
    require(mu <= eta && eta <= L, "toy_instance: requires mu <= eta <= L");
    QuadraticInstance inst;
    inst.family = "toy";
    inst.params = {{"eta", eta}, {"mu", mu}, {"L", L}};
    inst.model.components.push_back({diagonal_matrix({eta}), {1.0}});
    inst.mu = mu;
    inst.L = L;
    inst.minimizer = {1.0 / eta};
    finish(inst);
    return inst;
}

std::vector<double> fsm_minimizer(const std::vector<double>& etas, double L, double mu, double R, std::size_t d) {
    require(!etas.empty(), "fsm_minimizer: empty parameter vector");
    double mean = 0.0;
    for (double e : etas) mean += e;
    mean /= static_cast<double>(etas.size());
    const double v = R * mu / (std::sqrt(2.0) * ((L + mu) / 2.0 + mean));
    std::vector<double> w(d, 0.0);
    w[0] = w[1] = v;
    return w;
}

QuadraticInstance fsm_instance(const std::vector<double>& etas, double L, double mu, double R, std::size_t d) {
    require(d >= 2, "fsm_instance: requires d >= 2");
    require(L >= mu && mu > 0.0, "fsm_instance: requires L >= mu > 0");
    const double half = (L - mu) / 2.0;
    QuadraticInstance inst;
    inst.family = "fsm";
    inst.params = {{"L", L}, {"mu", mu}, {"R", R}, {"d", static_cast<double>(d)},
                   {"n", static_cast<double>(etas.size())}};
    std::vector<double> q(d, 0.0);
    q[0] = q[1] = R * mu / std::sqrt(2.0);
    for (std::size_t i = 0; i < etas.size(); ++i) {
        require(std::abs(etas[i]) <= half * (1.0 + 1e-15), "fsm_instance: |eta_i| exceeds (L-mu)/2");
        inst.params["eta" + std::to_string(i + 1)] = etas[i];
        SymTridiag<double> Q = diagonal_matrix(std::vector<double>(d, mu));
        Q.diag[0] = Q.diag[1] = (L + mu) / 2.0;
        Q.off[0] = etas[i];
        inst.model.components.push_back({std::move(Q), q});
    }
    inst.mu = mu;
    inst.L = L;
    inst.minimizer = fsm_minimizer(etas, L, mu, R, d);
    finish(inst);
    return inst;
}

double fsm_minimizer_separation(std::size_t n, double kappa, double R) {
    require(kappa > 3.0, "fsm_minimizer_separation: requires kappa > 3");
    const double nn = static_cast<double>(n);
    const double sep = 2.0 * R / std::abs(nn * (kappa + 1.0) / (kappa - 1.0) - nn + 2.0);
    if (sep < 2.0 * R / (nn + 2.0) * (1.0 - 1e-12))
        throw InvariantViolation("fsm_minimizer_separation: below 2R/(n+2)");
    return sep;
}

QuadraticInstance smooth_instance(double eta, double L, double R, std::size_t d) {
    require(eta > 0.0 && eta <= L, "smooth_instance: requires 0 < eta <= L");
    require(d >= 1, "smooth_instance: requires d >= 1");
    QuadraticInstance inst;
    inst.family = "smooth";
    inst.params = {{"eta", eta}, {"L", L}, {"R", R}, {"d", static_cast<double>(d)}};
    std::vector<double> q(d, 0.0);
    q[0] = R * eta;
    inst.model.components.push_back({diagonal_matrix(std::vector<double>(d, eta)), q});
    inst.mu = eta;
    inst.L = L;
    inst.minimizer.assign(d, 0.0);
    inst.minimizer[0] = R;
    finish(inst);
    return inst;
}

std::vector<double> rlm_dual_minimizer(const std::vector<double>& psis, double lambda, std::size_t n) {
    require(n % 2 == 0 && n > 0, "rlm_dual_minimizer: requires even n");
    require(psis.size() == n / 2, "rlm_dual_minimizer: requires n/2 angles");
    require(lambda > 0.0, "rlm_dual_minimizer: requires lambda > 0");
    const double ln = lambda * static_cast<double>(n);
    std::vector<double> a(n);
    for (std::size_t j = 0; j < n / 2; ++j) a[2 * j] = a[2 * j + 1] = 1.0 / ((ln + 1.0) / ln + std::sin(psis[j]) / ln);
    return a;
}

double rlm_minimizer_separation(double lambda, std::size_t n) {
    std::vector<double> lo(n / 2, 0.0), hi(n / 2, 0.0);
    lo[0] = -std::numbers::pi / 2.0;
    hi[0] = std::numbers::pi / 2.0;
    const auto a = rlm_dual_minimizer(lo, lambda, n), b = rlm_dual_minimizer(hi, lambda, n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

RlmInstance rlm_instance(const std::vector<double>& psis, double lambda, std::size_t n) {
    require(n % 2 == 0 && n > 0, "rlm_instance: n must be even");
    require(psis.size() == n / 2, "rlm_instance: requires n/2 angles");
    require(lambda > 0.0, "rlm_instance: requires lambda > 0");
    RlmInstance r;
    r.psis = psis;
    r.lambda = lambda;
    r.n = n;
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        if (i % 2 == 0) {
            const double psi = psis[i / 2];
            x(i) = std::cos(psi);
            x(i + 1) = std::sin(psi);
        } else {
            x(i) = 1.0;
        }
        r.data.push_back(std::move(x));
    }
    const double coupling = 1.0 / (lambda * nn * nn);
    SymTridiag<double> Q = diagonal_matrix(std::vector<double>(n, (1.0 + 1.0 / (lambda * nn)) / nn));
    for (std::size_t j = 0; j < n / 2; ++j) Q.off[2 * j] = std::sin(psis[j]) * coupling;

    auto& inst = r.dual;
    inst.family = "rlm";
    inst.params = {{"lambda", lambda}, {"n", nn}};
    for (std::size_t j = 0; j < n / 2; ++j) inst.params["psi" + std::to_string(j + 1)] = psis[j];
    inst.model.family = OracleFamily::dual;
    inst.model.components.push_back({std::move(Q), std::vector<double>(n, 1.0 / nn)});
    // Smallest and largest eigenvalues of the scaled dual Hessian.
    inst.mu = 1.0 / nn;
    inst.L = (1.0 + 2.0 / (lambda * nn)) / nn;
    inst.minimizer = rlm_dual_minimizer(psis, lambda, n);
    finish(inst);
    return r;
}

std::vector<double> solve_tridiagonal(const SymTridiag<double>& A, const std::vector<double>& b) {
    const std::size_t d = A.dim();
    std::vector<double> c(d, 0.0), x(b);
    double denom = A.diag[0];
    if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    if (d > 1) c[0] = A.off[0] / denom;
    x[0] /= denom;
    for (std::size_t i = 1; i < d; ++i) {
        denom = A.diag[i] - A.off[i - 1] * c[i - 1];
        if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
        if (i + 1 < d) c[i] = A.off[i] / denom;
        x[i] = (x[i] - A.off[i - 1] * x[i - 1]) / denom;
    }
    for (std::size_t i = d - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

QuadraticInstance nesterov_chain(std::size_t d, double L, double mu) {
    require(d >= 2, "nesterov_chain: requires d >= 2");
    require(L > mu && mu > 0.0, "nesterov_chain: requires L > mu > 0");
    // Path matrix A = tridiag(-1, 2, -1) with A_dd = 1, so that
    // wᵀAw = w₁² + Σ(w_i - w_{i+1})². Scale and shift it so the spectrum of the
    // Hessian is exactly [mu, L].
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(d, 2.0);
    diag(d - 1) = 1.0;
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(d - 1, -1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    const double scale = (L - mu) / (hi - lo);
    const double shift = mu - scale * lo;

    QuadraticInstance inst;
    inst.family = "chain";
    inst.params = {{"L", L}, {"mu", mu}, {"d", static_cast<double>(d)}, {"scale", scale}, {"shift", shift}};
    SymTridiag<double> Q;
    for (std::size_t i = 0; i < d; ++i) Q.diag.push_back(scale * diag(i) + shift);
    Q.off.assign(d - 1, -scale);
    std::vector<double> q(d, 0.0);
    q[0] = scale;
    inst.minimizer = solve_tridiagonal(Q, q);
    inst.model.components.push_back({std::move(Q), std::move(q)});
    inst.mu = mu;
    inst.L = L;
    finish(inst);
    return inst;
}

// ------------------------------------------------------------ families

FamilyKind family_from_string(const std::string& s) {
    if (s == "toy") return FamilyKind::toy;
    if (s == "fsm") return FamilyKind::fsm;
    if (s == "smooth") return FamilyKind::smooth;
    if (s == "rlm") return FamilyKind::rlm;
    if (s == "chain" || s == "nesterov_chain") return FamilyKind::chain;
    throw std::invalid_argument("unknown family: " + s);
}

std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::toy: return "toy";
        case FamilyKind::fsm: return "fsm";
        case FamilyKind::smooth: return "smooth";
        case FamilyKind::rlm: return "rlm";
        case FamilyKind::chain: return "chain";
    }
    return "?";
}

std::size_t FamilySpec::parameter_count() const {
    switch (kind) {
        case FamilyKind::toy:
        case FamilyKind::smooth: return 1;
        case FamilyKind::fsm: return n;
        case FamilyKind::rlm: return n / 2;
        case FamilyKind::chain: return 0;
    }
    return 0;
}

OracleFamily FamilySpec::oracle_family() const {
    return kind == FamilyKind::rlm ? OracleFamily::dual : OracleFamily::primal;
}

void FamilySpec::validate() const {
    switch (kind) {
        case FamilyKind::toy: require(L >= mu && mu > 0.0, "toy family: requires L >= mu > 0"); break;
        case FamilyKind::fsm:
            require(L >= mu && mu > 0.0, "fsm family: requires L >= mu > 0");
            require(d >= 2 && n >= 1, "fsm family: requires d >= 2, n >= 1");
            break;
        case FamilyKind::smooth: require(L > 0.0 && d >= 1, "smooth family: requires L > 0, d >= 1"); break;
        case FamilyKind::rlm: require(n >= 2 && n % 2 == 0 && lambda > 0.0, "rlm family: requires even n, lambda > 0"); break;
        case FamilyKind::chain: require(L > mu && mu > 0.0 && d >= 2, "chain family: requires L > mu > 0, d >= 2"); break;
    }
}

std::vector<GridPoint> family_grid(const FamilySpec& spec, std::size_t points) {
    spec.validate();
    if (points == 0) throw DomainError("family_grid: empty grid");
    auto lin = [points](double lo, double hi, std::size_t p) {
        if (points == 1) return hi;
        return lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(points - 1);
    };
    std::vector<GridPoint> grid;
    switch (spec.kind) {
        case FamilyKind::toy:
            for (std::size_t p = 0; p < points; ++p) {
                const double eta = lin(spec.mu, spec.L, p);
                grid.push_back({{eta}, 0, eta});
            }
            break;
        case FamilyKind::smooth:
            for (std::size_t p = 0; p < points; ++p) {
                const double eta = spec.L * static_cast<double>(p + 1) / static_cast<double>(points);
                grid.push_back({{eta}, 0, eta});
            }
            break;
        case FamilyKind::fsm: {
            const double half = (spec.L - spec.mu) / 2.0;
            const std::vector<double> base(spec.n, -half);
            for (std::size_t j = 0; j < spec.n; ++j) {
                for (std::size_t p = 0; p < points; ++p) {
                    const double v = lin(-half, half, p);
                    if (j > 0 && v == -half) continue;  // all-base point already listed
                    auto params = base;
                    params[j] = v;
                    grid.push_back({std::move(params), j, v});
                }
            }
            break;
        }
        case FamilyKind::rlm: {
            const double h = std::numbers::pi / 2.0;
            const std::vector<double> base(spec.n / 2, 0.0);
            for (std::size_t j = 0; j < spec.n / 2; ++j) {
                for (std::size_t p = 0; p < points; ++p) {
                    const double v = lin(-h, h, p);
                    if (j > 0 && v == 0.0) continue;
                    auto params = base;
                    params[j] = v;
                    grid.push_back({std::move(params), j, v});
                }
            }
            break;
        }
        case FamilyKind::chain: grid.push_back({{}, 0, 0.0}); break;
    }
    return grid;
}

QuadraticInstance make_instance(const FamilySpec& spec, const std::vector<double>& params) {
    spec.validate();
    if (params.size() != spec.parameter_count()) throw DomainError("make_instance: wrong parameter count");
    switch (spec.kind) {
        case FamilyKind::toy: return toy_instance(params[0], spec.mu, spec.L);
        case FamilyKind::fsm: return fsm_instance(params, spec.L, spec.mu, spec.R, spec.d);
        case FamilyKind::smooth: return smooth_instance(params[0], spec.L, spec.R, spec.d);
        case FamilyKind::rlm: return rlm_instance(params, spec.lambda, spec.n).dual;
        case FamilyKind::chain: return nesterov_chain(spec.d, spec.L, spec.mu);
    }
    throw DomainError("make_instance: unknown family");
}

QuadraticModel<MultiPoly> lift_family(const FamilySpec& spec) {
    spec.validate();
    const std::size_t nv = spec.parameter_count();
    if (nv == 0) throw DomainError("lift_family: family has no parameters to lift");
    auto c = [nv](double v) { return MultiPoly::constant(nv, to_rational(v)); };
    auto var = [nv](std::size_t i) { return MultiPoly::variable(nv, i); };
    QuadraticModel<MultiPoly> m;
    m.zero = MultiPoly(nv);
    m.family = spec.oracle_family();

    auto make_diag = [&](std::size_t d, const MultiPoly& value) {
        SymTridiag<MultiPoly> Q;
        Q.diag.assign(d, value);
        Q.off.assign(d > 0 ? d - 1 : 0, m.zero);
        return Q;
    };

    switch (spec.kind) {
        case FamilyKind::toy: m.components.push_back({make_diag(1, var(0)), {c(1.0)}}); break;
        case FamilyKind::smooth: {
            std::vector<MultiPoly> q(spec.d, m.zero);
            q[0] = var(0) * to_rational(spec.R);
            m.components.push_back({make_diag(spec.d, var(0)), std::move(q)});
            break;
        }
        case FamilyKind::fsm: {
            std::vector<MultiPoly> q(spec.d, m.zero);
            q[0] = q[1] = c(spec.R * spec.mu / std::sqrt(2.0));
            for (std::size_t i = 0; i < spec.n; ++i) {
                auto Q = make_diag(spec.d, c(spec.mu));
                Q.diag[0] = Q.diag[1] = c((spec.L + spec.mu) / 2.0);
                Q.off[0] = var(i);
                m.components.push_back({std::move(Q), q});
            }
            break;
        }
        case FamilyKind::rlm: {
            const double nn = static_cast<double>(spec.n);
            auto Q = make_diag(spec.n, c((1.0 + 1.0 / (spec.lambda * nn)) / nn));
            const Rational coupling = to_rational(1.0 / (spec.lambda * nn * nn));
            for (std::size_t j = 0; j < spec.n / 2; ++j) Q.off[2 * j] = var(j) * coupling;
            m.components.push_back({std::move(Q), std::vector<MultiPoly>(spec.n, c(1.0 / nn))});
            break;
        }
        case FamilyKind::chain: break;
    }
    return m;
}

}  // namespace lblab
