#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lblab/instances.hpp"

namespace lblab {

// Matrix parameter of a first-order query, stored by shape.
struct LinearMap {
    enum class Kind { zero, scalar, diagonal, dense, op };
    using Operator = std::function<std::vector<double>(const std::vector<double>&)>;

    Kind kind = Kind::zero;
    double s = 0.0;
    std::vector<double> diag;
    Eigen::MatrixXd dense;
    std::shared_ptr<const Operator> op;  // numeric only; opaque to symbolic runs
    std::string signature;               // printable identity of op, used by stream audits

    static LinearMap zero() { return {}; }
    static LinearMap identity() { return scalar(1.0); }
    static LinearMap scalar(double s);
    static LinearMap diagonal(std::vector<double> d);
    static LinearMap dense_matrix(Eigen::MatrixXd m);
    static LinearMap operator_map(Operator f, std::string signature);

    bool is_zero() const { return kind == Kind::zero; }
    std::string describe() const;

    template <class T>
    std::vector<T> apply(const std::vector<T>& x, const T& zero) const;
};

struct FirstOrder {
    LinearMap A, B;
    std::vector<double> C;  // empty means 0
    std::size_t j = 0;
};
struct SteepestCD {
    std::size_t i = 0;  // coordinate
    std::size_t j = 0;  // component
};
struct DualGradStep {
    double t = 0.0;
    std::size_t j = 0;
};
struct DualExactCD {
    std::size_t j = 0;
};

using OracleQuery = std::variant<FirstOrder, SteepestCD, DualGradStep, DualExactCD>;

std::string variant_name(const OracleQuery& q);
std::string describe(const OracleQuery& q);
// Component whose data the answer reads, if any (A = 0 reads none).
std::optional<std::size_t> touched_component(const OracleQuery& q);
bool is_dual(const OracleQuery& q);

class CallLog {
public:
    explicit CallLog(std::size_t components = 0) : touches_(components, 0) {}

    void record(const OracleQuery& q);
    std::uint64_t count(const std::string& variant) const;
    std::uint64_t total() const;
    const std::vector<std::uint64_t>& touches() const { return touches_; }
    bool oblivious() const { return oblivious_; }
    void set_oblivious(bool v) { oblivious_ = v; }
    // Largest number of components touched by a single query (0 or 1 by construction).
    std::size_t max_components_per_query() const { return max_per_query_; }

    std::string variant_csv() const;
    std::string component_csv() const;

private:
    std::uint64_t counts_[4] = {0, 0, 0, 0};
    std::vector<std::uint64_t> touches_;
    bool oblivious_ = true;
    std::size_t max_per_query_ = 0;
};

// ------------------------------------------------------------ answers

inline double constant_like(double, double v) { return v; }
inline MultiPoly constant_like(const MultiPoly& z, double v) { return MultiPoly::constant(z.nvars(), to_rational(v)); }

template <class T>
std::vector<T> LinearMap::apply(const std::vector<T>& x, const T& zero) const {
    switch (kind) {
        case Kind::zero: return std::vector<T>(x.size(), zero);
        case Kind::scalar: {
            std::vector<T> out;
            out.reserve(x.size());
            for (const auto& v : x) out.push_back(scaled(v, s));
            return out;
        }
        case Kind::diagonal: {
            std::vector<T> out;
            out.reserve(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out.push_back(diag[i] == 0.0 ? zero : scaled(x[i], diag[i]));
            return out;
        }
        case Kind::dense: {
            std::vector<T> out(x.size(), zero);
            for (std::size_t r = 0; r < x.size(); ++r)
                for (std::size_t c = 0; c < x.size(); ++c)
                    if (dense(r, c) != 0.0) out[r] += scaled(x[c], dense(r, c));
            return out;
        }
        case Kind::op:
            if constexpr (std::is_same_v<T, double>) {
                return (*op)(x);
            } else {
                throw IncompatibleOracle("operator-valued query parameters cannot be applied symbolically");
            }
    }
    return {};
}

template <class T>
std::vector<T> component_gradient(const QuadraticModel<T>& m, std::size_t j, const std::vector<T>& w) {
    const auto& c = m.components.at(j);
    auto g = c.Q.apply(w);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!is_zero_value(c.q[i])) g[i] -= c.q[i];
    return g;
}

template <class T>
std::vector<T> answer(const QuadraticModel<T>& m, const std::vector<T>& w, const OracleQuery& query) {
    if (w.size() != m.dim()) throw std::invalid_argument("oracle: point dimension mismatch");
    const bool dual = is_dual(query);
    if (dual != (m.family == OracleFamily::dual))
        throw IncompatibleOracle(dual ? "dual oracle addressed to a primal instance"
                                      : "primal oracle addressed to a dual instance");

    return std::visit(
        [&](const auto& q) -> std::vector<T> {
            using Q = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<Q, FirstOrder>) {
                if (q.j >= m.n()) throw std::out_of_range("first-order oracle: component out of range");
                std::vector<T> out = q.B.apply(w, m.zero);
                if (!q.A.is_zero()) {
                    const auto g = q.A.apply(component_gradient(m, q.j, w), m.zero);
                    for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i];
                }
                if (!q.C.empty()) {
                    if (q.C.size() != w.size()) throw std::invalid_argument("first-order oracle: C has wrong size");
                    for (std::size_t i = 0; i < out.size(); ++i)
                        if (q.C[i] != 0.0) out[i] += constant_like(m.zero, q.C[i]);
                }
                return out;
            } else {
                std::size_t comp = 0, coord = 0;
                if constexpr (std::is_same_v<Q, SteepestCD>) {
                    comp = q.j;
                    coord = q.i;
                } else {
                    coord = q.j;
                }
                if (comp >= m.n() || coord >= m.dim()) throw std::out_of_range("oracle: index out of range");
                const auto& c = m.components[comp];
                T partial = c.Q.row_dot(coord, w);
                if (!is_zero_value(c.q[coord])) partial -= c.q[coord];
                std::vector<T> out = w;
                if constexpr (std::is_same_v<Q, DualGradStep>) {
                    out[coord] += scaled(partial, q.t);
                } else {
                    const T& d = c.Q.diag[coord];
                    if (is_zero_value(d)) throw DomainError("coordinate oracle: zero diagonal entry");
                    out[coord] -= divide_by_constant(partial, d);
                }
                return out;
            }
        },
        query);
}

// Named entry points on concrete instances.
std::vector<double> answer_first_order(const QuadraticInstance& inst, const std::vector<double>& w, const FirstOrder& q);
std::vector<double> answer_steepest_cd(const QuadraticInstance& inst, const std::vector<double>& w, const SteepestCD& q);
std::vector<double> answer_dual_rlm(const RlmInstance& inst, const std::vector<double>& alpha,
                                    const std::variant<DualGradStep, DualExactCD>& q);

}  // namespace lblab
