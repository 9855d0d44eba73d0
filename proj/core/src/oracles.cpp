#include "lblab/oracles.hpp"

#include <sstream>

namespace lblab {

LinearMap LinearMap::scalar(double s) {
    LinearMap m;
    if (s == 0.0) return m;
    m.kind = Kind::scalar;
    m.s = s;
    return m;
}

LinearMap LinearMap::diagonal(std::vector<double> d) {
    LinearMap m;
    m.kind = Kind::diagonal;
    m.diag = std::move(d);
    return m;
}

LinearMap LinearMap::dense_matrix(Eigen::MatrixXd M) {
    LinearMap m;
    m.kind = Kind::dense;
    m.dense = std::move(M);
    return m;
}

LinearMap LinearMap::operator_map(Operator f, std::string signature) {
    LinearMap m;
    m.kind = Kind::op;
    m.op = std::make_shared<const Operator>(std::move(f));
    m.signature = std::move(signature);
    return m;
}

std::string LinearMap::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::zero: os << "0"; break;
        case Kind::scalar: os << s << "I"; break;
        case Kind::diagonal:
            os << "diag(";
            for (std::size_t i = 0; i < diag.size(); ++i) os << (i ? "," : "") << diag[i];
            os << ")";
            break;
        case Kind::dense:
            os << "dense[";
            for (Eigen::Index i = 0; i < dense.size(); ++i) os << (i ? "," : "") << dense.data()[i];
            os << "]";
            break;
        case Kind::op: os << "op{" << signature << "}"; break;
    }
    return os.str();
}

std::string variant_name(const OracleQuery& q) {
    static const char* names[] = {"first_order", "steepest_cd", "dual_grad_step", "dual_exact_cd"};
    return names[q.index()];
}

std::string describe(const OracleQuery& query) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& q) {
            using Q = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<Q, FirstOrder>) {
                os << "first_order(A=" << q.A.describe() << ",B=" << q.B.describe() << ",C=";
                for (std::size_t i = 0; i < q.C.size(); ++i) os << (i ? "," : "") << q.C[i];
                os << ",j=" << q.j << ")";
            } else if constexpr (std::is_same_v<Q, SteepestCD>) {
                os << "steepest_cd(i=" << q.i << ",j=" << q.j << ")";
            } else if constexpr (std::is_same_v<Q, DualGradStep>) {
                os << "dual_grad_step(t=" << q.t << ",j=" << q.j << ")";
            } else {
                os << "dual_exact_cd(j=" << q.j << ")";
            }
        },
        query);
    return os.str();
}

std::optional<std::size_t> touched_component(const OracleQuery& query) {
    return std::visit(
        [](const auto& q) -> std::optional<std::size_t> {
            using Q = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<Q, FirstOrder>) {
                if (q.A.is_zero()) return std::nullopt;
                return q.j;
            } else {
                return q.j;
            }
        },
        query);
}

bool is_dual(const OracleQuery& q) {
    return std::holds_alternative<DualGradStep>(q) || std::holds_alternative<DualExactCD>(q);
}

void CallLog::record(const OracleQuery& q) {
    ++counts_[q.index()];
    if (auto c = touched_component(q)) {
        if (*c >= touches_.size()) touches_.resize(*c + 1, 0);
        ++touches_[*c];
        max_per_query_ = std::max<std::size_t>(max_per_query_, 1);
    }
}

std::uint64_t CallLog::count(const std::string& variant) const {
    static const char* names[] = {"first_order", "steepest_cd", "dual_grad_step", "dual_exact_cd"};
    for (int i = 0; i < 4; ++i)
        if (variant == names[i]) return counts_[i];
    throw std::invalid_argument("CallLog: unknown variant " + variant);
}

std::uint64_t CallLog::total() const { return counts_[0] + counts_[1] + counts_[2] + counts_[3]; }

std::string CallLog::variant_csv() const {
    std::ostringstream os;
    os << "variant,count\n";
    static const char* names[] = {"first_order", "steepest_cd", "dual_grad_step", "dual_exact_cd"};
    for (int i = 0; i < 4; ++i) os << names[i] << "," << counts_[i] << "\n";
    return os.str();
}

std::string CallLog::component_csv() const {
    std::ostringstream os;
    os << "component,touches\n";
    for (std::size_t j = 0; j < touches_.size(); ++j) os << j << "," << touches_[j] << "\n";
    return os.str();
}

std::vector<double> answer_first_order(const QuadraticInstance& inst, const std::vector<double>& w, const FirstOrder& q) {
    return answer(inst.model, w, OracleQuery{q});
}

std::vector<double> answer_steepest_cd(const QuadraticInstance& inst, const std::vector<double>& w, const SteepestCD& q) {
    return answer(inst.model, w, OracleQuery{q});
}

std::vector<double> answer_dual_rlm(const RlmInstance& inst, const std::vector<double>& alpha,
                                    const std::variant<DualGradStep, DualExactCD>& q) {
    return std::visit([&](const auto& v) { return answer(inst.dual.model, alpha, OracleQuery{v}); }, q);
}

}  // namespace lblab
