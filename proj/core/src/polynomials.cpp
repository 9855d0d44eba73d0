#include "lblab/polynomials.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include "lblab/errors.hpp"

namespace lblab {

namespace mp = boost::multiprecision;

Rational to_rational(double x) {
    if (!std::isfinite(x)) throw DomainError("to_rational: non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // 53 significant bits fit exactly in an int64 after scaling.
    auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    mp::cpp_int num(scaled);
    if (exp >= 0) return Rational(num << exp);
    mp::cpp_int den = mp::cpp_int(1) << (-exp);
    return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational parse_rational(const std::string& num, const std::string& den) {
    mp::cpp_int n(num), d(den);
    if (d == 0) throw DomainError("parse_rational: zero denominator");
    return Rational(n, d);
}

// ---------------------------------------------------------------- Degree

int Degree::value() const {
    if (neg_inf_) throw DomainError("degree of the zero polynomial has no integer value");
    return value_;
}

Degree operator+(Degree a, Degree b) {
    if (a.neg_inf_ || b.neg_inf_) return Degree::minus_infinity();
    return Degree(a.value_ + b.value_);
}

std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
    if (a.neg_inf_ && b.neg_inf_) return std::strong_ordering::equal;
    if (a.neg_inf_) return std::strong_ordering::less;
    if (b.neg_inf_) return std::strong_ordering::greater;
    return a.value_ <=> b.value_;
}

std::string Degree::str() const { return neg_inf_ ? "-inf" : std::to_string(value_); }

Degree max(Degree a, Degree b) { return a < b ? b : a; }

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void UniPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

UniPoly UniPoly::constant(const Rational& c) { return UniPoly({c}); }

UniPoly UniPoly::monomial(std::size_t power, const Rational& c) {
    std::vector<Rational> v(power + 1);
    v[power] = c;
    return UniPoly(std::move(v));
}

Rational UniPoly::coeff(std::size_t power) const {
    return power < coeffs_.size() ? coeffs_[power] : Rational(0);
}

Degree UniPoly::degree() const {
    if (coeffs_.empty()) return Degree::minus_infinity();
    return Degree(static_cast<int>(coeffs_.size()) - 1);
}

Rational UniPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double UniPoly::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

std::vector<double> UniPoly::double_coeffs() const {
    std::vector<double> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(to_double(c));
    return out;
}

UniPoly UniPoly::affine_compose(const Rational& alpha, const Rational& beta) const {
    // Horner in the composed variable.
    UniPoly inner({beta, alpha});
    UniPoly acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * inner;
        acc += UniPoly::constant(*it);
    }
    return acc;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
}

UniPoly& UniPoly::operator*=(const Rational& s) {
    for (auto& c : coeffs_) c *= s;
    normalize();
    return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return UniPoly(std::move(out));
}

UniPoly operator-(UniPoly a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
}

// ---------------------------------------------------------------- MultiPoly

MultiPoly MultiPoly::constant(std::size_t nvars, const Rational& c) {
    MultiPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw std::out_of_range("MultiPoly::variable: index out of range");
    MultiPoly p(nvars);
    Exponent e(nvars, 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
}

MultiPoly MultiPoly::from_uni(const UniPoly& u) {
    MultiPoly p(1);
    for (std::size_t i = 0; i < u.coeffs().size(); ++i)
        p.add_term({static_cast<std::uint32_t>(i)}, u.coeffs()[i]);
    return p;
}

Degree MultiPoly::total_degree() const {
    Degree d = Degree::minus_infinity();
    for (const auto& [exp, c] : terms_) {
        int s = 0;
        for (auto e : exp) s += static_cast<int>(e);
        d = max(d, Degree(s));
    }
    return d;
}

Rational MultiPoly::constant_term() const {
    auto it = terms_.find(Exponent(nvars_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent(nvars_, 0));
}

void MultiPoly::add_term(const Exponent& exp, const Rational& c) {
    if (exp.size() != nvars_) throw std::invalid_argument("MultiPoly: exponent length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(exp, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational MultiPoly::eval(const std::vector<Rational>& point) const {
    if (point.size() != nvars_) throw std::invalid_argument("MultiPoly::eval: point length mismatch");
    // Cache powers per variable so each term costs one product per variable.
    std::vector<std::vector<Rational>> powers(nvars_, std::vector<Rational>{Rational(1)});
    Rational acc = 0;
    for (const auto& [exp, c] : terms_) {
        Rational t = c;
        for (std::size_t v = 0; v < nvars_; ++v) {
            auto& pw = powers[v];
            while (pw.size() <= exp[v]) pw.push_back(pw.back() * point[v]);
            if (exp[v]) t *= pw[exp[v]];
        }
        acc += t;
    }
    return acc;
}

double MultiPoly::eval(const std::vector<double>& point) const {
    if (point.size() != nvars_) throw std::invalid_argument("MultiPoly::eval: point length mismatch");
    double acc = 0.0;
    for (const auto& [exp, c] : terms_) {
        double t = to_double(c);
        for (std::size_t v = 0; v < nvars_; ++v)
            if (exp[v]) t *= std::pow(point[v], static_cast<int>(exp[v]));
        acc += t;
    }
    return acc;
}

UniPoly MultiPoly::to_uni() const {
    if (nvars_ != 1) throw std::invalid_argument("MultiPoly::to_uni: expected one indeterminate");
    std::vector<Rational> c;
    for (const auto& [exp, v] : terms_) {
        if (c.size() <= exp[0]) c.resize(exp[0] + 1);
        c[exp[0]] = v;
    }
    return UniPoly(std::move(c));
}

MultiPoly MultiPoly::affine_compose(const Rational& alpha, const Rational& beta) const {
    if (nvars_ != 1) throw std::invalid_argument("affine_compose: defined for one indeterminate only");
    return from_uni(to_uni().affine_compose(alpha, beta));
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
    if (nvars_ != o.nvars_)
        throw std::invalid_argument("MultiPoly: indeterminate count mismatch (" + std::to_string(nvars_) +
                                    " vs " + std::to_string(o.nvars_) + ")");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [exp, c] : o.terms_) add_term(exp, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [exp, c] : o.terms_) add_term(exp, -c);
    return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [exp, c] : terms_) c *= s;
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_compatible(b);
    MultiPoly out(a.nvars_);
    MultiPoly::Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

MultiPoly operator-(MultiPoly a) {
    for (auto& [exp, c] : a.terms_) c = -c;
    return a;
}

MultiPoly add(const MultiPoly& a, const MultiPoly& b) { return a + b; }
MultiPoly mul(const MultiPoly& a, const MultiPoly& b) { return a * b; }
MultiPoly scale(const MultiPoly& a, const Rational& r) { return a * r; }
MultiPoly affine_compose(const MultiPoly& a, const Rational& alpha, const Rational& beta) {
    return a.affine_compose(alpha, beta);
}

std::string to_json(const MultiPoly& p) {
    nlohmann::json j;
    j["vars"] = p.nvars();
    j["terms"] = nlohmann::json::array();
    for (const auto& [exp, c] : p.terms()) {
        j["terms"].push_back({{"exp", exp},
                              {"num", mp::numerator(c).str()},
                              {"den", mp::denominator(c).str()}});
    }
    return j.dump();
}

MultiPoly multipoly_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    MultiPoly p(j.at("vars").get<std::size_t>());
    for (const auto& t : j.at("terms")) {
        p.add_term(t.at("exp").get<MultiPoly::Exponent>(),
                   parse_rational(t.at("num").get<std::string>(), t.at("den").get<std::string>()));
    }
    return p;
}

// ---------------------------------------------------------------- PolyVector

Degree PolyVector::max_total_degree() const {
    Degree d = Degree::minus_infinity();
    for (const auto& e : entries) d = max(d, e.total_degree());
    return d;
}

std::size_t PolyVector::degree_sum() const {
    std::size_t s = 0;
    for (const auto& e : entries) {
        auto d = e.total_degree();
        if (!d.is_minus_infinity()) s += static_cast<std::size_t>(d.value());
    }
    return s;
}

bool PolyVector::within_budget_max() const {
    return max_total_degree() <= Degree(static_cast<int>(budget));
}

bool PolyVector::within_budget_sum() const { return degree_sum() <= budget; }

// ---------------------------------------------------------------- Chebyshev U

UniPoly chebyshev_U(std::size_t k) {
    UniPoly prev = UniPoly::constant(1);
    if (k == 0) return prev;
    UniPoly two_eta = UniPoly::monomial(1, 2);
    UniPoly cur = two_eta;
    for (std::size_t i = 1; i < k; ++i) {
        UniPoly next = two_eta * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> chebyshev_U_zeros(std::size_t k) {
    std::vector<double> z;
    z.reserve(k);
    const double pi = boost::math::constants::pi<double>();
    for (std::size_t j = 1; j <= k; ++j) z.push_back(std::cos(static_cast<double>(j) * pi / (k + 1)));
    return z;
}

double sgn_orthogonality_residual(std::size_t k, std::size_t j) {
    using Big = mp::cpp_bin_float_50;
    const Big pi = boost::math::constants::pi<Big>();
    // Breakpoints from right to left: 1, zeros..., -1. Sign is + next to 1.
    std::vector<Big> pts{Big(1)};
    for (std::size_t m = 1; m <= k; ++m) pts.push_back(cos(Big(m) * pi / Big(k + 1)));
    pts.push_back(Big(-1));
    Big total = 0;
    int sign = 1;
    const auto pw = static_cast<long>(j + 1);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        Big hi = pts[s], lo = pts[s + 1];
        total += sign * (pow(hi, pw) - pow(lo, pw)) / Big(pw);
        sign = -sign;
    }
    return abs(total).convert_to<double>();
}

}  // namespace lblab
