#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lblab {

using Rational = boost::multiprecision::cpp_rational;

// Exact value of a binary double; no rounding happens.
Rational to_rational(double x);
double to_double(const Rational& r);
Rational parse_rational(const std::string& num, const std::string& den = "1");

// Polynomial degree with a distinguished minus-infinity for the zero polynomial.
class Degree {
public:
    explicit Degree(int v) : value_(v) {}
    static Degree minus_infinity() { return Degree(); }

    bool is_minus_infinity() const { return neg_inf_; }
    int value() const;

    friend Degree operator+(Degree a, Degree b);
    friend bool operator==(const Degree& a, const Degree& b) = default;
    friend std::strong_ordering operator<=>(const Degree& a, const Degree& b);
    friend bool operator==(const Degree& a, int b) { return !a.neg_inf_ && a.value_ == b; }
    friend std::strong_ordering operator<=>(const Degree& a, int b) { return a <=> Degree(b); }

    std::string str() const;

private:
    Degree() : neg_inf_(true) {}
    int value_ = 0;
    bool neg_inf_ = false;
};

Degree max(Degree a, Degree b);

class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs);

    static UniPoly constant(const Rational& c);
    static UniPoly monomial(std::size_t power, const Rational& c = 1);
    static UniPoly identity() { return monomial(1); }

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational coeff(std::size_t power) const;
    Degree degree() const;
    bool is_zero() const { return coeffs_.empty(); }

    Rational eval(const Rational& x) const;
    double eval(double x) const;
    std::vector<double> double_coeffs() const;

    // p(alpha*x + beta)
    UniPoly affine_compose(const Rational& alpha, const Rational& beta) const;

    UniPoly& operator+=(const UniPoly& o);
    UniPoly& operator-=(const UniPoly& o);
    UniPoly& operator*=(const Rational& s);
    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
    friend UniPoly operator*(UniPoly a, const Rational& s) { return a *= s; }
    friend UniPoly operator*(const Rational& s, UniPoly a) { return a *= s; }
    friend UniPoly operator-(UniPoly a);
    friend bool operator==(const UniPoly& a, const UniPoly& b) = default;

private:
    void normalize();
    std::vector<Rational> coeffs_;
};

class MultiPoly {
public:
    using Exponent = std::vector<std::uint32_t>;
    using TermMap = std::map<Exponent, Rational>;

    explicit MultiPoly(std::size_t nvars = 0) : nvars_(nvars) {}

    static MultiPoly constant(std::size_t nvars, const Rational& c);
    static MultiPoly variable(std::size_t nvars, std::size_t index);
    static MultiPoly from_uni(const UniPoly& p);

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Degree total_degree() const;
    Rational constant_term() const;
    // Nonzero only in the constant term (or zero).
    bool is_constant() const;

    void add_term(const Exponent& exp, const Rational& c);

    Rational eval(const std::vector<Rational>& point) const;
    double eval(const std::vector<double>& point) const;

    UniPoly to_uni() const;
    MultiPoly affine_compose(const Rational& alpha, const Rational& beta) const;

    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const Rational& s);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(MultiPoly a, const Rational& s) { return a *= s; }
    friend MultiPoly operator*(const Rational& s, MultiPoly a) { return a *= s; }
    friend MultiPoly operator-(MultiPoly a);
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) = default;

private:
    void check_compatible(const MultiPoly& o) const;
    std::size_t nvars_;
    TermMap terms_;
};

// Free-function spelling of the ring operations.
MultiPoly add(const MultiPoly& a, const MultiPoly& b);
MultiPoly mul(const MultiPoly& a, const MultiPoly& b);
MultiPoly scale(const MultiPoly& a, const Rational& r);
MultiPoly affine_compose(const MultiPoly& a, const Rational& alpha, const Rational& beta);

// {"vars": n, "terms": [{"exp": [...], "num": "...", "den": "..."}]}
std::string to_json(const MultiPoly& p);
MultiPoly multipoly_from_json(const std::string& text);

struct PolyVector {
    std::vector<MultiPoly> entries;
    std::size_t budget = 0;

    Degree max_total_degree() const;
    // Sum over entries of total degree; zero entries contribute nothing.
    std::size_t degree_sum() const;
    bool within_budget_max() const;
    bool within_budget_sum() const;
};

UniPoly chebyshev_U(std::size_t k);
std::vector<double> chebyshev_U_zeros(std::size_t k);

// |∫_{-1}^{1} η^j sgn(U_k(η)) dη| evaluated piecewise between the zeros of U_k
// in 50-digit floating point.
double sgn_orthogonality_residual(std::size_t k, std::size_t j);

}  // namespace lblab
