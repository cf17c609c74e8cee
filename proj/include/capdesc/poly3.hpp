#pragma once

#include "capdesc/bigq.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace capdesc {

// Exponent triple for s1, s2, s3 packed as (deg:16 | e1:16 | e2:16 | e3:16).
// Integer order on keys is graded-lex with s1 > s2 > s3; multiplying
// monomials is key addition.
class Monomial {
public:
    static constexpr int kVars = 3;
    constexpr Monomial() = default;
    Monomial(unsigned e1, unsigned e2, unsigned e3);
    static constexpr Monomial from_key(std::uint64_t k) { Monomial m; m.key_ = k; return m; }
    static Monomial var(int i, unsigned e = 1);

    std::uint64_t key() const { return key_; }
    unsigned exp(int i) const { return static_cast<unsigned>((key_ >> (32 - 16 * i)) & 0xffffu); }
    unsigned degree() const { return static_cast<unsigned>(key_ >> 48); }
    std::array<unsigned, 3> exps() const { return {exp(0), exp(1), exp(2)}; }
    bool is_one() const { return key_ == 0; }

    bool divides(const Monomial& o) const;
    Monomial operator*(const Monomial& o) const { return from_key(key_ + o.key_); }
    // Caller guarantees divisibility.
    Monomial operator/(const Monomial& o) const { return from_key(key_ - o.key_); }
    Monomial with_exp(int i, unsigned e) const;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

private:
    std::uint64_t key_ = 0;
};

Monomial monomial_gcd(const Monomial& a, const Monomial& b);

// Sparse polynomial in s1, s2, s3 over Q. Terms are kept sorted by ascending
// graded-lex key with no zero coefficients, so equality is structural.
class Poly3 {
public:
    struct Term {
        Monomial mono;
        BigQ coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    Poly3() = default;
    Poly3(long c);  // NOLINT(google-explicit-constructor)
    Poly3(BigQ c);  // NOLINT(google-explicit-constructor)
    Poly3(const Monomial& m, BigQ c);
    static Poly3 var(int i) { return Poly3(Monomial::var(i), BigQ(1)); }
    // Builds from arbitrary (possibly repeated, zero) terms.
    static Poly3 from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_one() const { return is_constant() && !terms_.empty() && terms_[0].coeff.is_one(); }
    BigQ constant_value() const;  // precondition: is_constant()

    const Term& leading() const { return terms_.back(); }
    unsigned total_degree() const { return terms_.empty() ? 0 : terms_.back().mono.degree(); }
    unsigned degree_in(int var) const;
    bool uses_var(int var) const { return degree_in(var) > 0; }
    Monomial min_monomial() const;  // componentwise minimum exponents

    // Coefficients with respect to one variable: result[k] multiplies var^k
    // and no longer involves var.
    std::vector<Poly3> coefficients_in(int var) const;
    Poly3 coefficient_in(int var, unsigned k) const;

    Poly3& operator+=(const Poly3& o);
    Poly3& operator-=(const Poly3& o);
    Poly3& operator*=(const Poly3& o) { *this = *this * o; return *this; }
    friend Poly3 operator+(Poly3 a, const Poly3& b) { return a += b; }
    friend Poly3 operator-(Poly3 a, const Poly3& b) { return a -= b; }
    friend Poly3 operator*(const Poly3& a, const Poly3& b);
    Poly3 operator-() const;
    Poly3 scaled(const BigQ& c) const;
    Poly3 times_monomial(const Monomial& m) const;
    Poly3 divided_by_monomial(const Monomial& m) const;  // caller guarantees divisibility
    Poly3 pow(unsigned e) const;

    friend bool operator==(const Poly3& a, const Poly3& b) { return a.terms_ == b.terms_; }

    // Exact quotient when b divides this polynomial, nullopt otherwise.
    std::optional<Poly3> divide_exact(const Poly3& b) const;

    BigQ evaluate(const std::array<BigQ, 3>& point) const;
    // Substitutes polynomial images for s1, s2, s3.
    Poly3 compose(const std::array<Poly3, 3>& images) const;

    // Scale so the graded-lex leading coefficient is 1.
    Poly3 monic() const;
    // Scale by a positive rational to integer coefficients with content 1.
    Poly3 primitive_integer() const;

    std::string str() const;
    std::size_t hash() const;

private:
    void add_scaled(const Poly3& o, int sign);
    std::vector<Term> terms_;
};

// Monic greatest common divisor (0 only if both inputs are 0).
Poly3 gcd(const Poly3& a, const Poly3& b);

std::string render_monomial(const Monomial& m);

}  // namespace capdesc
