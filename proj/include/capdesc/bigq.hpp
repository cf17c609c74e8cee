#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace capdesc {

// Exact rational. Thin value wrapper over mpq_class so that Eigen and the
// standard containers never see GMP expression templates.
class BigQ {
public:
    BigQ() = default;
    BigQ(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    BigQ(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
    BigQ(long num, long den);
    explicit BigQ(const mpz_class& z) : q_(z) {}
    BigQ(const mpz_class& num, const mpz_class& den);
    explicit BigQ(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    // Accepts "n" or "n/d" with optional sign.
    static BigQ parse(std::string_view text);

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    BigQ& operator+=(const BigQ& o) { q_ += o.q_; return *this; }
    BigQ& operator-=(const BigQ& o) { q_ -= o.q_; return *this; }
    BigQ& operator*=(const BigQ& o) { q_ *= o.q_; return *this; }
    BigQ& operator/=(const BigQ& o);

    friend BigQ operator+(BigQ a, const BigQ& b) { return a += b; }
    friend BigQ operator-(BigQ a, const BigQ& b) { return a -= b; }
    friend BigQ operator*(BigQ a, const BigQ& b) { return a *= b; }
    friend BigQ operator/(BigQ a, const BigQ& b) { return a /= b; }
    BigQ operator-() const { BigQ r; r.q_ = -q_; return r; }

    friend bool operator==(const BigQ& a, const BigQ& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const BigQ& a, const BigQ& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    BigQ inverse() const;
    BigQ pow(long e) const;
    std::string str() const { return q_.get_str(); }
    double to_double() const { return q_.get_d(); }
    std::size_t hash() const;

private:
    mpq_class q_{0};
};

inline std::ostream& operator<<(std::ostream& os, const BigQ& q) { return os << q.str(); }

BigQ factorial(long n);

}  // namespace capdesc

template <>
struct std::hash<capdesc::BigQ> {
    std::size_t operator()(const capdesc::BigQ& q) const { return q.hash(); }
};
