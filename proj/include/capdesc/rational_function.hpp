#pragma once

#include "capdesc/poly3.hpp"

#include <array>
#include <string>

namespace capdesc {

// Element of Q(s1, s2, s3), kept reduced with a monic denominator (graded-lex
// leading coefficient 1). Zero is 0/1.
class RationalFunction3 {
public:
    RationalFunction3() : den_(1) {}
    RationalFunction3(long c) : num_(c), den_(1) {}               // NOLINT(google-explicit-constructor)
    RationalFunction3(int c) : num_(static_cast<long>(c)), den_(1) {}  // NOLINT(google-explicit-constructor)
    RationalFunction3(BigQ c) : num_(std::move(c)), den_(1) {}    // NOLINT(google-explicit-constructor)
    RationalFunction3(Poly3 p) : num_(std::move(p)), den_(1) {}   // NOLINT(google-explicit-constructor)
    RationalFunction3(Poly3 num, Poly3 den);
    static RationalFunction3 var(int i) { return RationalFunction3(Poly3::var(i)); }

    const Poly3& num() const { return num_; }
    const Poly3& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return den_.is_one() && num_.is_constant(); }
    BigQ constant_value() const { return num_.constant_value(); }
    // Rough size used for pivot choice.
    std::size_t complexity() const { return num_.size() + den_.size(); }

    RationalFunction3& operator+=(const RationalFunction3& o);
    RationalFunction3& operator-=(const RationalFunction3& o);
    RationalFunction3& operator*=(const RationalFunction3& o);
    RationalFunction3& operator/=(const RationalFunction3& o);
    friend RationalFunction3 operator+(RationalFunction3 a, const RationalFunction3& b) { return a += b; }
    friend RationalFunction3 operator-(RationalFunction3 a, const RationalFunction3& b) { return a -= b; }
    friend RationalFunction3 operator*(RationalFunction3 a, const RationalFunction3& b) { return a *= b; }
    friend RationalFunction3 operator/(RationalFunction3 a, const RationalFunction3& b) { return a /= b; }
    RationalFunction3 operator-() const;
    RationalFunction3 inverse() const;
    RationalFunction3 pow(long e) const;

    friend bool operator==(const RationalFunction3& a, const RationalFunction3& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    // Exact value at a rational point; throws PoleAtPoint if the
    // denominator vanishes there.
    BigQ specialize(const std::array<BigQ, 3>& point) const;
    // Substitutes rational functions for s1, s2, s3.
    RationalFunction3 compose(const std::array<RationalFunction3, 3>& images) const;

    std::string str() const;
    static RationalFunction3 parse(const std::string& text);
    std::size_t hash() const { return num_.hash() * 31 + den_.hash(); }

private:
    struct Reduced {};
    RationalFunction3(Poly3 num, Poly3 den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}
    static RationalFunction3 make(Poly3 num, Poly3 den);
    Poly3 num_;
    Poly3 den_;
};

using RF3 = RationalFunction3;

inline std::ostream& operator<<(std::ostream& os, const RF3& f) { return os << f.str(); }

}  // namespace capdesc

template <>
struct std::hash<capdesc::RationalFunction3> {
    std::size_t operator()(const capdesc::RationalFunction3& f) const { return f.hash(); }
};
