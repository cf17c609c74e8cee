#include "capdesc/rational_function.hpp"

#include "capdesc/errors.hpp"
#include "capdesc/expr_parse.hpp"

#include <algorithm>

namespace capdesc {

namespace {

// Divide out a known factor; the caller guarantees exactness.
Poly3 div_known(const Poly3& p, const Poly3& g) {
    if (g.is_one()) return p;
    auto q = p.divide_exact(g);
    if (!q) throw PreconditionViolation("internal: inexact division in rational reduction");
    return *q;
}

}  // namespace

RationalFunction3 RationalFunction3::make(Poly3 num, Poly3 den) {
    if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
    if (num.is_zero()) return RationalFunction3();
    if (!den.is_constant()) {
        Poly3 g = gcd(num, den);
        if (!g.is_one()) {
            num = div_known(num, g);
            den = div_known(den, g);
        }
    }
    const BigQ lc = den.leading().coeff;
    if (!lc.is_one()) {
        const BigQ inv = lc.inverse();
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    return RationalFunction3(std::move(num), std::move(den), Reduced{});
}

RationalFunction3::RationalFunction3(Poly3 num, Poly3 den) {
    *this = make(std::move(num), std::move(den));
}

RationalFunction3& RationalFunction3::operator+=(const RationalFunction3& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_.is_one() && o.den_.is_one()) {
        num_ += o.num_;
        return *this;
    }
    if (den_ == o.den_) {
        *this = make(num_ + o.num_, den_);
        return *this;
    }
    // Henrici: only gcd(numerator, gcd of denominators) can cancel.
    const Poly3 g = gcd(den_, o.den_);
    const Poly3 b1 = div_known(den_, g);
    const Poly3 d1 = div_known(o.den_, g);
    Poly3 n = num_ * d1 + o.num_ * b1;
    Poly3 d = den_ * d1;
    if (n.is_zero()) return *this = RationalFunction3();
    if (!g.is_one()) {
        const Poly3 h = gcd(n, g);
        if (!h.is_one()) {
            n = div_known(n, h);
            d = div_known(d, h);
        }
    }
    const BigQ lc = d.leading().coeff;
    if (!lc.is_one()) {
        n = n.scaled(lc.inverse());
        d = d.scaled(lc.inverse());
    }
    num_ = std::move(n);
    den_ = std::move(d);
    return *this;
}

RationalFunction3& RationalFunction3::operator-=(const RationalFunction3& o) { return *this += -o; }

RationalFunction3& RationalFunction3::operator*=(const RationalFunction3& o) {
    if (is_zero() || o.is_zero()) return *this = RationalFunction3();
    if (o.is_constant()) {
        num_ = num_.scaled(o.num_.constant_value());
        return *this;
    }
    if (is_constant()) {
        const BigQ c = num_.constant_value();
        *this = o;
        num_ = num_.scaled(c);
        return *this;
    }
    if (den_.is_one() && o.den_.is_one()) {
        num_ = num_ * o.num_;
        return *this;
    }
    const Poly3 g1 = gcd(num_, o.den_);
    const Poly3 g2 = gcd(o.num_, den_);
    Poly3 n = div_known(num_, g1) * div_known(o.num_, g2);
    Poly3 d = div_known(den_, g2) * div_known(o.den_, g1);
    const BigQ lc = d.leading().coeff;
    if (!lc.is_one()) {
        n = n.scaled(lc.inverse());
        d = d.scaled(lc.inverse());
    }
    num_ = std::move(n);
    den_ = std::move(d);
    return *this;
}

RationalFunction3 RationalFunction3::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero rational function");
    Poly3 n = den_, d = num_;
    const BigQ lc = d.leading().coeff;
    return RationalFunction3(n.scaled(lc.inverse()), d.scaled(lc.inverse()), Reduced{});
}

RationalFunction3& RationalFunction3::operator/=(const RationalFunction3& o) {
    if (o.is_zero()) throw DivisionByZero("rational function division by zero");
    return *this *= o.inverse();
}

RationalFunction3 RationalFunction3::operator-() const {
    return RationalFunction3(-num_, den_, Reduced{});
}

RationalFunction3 RationalFunction3::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    // Powers of reduced fractions stay reduced.
    const auto ue = static_cast<unsigned>(e);
    Poly3 d = den_.pow(ue);
    return RationalFunction3(num_.pow(ue), std::move(d), Reduced{});
}

BigQ RationalFunction3::specialize(const std::array<BigQ, 3>& point) const {
    const BigQ d = den_.evaluate(point);
    if (d.is_zero())
        throw PoleAtPoint("denominator " + den_.str() + " vanishes at (" + point[0].str() + ", " +
                          point[1].str() + ", " + point[2].str() + ")");
    return num_.evaluate(point) / d;
}

RationalFunction3 RationalFunction3::compose(const std::array<RationalFunction3, 3>& images) const {
    bool all_poly = true;
    for (const auto& f : images) all_poly = all_poly && f.is_polynomial();
    if (all_poly) {
        const std::array<Poly3, 3> p{images[0].num_, images[1].num_, images[2].num_};
        return make(num_.compose(p), den_.compose(p));
    }
    auto eval = [&](const Poly3& p) {
        RationalFunction3 acc;
        std::array<std::vector<RationalFunction3>, 3> powers;
        for (int v = 0; v < 3; ++v) {
            powers[v].push_back(RationalFunction3(1));
            for (unsigned k = 1; k <= p.degree_in(v); ++k) powers[v].push_back(powers[v].back() * images[v]);
        }
        for (const auto& t : p.terms()) {
            RationalFunction3 term(t.coeff);
            for (int v = 0; v < 3; ++v)
                if (unsigned e = t.mono.exp(v)) term *= powers[v][e];
            acc += term;
        }
        return acc;
    };
    return eval(num_) / eval(den_);
}

std::string RationalFunction3::str() const {
    if (den_.is_one()) return num_.str();
    std::string n = num_.str();
    if (num_.size() > 1 || n.find('/') != std::string::npos) n = "(" + n + ")";
    const bool bare_den = den_.is_monomial() && den_.leading().coeff.is_one() &&
                          den_.leading().mono.degree() == std::max({den_.leading().mono.exp(0),
                                                                   den_.leading().mono.exp(1),
                                                                   den_.leading().mono.exp(2)});
    return n + "/" + (bare_den ? den_.str() : "(" + den_.str() + ")");
}

namespace {

struct RF3Builder {
    using Value = RationalFunction3;
    Value constant(const BigQ& c) const { return Value(c); }
    Value variable(const std::string& name) const {
        if (name == "s1") return Value::var(0);
        if (name == "s2") return Value::var(1);
        if (name == "s3") return Value::var(2);
        throw ParseError("unexpected symbol '" + name + "' in rational function of s1, s2, s3");
    }
    Value power(const Value& base, long e) const { return base.pow(e); }
};

}  // namespace

RationalFunction3 RationalFunction3::parse(const std::string& text) {
    return parse_expression(text, RF3Builder{});
}

}  // namespace capdesc
