#include "capdesc/bigq.hpp"

#include "capdesc/errors.hpp"

#include <cctype>

namespace capdesc {

BigQ::BigQ(long num, long den) {
    if (den == 0) throw DivisionByZero("BigQ with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

BigQ::BigQ(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DivisionByZero("BigQ with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

BigQ BigQ::parse(std::string_view text) {
    std::string s(text);
    auto valid_int = [](std::string_view t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    std::string n = s.substr(0, slash);
    std::string d = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(n) || !valid_int(d)) throw ParseError("not a rational number: '" + s + "'");
    if (n[0] == '+') n.erase(0, 1);
    if (d[0] == '+') d.erase(0, 1);
    return BigQ(mpz_class(n), mpz_class(d));
}

BigQ& BigQ::operator/=(const BigQ& o) {
    if (o.is_zero()) throw DivisionByZero("rational division by zero");
    q_ /= o.q_;
    return *this;
}

BigQ BigQ::inverse() const { return BigQ(1) / *this; }

BigQ BigQ::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return BigQ(n, d);
}

std::size_t BigQ::hash() const {
    std::size_t h = mpz_get_ui(q_.get_num_mpz_t()) * 1000003u;
    h ^= mpz_get_ui(q_.get_den_mpz_t()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(sgn(q_) + 1);
}

BigQ factorial(long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return BigQ(f);
}

}  // namespace capdesc
