#pragma once

#include "capdesc/errors.hpp"
#include "capdesc/rational_function.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>

namespace capdesc {

// Truncated Laurent series in q. Coefficients below `lo` are zero, those in
// [lo, hi] are known exactly, and nothing is claimed above `hi`. An exact
// (finite) series has hi == kUnbounded.
template <class Coeff>
class Series {
public:
    static constexpr long kUnbounded = std::numeric_limits<long>::max() / 4;

    Series() = default;
    Series(long lo, long hi) : lo_(lo), hi_(hi) { check_window(); }
    static Series zero() { return Series(0, kUnbounded); }
    static Series constant(Coeff c) { return monomial(std::move(c), 0); }
    static Series monomial(Coeff c, long n) {
        Series s(n, kUnbounded);
        s.set(n, std::move(c));
        return s;
    }
    // Exact finite Laurent polynomial from exponent -> coefficient pairs.
    static Series exact(const std::map<long, Coeff>& terms) {
        long lo = 0;
        for (const auto& [n, c] : terms)
            if (!c.is_zero()) { lo = n; break; }
        Series s(lo, kUnbounded);
        for (const auto& [n, c] : terms) s.set(n, c);
        return s;
    }

    long lo() const { return lo_; }
    long hi() const { return hi_; }
    bool bounded() const { return hi_ < kUnbounded; }
    const std::map<long, Coeff>& terms() const { return coeffs_; }

    // Exact coefficient; outside the window is an error.
    Coeff coefficient(long n) const {
        if (n < lo_ || n > hi_)
            throw OutOfWindow("coefficient q^" + std::to_string(n) + " outside window " + window_str());
        return at(n);
    }
    // Coefficient with zero below the window; caller guarantees n <= hi.
    Coeff at(long n) const {
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? Coeff(0) : it->second;
    }
    void set(long n, Coeff c) {
        if (n < lo_ || n > hi_)
            throw OutOfWindow("cannot store q^" + std::to_string(n) + " outside window " + window_str());
        if (c.is_zero()) coeffs_.erase(n);
        else coeffs_[n] = std::move(c);
    }
    bool is_zero() const { return coeffs_.empty(); }
    // First nonzero exponent within the window.
    std::optional<long> valuation() const {
        if (coeffs_.empty()) return std::nullopt;
        return coeffs_.begin()->first;
    }

    Series truncated(long new_hi) const {
        Series r(lo_, std::min(hi_, new_hi));
        for (const auto& [n, c] : coeffs_)
            if (n <= r.hi_) r.coeffs_.emplace(n, c);
        return r;
    }
    Series shifted(long k) const {
        Series r(lo_ + k, hi_ >= kUnbounded ? kUnbounded : hi_ + k);
        for (const auto& [n, c] : coeffs_) r.coeffs_.emplace(n + k, c);
        return r;
    }

    Series& operator+=(const Series& o) { return accumulate(o, +1); }
    Series& operator-=(const Series& o) { return accumulate(o, -1); }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    Series operator-() const {
        Series r = *this;
        for (auto& [n, c] : r.coeffs_) c = -c;
        return r;
    }
    friend Series operator*(const Series& a, const Series& b) {
        const long lo = a.lo_ + b.lo_;
        const long hi = std::min(sat_add(a.hi_, b.lo_), sat_add(b.hi_, a.lo_));
        if (hi < lo) throw EmptyWindow("product window is empty");
        Series r(lo, hi);
        for (const auto& [n, x] : a.coeffs_) {
            if (n + b.lo_ > hi) break;
            for (const auto& [m, y] : b.coeffs_) {
                if (n + m > hi) break;
                auto [it, fresh] = r.coeffs_.try_emplace(n + m, x * y);
                if (!fresh) it->second += x * y;
            }
        }
        r.prune();
        return r;
    }
    Series& operator*=(const Series& o) { return *this = *this * o; }
    Series scaled(const Coeff& c) const {
        if (c.is_zero()) {
            Series r(lo_, hi_);
            return r;
        }
        Series r = *this;
        for (auto& [n, x] : r.coeffs_) x *= c;
        return r;
    }

    // Multiplicative inverse; needs a nonzero coefficient inside the window.
    Series inverse() const {
        auto v = valuation();
        if (!v) throw DivisionByZero("series is zero on its window " + window_str());
        const long val = *v;
        const Coeff lead_inv = Coeff(1) / coeffs_.begin()->second;
        const long len = bounded() ? hi_ - val : kUnbounded;
        if (len >= kUnbounded)
            if (coeffs_.size() != 1)
                throw PreconditionViolation("inverse of an exact series needs an explicit truncation");
        Series r(-val, len >= kUnbounded ? kUnbounded : -val + len);
        if (len >= kUnbounded) {
            r.set(-val, lead_inv);
            return r;
        }
        // u = q^{-val} * this, u_0 != 0; w = 1/u by the usual recursion.
        std::vector<Coeff> w;
        w.reserve(static_cast<std::size_t>(len + 1));
        for (long k = 0; k <= len; ++k) {
            Coeff acc = k == 0 ? Coeff(1) : Coeff(0);
            for (long j = 1; j <= k; ++j) {
                auto it = coeffs_.find(val + j);
                if (it != coeffs_.end()) acc -= it->second * w[static_cast<std::size_t>(k - j)];
            }
            w.push_back(acc * lead_inv);
        }
        for (long k = 0; k <= len; ++k) r.set(-val + k, w[static_cast<std::size_t>(k)]);
        return r;
    }
    // Inverse of an exact series cut at `len` terms beyond its valuation.
    Series inverse_truncated(long len) const {
        Series t = *this;
        auto v = valuation();
        if (!v) throw DivisionByZero("series is zero");
        if (!t.bounded()) t.hi_ = *v + len;
        return t.inverse();
    }

    template <class F>
    auto map(F&& f) const -> Series<std::decay_t<decltype(f(std::declval<const Coeff&>()))>> {
        Series<std::decay_t<decltype(f(std::declval<const Coeff&>()))>> r(lo_, hi_);
        for (const auto& [n, c] : coeffs_) r.set(n, f(c));
        return r;
    }

    // Same window and coefficients.
    friend bool operator==(const Series& a, const Series& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.coeffs_ == b.coeffs_;
    }
    // Coefficients agree on the common part of both windows, and zero-below
    // semantics agree on the overlap as well.
    bool agrees_with(const Series& o) const {
        const long lo = std::min(lo_, o.lo_);
        const long hi = std::min(hi_, o.hi_);
        for (const auto& [n, c] : coeffs_)
            if (n >= lo && n <= hi && !(o.at(n) == c)) return false;
        for (const auto& [n, c] : o.coeffs_)
            if (n >= lo && n <= hi && !(at(n) == c)) return false;
        return true;
    }

    std::string window_str() const {
        return "[" + std::to_string(lo_) + ", " + (bounded() ? std::to_string(hi_) : std::string("inf")) + "]";
    }

    static long sat_add(long a, long b) {
        if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
        return std::min(a + b, kUnbounded);
    }

private:
    void check_window() const {
        if (hi_ < lo_) throw EmptyWindow("empty window [" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }
    void prune() {
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
    }
    Series& accumulate(const Series& o, int sign) {
        const long lo = std::min(lo_, o.lo_);
        const long hi = std::min(hi_, o.hi_);
        if (hi < lo) throw EmptyWindow("sum window is empty");
        std::map<long, Coeff> out;
        for (auto& [n, c] : coeffs_)
            if (n <= hi) out.emplace(n, std::move(c));
        for (const auto& [n, c] : o.coeffs_) {
            if (n > hi) break;
            auto [it, fresh] = out.try_emplace(n, sign > 0 ? c : -c);
            if (!fresh) {
                if (sign > 0) it->second += c;
                else it->second -= c;
                if (it->second.is_zero()) out.erase(it);
            }
        }
        coeffs_ = std::move(out);
        lo_ = lo;
        hi_ = hi;
        return *this;
    }

    std::map<long, Coeff> coeffs_;
    long lo_ = 0;
    long hi_ = kUnbounded;
};

using QSeries = Series<RationalFunction3>;

}  // namespace capdesc
