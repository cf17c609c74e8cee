#include "capdesc/poly3.hpp"

#include "capdesc/errors.hpp"

#include <algorithm>
#include <sstream>

namespace capdesc {

namespace {

constexpr unsigned kMaxExp = 0xffffu;

std::uint64_t pack(unsigned e1, unsigned e2, unsigned e3) {
    const unsigned d = e1 + e2 + e3;
    if (e1 > kMaxExp || e2 > kMaxExp || e3 > kMaxExp || d > kMaxExp)
        throw PreconditionViolation("monomial exponent overflow");
    return (std::uint64_t{d} << 48) | (std::uint64_t{e1} << 32) | (std::uint64_t{e2} << 16) | e3;
}

bool term_less(const Poly3::Term& a, const Poly3::Term& b) { return a.mono < b.mono; }

}  // namespace

Monomial::Monomial(unsigned e1, unsigned e2, unsigned e3) : key_(pack(e1, e2, e3)) {}

Monomial Monomial::var(int i, unsigned e) {
    std::array<unsigned, 3> x{0, 0, 0};
    x.at(static_cast<std::size_t>(i)) = e;
    return Monomial(x[0], x[1], x[2]);
}

bool Monomial::divides(const Monomial& o) const {
    return exp(0) <= o.exp(0) && exp(1) <= o.exp(1) && exp(2) <= o.exp(2);
}

Monomial Monomial::with_exp(int i, unsigned e) const {
    auto x = exps();
    x.at(static_cast<std::size_t>(i)) = e;
    return Monomial(x[0], x[1], x[2]);
}

Monomial monomial_gcd(const Monomial& a, const Monomial& b) {
    return Monomial(std::min(a.exp(0), b.exp(0)), std::min(a.exp(1), b.exp(1)),
                    std::min(a.exp(2), b.exp(2)));
}

Poly3::Poly3(long c) : Poly3(BigQ(c)) {}

Poly3::Poly3(BigQ c) {
    if (!c.is_zero()) terms_.push_back({Monomial{}, std::move(c)});
}

Poly3::Poly3(const Monomial& m, BigQ c) {
    if (!c.is_zero()) terms_.push_back({m, std::move(c)});
}

Poly3 Poly3::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), term_less);
    Poly3 p;
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coeff += t.coeff;
        } else {
            if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
            p.terms_.push_back(std::move(t));
        }
    }
    if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
    return p;
}

BigQ Poly3::constant_value() const {
    if (terms_.empty()) return BigQ(0);
    if (!is_constant()) throw PreconditionViolation("polynomial is not constant: " + str());
    return terms_[0].coeff;
}

unsigned Poly3::degree_in(int var) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exp(var));
    return d;
}

Monomial Poly3::min_monomial() const {
    if (terms_.empty()) return Monomial{};
    auto m = terms_[0].mono.exps();
    for (const auto& t : terms_)
        for (int i = 0; i < 3; ++i) m[i] = std::min(m[i], t.mono.exp(i));
    return Monomial(m[0], m[1], m[2]);
}

std::vector<Poly3> Poly3::coefficients_in(int var) const {
    std::vector<std::vector<Term>> buckets(degree_in(var) + 1);
    for (const auto& t : terms_) buckets[t.mono.exp(var)].push_back({t.mono.with_exp(var, 0), t.coeff});
    std::vector<Poly3> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
}

Poly3 Poly3::coefficient_in(int var, unsigned k) const {
    std::vector<Term> b;
    for (const auto& t : terms_)
        if (t.mono.exp(var) == k) b.push_back({t.mono.with_exp(var, 0), t.coeff});
    return from_terms(std::move(b));
}

void Poly3::add_scaled(const Poly3& o, int sign) {
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    while (i != terms_.end() || j != o.terms_.end()) {
        if (j == o.terms_.end() || (i != terms_.end() && i->mono < j->mono)) {
            out.push_back(std::move(*i++));
        } else if (i == terms_.end() || j->mono < i->mono) {
            out.push_back({j->mono, sign > 0 ? j->coeff : -j->coeff});
            ++j;
        } else {
            BigQ c = sign > 0 ? i->coeff + j->coeff : i->coeff - j->coeff;
            if (!c.is_zero()) out.push_back({i->mono, std::move(c)});
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
}

Poly3& Poly3::operator+=(const Poly3& o) { add_scaled(o, +1); return *this; }
Poly3& Poly3::operator-=(const Poly3& o) { add_scaled(o, -1); return *this; }

Poly3 operator*(const Poly3& a, const Poly3& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.terms_[0].coeff);
    if (b.is_constant()) return a.scaled(b.terms_[0].coeff);
    std::vector<Poly3::Term> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) prod.push_back({x.mono * y.mono, x.coeff * y.coeff});
    return Poly3::from_terms(std::move(prod));
}

Poly3 Poly3::operator-() const {
    Poly3 r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

Poly3 Poly3::scaled(const BigQ& c) const {
    if (c.is_zero()) return {};
    Poly3 r = *this;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
}

Poly3 Poly3::times_monomial(const Monomial& m) const {
    Poly3 r = *this;
    for (auto& t : r.terms_) t.mono = t.mono * m;
    return r;
}

Poly3 Poly3::divided_by_monomial(const Monomial& m) const {
    Poly3 r = *this;
    for (auto& t : r.terms_) t.mono = t.mono / m;
    return r;
}

Poly3 Poly3::pow(unsigned e) const {
    Poly3 result(1);
    Poly3 base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

std::optional<Poly3> Poly3::divide_exact(const Poly3& b) const {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (is_zero()) return Poly3{};
    if (b.is_constant()) return scaled(b.terms_[0].coeff.inverse());
    if (b.is_monomial()) {
        if (!b.terms_[0].mono.divides(min_monomial())) return std::nullopt;
        return divided_by_monomial(b.terms_[0].mono).scaled(b.terms_[0].coeff.inverse());
    }
    if (total_degree() < b.total_degree()) return std::nullopt;
    const Term& lb = b.leading();
    const BigQ lb_inv = lb.coeff.inverse();
    std::map<Monomial, BigQ> rem;
    for (const auto& t : terms_) rem.emplace(t.mono, t.coeff);
    std::vector<Term> quotient;
    while (!rem.empty()) {
        auto top = std::prev(rem.end());
        if (!lb.mono.divides(top->first)) return std::nullopt;
        const Monomial qm = top->first / lb.mono;
        const BigQ qc = top->second * lb_inv;
        for (const auto& t : b.terms_) {
            const Monomial m = t.mono * qm;
            auto [it, inserted] = rem.try_emplace(m, 0);
            it->second -= t.coeff * qc;
            if (it->second.is_zero()) rem.erase(it);
        }
        quotient.push_back({qm, qc});
    }
    return from_terms(std::move(quotient));
}

BigQ Poly3::evaluate(const std::array<BigQ, 3>& point) const {
    // Cache powers per variable; degrees are small.
    std::array<std::vector<BigQ>, 3> powers;
    for (int v = 0; v < 3; ++v) {
        const unsigned d = degree_in(v);
        powers[v].reserve(d + 1);
        powers[v].push_back(BigQ(1));
        for (unsigned k = 1; k <= d; ++k) powers[v].push_back(powers[v].back() * point[v]);
    }
    BigQ acc(0);
    for (const auto& t : terms_) {
        BigQ term = t.coeff;
        for (int v = 0; v < 3; ++v)
            if (unsigned e = t.mono.exp(v)) term *= powers[v][e];
        acc += term;
    }
    return acc;
}

Poly3 Poly3::compose(const std::array<Poly3, 3>& images) const {
    std::array<std::vector<Poly3>, 3> powers;
    for (int v = 0; v < 3; ++v) {
        const unsigned d = degree_in(v);
        powers[v].push_back(Poly3(1));
        for (unsigned k = 1; k <= d; ++k) powers[v].push_back(powers[v].back() * images[v]);
    }
    Poly3 acc;
    for (const auto& t : terms_) {
        Poly3 term(t.coeff);
        for (int v = 0; v < 3; ++v)
            if (unsigned e = t.mono.exp(v)) term *= powers[v][e];
        acc += term;
    }
    return acc;
}

Poly3 Poly3::monic() const {
    if (is_zero() || leading().coeff.is_one()) return *this;
    return scaled(leading().coeff.inverse());
}

Poly3 Poly3::primitive_integer() const {
    if (is_zero()) return *this;
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& t : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.raw().get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.raw().get_den_mpz_t());
    }
    return scaled(BigQ(den_lcm, num_gcd));
}

std::string render_monomial(const Monomial& m) {
    std::string out;
    for (int v = 0; v < 3; ++v) {
        const unsigned e = m.exp(v);
        if (!e) continue;
        if (!out.empty()) out += '*';
        out += "s" + std::to_string(v + 1);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

std::string Poly3::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const bool negative = it->coeff.sign() < 0;
        const BigQ mag = negative ? -it->coeff : it->coeff;
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (it->mono.is_one()) {
            os << mag.str();
        } else if (mag.is_one()) {
            os << render_monomial(it->mono);
        } else {
            os << mag.str() << '*' << render_monomial(it->mono);
        }
    }
    return os.str();
}

std::size_t Poly3::hash() const {
    std::size_t h = terms_.size();
    for (const auto& t : terms_) h = h * 1099511628211ULL ^ (t.mono.key() + 31 * t.coeff.hash());
    return h;
}

// ---- gcd ------------------------------------------------------------------

namespace {

Poly3 content_in(const Poly3& p, int var);

Poly3 primitive_in(const Poly3& p, int var) {
    Poly3 c = content_in(p, var);
    if (c.is_constant()) return p.primitive_integer();
    return p.divide_exact(c)->primitive_integer();
}

// Pseudo-remainder of a by b as polynomials in var; only its primitive part
// is used, so the power of lc(b) is not tracked.
Poly3 pseudo_remainder(Poly3 a, const Poly3& b, int var) {
    const unsigned db = b.degree_in(var);
    const Poly3 lcb = b.coefficient_in(var, db);
    while (!a.is_zero()) {
        const unsigned da = a.degree_in(var);
        if (da < db) break;
        const Poly3 lca = a.coefficient_in(var, da);
        a = lcb * a - (lca * b).times_monomial(Monomial::var(var, da - db));
        a = a.primitive_integer();
    }
    return a;
}

Poly3 gcd_primitive(Poly3 a, Poly3 b, int var) {
    if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);
    while (true) {
        Poly3 r = pseudo_remainder(a, b, var);
        if (r.is_zero()) return primitive_in(b, var);
        if (r.degree_in(var) == 0) return Poly3(1);
        a = std::move(b);
        b = primitive_in(r, var);
    }
}

// Heuristic gcd over Z: evaluate one variable at a large integer, recurse,
// and read the candidate back from its balanced base-xi digits. A candidate
// that divides both inputs is the gcd. Inputs are integer-primitive.
mpz_class max_norm(const Poly3& p) {
    mpz_class m = 0;
    for (const auto& t : p.terms()) {
        mpz_class a = abs(t.coeff.raw().get_num());
        if (a > m) m = a;
    }
    return m;
}

Poly3 evaluate_at(const Poly3& p, int var, const mpz_class& xi) {
    std::vector<mpz_class> powers{1};
    std::vector<Poly3::Term> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) {
        const unsigned e = t.mono.exp(var);
        while (powers.size() <= e) powers.push_back(powers.back() * xi);
        out.push_back({t.mono.with_exp(var, 0), t.coeff * BigQ(powers[e])});
    }
    return Poly3::from_terms(std::move(out));
}

Poly3 balanced_digits(Poly3 h, int var, const mpz_class& xi) {
    const mpz_class half = xi / 2;
    std::vector<Poly3::Term> out;
    for (unsigned i = 0; !h.is_zero(); ++i) {
        std::vector<Poly3::Term> digit;
        for (const auto& t : h.terms()) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), t.coeff.raw().get_num_mpz_t(), xi.get_mpz_t());
            if (r > half) r -= xi;
            if (r != 0) digit.push_back({t.mono, BigQ(r)});
        }
        const Poly3 g = Poly3::from_terms(digit);
        for (auto& t : digit) out.push_back({t.mono.with_exp(var, i), t.coeff});
        h = (h - g).scaled(BigQ(mpz_class(1), xi));
        if (i > 4096) return Poly3{};
    }
    return Poly3::from_terms(std::move(out));
}

// gcd of all coefficients of two integer polynomials.
BigQ integer_gcd(const Poly3& f, const Poly3& g) {
    mpz_class z = 0;
    for (const auto* p : {&f, &g})
        for (const auto& t : p->terms()) mpz_gcd(z.get_mpz_t(), z.get_mpz_t(), t.coeff.raw().get_num_mpz_t());
    return BigQ(z);
}

std::optional<Poly3> heuristic_gcd(const Poly3& f, const Poly3& g, int var) {
    if (var < 0) {
        mpz_class z;
        mpz_gcd(z.get_mpz_t(), f.constant_value().raw().get_num_mpz_t(), g.constant_value().raw().get_num_mpz_t());
        return Poly3(BigQ(z));
    }
    if (!f.uses_var(var) && !g.uses_var(var)) return heuristic_gcd(f, g, var - 1);
    // Integer contents carry part of the answer below the top level.
    const Poly3 pf = f.primitive_integer(), pg = g.primitive_integer();
    const unsigned deg = std::max(pf.degree_in(var), pg.degree_in(var));
    mpz_class xi = 2 * std::min(max_norm(pf), max_norm(pg)) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (mpz_sizeinbase(xi.get_mpz_t(), 2) * (deg + 1) > 60000) return std::nullopt;
        auto h = heuristic_gcd(evaluate_at(pf, var, xi), evaluate_at(pg, var, xi), var - 1);
        if (h) {
            Poly3 cand = balanced_digits(*h, var, xi);
            if (!cand.is_zero()) {
                cand = cand.primitive_integer();
                if (pf.divide_exact(cand) && pg.divide_exact(cand)) return cand.scaled(integer_gcd(f, g));
            }
        }
        xi = xi * 73794 / 27011;
    }
    return std::nullopt;
}

Poly3 content_in(const Poly3& p, int var) {
    Poly3 g;
    for (const auto& c : p.coefficients_in(var)) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_constant()) return Poly3(1);
    }
    return g;
}

}  // namespace

Poly3 gcd(const Poly3& a, const Poly3& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly3(1);
    if (a.is_monomial() || b.is_monomial())
        return Poly3(monomial_gcd(a.min_monomial(), b.min_monomial()), BigQ(1));

    const Monomial ma = a.min_monomial();
    const Monomial mb = b.min_monomial();
    const Poly3 g0(monomial_gcd(ma, mb), BigQ(1));
    Poly3 x = a.divided_by_monomial(ma);
    Poly3 y = b.divided_by_monomial(mb);
    if (x.is_constant() || y.is_constant()) return g0;

    // Cheap divisibility shortcuts cover the common cancellation patterns.
    if (x.total_degree() >= y.total_degree()) {
        if (x.divide_exact(y)) return (g0 * y).monic();
    } else if (y.divide_exact(x)) {
        return (g0 * x).monic();
    }

    if (auto h = heuristic_gcd(x.primitive_integer(), y.primitive_integer(), 2)) return (g0 * *h).monic();

    // A variable present in only one argument lives entirely in that
    // argument's content with respect to it.
    for (bool changed = true; changed;) {
        changed = false;
        for (int v = 0; v < 3; ++v) {
            const bool in_x = x.uses_var(v), in_y = y.uses_var(v);
            if (in_x && !in_y) { x = content_in(x, v); changed = true; }
            else if (in_y && !in_x) { y = content_in(y, v); changed = true; }
            if (x.is_constant() || y.is_constant()) return g0;
        }
    }

    int var = -1;
    unsigned best = ~0u;
    for (int v = 0; v < 3; ++v) {
        if (!x.uses_var(v)) continue;
        const unsigned d = std::max(x.degree_in(v), y.degree_in(v));
        if (d < best) { best = d; var = v; }
    }
    const Poly3 cx = content_in(x, var);
    const Poly3 cy = content_in(y, var);
    const Poly3 c = gcd(cx, cy);
    const Poly3 px = cx.is_constant() ? x : *x.divide_exact(cx);
    const Poly3 py = cy.is_constant() ? y : *y.divide_exact(cy);
    return (g0 * c * gcd_primitive(px, py, var)).monic();
}

}  // namespace capdesc
