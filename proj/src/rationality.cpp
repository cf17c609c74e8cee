#include "capdesc/rationality.hpp"

#include "capdesc/linalg.hpp"

#include <random>

namespace capdesc {

namespace {

// Univariate polynomials in q over an exact field, low degree first.
template <class K>
using UPoly = std::vector<K>;

template <class K>
void trim(UPoly<K>& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

template <class K>
std::pair<UPoly<K>, UPoly<K>> divmod(UPoly<K> a, const UPoly<K>& b) {
    trim(a);
    UPoly<K> q;
    if (a.size() < b.size()) return {q, a};
    const long db = static_cast<long>(b.size()) - 1;
    q.assign(a.size() - b.size() + 1, K(0));
    const K inv = K(1) / b.back();
    for (long k = static_cast<long>(a.size()) - 1; k >= db; --k) {
        if (a[static_cast<std::size_t>(k)].is_zero()) continue;
        const K f = a[static_cast<std::size_t>(k)] * inv;
        q[static_cast<std::size_t>(k - db)] = f;
        for (long j = 0; j <= db; ++j) a[static_cast<std::size_t>(k - db + j)] -= f * b[static_cast<std::size_t>(j)];
    }
    trim(a);
    trim(q);
    return {q, a};
}

template <class K>
UPoly<K> gcd(UPoly<K> a, UPoly<K> b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

template <class K>
struct Core {
    std::optional<std::pair<UPoly<K>, UPoly<K>>> fit;
    std::optional<long> residual;  // index into the window
};

// Σ_{j<=m} d_j c_{k-j} = 0 for n < k < L with d_0 = 1.
template <class K>
std::optional<UPoly<K>> denominator(const std::vector<K>& c, int n, int m, std::size_t upto) {
    const auto rows = static_cast<Eigen::Index>(upto > static_cast<std::size_t>(n + 1) ? upto - static_cast<std::size_t>(n + 1) : 0);
    Mat<K> a(rows, m);
    Vec<K> b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const long k = n + 1 + r;
        b(r) = -c[static_cast<std::size_t>(k)];
        for (int j = 1; j <= m; ++j) a(r, j - 1) = k - j >= 0 ? c[static_cast<std::size_t>(k - j)] : K(0);
    }
    if (m == 0) {
        for (Eigen::Index r = 0; r < rows; ++r)
            if (!b(r).is_zero()) return std::nullopt;
        return UPoly<K>{K(1)};
    }
    auto x = solve_any<K>(std::move(a), std::move(b));
    if (!x) return std::nullopt;
    UPoly<K> d{K(1)};
    for (int j = 0; j < m; ++j) d.push_back((*x)(j));
    return d;
}

template <class K>
Core<K> fit_core(const std::vector<K>& c, int n, int min_m, int max_m) {
    Core<K> out;
    for (int m = min_m; m <= max_m; ++m) {
        auto d = denominator(c, n, m, c.size());
        if (!d) continue;
        UPoly<K> num(static_cast<std::size_t>(n + 1), K(0));
        for (int k = 0; k <= n; ++k)
            for (int j = 0; j <= std::min(k, m); ++j)
                if (!(*d)[static_cast<std::size_t>(j)].is_zero())
                    num[static_cast<std::size_t>(k)] += (*d)[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(k - j)];
        trim(num);
        trim(*d);
        if (!num.empty()) {
            const UPoly<K> g = gcd(num, *d);
            if (g.size() > 1) {
                num = divmod(num, g).first;
                *d = divmod(*d, g).first;
            }
            const K lead = K(1) / (*d)[0];
            for (auto& x : num) x *= lead;
            for (auto& x : *d) x *= lead;
        } else {
            *d = UPoly<K>{K(1)};
        }
        out.fit = std::make_pair(std::move(num), std::move(*d));
        return out;
    }
    // Shortest prefix of the equations that is already inconsistent.
    for (std::size_t upto = static_cast<std::size_t>(n + 2); upto <= c.size(); ++upto)
        if (!denominator(c, n, max_m, upto)) {
            out.residual = static_cast<long>(upto) - 1;
            break;
        }
    return out;
}

struct Window {
    long lo;
    std::size_t length;
};

Window window_of(const QSeries& s, int n, int m) {
    long hi = s.hi();
    if (!s.bounded()) {
        hi = s.lo() + n + m + 1;
        if (!s.terms().empty()) hi = std::max(hi, s.terms().rbegin()->first + n + m + 1);
    }
    const auto length = static_cast<std::size_t>(hi - s.lo() + 1);
    if (n < 0 || m < 0) throw PreconditionViolation("degree bounds must be non-negative");
    if (length < static_cast<std::size_t>(n + m + 2))
        throw InsufficientWindow("window " + s.window_str() + " holds " + std::to_string(length) + " terms; degrees (" +
                                 std::to_string(n) + "," + std::to_string(m) + ") need " + std::to_string(n + m + 2));
    return {s.lo(), length};
}

RationalFit make_fit(std::pair<UPoly<RF3>, UPoly<RF3>> nd, long shift) {
    RationalFit f;
    f.shift = shift;
    f.numerator = std::move(nd.first);
    f.denominator = std::move(nd.second);
    return f;
}

FitOutcome finish(RationalFit fit, const QSeries& series, const Window& w) {
    fit.certified_lo = w.lo;
    fit.certified_hi = w.lo + static_cast<long>(w.length) - 1;
    if (!verify_fit(fit, series)) throw InconsistentSystem("internal: reconstructed fit does not reproduce its window");
    FitOutcome out;
    out.fit = std::move(fit);
    return out;
}

}  // namespace

QSeries RationalFit::expand(long lo, long hi) const {
    QSeries s(lo, hi);
    if (numerator.empty()) return s;
    std::vector<RF3> g;
    for (long k = 0; shift + k <= hi; ++k) {
        RF3 acc = k < static_cast<long>(numerator.size()) ? numerator[static_cast<std::size_t>(k)] : RF3(0);
        for (long j = 1; j <= std::min<long>(k, static_cast<long>(denominator.size()) - 1); ++j)
            acc -= denominator[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)];
        if (shift + k >= lo) s.set(shift + k, acc);
        g.push_back(std::move(acc));
    }
    return s;
}

std::string RationalFit::str() const {
    auto render = [](const std::vector<RF3>& p) {
        std::string s;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + p[k].str() + ")";
            if (k > 0) s += "*q" + (k > 1 ? "^" + std::to_string(k) : std::string());
        }
        return s.empty() ? std::string("0") : s;
    };
    std::string out = "(" + render(numerator) + ")/(" + render(denominator) + ")";
    if (shift != 0) out = "q^" + std::to_string(shift) + "*" + out;
    return out;
}

bool verify_fit(const RationalFit& fit, const QSeries& series) {
    if (fit.denominator.empty() || !fit.denominator[0].is_one()) return false;
    long hi = series.hi();
    if (!series.bounded()) {
        hi = series.terms().empty() ? series.lo() : series.terms().rbegin()->first;
        hi += static_cast<long>(fit.numerator.size() + fit.denominator.size());
    }
    const long lo = std::min(series.lo(), fit.shift);
    const QSeries e = fit.expand(lo, hi);
    for (long k = lo; k <= hi; ++k)
        if (!(e.at(k) == (k < series.lo() ? RF3(0) : series.at(k)))) return false;
    return true;
}

FitOutcome reconstruct(const QSeries& series, int max_num_deg, int max_den_deg) {
    const Window w = window_of(series, max_num_deg, max_den_deg);
    std::vector<RF3> c;
    for (std::size_t k = 0; k < w.length; ++k) c.push_back(series.at(w.lo + static_cast<long>(k)));
    auto core = fit_core<RF3>(c, max_num_deg, 0, max_den_deg);
    if (!core.fit) {
        FitOutcome out;
        if (core.residual) out.residual_order = w.lo + *core.residual;
        out.reason = "no fit with numerator degree <= " + std::to_string(max_num_deg) + " and denominator degree <= " +
                     std::to_string(max_den_deg) + " matches the window";
        return out;
    }
    return finish(make_fit(std::move(*core.fit), w.lo), series, w);
}

FitOutcome reconstruct_multivariate(const QSeries& series, int max_num_deg, int max_den_deg,
                                    const std::vector<std::array<BigQ, 3>>& probes) {
    if (probes.empty()) throw PreconditionViolation("multivariate reconstruction needs at least one probe point");
    const Window w = window_of(series, max_num_deg, max_den_deg);
    std::optional<std::pair<int, int>> pattern;
    for (const auto& p : probes) {
        std::vector<BigQ> c;
        for (std::size_t k = 0; k < w.length; ++k) c.push_back(series.at(w.lo + static_cast<long>(k)).specialize(p));
        auto core = fit_core<BigQ>(c, max_num_deg, 0, max_den_deg);
        if (!core.fit) {
            FitOutcome out;
            if (core.residual) out.residual_order = w.lo + *core.residual;
            out.reason = "no fit at probe (" + p[0].str() + ", " + p[1].str() + ", " + p[2].str() + ")";
            return out;
        }
        const std::pair<int, int> here{static_cast<int>(core.fit->first.size()) - 1, static_cast<int>(core.fit->second.size()) - 1};
        if (pattern && *pattern != here) {
            FitOutcome out;
            out.reason = "specializations disagree on the degree pattern: (" + std::to_string(pattern->first) + "," +
                         std::to_string(pattern->second) + ") vs (" + std::to_string(here.first) + "," +
                         std::to_string(here.second) + ")";
            return out;
        }
        pattern = here;
    }
    std::vector<RF3> c;
    for (std::size_t k = 0; k < w.length; ++k) c.push_back(series.at(w.lo + static_cast<long>(k)));
    const int m = pattern->second;
    auto core = fit_core<RF3>(c, max_num_deg, m, m);
    if (!core.fit) {
        FitOutcome out;
        if (core.residual) out.residual_order = w.lo + *core.residual;
        out.reason = "exact solve at the probed degree pattern is inconsistent";
        return out;
    }
    return finish(make_fit(std::move(*core.fit), w.lo), series, w);
}

std::vector<std::array<BigQ, 3>> probe_points(std::size_t count, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-19, 19), den(1, 7);
    std::vector<std::array<BigQ, 3>> out(count);
    for (auto& p : out)
        for (auto& x : p) {
            long n = 0;
            while (n == 0) n = num(rng);
            x = BigQ(n, den(rng));
        }
    return out;
}

FitOutcome reconstruct_escalating(const QSeries& series) {
    FitOutcome last;
    last.reason = "window too short for any degree bound";
    const long length = series.bounded() ? series.hi() - series.lo() + 1 : 0;
    for (int b = 1; series.bounded() ? 2L * b + 2 <= length : b <= 64; b *= 2) {
        last = reconstruct(series, b, b);
        if (last.ok()) return last;
    }
    return last;
}

}  // namespace capdesc
