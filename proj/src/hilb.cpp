#include "capdesc/hilb.hpp"

#include "capdesc/errors.hpp"
#include "capdesc/linalg.hpp"

#include <algorithm>
#include <functional>

namespace capdesc::hilb {

namespace {

const RF3 kS1 = RF3::var(0);
const RF3 kS2 = RF3::var(1);

// Jack parameter lives in the first variable while computing in Q(a).
const RF3& jack_a() { return kS1; }

// p_μ = Σ_λ R[μ][λ] m_λ: R counts maps from parts of μ to rows of λ whose
// fibres sum to the parts of λ.
long power_to_monomial_count(const Partition& mu, const Partition& lambda) {
    std::vector<int> remaining(lambda.begin(), lambda.end());
    long count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == static_cast<std::size_t>(mu.length())) {
            if (std::all_of(remaining.begin(), remaining.end(), [](int r) { return r == 0; })) ++count;
            return;
        }
        for (auto& r : remaining) {
            if (r >= mu[i]) {
                r -= mu[i];
                rec(i + 1);
                r += mu[i];
            }
        }
    };
    rec(0);
    return count;
}

RF3 power_inner(const std::map<Partition, RF3>& x, const std::map<Partition, RF3>& y) {
    RF3 acc;
    for (const auto& [mu, c] : x) {
        auto it = y.find(mu);
        if (it == y.end() || c.is_zero() || it->second.is_zero()) continue;
        acc += c * it->second * RF3(BigQ(centralizer_order(mu))) * jack_a().pow(mu.length());
    }
    return acc;
}

// θ(a) of degree <= top  ->  s2^top θ(-s1/s2).
RF3 homogenize_jack(const Poly3& theta, long top) {
    Poly3 value;
    for (const auto& t : theta.terms()) {
        const long k = t.mono.exp(0);
        if (k > top) throw PreconditionViolation("internal: Jack coefficient degree exceeds d - l(mu)");
        const BigQ sign = (k % 2) ? BigQ(-1) : BigQ(1);
        value += Poly3(Monomial(static_cast<unsigned>(k), static_cast<unsigned>(top - k), 0), t.coeff * sign);
    }
    return RF3(value);
}

HilbClass nakajima_from_jacks(const std::map<Partition, std::map<Partition, Poly3>>& jacks, const Partition& mu) {
    HilbClass h{mu.size(), {}};
    for (const auto& [lambda, row] : jacks) {
        auto it = row.find(mu);
        h.values.emplace(lambda, it == row.end() ? RF3(0) : homogenize_jack(it->second, mu.size() - mu.length()));
    }
    return h;
}

}  // namespace

const RF3& HilbClass::at(const Partition& lambda) const {
    auto it = values.find(lambda);
    if (it == values.end()) throw PreconditionViolation("no fixed point " + lambda.str() + " in class");
    return it->second;
}

std::vector<std::pair<int, int>> boxes(const Partition& lambda) {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < lambda.length(); ++r)
        for (int c = 0; c < lambda[static_cast<std::size_t>(r)]; ++c) out.emplace_back(r, c);
    return out;
}

int arm(const Partition& lambda, int row, int col) { return lambda[static_cast<std::size_t>(row)] - col - 1; }

int leg(const Partition& lambda, int row, int col) {
    int height = 0;
    for (int p : lambda)
        if (p > col) ++height;
    return height - row - 1;
}

RF3 tangent_euler(const Partition& lambda) {
    if (lambda.empty()) throw PreconditionViolation("tangent_euler needs a nonempty partition");
    Poly3 acc(1);
    const Poly3 s1 = Poly3::var(0), s2 = Poly3::var(1);
    for (auto [r, c] : boxes(lambda)) {
        const long a = arm(lambda, r, c), l = leg(lambda, r, c);
        acc *= (s1.scaled(BigQ(a + 1)) - s2.scaled(BigQ(l))) * (s2.scaled(BigQ(l + 1)) - s1.scaled(BigQ(a)));
    }
    return RF3(acc);
}

HilbClass unit_class(int d) {
    HilbClass h{d, {}};
    for (const auto& lambda : enumerate_partitions(d)) h.values.emplace(lambda, RF3(1));
    return h;
}

HilbClass descendent_class(int c, int d) {
    if (c < 0) throw PreconditionViolation("descendent order must be non-negative");
    const unsigned n = static_cast<unsigned>(c + 2);
    // Degree-n part of exp(x s1 + y s2) is (x s1 + y s2)^n / n!.
    auto degree_part = [n](long x, long y) {
        const Poly3 lin = Poly3::var(0).scaled(BigQ(x)) + Poly3::var(1).scaled(BigQ(y));
        return lin.pow(n);
    };
    const BigQ inv_fact = factorial(n).inverse();
    const Poly3 s1s2 = Poly3::var(0) * Poly3::var(1);
    HilbClass h{d, {}};
    for (const auto& lambda : enumerate_partitions(d)) {
        Poly3 acc;
        for (auto [r, col] : boxes(lambda)) {
            acc += degree_part(col, r);
            acc -= degree_part(col + 1, r);
            acc -= degree_part(col, r + 1);
            acc += degree_part(col + 1, r + 1);
        }
        auto q = acc.divide_exact(s1s2);
        if (!q) throw PreconditionViolation("internal: descendent numerator not divisible by s1 s2");
        h.values.emplace(lambda, RF3(q->scaled(inv_fact)));
    }
    return h;
}

HilbClass multiply(const HilbClass& a, const HilbClass& b) {
    if (a.d != b.d) throw SizeMismatch("classes on different Hilbert schemes");
    HilbClass h{a.d, {}};
    for (const auto& [lambda, v] : a.values) h.values.emplace(lambda, v * b.at(lambda));
    return h;
}

HilbClass scale(const HilbClass& a, const RF3& c) {
    HilbClass h = a;
    for (auto& [lambda, v] : h.values) v *= c;
    return h;
}

HilbClass descendent_product(const Partition& alpha, int d) {
    HilbClass h = unit_class(d);
    for (int part : alpha) h = multiply(h, descendent_class(part, d));
    return h;
}

std::map<Partition, std::map<Partition, Poly3>> jack_integral_form(int d) {
    const auto parts = enumerate_partitions(d);
    const auto n = static_cast<Eigen::Index>(parts.size());

    MatQ r = zero_matrix<BigQ>(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            r(i, j) = BigQ(power_to_monomial_count(parts[static_cast<std::size_t>(i)], parts[static_cast<std::size_t>(j)]));
    // p_μ = Σ_λ R(μ,λ) m_λ  =>  m_λ = Σ_μ (R^{-1})(λ,μ) p_μ; row λ of R^{-1}
    // solves R^T x = e_λ.
    const ExactLU<BigQ> lu_t(r.transpose());
    std::map<Partition, std::map<Partition, RF3>> monomial_in_p;
    for (Eigen::Index l = 0; l < n; ++l) {
        Vec<BigQ> e = Vec<BigQ>::Constant(n, BigQ(0));
        e(l) = BigQ(1);
        Vec<BigQ> x = lu_t.solve(e);
        auto& row = monomial_in_p[parts[static_cast<std::size_t>(l)]];
        for (Eigen::Index m = 0; m < n; ++m)
            if (!x(m).is_zero()) row.emplace(parts[static_cast<std::size_t>(m)], RF3(x(m)));
    }

    // Gram-Schmidt from (1^d) upwards (ascending lex refines dominance).
    std::vector<Partition> order(parts.rbegin(), parts.rend());
    std::map<Partition, std::map<Partition, RF3>> monic_jack;
    std::map<Partition, RF3> norms;
    std::vector<Partition> done;
    for (const auto& lambda : order) {
        std::map<Partition, RF3> v = monomial_in_p.at(lambda);
        for (const auto& mu : done) {
            const RF3 coeff = power_inner(monomial_in_p.at(lambda), monic_jack.at(mu)) / norms.at(mu);
            if (coeff.is_zero()) continue;
            for (const auto& [nu, c] : monic_jack.at(mu)) {
                v[nu] -= coeff * c;
            }
        }
        std::erase_if(v, [](const auto& kv) { return kv.second.is_zero(); });
        norms.emplace(lambda, power_inner(v, v));
        monic_jack.emplace(lambda, std::move(v));
        done.push_back(lambda);
    }

    std::map<Partition, std::map<Partition, Poly3>> out;
    for (const auto& lambda : parts) {
        RF3 c(1);
        for (auto [row, col] : boxes(lambda))
            c *= jack_a() * RF3(static_cast<long>(arm(lambda, row, col))) +
                 RF3(static_cast<long>(leg(lambda, row, col) + 1));
        auto& target = out[lambda];
        for (const auto& [mu, coeff] : monic_jack.at(lambda)) {
            const RF3 theta = coeff * c;
            if (!theta.is_polynomial())
                throw PreconditionViolation("internal: integral-form Jack coefficient is not polynomial");
            target.emplace(mu, theta.num());
        }
    }
    return out;
}

HilbClass nakajima_in_fixed_points(const Partition& mu) {
    return nakajima_from_jacks(jack_integral_form(mu.size()), mu);
}

RF3 pairing(const HilbClass& a, const HilbClass& b) {
    if (a.d != b.d) throw SizeMismatch("pairing classes on different Hilbert schemes");
    RF3 acc;
    for (const auto& [lambda, v] : a.values) {
        const RF3& w = b.at(lambda);
        if (v.is_zero() || w.is_zero()) continue;
        acc += v * w / tangent_euler(lambda);
    }
    return acc;
}

HilbData::HilbData(int d) : d_(d), points_(enumerate_partitions(d)) {
    if (d < 1) throw PreconditionViolation("Hilbert scheme data needs d >= 1");
    for (const auto& lambda : points_) euler_.emplace(lambda, tangent_euler(lambda));
    const auto jacks = jack_integral_form(d);
    for (const auto& mu : points_) nakajima_.emplace(mu, nakajima_from_jacks(jacks, mu));
}

RF3 HilbData::descendent_pairing(const Partition& alpha, const Partition& lambda) const {
    const HilbClass tau = descendent_product(alpha, d_);
    const HilbClass& nak = nakajima_.at(lambda);
    RF3 acc;
    for (const auto& p : points_) {
        const RF3& v = tau.at(p);
        const RF3& w = nak.at(p);
        if (v.is_zero() || w.is_zero()) continue;
        acc += v * w / euler_.at(p);
    }
    return acc * (kS1 * kS2).pow(alpha.length());
}

RF3 calibration_value(int c) {
    if (c < 1) throw PreconditionViolation("calibration needs c >= 1");
    const HilbClass tau = descendent_class(c - 1, c);
    return pairing(tau, nakajima_in_fixed_points(Partition{c})) * RF3(kS1 * kS2);
}

CorrespondenceMatrix correspondence_matrix(int d) {
    if (d < 1) throw PreconditionViolation("correspondence matrix needs d >= 1");
    const HilbData data(d);
    CorrespondenceMatrix cm;
    cm.d = d;
    cm.row_gammas = length_order(d);
    cm.columns = length_order(d);
    const auto n = static_cast<Eigen::Index>(cm.columns.size());
    cm.matrix = zero_matrix<RF3>(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Partition alpha = shift_down(cm.row_gammas[static_cast<std::size_t>(i)]);
        cm.row_alphas.push_back(alpha);
        for (Eigen::Index j = 0; j < n; ++j)
            cm.matrix(i, j) = data.descendent_pairing(alpha, cm.columns[static_cast<std::size_t>(j)]);
    }
    return cm;
}

bool is_upper_triangular(const MatRF& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < std::min(i, m.cols()); ++j)
            if (!m(i, j).is_zero()) return false;
    return true;
}

}  // namespace capdesc::hilb
