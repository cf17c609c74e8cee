#include "capdesc/errors.hpp"
#include "capdesc/rationality.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace capdesc;

namespace {

QSeries from_coeffs(const std::vector<RF3>& cs, long lo = 0) {
    QSeries s(lo, lo + static_cast<long>(cs.size()) - 1);
    for (std::size_t k = 0; k < cs.size(); ++k) s.set(lo + static_cast<long>(k), cs[k]);
    return s;
}

// N/D equal as rational functions of q.
bool same_ratio(const RationalFit& fit, const std::vector<RF3>& num, const std::vector<RF3>& den) {
    return oracle::poly_mul(fit.numerator, den) == oracle::poly_mul(num, fit.denominator);
}

}  // namespace

TEST_SUITE("rationality") {
    TEST_CASE("geometric series") {
        const auto out = reconstruct(from_coeffs({1, 1, 1, 1, 1}), 0, 1);
        REQUIRE(out.ok());
        CHECK(out.fit->numerator == std::vector<RF3>{RF3(1)});
        CHECK(out.fit->denominator == std::vector<RF3>{RF3(1), RF3(-1)});
    }

    TEST_CASE("q over (1-q)^2") {
        const auto out = reconstruct(from_coeffs({0, 1, 2, 3, 4, 5}), 1, 2);
        REQUIRE(out.ok());
        CHECK(same_ratio(*out.fit, {RF3(0), RF3(1)}, {RF3(1), RF3(-2), RF3(1)}));
        CHECK(out.fit->denominator_degree() == 2);
    }

    TEST_CASE("factorial growth") {
        std::vector<RF3> fact;
        for (int k = 0; k <= 6; ++k) fact.push_back(RF3(factorial(k)));
        const QSeries short_window = from_coeffs(fact);
        for (int n = 0; n <= 3; ++n)
            for (int m = 0; m <= 3; ++m) {
                if (n + m + 2 > 7) {
                    CHECK_THROWS_AS(reconstruct(short_window, n, m), InsufficientWindow);
                    continue;
                }
                const auto out = reconstruct(short_window, n, m);
                CHECK_FALSE(out.ok());
                CHECK(out.residual_order.has_value());
            }
        for (int k = 7; k <= 13; ++k) fact.push_back(RF3(factorial(k)));
        const auto out = reconstruct(from_coeffs(fact), 3, 3);
        CHECK_FALSE(out.ok());
        REQUIRE(out.residual_order.has_value());
        CHECK(*out.residual_order <= 13);
    }

    TEST_CASE("coefficients in the weight field") {
        const RF3 s1 = RF3::var(0), s2 = RF3::var(1);
        // s1 / (1 - s2 q)
        std::vector<RF3> cs;
        RF3 p = s1;
        for (int k = 0; k < 6; ++k, p *= s2) cs.push_back(p);
        const auto out = reconstruct(from_coeffs(cs), 0, 1);
        REQUIRE(out.ok());
        CHECK(same_ratio(*out.fit, {s1}, {RF3(1), -s2}));

        const auto mv = reconstruct_multivariate(from_coeffs(cs), 2, 2, probe_points(4, 17));
        REQUIRE(mv.ok());
        CHECK(same_ratio(*mv.fit, {s1}, {RF3(1), -s2}));
    }

    TEST_CASE("constant series") {
        const auto out = reconstruct_multivariate(from_coeffs({RF3::var(2), 0, 0, 0}), 1, 1, probe_points(3, 1));
        REQUIRE(out.ok());
        CHECK(out.fit->numerator_degree() == 0);
        CHECK(out.fit->denominator_degree() == 0);
    }

    TEST_CASE("disagreeing specializations") {
        const RF3 a = RF3::var(0) - RF3(1);
        std::vector<RF3> cs;
        RF3 p(1);
        for (int k = 0; k < 6; ++k, p *= a) cs.push_back(p);
        const std::vector<std::array<BigQ, 3>> probes{{BigQ(3, 1), BigQ(2, 1), BigQ(5, 1)}, {BigQ(1, 1), BigQ(2, 1), BigQ(5, 1)}};
        const auto out = reconstruct_multivariate(from_coeffs(cs), 2, 2, probes);
        CHECK_FALSE(out.ok());
        CHECK(out.reason.find("disagree") != std::string::npos);
    }

    TEST_CASE("verify and perturb") {
        const QSeries s = from_coeffs({1, 2, 4, 8, 16, 32});
        const auto out = reconstruct(s, 0, 1);
        REQUIRE(out.ok());
        CHECK(verify_fit(*out.fit, s));
        RationalFit bent = *out.fit;
        bent.numerator[0] += RF3(1);
        CHECK_FALSE(verify_fit(bent, s));
    }

    TEST_CASE("laurent window") {
        // q^-2 / (1 - 3q)
        std::vector<RF3> cs;
        RF3 p(1);
        for (int k = 0; k < 6; ++k, p *= RF3(3)) cs.push_back(p);
        const QSeries s = from_coeffs(cs, -2);
        const auto out = reconstruct(s, 1, 1);
        REQUIRE(out.ok());
        CHECK(out.fit->shift == -2);
        CHECK(verify_fit(*out.fit, s));
        CHECK(out.fit->expand(-2, 3).agrees_with(s));
    }

    TEST_CASE("degree minimality") {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 10; ++trial) {
            const auto num = oracle::random_qpoly(rng, 2, false);
            const auto den = oracle::random_qpoly(rng, 2, true);
            const QSeries s = from_coeffs(oracle::expand_ratio(num, den, 12));
            const auto out = reconstruct(s, 4, 4);
            REQUIRE(out.ok());
            const int dd = out.fit->denominator_degree();
            CHECK(dd <= 2);
            for (int m = 0; m < dd; ++m)
                for (int n = 0; n <= 4; ++n) CHECK_FALSE(reconstruct(s, n, m).ok());
        }
    }

    TEST_CASE("escalation") {
        const QSeries s = from_coeffs({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
        const auto out = reconstruct_escalating(s);
        REQUIRE(out.ok());
        CHECK(verify_fit(*out.fit, s));
    }
}
