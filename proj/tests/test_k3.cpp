#include "capdesc/errors.hpp"
#include "capdesc/k3.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace capdesc;
using namespace capdesc::k3;

namespace {

SurfaceBasis p2_basis() { return SurfaceBasis({{"1", 2, "pt"}, {"H", 1, "H"}, {"pt", 0, "1"}}); }

BWeightedPartition wp(std::vector<WeightedPartition::Pair> pairs) { return BWeightedPartition(std::move(pairs)); }

SeriesTable planted_relative(int d, const SurfaceBasis& basis, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coef(-5, 5);
    SeriesTable t;
    for (const auto& nu : weighted_partitions(d, basis)) {
        QSeries s(0, 3);
        for (long n = 0; n <= 3; ++n) s.set(n, RF3(Poly3::var(static_cast<int>(n % 3)).scaled(BigQ(coef(rng), 1))));
        t.emplace(nu, s);
    }
    return t;
}

}  // namespace

TEST_SUITE("k3") {
    TEST_CASE("basis") {
        const SurfaceBasis b = SurfaceBasis::k3();
        CHECK(b.classes().size() == 24);
        CHECK(b.graded_dimensions() == std::vector<int>{1, 22, 1});
        CHECK(b.dual("1") == "pt");
        CHECK(b.dual("e7") == "e7");
        CHECK(b.codim("pt") == 2);
        CHECK_THROWS_AS(SurfaceBasis({{"a", 2, "b"}, {"b", 1, "a"}}), SchemaError);
        CHECK_THROWS_AS(SurfaceBasis({{"a", 1, "a"}, {"a", 1, "a"}}), SchemaError);
    }

    TEST_CASE("weighted partitions") {
        const SurfaceBasis b = p2_basis();
        CHECK(weighted_partitions(1, b).size() == 3);
        CHECK(weighted_partitions(2, b).size() == 3 + 6);  // (2,γ) and multisets of two labels
        const auto k = weighted_partitions(2, SurfaceBasis::k3());
        CHECK(k.size() == 24 + 300);
        for (std::size_t i = 1; i < k.size(); ++i) CHECK(canonical_less(k[i - 1], k[i]));
        CHECK(dual(wp({{2, "1"}, {1, "e3"}}), SurfaceBasis::k3()) == wp({{2, "pt"}, {1, "e3"}}));
    }

    TEST_CASE("dimension filter") {
        const SurfaceBasis b = SurfaceBasis::k3();
        CHECK(dimension_filter(wp({{3, "pt"}}), wp({{3, "1"}}), b));
        CHECK(dimension_filter(wp({{1, "e1"}, {1, "e2"}}), wp({{1, "e3"}, {1, "e4"}}), b));
        CHECK(dimension_filter(wp({{1, "e1"}, {1, "e2"}}), wp({{2, "e3"}}), b));
        CHECK_FALSE(dimension_filter(wp({{1, "e1"}, {1, "e2"}}), wp({{1, "pt"}, {1, "e3"}}), b));
        CHECK_FALSE(dimension_filter(wp({{1, "1"}, {1, "e2"}}), wp({{2, "e3"}}), b));
        // swapping the arguments together with the involution preserves the balance
        const SurfaceBasis p2 = p2_basis();
        for (int d = 1; d <= 3; ++d) {
            const auto ws = weighted_partitions(d, p2);
            for (const auto& mu : ws)
                for (const auto& nu : ws)
                    CHECK(dimension_filter(mu, nu, p2) == dimension_filter(dual(nu, p2), dual(mu, p2), p2));
        }
        CHECK_THROWS_AS(dimension_filter(wp({{1, "pt"}}), wp({{2, "1"}}), b), SizeMismatch);
    }

    TEST_CASE("structural pairing values") {
        const SurfaceBasis b = SurfaceBasis::k3();
        CHECK(structural_pairing(wp({{1, "e5"}}), wp({{1, "e5"}}), b) == BigQ(1, 1));
        CHECK(structural_pairing(wp({{1, "1"}}), wp({{1, "pt"}}), b) == BigQ(1, 1));
        CHECK(structural_pairing(wp({{2, "e5"}}), wp({{2, "e5"}}), b) == BigQ(1, 2));
        CHECK(structural_pairing(wp({{1, "1"}, {1, "pt"}}), wp({{2, "pt"}}), b).is_zero());
        CHECK(structural_pairing(wp({{1, "e1"}, {1, "e2"}}), wp({{2, "e1"}}), b).is_zero());
    }

    TEST_CASE("length vanishing, small bases") {
        for (const auto& b : {p2_basis(), SurfaceBasis::k3()}) {
            const int max_d = b.classes().size() > 3 ? 2 : 4;
            for (int d = 1; d <= max_d; ++d) {
                const auto ws = weighted_partitions(d, b);
                for (const auto& mu : ws)
                    for (const auto& nu : ws)
                        if (mu.length() > nu.length()) CHECK(structural_pairing(mu, nu, b).is_zero());
            }
        }
    }

    TEST_CASE("matrix shape") {
        for (int d = 1; d <= 2; ++d) {
            const auto cp = correspondence_matrix_K3(d);
            CHECK(cp.upper_triangular());
            CHECK(cp.invertible());
            CHECK(static_cast<std::size_t>(cp.matrix.rows()) == cp.rows.size());
            // dense cross-check against the pairing itself
            for (std::size_t i = 0; i < cp.rows.size(); i += 7)
                for (std::size_t j = 0; j < cp.columns.size(); j += 5)
                    CHECK(cp.matrix.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                          structural_pairing(cp.rows[i], cp.columns[j], SurfaceBasis::k3()));
        }
        CHECK_THROWS_AS(correspondence_matrix_K3(0), PreconditionViolation);
    }

    TEST_CASE("degeneration round trip") {
        for (int d = 1; d <= 3; ++d) {
            const SurfaceBasis b = d == 3 ? p2_basis() : SurfaceBasis::k3();
            const SeriesTable rel = planted_relative(d, b, 40 + static_cast<unsigned long>(d));
            const SeriesTable abs = forward_degeneration(rel, d, b);
            const SeriesTable back = invert_degeneration(abs, d, b);
            REQUIRE(back.size() == rel.size());
            for (const auto& [k, v] : rel) CHECK(back.at(k) == v);
        }
        // zero in, zero out
        SeriesTable zeros;
        for (const auto& mu : weighted_partitions(2, p2_basis())) zeros.emplace(mu, QSeries::zero());
        for (const auto& [k, v] : invert_degeneration(zeros, 2, p2_basis())) CHECK(v.is_zero());
        zeros.erase(zeros.begin());
        CHECK_THROWS_AS(invert_degeneration(zeros, 2, p2_basis()), PreconditionViolation);
    }
}
