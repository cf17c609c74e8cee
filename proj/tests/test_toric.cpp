#include "capdesc/errors.hpp"
#include "capdesc/geometries.hpp"
#include "capdesc/toric.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace capdesc;
using oracle::c;
using oracle::s;

namespace {

QSeries q_monomial(const Poly3& coeff, long n) { return QSeries::monomial(RF3(coeff), n); }

std::vector<ToricPolytope> all_geometries() {
    return {cap_u(), f2_x_p1(), fk_x_p1(3), fk_x_p1(7), a2_compactified(), local_curve(-1, -1), local_curve(0, -2)};
}

}  // namespace

TEST_SUITE("toric") {
    TEST_CASE("single edge markings match brute force") {
        const ToricPolytope g = local_curve(-1, -1);
        for (int d = 0; d <= 4; ++d) {
            const auto ms = enumerate_capped_markings(g, {{g.h2_basis[0], d}});
            CHECK(ms.size() == static_cast<std::size_t>(partition_count(d) * partition_count(d)));
            std::set<std::pair<std::vector<int>, std::vector<int>>> lib;
            for (const auto& m : ms) lib.insert({m.legs[0][0].parts(), m.legs[0][1].parts()});
            if (d == 0) CHECK(lib.size() == 1);
            else CHECK(lib == oracle::brute_edge_markings(d));
        }
    }

    TEST_CASE("markings on larger polytopes") {
        const ToricPolytope f2 = f2_x_p1();
        CHECK(enumerate_capped_markings(f2, {}).size() == 1);
        // C0 + Cinf: each of the two C edges can carry it, or none with the other
        const auto one_p = enumerate_capped_markings(f2, {{"P", 1}});
        CHECK(one_p.size() == 4);  // one of four P edges, (1),(1) on it
        CHECK_THROWS_AS(enumerate_capped_markings(f2, {{"Q", 1}}), UnsupportedClass);
        const ToricPolytope u = cap_u();
        CHECK(enumerate_capped_markings(u, {}).size() == 1);
    }

    TEST_CASE("gluing factors") {
        const WeightTriple w = standard_weights();
        CHECK(gluing_factor(Partition{1}, w, 0) == q_monomial(s(2) * s(3), -1));
        CHECK(gluing_factor(Partition{2}, w, 2) == q_monomial(c(-2) * s(1) * s(2), -2));
        CHECK(gluing_factor(Partition{1, 1}, w, 1) == q_monomial(c(2) * s(1).pow(2) * s(3).pow(2), -2));
        for (const auto& g : all_geometries())
            for (const auto& v : g.vertices)
                for (int i = 0; i < 3; ++i) CHECK(gluing_factor(Partition{}, v.weights, i) == QSeries::constant(RF3(1)));
    }

    TEST_CASE("tau0 scalar") {
        CHECK(tau0_scalar(Partition{1}, Partition{}, Partition{}) == RF3(s(2) * s(3)));
        CHECK(tau0_scalar(Partition{}, Partition{}, Partition{}).is_zero());
        CHECK(tau0_scalar(Partition{2}, Partition{1}, Partition{1, 1}) ==
              RF3(c(2) * s(2) * s(3) + s(1) * s(3) + c(2) * s(1) * s(2)));
    }

    TEST_CASE("geometry builders") {
        const ToricPolytope f2 = f2_x_p1();
        CHECK(f2.vertices.size() == 8);
        const Poly3 s1 = s(1), s2 = s(2), s3 = s(3);
        const std::map<std::string, std::array<Poly3, 2>> table{{"star0", {s1 - s2, c(2) * s2}},
                                                                {"bullet0", {s2 - s1, c(2) * s1}},
                                                                {"starbar0", {s1 - s2, c(-2) * s2}},
                                                                {"bulletbar0", {s2 - s1, c(-2) * s1}}};
        for (const auto& [id, ws] : table) {
            const auto& v = f2.vertices[static_cast<std::size_t>(f2.vertex_index(id))];
            CHECK(v.weights[0] == ws[0]);
            CHECK(v.weights[1] == ws[1]);
            CHECK(v.weights[2] == s3);
        }
        for (const auto& v : f2.vertices)
            for (const auto& w : v.weights) CHECK_FALSE(w.divide_exact(s1 + s2).has_value());

        for (int k : {1, 2, 5, 13}) {
            const ToricPolytope fk = fk_x_p1(k);
            CHECK(chern_pairing(fk, fk.edge_index("C+0")) == RF3(k + 2));
            CHECK(chern_pairing(fk, fk.edge_index("Lstar0")) == RF3(2));
            CHECK(chern_pairing(fk, fk.edge_index("P_star+")) == RF3(2));
            CHECK(chern_pairing(fk, fk.edge_index("C-0")) == RF3(2 - k));
        }
        for (const auto& g : all_geometries()) CHECK_NOTHROW(g.validate());
        CHECK(build_geometry("FkxP1(4)").vertices.size() == 8);
        CHECK(build_geometry("local_curve").name == local_curve(-1, -1).name);
        CHECK_THROWS(build_geometry("nonsense"));
    }

    TEST_CASE("broken geometry is rejected") {
        ToricPolytope g = local_curve(-1, -1);
        g.vertices[1].weights[0] = s(1);
        CHECK_THROWS_AS(g.validate(), SchemaError);
    }

    TEST_CASE("assemble") {
        const ToricPolytope g = local_curve(-1, -1);
        ProviderTable empty;
        CHECK(assemble(g, {}, {}, empty) == QSeries::constant(RF3(1)));

        // degree 1 with a symmetric one-leg vertex and a monomial edge
        const Poly3 e1 = s(1) + s(2) + s(3);
        const QSeries f = QSeries::exact({{0, RF3(1)}, {1, RF3(e1)}});
        ProviderTable t;
        t.insert(vertex_key(canonicalize(Partition{}, {Partition{1}, Partition{}, Partition{}}).key), f);
        const int e = g.edge_index("C");
        t.insert(edge_key(Partition{1}, Partition{1}, edge_key_weights(g, e)), q_monomial(c(1), 1));
        const auto& w0 = g.vertices[0].weights;
        const auto& w1 = g.vertices[1].weights;
        const Poly3 e1_inf = w1[0] + w1[1] + w1[2];
        const QSeries f_inf = QSeries::exact({{0, RF3(1)}, {1, RF3(e1_inf)}});
        const QSeries expect = f * f_inf * q_monomial(c(1), 1) * q_monomial(w0[1] * w0[2], -1) * q_monomial(w1[1] * w1[2], -1);
        CHECK(assemble(g, {}, {{g.h2_basis[0], 1}}, t) == expect);

        t.insert(vertex_key(canonicalize(Partition{}, {Partition{}, Partition{}, Partition{}}).key), QSeries::constant(RF3(1)));
        CHECK_THROWS_AS(assemble(g, {}, {{g.h2_basis[0], 2}}, t), MissingProviderEntry);
    }

    TEST_CASE("provider conventions") {
        ProviderTable bad_unit;
        bad_unit.insert(vertex_key(VertexKey{}), QSeries::constant(RF3(2)));
        CHECK_FALSE(validate_providers(bad_unit).clean());

        ProviderTable bad_desc;
        bad_desc.insert(vertex_key(VertexKey{Partition{1}, {}}), QSeries::constant(RF3(1)));
        CHECK_FALSE(validate_providers(bad_desc).clean());

        // C(∅|(1),∅,∅) alone: partners absent
        ProviderTable lone;
        lone.insert(vertex_key(VertexKey{Partition{}, {Partition{1}, Partition{}, Partition{}}}),
                    QSeries::constant(RF3(s(1))));
        const auto lr = validate_providers(lone);
        CHECK(lr.clean());
        CHECK(lr.uncheckable.size() == 1);

        // all three placements, consistent and then broken
        ProviderTable sym;
        const std::array<LegTriple, 3> placements{LegTriple{Partition{1}, Partition{}, Partition{}},
                                                  LegTriple{Partition{}, Partition{1}, Partition{}},
                                                  LegTriple{Partition{}, Partition{}, Partition{1}}};
        const std::array<Poly3, 3> along{s(2) * s(3), s(1) * s(3), s(1) * s(2)};
        for (int i = 0; i < 3; ++i) sym.insert(vertex_key(VertexKey{Partition{}, placements[i]}), QSeries::constant(RF3(along[i])));
        const auto sr = validate_providers(sym);
        CHECK(sr.clean());
        CHECK(sr.uncheckable.empty());
        ProviderTable broken;
        for (int i = 0; i < 3; ++i)
            broken.insert(vertex_key(VertexKey{Partition{}, placements[i]}), QSeries::constant(RF3(along[(i + 1) % 3])));
        CHECK_FALSE(validate_providers(broken).clean());
    }
}
