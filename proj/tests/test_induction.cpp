#include "capdesc/errors.hpp"
#include "capdesc/induction.hpp"
#include "capdesc/planted.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace capdesc;

namespace {

VertexKey key(Partition alpha, Partition l, Partition m, Partition n = {}) {
    return canonicalize(alpha, {std::move(l), std::move(m), std::move(n)}).key;
}

ProviderSource truth_source(PlantedModel& pm, const ProviderTable& table) {
    return {[&pm](const VertexKey& k) { return pm.true_vertex(k); }, [&table](const ProviderKey& k) { return table.at(k); }};
}

Unknown dummy_unknown(int i) { return {key(Partition{1}, Partition{2}, Partition{i}), standard_weights()}; }

QSeries exact(std::map<long, RF3> terms) { return QSeries::exact(terms); }

}  // namespace

TEST_SUITE("induction") {
    TEST_CASE("ground keys and dispatch") {
        CHECK(is_ground(key({}, Partition{2}, Partition{1}, Partition{1})));
        CHECK(is_ground(key(Partition{3}, Partition{2}, {})));
        CHECK_FALSE(is_ground(key(Partition{1}, Partition{2}, Partition{1})));
        CHECK(dispatch(key(Partition{1}, Partition{2}, Partition{1})) == InductionCase::A1_2leg);
        CHECK(dispatch(key(Partition{2}, Partition{2}, Partition{1})) == InductionCase::Fk_2leg);
        CHECK(dispatch(key(Partition{1}, Partition{2}, Partition{1}, Partition{1})) == InductionCase::A2_3leg);
        CHECK(dispatch(key(Partition{3}, Partition{1}, Partition{1}, Partition{1})) == InductionCase::Fk_3leg);
        CHECK_THROWS_AS(dispatch(key({}, Partition{1}, Partition{1})), PreconditionViolation);
        CHECK(hirzebruch_k(key(Partition{1}, Partition{1}, Partition{1})) == 10);
        for (auto c : {InductionCase::A1_2leg, InductionCase::Fk_2leg, InductionCase::A2_3leg, InductionCase::Fk_3leg})
            CHECK(induction_case_from_string(to_string(c)) == c);
    }

    TEST_CASE("dimension examples") {
        const auto a1 = dimension_check(InductionCase::A1_2leg, Partition{2}, Partition{3}, Partition{1}, {}, {Partition{1}});
        CHECK(a1.margin == 0);
        CHECK(a1.exact_margin >= a1.margin);
        const auto fk = dimension_check(InductionCase::Fk_2leg, Partition{1}, Partition{1}, Partition{1}, {}, {{}, {}});
        CHECK(fk.margin == 6);
        CHECK_THROWS_AS(dimension_check(InductionCase::A1_2leg, Partition{3}, Partition{2, 1}, Partition{1}, {}, {{}}),
                        PreconditionViolation);
        CHECK_THROWS_AS(dimension_check(InductionCase::Fk_2leg, Partition{1}, Partition{1}, Partition{1}, {}, {{}, {}}, 5),
                        PreconditionViolation);
    }

    TEST_CASE("unknown counts") {
        struct Case {
            VertexKey target;
            std::size_t unknowns;
        };
        const std::vector<Case> cases{{key(Partition{1}, Partition{2}, Partition{1}), 1},
                                      {key(Partition{1}, Partition{2}, Partition{2}), 2},
                                      {key(Partition{1}, Partition{1}, Partition{1}), 1},
                                      {key(Partition{2}, Partition{2}, Partition{2}), 4},
                                      {key(Partition{1}, Partition{2}, Partition{1}, Partition{1}), 1},
                                      {key(Partition{1}, Partition{2}, Partition{2}, Partition{1}), 2},
                                      {key(Partition{1}, Partition{1}, Partition{1}, Partition{1}), 1},
                                      {key(Partition{2}, Partition{1}, Partition{1}, Partition{1}), 1}};
        for (const auto& c : cases) {
            PlantedModel pm(11, 4);
            const ProviderTable table = pm.plant({c.target});
            RelationBuilder b(c.target, truth_source(pm, table));
            CHECK(b.unknowns().size() == c.unknowns);
            CHECK(b.row_count() >= c.unknowns);
            std::size_t product = 1;
            for (std::size_t k = 0; k < b.factor_count(); ++k) product *= b.factor_columns(k).size();
            CHECK(product == c.unknowns);
        }
    }

    TEST_CASE("factored coefficients agree with the rows") {
        const VertexKey t = key(Partition{1}, Partition{2}, Partition{2}, Partition{1});
        PlantedModel pm(5, 4);
        const ProviderTable table = pm.plant({t});
        RelationBuilder b(t, truth_source(pm, table));
        const auto& rows0 = b.factor_rows(0);
        for (std::size_t a = 0; a < rows0.size() && a < 3; ++a) {
            std::vector<std::size_t> choice(b.factor_count(), 0);
            choice[0] = a;
            const auto coeffs = b.coefficients(b.row_of(choice));
            std::size_t j = 0;
            const auto f0 = b.factor_row(0, a);
            const auto f1 = b.factor_row(1, 0);
            const QSeries fixed = b.fixed_factor();
            for (std::size_t x = 0; x < f0.size(); ++x)
                for (std::size_t y = 0; y < f1.size(); ++y, ++j) CHECK(coeffs[j].agrees_with(fixed * f0[x] * f1[y]));
        }
    }

    TEST_CASE("small explicit systems") {
        const RF3 s1 = RF3::var(0);
        RelationSystem one;
        one.unknowns = {dummy_unknown(1)};
        one.rows.push_back({{}, {exact({{0, s1}})}, exact({{0, RF3(3)}, {2, RF3(1)}})});
        const auto x = solve(one);
        CHECK(x[0].agrees_with(exact({{0, RF3(3) / s1}, {2, RF3(1) / s1}})));

        RelationSystem dup;
        dup.unknowns = {dummy_unknown(1), dummy_unknown(2)};
        const QSeries a = exact({{0, RF3(1)}}), b = exact({{0, s1}});
        dup.rows.push_back({{}, {a, b}, a});
        dup.rows.push_back({{}, {a, b}, a});
        CHECK_THROWS_AS(solve(dup), RankDeficient);

        RelationSystem clash = one;
        clash.rows.push_back({{}, {exact({{0, s1}})}, exact({{0, RF3(4)}})});
        CHECK_THROWS_AS(solve(clash), InconsistentSystem);
    }

    TEST_CASE("series solver") {
        // [[1, q], [q, 1]] y = [1/(1-q) truncated, 1]
        const QSeries one = QSeries::constant(RF3(1)), q = QSeries::monomial(RF3(1), 1);
        SquareSeriesSolver solver({{one, q}, {q, one}}, 6);
        const QSeries r0 = exact({{0, RF3(1)}, {1, RF3(2)}}), r1 = exact({{0, RF3(3)}});
        const auto y = solver.solve({r0, r1});
        CHECK((one * y[0] + q * y[1]).agrees_with(r0));
        CHECK((q * y[0] + one * y[1]).agrees_with(r1));
        CHECK(y[0].hi() - y[0].lo() + 1 == 6);
    }

    TEST_CASE("planted recovery, factored and general") {
        const VertexKey t = key(Partition{1}, Partition{2}, Partition{2});
        PlantedModel pm(2, 6);
        const ProviderTable table = pm.plant({t});
        for (bool factored : {true, false}) {
            SolveOptions opt;
            opt.factored = factored;
            Reducer r(table, opt);
            CHECK(r.vertex(t).agrees_with(pm.true_vertex(t)));
            CHECK(r.vertex(t).hi() >= pm.true_vertex(t).lo() + 5);
            for (const auto& [k, v] : r.solved()) CHECK(v.agrees_with(pm.true_vertex(k)));
        }
    }

    TEST_CASE("ground targets come from providers") {
        ProviderTable t;
        const VertexKey g1 = key({}, Partition{2}, Partition{1}, Partition{1});
        const VertexKey g2 = key(Partition{2}, Partition{1}, {});
        const QSeries v1 = exact({{1, RF3::var(2)}}), v2 = exact({{0, RF3(7)}});
        t.insert(vertex_key(g1), v1);
        t.insert(vertex_key(g2), v2);
        const auto out = reduce_all({g1, g2}, t);
        CHECK(out.at(g1) == v1);
        CHECK(out.at(g2) == v2);
        CHECK_THROWS_AS(reduce_all({key({}, Partition{3}, {})}, t), MissingProviderEntry);
    }

    TEST_CASE("corrupted remainder is detected") {
        const VertexKey t = key(Partition{1}, Partition{2}, Partition{1});
        PlantedModel pm(9, 6);
        ProviderTable table = pm.plant({t});
        RelationBuilder b(t, truth_source(pm, table));
        const auto read = rows_read(b);
        REQUIRE(read.size() > 1);
        const ProviderKey victim = b.remainder(read.back());
        ProviderTable bad;
        for (const auto& [k, v] : table.entries()) bad.insert(k, k == victim ? v + QSeries::constant(RF3(1)) : v);
        CHECK_THROWS_AS(reduce_all({t}, bad), InconsistentSystem);
    }

    TEST_CASE("multi-level plant") {
        const std::vector<VertexKey> targets{key(Partition{1}, Partition{2}, Partition{1}), key(Partition{1}, Partition{1}, Partition{1}),
                                             key(Partition{1}, Partition{1}, Partition{1}, Partition{1}),
                                             key(Partition{2}, Partition{2}, Partition{1})};
        PlantedModel pm(4, 8);
        const ProviderTable table = pm.plant(targets);
        const auto out = reduce_all(targets, table);
        for (const auto& [k, v] : out) CHECK(v.agrees_with(pm.true_vertex(k)));
        CHECK(induction_sorted(targets).size() == 4);
    }
}
