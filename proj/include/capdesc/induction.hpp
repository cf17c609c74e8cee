#pragma once

#include "capdesc/geometries.hpp"
#include "capdesc/linalg.hpp"
#include "capdesc/providers.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace capdesc {

enum class InductionCase { A1_2leg, Fk_2leg, A2_3leg, Fk_3leg };
std::string to_string(InductionCase c);
InductionCase induction_case_from_string(const std::string& s);

// Case of a non-ground canonical key: |α| < |λ| selects the A-surface
// geometry, otherwise the Hirzebruch one.
InductionCase dispatch(const VertexKey& key);
// α = ∅ or at most one leg: supplied directly by providers.
bool is_ground(const VertexKey& key);

struct DimensionRecord {
    long virtual_dimension = 0;
    long after_relative = 0;  // after the relative condition (equals virtual_dimension without one)
    long conditions = 0;
    long margin = 0;          // the lower bound used by the vanishing argument
    long exact_margin = 0;    // after_relative - conditions
};

// aux: {μ'} for A1, {λ', μ'} for Fk 2-leg, {μ', ν'} for A2, {λ', μ', ν'} for
// Fk 3-leg. k = 0 picks the smallest admissible k.
DimensionRecord dimension_check(InductionCase c, const Partition& alpha, const Partition& lambda, const Partition& mu,
                                const Partition& nu, const std::vector<Partition>& aux, int k = 0);

// Smallest k with k > 3(|α|+|λ|+|μ|+|ν|).
int hirzebruch_k(const VertexKey& key);

// An unknown vertex as it appears in a relation: the canonical series with
// s_i replaced by images[i].
struct Unknown {
    VertexKey key;
    WeightTriple images;
};

struct RelationRow {
    std::vector<Partition> aux;
    std::vector<QSeries> coeffs;  // one per unknown
    QSeries rhs;
};

// Σ_j coeffs_j · Y_j = rhs for every row.
struct RelationSystem {
    std::string label;
    VertexKey target;
    std::vector<Unknown> unknowns;
    std::vector<RelationRow> rows;
};

// Where a relation builder gets its data from. `vertex` is asked for
// canonical keys and answers in the standard variables; `entry` serves
// edge, rubber and remainder keys.
struct ProviderSource {
    std::function<QSeries(const VertexKey&)> vertex;
    std::function<QSeries(const ProviderKey&)> entry;
};

// Lazily builds the rows of one induction relation family. Coefficients of
// the unknowns come from principal terms; `known` collects the terms whose
// vertices precede the target, and the remaining localization terms are
// read from a remainder entry.
class RelationBuilder {
public:
    RelationBuilder(const VertexKey& target, ProviderSource source);
    ~RelationBuilder();
    RelationBuilder(RelationBuilder&&) noexcept;
    RelationBuilder& operator=(RelationBuilder&&) noexcept;

    InductionCase relation_case() const;
    const VertexKey& target() const;
    const ToricPolytope& geometry() const;
    const std::vector<Unknown>& unknowns() const;
    std::size_t row_count() const;
    const std::vector<Partition>& aux(std::size_t row) const;
    std::vector<QSeries> coefficients(std::size_t row);
    QSeries known(std::size_t row);
    ProviderKey remainder(std::size_t row) const;
    // -(known + remainder entry)
    QSeries rhs(std::size_t row);

    // The coefficient of unknown (ρ_1, ..., ρ_L) in row (a_1, ..., a_L) is
    // fixed_factor() * Π_k F_k(a_k, ρ_k): one factor per varying leg.
    std::size_t factor_count() const;
    const std::vector<Partition>& factor_rows(std::size_t k) const;  // choices of a_k
    std::vector<Partition> factor_columns(std::size_t k) const;      // partitions ρ_k
    // F_k(a, ρ) for every ρ in factor_columns(k).
    const std::vector<QSeries>& factor_row(std::size_t k, std::size_t a);
    QSeries fixed_factor();
    std::size_t row_of(const std::vector<std::size_t>& choices) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct SolveOptions {
    unsigned long seed = 20240601;
    long max_terms = 16;        // cap on the solution window for exact inputs
    int consistency_rows = 3;
    // Use the per-leg factorization of the coefficients; the general
    // elimination is used otherwise.
    bool factored = true;
};

// Rows chosen by the leading-order rank test: first the pivot rows, then up
// to `consistency_rows` further rows.
struct RowSelection {
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> checks;
};
RowSelection select_rows(const std::vector<std::vector<QSeries>>& coefficient_rows, std::size_t unknowns,
                         const SolveOptions& options = {});
// Streams rows from a builder until the rank is reached.
RowSelection select_rows(RelationBuilder& builder, const SolveOptions& options = {});

// Solution Y_j for every unknown, on a common window.
std::vector<QSeries> solve(const RelationSystem& system, const SolveOptions& options = {});

// Per-leg pivot rows; `rows` lists the builder rows whose right-hand sides
// the factored solve reads, `checks` further rows used for verification.
struct FactoredSelection {
    std::vector<std::vector<std::size_t>> leg_pivots;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> checks;
};
FactoredSelection select_factored(RelationBuilder& builder, const SolveOptions& options = {});
// Inverts each leg factor as a matrix of series and contracts with the
// right-hand sides; check rows are verified on their windows.
std::vector<QSeries> solve_factored(RelationBuilder& builder, const FactoredSelection& selection,
                                    const SolveOptions& options = {});
// Σ_j coeff_j · values_j for each of sel.rows, through the factors.
std::vector<QSeries> apply_factored(RelationBuilder& builder, const FactoredSelection& sel, std::vector<QSeries> values);
// Rows whose remainder entries a solve with these options reads.
std::vector<std::size_t> rows_read(RelationBuilder& builder, const SolveOptions& options = {});

// Solves m y = r for a square matrix of series whose row-wise leading
// coefficients form an invertible matrix, order by order in q.
class SquareSeriesSolver {
public:
    SquareSeriesSolver(std::vector<std::vector<QSeries>> m, long max_terms);
    std::vector<QSeries> solve(const std::vector<QSeries>& r) const;

private:
    std::vector<std::vector<QSeries>> m_;
    std::vector<long> val_;
    std::shared_ptr<const ExactLU<RF3>> lu_;
    long max_terms_;
};

// Rows `selection` of the builder as an explicit system (remainders read
// through the source).
RelationSystem assemble_system(RelationBuilder& builder, const RowSelection& selection);

// Undo the weight substitution of an unknown.
QSeries unsubstitute(const QSeries& y, const WeightTriple& images);

struct ReduceStats {
    std::size_t systems = 0;
    std::vector<std::string> consumed;  // "<key> for <target>" in consumption order
};

// Memoized reduction of capped vertices to ground data.
class Reducer {
public:
    explicit Reducer(const ProviderTable& providers, SolveOptions options = {});
    QSeries vertex(const VertexKey& key);
    const std::map<VertexKey, QSeries>& solved() const { return memo_; }
    const ReduceStats& stats() const { return stats_; }

private:
    QSeries lookup(const VertexKey& canonical, const VertexKey& consumer);
    void reduce(const VertexKey& canonical);

    const ProviderTable& providers_;
    SolveOptions options_;
    std::map<VertexKey, QSeries> memo_;
    std::set<VertexKey> in_progress_;
    ReduceStats stats_;
};

// Targets in increasing induction order; returns each target's series in
// the standard variables, keyed by the canonical key.
std::map<VertexKey, QSeries> reduce_all(const std::vector<VertexKey>& targets, const ProviderTable& providers,
                                        const SolveOptions& options = {});

// Canonical ordering used to process targets.
std::vector<VertexKey> induction_sorted(std::vector<VertexKey> keys);

}  // namespace capdesc
