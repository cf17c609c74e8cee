#include "capdesc/induction.hpp"

#include "capdesc/linalg.hpp"
#include "capdesc/toric.hpp"

#include <algorithm>
#include <random>

namespace capdesc {

std::string to_string(InductionCase c) {
    switch (c) {
        case InductionCase::A1_2leg: return "A1_2leg";
        case InductionCase::Fk_2leg: return "Fk_2leg";
        case InductionCase::A2_3leg: return "A2_3leg";
        case InductionCase::Fk_3leg: return "Fk_3leg";
    }
    return "?";
}

InductionCase induction_case_from_string(const std::string& s) {
    for (auto c : {InductionCase::A1_2leg, InductionCase::Fk_2leg, InductionCase::A2_3leg, InductionCase::Fk_3leg})
        if (to_string(c) == s) return c;
    throw PreconditionViolation("unknown induction case '" + s + "'");
}

bool is_ground(const VertexKey& key) { return key.alpha.empty() || key.leg_count() <= 1; }

InductionCase dispatch(const VertexKey& key) {
    if (is_ground(key)) throw PreconditionViolation(key.str() + " is ground data, not an induction target");
    const bool three = key.leg_count() == 3;
    if (key.alpha.size() < key.legs[0].size()) return three ? InductionCase::A2_3leg : InductionCase::A1_2leg;
    return three ? InductionCase::Fk_3leg : InductionCase::Fk_2leg;
}

int hirzebruch_k(const VertexKey& key) {
    return 3 * (key.alpha.size() + key.legs[0].size() + key.legs[1].size() + key.legs[2].size()) + 1;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionViolation(what);
}

void require_aux(const std::vector<Partition>& aux, std::size_t n, InductionCase c) {
    if (aux.size() != n)
        throw PreconditionViolation(to_string(c) + " needs " + std::to_string(n) + " auxiliary partitions");
}

}  // namespace

DimensionRecord dimension_check(InductionCase c, const Partition& alpha, const Partition& lambda, const Partition& mu,
                                const Partition& nu, const std::vector<Partition>& aux, int k) {
    DimensionRecord r;
    const long a = alpha.size(), l = lambda.size(), m = mu.size(), n = nu.size();
    switch (c) {
        case InductionCase::A1_2leg: {
            require_aux(aux, 1, c);
            require(a > 0, "A1_2leg needs |alpha| > 0");
            require(a < l, "A1_2leg needs |alpha| < |lambda|");
            const Partition& mp = aux[0];
            r.virtual_dimension = 2 * l + 2 * mp.size();
            r.after_relative = l + mp.size() - mp.length();
            r.conditions = a + 1;
            r.margin = l - a - 1;
            break;
        }
        case InductionCase::A2_3leg: {
            require_aux(aux, 2, c);
            require(a < l, "A2_3leg needs |alpha| < |lambda|");
            const Partition &mp = aux[0], &np = aux[1];
            r.virtual_dimension = 2 * l + 2 * mp.size() + 2 * np.size();
            r.after_relative = l + mp.size() - mp.length() + np.size() - np.length();
            r.conditions = a;
            r.margin = l - a;
            break;
        }
        case InductionCase::Fk_2leg: {
            require_aux(aux, 2, c);
            require(m > 0, "Fk_2leg needs |mu| > 0");
            const long bound = 3 * (a + l + m);
            if (k == 0) k = static_cast<int>(bound + 1);
            require(k > bound, "Fk_2leg needs k > 3|alpha| + 3|lambda| + 3|mu|");
            require(aux[0].size() <= l - 1, "Fk_2leg needs |lambda'| <= |lambda| - 1");
            require(aux[1].size() <= m - 1, "Fk_2leg needs |mu'| <= |mu| - 1");
            r.virtual_dimension = (k + 2) * m + 2 * l;
            r.after_relative = r.virtual_dimension;
            r.conditions = 3 * (a + aux[0].size() + aux[1].size());
            r.margin = bound - r.conditions;
            break;
        }
        case InductionCase::Fk_3leg: {
            require_aux(aux, 3, c);
            require(n > 0, "Fk_3leg needs |nu| > 0");
            const long bound = 3 * (a + l + m + n);
            if (k == 0) k = static_cast<int>(bound + 1);
            require(k > bound, "Fk_3leg needs k > 3|alpha| + 3|lambda| + 3|mu| + 3|nu|");
            require(aux[0].size() <= l - 1, "Fk_3leg needs |lambda'| <= |lambda| - 1");
            require(aux[1].size() <= m - 1, "Fk_3leg needs |mu'| <= |mu| - 1");
            require(aux[2].size() <= n - 1, "Fk_3leg needs |nu'| <= |nu| - 1");
            r.virtual_dimension = (k + 2) * n + 2 * m + 2 * l;
            r.after_relative = r.virtual_dimension;
            r.conditions = 3 * (a + aux[0].size() + aux[1].size() + aux[2].size());
            r.margin = bound - r.conditions;
            break;
        }
    }
    r.exact_margin = r.after_relative - r.conditions;
    const bool strict = c == InductionCase::Fk_2leg || c == InductionCase::Fk_3leg || c == InductionCase::A2_3leg;
    if (strict ? r.margin <= 0 : r.margin < 0)
        throw PreconditionViolation("vanishing margin " + std::to_string(r.margin) + " fails for " + to_string(c));
    if (r.exact_margin < r.margin)
        throw PreconditionViolation("internal: exact dimension below the vanishing bound for " + to_string(c));
    return r;
}

// ---------------------------------------------------------------------------
// Relation builder

namespace {

QSeries one() { return QSeries::constant(RF3(1)); }

QSeries evaluate_vertex(const ProviderSource& src, const Partition& alpha, const LegTriple& legs, const WeightTriple& w) {
    const CanonicalVertex cv = canonicalize(alpha, legs);
    if (cv.key.leg_count() == 0) return alpha.empty() ? one() : QSeries::zero();
    return substitute(src.vertex(cv.key), WeightTriple{w[cv.perm[0]], w[cv.perm[1]], w[cv.perm[2]]});
}

std::optional<RF3> expansion_coefficient(const ToricPolytope& p, const std::string& label, int vertex) {
    auto it = p.class_expansions.find(label);
    if (it == p.class_expansions.end()) throw SchemaError("geometry " + p.name + " has no expansion for class " + label);
    for (const auto& t : it->second)
        if (t.vertex == vertex) return t.coeff;
    return std::nullopt;
}

// Every way to pick one partition per slot, first slot outermost.
std::vector<std::vector<Partition>> cartesian(const std::vector<std::vector<Partition>>& choices) {
    std::vector<std::vector<Partition>> out{{}};
    for (const auto& options : choices) {
        std::vector<std::vector<Partition>> next;
        for (const auto& prefix : out)
            for (const auto& p : options) {
                auto v = prefix;
                v.push_back(p);
                next.push_back(std::move(v));
            }
        out = std::move(next);
    }
    return out;
}

// Auxiliary tuples ordered by total size, then slot by slot in canonical order.
std::vector<std::vector<Partition>> aux_tuples(const std::vector<int>& caps) {
    std::vector<std::vector<Partition>> choices;
    for (int c : caps) choices.push_back(partitions_up_to(std::max(c, 0)));
    auto tuples = cartesian(choices);
    std::stable_sort(tuples.begin(), tuples.end(), [](const auto& x, const auto& y) {
        int sx = 0, sy = 0;
        for (const auto& p : x) sx += p.size();
        for (const auto& p : y) sy += p.size();
        return sx < sy;
    });
    return tuples;
}

}  // namespace

struct RelationBuilder::Impl {
    // One nonempty direction at the center vertex.
    struct Leg {
        int direction = 0;
        bool varying = false;
        Partition fixed;
        int size = 0;
        bool chain = false;      // false: rubber over the other end of the edge
        int edge = -1;
        int far_vertex = -1;
        int far_dir = -1;
        int extra_dir = -1;      // second leg at the far vertex (relative cases)
        int aux_slot = -1;       // extra leg (relative cases) or far descendents (Hirzebruch cases)
        bool aux_is_alpha = false;
        int split_slot = -1;     // far point index in descendent splits
    };
    struct Split {
        std::vector<Partition> alphas;  // [center, far points...]
        RF3 factor;
    };

    InductionCase kind;
    VertexKey target;
    ProviderSource src;
    ToricPolytope geo;
    int center = 0;
    std::vector<Leg> legs;
    std::vector<Unknown> unknowns;
    std::vector<std::vector<Partition>> unknown_legs;  // per unknown, per varying leg
    std::vector<std::vector<Partition>> aux;
    std::vector<std::vector<Partition>> slot_choices;  // per varying leg
    std::map<std::vector<Partition>, std::size_t> row_index;
    Split principal;
    std::vector<Split> others;
    std::map<std::size_t, std::vector<QSeries>> coeff_cache;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<QSeries>> factor_cache;
    std::optional<QSeries> fixed_cache;

    Impl(const VertexKey& t, ProviderSource s) : kind(dispatch(t)), target(t), src(std::move(s)) {
        if (!is_canonical(target)) throw PreconditionViolation(target.str() + " is not in canonical form");
        const Partition& lam = target.legs[0];
        const int l = lam.size(), m = target.legs[1].size(), n = target.legs[2].size();
        switch (kind) {
            case InductionCase::A1_2leg: {
                geo = f2_x_p1();
                center = geo.vertex_index("star0");
                legs.push_back(rubber_leg(2, lam));
                legs.push_back(chain_leg(0, m, 0, 2, 0, false, 1));
                set_slots({m + 1});
                break;
            }
            case InductionCase::A2_3leg: {
                geo = a2_compactified();
                center = geo.vertex_index("star0");
                legs.push_back(rubber_leg(2, lam));
                legs.push_back(chain_leg(1, m, 0, 2, 0, false, 1));
                legs.push_back(chain_leg(0, n, 1, 2, 1, false, 2));
                set_slots({m, n});
                break;
            }
            case InductionCase::Fk_2leg: {
                geo = fk_x_p1(hirzebruch_k(target));
                center = geo.vertex_index("star+0");
                legs.push_back(chain_leg(1, l, 1, -1, 0, true, -1));
                legs.push_back(chain_leg(0, m, 0, -1, 1, true, -1));
                set_slots({l - 1, m - 1});
                break;
            }
            case InductionCase::Fk_3leg: {
                geo = fk_x_p1(hirzebruch_k(target));
                center = geo.vertex_index("star+0");
                legs.push_back(chain_leg(2, l, 2, -1, 0, true, -1));
                legs.push_back(chain_leg(1, m, 1, -1, 1, true, -1));
                legs.push_back(chain_leg(0, n, 0, -1, 2, true, -1));
                set_slots({l - 1, m - 1, n - 1});
                break;
            }
        }
        build_unknowns();
        build_splits();
    }

    void set_slots(const std::vector<int>& caps) {
        aux = aux_tuples(caps);
        for (int c : caps) slot_choices.push_back(partitions_up_to(std::max(c, 0)));
        for (std::size_t r = 0; r < aux.size(); ++r) row_index.emplace(aux[r], r);
    }

    std::vector<const Leg*> varying_legs() const {
        std::vector<const Leg*> out;
        for (const auto& leg : legs)
            if (leg.varying) out.push_back(&leg);
        return out;
    }

    QSeries fixed_factor() {
        if (!fixed_cache) {
            QSeries acc = QSeries::constant(principal.factor);
            for (const auto& leg : legs)
                if (!leg.varying) acc *= branch(leg, leg.fixed, {}, Partition{});
            fixed_cache = std::move(acc);
        }
        return *fixed_cache;
    }

    const std::vector<QSeries>& factor_row(std::size_t k, std::size_t choice) {
        auto key = std::make_pair(k, choice);
        if (auto it = factor_cache.find(key); it != factor_cache.end()) return it->second;
        const Leg& leg = *varying_legs().at(k);
        std::vector<Partition> row_aux(slot_choices.size());
        row_aux[static_cast<std::size_t>(leg.aux_slot)] = slot_choices[k].at(choice);
        std::vector<QSeries> out;
        for (const auto& rho : enumerate_partitions(leg.size)) out.push_back(branch(leg, rho, row_aux, Partition{}));
        return factor_cache.emplace(key, std::move(out)).first->second;
    }

    const WeightTriple& weights(int v) const { return geo.vertices[static_cast<std::size_t>(v)].weights; }

    int other_end(int edge, int vertex) const {
        const auto& e = geo.edges[static_cast<std::size_t>(edge)];
        return e.ends[0].vertex == vertex ? e.ends[1].vertex : e.ends[0].vertex;
    }

    Leg rubber_leg(int dir, const Partition& fixed) {
        Leg leg;
        leg.direction = dir;
        leg.fixed = fixed;
        leg.size = fixed.size();
        leg.edge = geo.half_edge_at(center, dir)->first;
        leg.far_vertex = other_end(leg.edge, center);
        return leg;
    }

    Leg chain_leg(int dir, int size, int far_dir, int extra_dir, int aux_slot, bool aux_is_alpha, int split_slot) {
        Leg leg;
        leg.direction = dir;
        leg.varying = true;
        leg.size = size;
        leg.chain = true;
        leg.edge = geo.half_edge_at(center, dir)->first;
        leg.far_vertex = other_end(leg.edge, center);
        leg.far_dir = far_dir;
        leg.extra_dir = extra_dir;
        leg.aux_slot = aux_slot;
        leg.aux_is_alpha = aux_is_alpha;
        leg.split_slot = split_slot;
        return leg;
    }

    LegTriple center_legs(const std::vector<Partition>& varying) const {
        LegTriple out;
        std::size_t k = 0;
        for (const auto& leg : legs) out[static_cast<std::size_t>(leg.direction)] = leg.varying ? varying[k++] : leg.fixed;
        return out;
    }

    void build_unknowns() {
        std::vector<std::vector<Partition>> choices;
        for (const auto& leg : legs)
            if (leg.varying) choices.push_back(enumerate_partitions(leg.size));
        const WeightTriple& w = weights(center);
        bool found_target = false;
        for (auto& combo : cartesian(choices)) {
            const CanonicalVertex cv = canonicalize(target.alpha, center_legs(combo));
            unknowns.push_back({cv.key, WeightTriple{w[cv.perm[0]], w[cv.perm[1]], w[cv.perm[2]]}});
            found_target = found_target || cv.key == target;
            unknown_legs.push_back(std::move(combo));
        }
        if (!found_target) throw PreconditionViolation("internal: target missing from its own relation family");
    }

    // Descendent distributions over the center and the far points.
    void build_splits() {
        const std::vector<int>& parts = target.alpha.parts();
        std::vector<int> points{center};
        if (kind == InductionCase::A1_2leg) points.push_back(geo.vertex_index("bullet0"));
        if (kind == InductionCase::A2_3leg) {
            points.push_back(geo.vertex_index("bullet0"));
            points.push_back(geo.vertex_index("bullethat0"));
        }
        principal.alphas.assign(points.size(), Partition{});
        principal.alphas[0] = target.alpha;
        principal.factor = RF3(1);
        if (kind == InductionCase::Fk_2leg || kind == InductionCase::Fk_3leg) return;

        std::map<std::vector<Partition>, RF3> grouped;
        const std::size_t np = points.size();
        std::vector<std::size_t> place(parts.size(), 0);
        while (true) {
            RF3 factor(1);
            std::vector<std::vector<int>> buckets(np);
            bool alive = true;
            for (std::size_t i = 0; i < parts.size() && alive; ++i) {
                const bool first_on_curve = kind == InductionCase::A1_2leg && i == 0;
                if (first_on_curve && place[i] != 0) alive = false;
                auto c = expansion_coefficient(geo, first_on_curve ? "L0" : "D0", points[place[i]]);
                if (!c) alive = false;
                else factor *= *c;
                buckets[place[i]].push_back(parts[i]);
            }
            if (alive) {
                std::vector<Partition> alphas;
                for (auto& b : buckets) alphas.push_back(Partition::from_unsorted(b));
                auto [it, fresh] = grouped.try_emplace(alphas, factor);
                if (!fresh) it->second += factor;
            }
            std::size_t i = 0;
            while (i < place.size() && ++place[i] == np) place[i++] = 0;
            if (i == place.size()) break;
        }
        for (auto& [alphas, factor] : grouped) {
            if (alphas[0] == target.alpha) principal.factor = factor;
            else if (!factor.is_zero()) others.push_back({alphas, factor});
        }
    }

    QSeries rubber(const Partition& rho, int vertex, int dir, int edge) const {
        if (rho.empty()) return one();
        const int far = other_end(edge, vertex);
        return gluing_factor(rho, weights(vertex), dir) * src.entry(rubber_key(rho, weights(far)));
    }

    QSeries edge_series(int edge, int from_vertex, const Partition& at_from, const Partition& at_other) const {
        const auto& e = geo.edges[static_cast<std::size_t>(edge)];
        const bool forward = e.ends[0].vertex == from_vertex;
        return src.entry(edge_key(forward ? at_from : at_other, forward ? at_other : at_from, edge_key_weights(geo, edge)));
    }

    // Value of one leg's branch for center partition rho.
    QSeries branch(const Leg& leg, const Partition& rho, const std::vector<Partition>& row_aux, const Partition& far_alpha) const {
        if (!leg.chain) return rubber(rho, center, leg.direction, leg.edge);
        const Partition& aux_p = row_aux[static_cast<std::size_t>(leg.aux_slot)];
        const Partition& alpha_far = leg.aux_is_alpha ? aux_p : far_alpha;
        const WeightTriple& wf = weights(leg.far_vertex);
        QSeries tail = one();
        if (!leg.aux_is_alpha && !aux_p.empty()) {
            const int extra_edge = geo.half_edge_at(leg.far_vertex, leg.extra_dir)->first;
            tail = rubber(aux_p, leg.far_vertex, leg.extra_dir, extra_edge);
        }
        std::optional<QSeries> sum;
        for (const auto& rp : enumerate_partitions(rho.size())) {
            LegTriple far_legs;
            far_legs[static_cast<std::size_t>(leg.far_dir)] = rp;
            if (!leg.aux_is_alpha) far_legs[static_cast<std::size_t>(leg.extra_dir)] = aux_p;
            const QSeries v = evaluate_vertex(src, alpha_far, far_legs, wf);
            QSeries term = edge_series(leg.edge, center, rho, rp) * gluing_factor(rp, wf, leg.far_dir) * v;
            if (sum) *sum += term;
            else sum = std::move(term);
        }
        return gluing_factor(rho, weights(center), leg.direction) * *sum * tail;
    }

    // Π over legs for the unknown-shaped center legs `combo`.
    QSeries branch_product(const std::vector<Partition>& combo, const std::vector<Partition>& row_aux, const Split& split,
                           std::map<std::tuple<std::size_t, Partition, Partition>, QSeries>& cache) const {
        QSeries acc = one();
        std::size_t k = 0;
        for (std::size_t li = 0; li < legs.size(); ++li) {
            const Leg& leg = legs[li];
            const Partition& rho = leg.varying ? combo[k++] : leg.fixed;
            const Partition far_alpha = leg.split_slot >= 0 ? split.alphas[static_cast<std::size_t>(leg.split_slot)] : Partition{};
            auto key = std::make_tuple(li, rho, far_alpha);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, branch(leg, rho, row_aux, far_alpha)).first;
            acc *= it->second;
        }
        return acc;
    }

    std::vector<QSeries> coefficients(std::size_t row) {
        if (auto it = coeff_cache.find(row); it != coeff_cache.end()) return it->second;
        std::map<std::tuple<std::size_t, Partition, Partition>, QSeries> cache;
        std::vector<QSeries> out;
        out.reserve(unknowns.size());
        for (const auto& combo : unknown_legs)
            out.push_back(branch_product(combo, aux.at(row), principal, cache).scaled(principal.factor));
        coeff_cache.emplace(row, out);
        return out;
    }

    QSeries known(std::size_t row) {
        std::optional<QSeries> total;
        const WeightTriple& wc = weights(center);
        for (const auto& split : others) {
            std::map<std::tuple<std::size_t, Partition, Partition>, QSeries> cache;
            for (const auto& combo : unknown_legs) {
                const QSeries v = evaluate_vertex(src, split.alphas[0], center_legs(combo), wc);
                if (v.is_zero() && !v.bounded()) continue;
                QSeries term = (v * branch_product(combo, aux.at(row), split, cache)).scaled(split.factor);
                if (total) *total += term;
                else total = std::move(term);
            }
        }
        return total ? *total : QSeries::zero();
    }
};

RelationBuilder::RelationBuilder(const VertexKey& target, ProviderSource source)
    : impl_(std::make_unique<Impl>(target, std::move(source))) {}
RelationBuilder::~RelationBuilder() = default;
RelationBuilder::RelationBuilder(RelationBuilder&&) noexcept = default;
RelationBuilder& RelationBuilder::operator=(RelationBuilder&&) noexcept = default;

InductionCase RelationBuilder::relation_case() const { return impl_->kind; }
const VertexKey& RelationBuilder::target() const { return impl_->target; }
const ToricPolytope& RelationBuilder::geometry() const { return impl_->geo; }
const std::vector<Unknown>& RelationBuilder::unknowns() const { return impl_->unknowns; }
std::size_t RelationBuilder::row_count() const { return impl_->aux.size(); }
const std::vector<Partition>& RelationBuilder::aux(std::size_t row) const { return impl_->aux.at(row); }
std::vector<QSeries> RelationBuilder::coefficients(std::size_t row) { return impl_->coefficients(row); }
QSeries RelationBuilder::known(std::size_t row) { return impl_->known(row); }
ProviderKey RelationBuilder::remainder(std::size_t row) const {
    return remainder_key(to_string(impl_->kind), impl_->target, impl_->aux.at(row));
}
QSeries RelationBuilder::rhs(std::size_t row) { return -(known(row) + impl_->src.entry(remainder(row))); }
std::size_t RelationBuilder::factor_count() const { return impl_->slot_choices.size(); }
const std::vector<Partition>& RelationBuilder::factor_rows(std::size_t k) const { return impl_->slot_choices.at(k); }
std::vector<Partition> RelationBuilder::factor_columns(std::size_t k) const {
    return enumerate_partitions(impl_->varying_legs().at(k)->size);
}
const std::vector<QSeries>& RelationBuilder::factor_row(std::size_t k, std::size_t a) { return impl_->factor_row(k, a); }
QSeries RelationBuilder::fixed_factor() { return impl_->fixed_factor(); }
std::size_t RelationBuilder::row_of(const std::vector<std::size_t>& choices) const {
    if (choices.size() != impl_->slot_choices.size()) throw SizeMismatch("one choice per varying leg expected");
    std::vector<Partition> tuple;
    for (std::size_t k = 0; k < choices.size(); ++k) tuple.push_back(impl_->slot_choices[k].at(choices[k]));
    return impl_->row_index.at(tuple);
}

// ---------------------------------------------------------------------------
// Solving

namespace {

constexpr long kInf = QSeries::kUnbounded;

struct Leading {
    long valuation;
    std::vector<RF3> vector;
};

std::optional<Leading> leading(const std::vector<QSeries>& row) {
    std::optional<long> v;
    for (const auto& s : row)
        if (auto sv = s.valuation()) v = v ? std::min(*v, *sv) : *sv;
    if (!v) return std::nullopt;
    Leading out{*v, {}};
    for (const auto& s : row) {
        if (*v > s.hi()) throw InsufficientWindow("coefficient window " + s.window_str() + " ends below the row valuation");
        out.vector.push_back(*v < s.lo() ? RF3(0) : s.at(*v));
    }
    return out;
}

std::array<BigQ, 3> random_point(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-29, 29), den(1, 13);
    std::array<BigQ, 3> p;
    for (auto& x : p) {
        long n = 0;
        while (n == 0) n = num(rng);
        x = BigQ(n, den(rng));
    }
    return p;
}

// Greedy row choice over a stream of coefficient rows.
template <class RowFn>
RowSelection select_stream(std::size_t count, std::size_t n, RowFn&& row_at, const SolveOptions& options) {
    std::mt19937_64 rng(options.seed);
    for (int attempt = 0; attempt < 8; ++attempt) {
        const auto point = random_point(rng);
        RowSelection sel;
        RowSpace<BigQ> space(static_cast<Eigen::Index>(n));
        bool pole = false;
        std::size_t r = 0;
        for (; r < count && sel.pivots.size() < n; ++r) {
            auto lv = leading(row_at(r));
            if (!lv) continue;
            Vec<BigQ> v(static_cast<Eigen::Index>(n));
            try {
                for (std::size_t j = 0; j < n; ++j) v(static_cast<Eigen::Index>(j)) = lv->vector[j].specialize(point);
            } catch (const PoleAtPoint&) {
                pole = true;
                break;
            }
            if (space.add(std::move(v))) sel.pivots.push_back(r);
        }
        if (pole) continue;
        if (sel.pivots.size() < n) {
            // The random point may be unlucky; decide exactly.
            RowSpace<RF3> exact(static_cast<Eigen::Index>(n));
            RowSelection ex;
            for (std::size_t q = 0; q < count && ex.pivots.size() < n; ++q) {
                auto lv = leading(row_at(q));
                if (!lv) continue;
                Vec<RF3> v(static_cast<Eigen::Index>(n));
                for (std::size_t j = 0; j < n; ++j) v(static_cast<Eigen::Index>(j)) = lv->vector[j];
                if (exact.add(std::move(v))) ex.pivots.push_back(q);
            }
            if (ex.pivots.size() < n)
                throw RankDeficient("leading-order rank " + std::to_string(ex.pivots.size()) + " < " + std::to_string(n) +
                                    " unknowns over " + std::to_string(count) + " equations");
            sel = std::move(ex);
            r = sel.pivots.back() + 1;
        }
        for (; r < count && static_cast<int>(sel.checks.size()) < options.consistency_rows; ++r)
            if (std::find(sel.pivots.begin(), sel.pivots.end(), r) == sel.pivots.end()) sel.checks.push_back(r);
        return sel;
    }
    throw PoleAtPoint("could not find a probe point avoiding the poles of the leading coefficients");
}

}  // namespace

RowSelection select_rows(const std::vector<std::vector<QSeries>>& rows, std::size_t unknowns, const SolveOptions& options) {
    return select_stream(rows.size(), unknowns, [&](std::size_t r) -> const std::vector<QSeries>& { return rows[r]; },
                         options);
}

RowSelection select_rows(RelationBuilder& builder, const SolveOptions& options) {
    return select_stream(builder.row_count(), builder.unknowns().size(),
                         [&](std::size_t r) { return builder.coefficients(r); }, options);
}

RelationSystem assemble_system(RelationBuilder& builder, const RowSelection& selection) {
    RelationSystem sys;
    sys.label = to_string(builder.relation_case());
    sys.target = builder.target();
    sys.unknowns = builder.unknowns();
    std::vector<std::size_t> order = selection.pivots;
    order.insert(order.end(), selection.checks.begin(), selection.checks.end());
    for (std::size_t r : order) sys.rows.push_back({builder.aux(r), builder.coefficients(r), builder.rhs(r)});
    return sys;
}

std::vector<QSeries> solve(const RelationSystem& system, const SolveOptions& options) {
    const std::size_t n = system.unknowns.size();
    if (system.rows.size() < n)
        throw RankDeficient("only " + std::to_string(system.rows.size()) + " equations for " + std::to_string(n) + " unknowns");
    for (const auto& row : system.rows)
        if (row.coeffs.size() != n) throw SizeMismatch("equation width does not match the unknown count");
    std::vector<std::vector<QSeries>> coeffs;
    for (const auto& row : system.rows) coeffs.push_back(row.coeffs);
    const RowSelection sel = select_rows(coeffs, n, options);

    const auto ni = static_cast<Eigen::Index>(n);
    MatRF lead(ni, ni);
    std::vector<long> val(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto lv = *leading(coeffs[sel.pivots[i]]);
        val[i] = lv.valuation;
        for (std::size_t j = 0; j < n; ++j) lead(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = lv.vector[j];
    }
    const ExactLU<RF3> lu(lead);

    auto row_of = [&](std::size_t i) -> const RelationRow& { return system.rows[sel.pivots[i]]; };
    long n0 = kInf;
    for (std::size_t i = 0; i < n; ++i) n0 = std::min(n0, row_of(i).rhs.lo() - val[i]);
    // Largest order determined by the windows of row i.
    auto row_limit = [&](const RelationRow& row, long v) {
        long lim = row.rhs.hi() >= kInf ? kInf : row.rhs.hi() - v;
        for (const auto& a : row.coeffs)
            if (a.hi() < kInf) lim = std::min(lim, n0 + a.hi() - v);
        return lim;
    };
    long n_hi = n0 + options.max_terms - 1;
    for (std::size_t i = 0; i < n; ++i) n_hi = std::min(n_hi, row_limit(row_of(i), val[i]));
    if (n_hi < n0) throw InsufficientWindow("input windows do not determine any coefficient of the solution");

    std::vector<std::vector<RF3>> y(n);
    for (long m = n0; m <= n_hi; ++m) {
        Vec<RF3> r(ni);
        for (std::size_t i = 0; i < n; ++i) {
            const RelationRow& row = row_of(i);
            RF3 acc = m + val[i] < row.rhs.lo() ? RF3(0) : row.rhs.at(m + val[i]);
            for (std::size_t j = 0; j < n; ++j)
                for (long k = 1; k <= m - n0; ++k) {
                    const RF3& yj = y[j][static_cast<std::size_t>(m - k - n0)];
                    if (yj.is_zero()) continue;
                    const RF3 a = row.coeffs[j].at(val[i] + k);
                    if (!a.is_zero()) acc -= a * yj;
                }
            r(static_cast<Eigen::Index>(i)) = std::move(acc);
        }
        const Vec<RF3> x = lu.solve(r);
        for (std::size_t j = 0; j < n; ++j) y[j].push_back(x(static_cast<Eigen::Index>(j)));
    }

    for (std::size_t c : sel.checks) {
        const RelationRow& row = system.rows[c];
        const auto lv = leading(row.coeffs);
        if (!lv) {
            for (const auto& [e, coeff] : row.rhs.terms())
                if (!coeff.is_zero())
                    throw InconsistentSystem("equation with zero coefficients has nonzero right side at q^" + std::to_string(e));
            continue;
        }
        const long v = lv->valuation;
        const long lim = std::min(n_hi, row_limit(row, v));
        for (long m = std::min(n0, row.rhs.lo() - v); m <= lim; ++m) {
            RF3 acc = m + v < row.rhs.lo() ? RF3(0) : row.rhs.at(m + v);
            for (std::size_t j = 0; j < n; ++j)
                for (long k = 0; k <= m - n0; ++k) {
                    const RF3& yj = y[j][static_cast<std::size_t>(m - k - n0)];
                    if (!yj.is_zero()) acc -= row.coeffs[j].at(v + k) * yj;
                }
            if (!acc.is_zero())
                throw InconsistentSystem("consistency equation " + std::to_string(c) + " has residual " + acc.str() +
                                         " at order " + std::to_string(m + v));
        }
    }

    std::vector<QSeries> out;
    for (std::size_t j = 0; j < n; ++j) {
        QSeries s(n0, n_hi);
        for (long m = n0; m <= n_hi; ++m) s.set(m, y[j][static_cast<std::size_t>(m - n0)]);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Factored solve

SquareSeriesSolver::SquareSeriesSolver(std::vector<std::vector<QSeries>> m, long max_terms)
    : m_(std::move(m)), max_terms_(max_terms) {
    const std::size_t n = m_.size();
    const auto ni = static_cast<Eigen::Index>(n);
    MatRF lead(ni, ni);
    for (std::size_t i = 0; i < n; ++i) {
        if (m_[i].size() != n) throw SizeMismatch("series matrix is not square");
        const auto lv = leading(m_[i]);
        if (!lv) throw RankDeficient("series matrix has a zero row");
        val_.push_back(lv->valuation);
        for (std::size_t j = 0; j < n; ++j) lead(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = lv->vector[j];
    }
    lu_ = std::make_shared<const ExactLU<RF3>>(lead);
}

std::vector<QSeries> SquareSeriesSolver::solve(const std::vector<QSeries>& r) const {
    const std::size_t n = m_.size();
    if (r.size() != n) throw SizeMismatch("right-hand side length does not match the matrix");
    auto exact_zero = [](const QSeries& s) { return s.is_zero() && !s.bounded(); };
    long n0 = kInf;
    for (std::size_t i = 0; i < n; ++i)
        if (!exact_zero(r[i])) n0 = std::min(n0, r[i].lo() - val_[i]);
    if (n0 == kInf) return std::vector<QSeries>(n, QSeries::zero());
    long n_hi = n0 + max_terms_ - 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (r[i].bounded()) n_hi = std::min(n_hi, r[i].hi() - val_[i]);
        for (const auto& a : m_[i])
            if (a.bounded()) n_hi = std::min(n_hi, n0 + a.hi() - val_[i]);
    }
    if (n_hi < n0) throw InsufficientWindow("input windows do not determine any coefficient of the solution");

    const auto ni = static_cast<Eigen::Index>(n);
    std::vector<std::vector<RF3>> y(n);
    for (long m = n0; m <= n_hi; ++m) {
        Vec<RF3> rhs(ni);
        for (std::size_t i = 0; i < n; ++i) {
            RF3 acc = m + val_[i] < r[i].lo() ? RF3(0) : r[i].at(m + val_[i]);
            for (std::size_t j = 0; j < n; ++j)
                for (long k = 1; k <= m - n0; ++k) {
                    const RF3& yj = y[j][static_cast<std::size_t>(m - k - n0)];
                    if (yj.is_zero()) continue;
                    const RF3 a = m_[i][j].at(val_[i] + k);
                    if (!a.is_zero()) acc -= a * yj;
                }
            rhs(static_cast<Eigen::Index>(i)) = std::move(acc);
        }
        const Vec<RF3> x = lu_->solve(rhs);
        for (std::size_t j = 0; j < n; ++j) y[j].push_back(x(static_cast<Eigen::Index>(j)));
    }
    std::vector<QSeries> out;
    for (std::size_t j = 0; j < n; ++j) {
        QSeries s(n0, n_hi);
        for (long m = n0; m <= n_hi; ++m) s.set(m, y[j][static_cast<std::size_t>(m - n0)]);
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

// Rows of F_k with the fixed factor folded into the first leg.
std::vector<QSeries> leg_row(RelationBuilder& b, std::size_t k, std::size_t a) {
    std::vector<QSeries> row = b.factor_row(k, a);
    if (k == 0) {
        const QSeries f = b.fixed_factor();
        for (auto& e : row) e = f * e;
    }
    return row;
}

// Applies `f` to every fiber along mode k of a row-major tensor.
template <class Fn>
std::vector<QSeries> along_mode(const std::vector<QSeries>& t, const std::vector<std::size_t>& shape, std::size_t k, Fn&& f) {
    std::size_t inner = 1;
    for (std::size_t j = k + 1; j < shape.size(); ++j) inner *= shape[j];
    const std::size_t dim = shape[k], outer = t.size() / (dim * inner);
    std::vector<QSeries> out(t.size(), QSeries::zero());
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i) {
            std::vector<QSeries> fiber;
            for (std::size_t a = 0; a < dim; ++a) fiber.push_back(t[(o * dim + a) * inner + i]);
            std::vector<QSeries> image = f(fiber);
            for (std::size_t a = 0; a < dim; ++a) out[(o * dim + a) * inner + i] = std::move(image[a]);
        }
    return out;
}

std::vector<QSeries> times(const std::vector<std::vector<QSeries>>& m, const std::vector<QSeries>& x) {
    std::vector<QSeries> out;
    for (const auto& row : m) {
        std::optional<QSeries> acc;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j].is_zero() && !row[j].bounded()) continue;
            QSeries term = row[j] * x[j];
            if (acc) *acc += term;
            else acc = std::move(term);
        }
        out.push_back(acc ? std::move(*acc) : QSeries::zero());
    }
    return out;
}

}  // namespace

FactoredSelection select_factored(RelationBuilder& builder, const SolveOptions& options) {
    FactoredSelection sel;
    const std::size_t legs = builder.factor_count();
    for (std::size_t k = 0; k < legs; ++k) {
        const std::size_t n = builder.factor_columns(k).size();
        const std::size_t count = builder.factor_rows(k).size();
        SolveOptions per = options;
        per.consistency_rows = 0;
        try {
            sel.leg_pivots.push_back(
                select_stream(count, n, [&](std::size_t a) { return leg_row(builder, k, a); }, per).pivots);
        } catch (const RankDeficient& e) {
            throw RankDeficient("leg " + std::to_string(k) + " of the " + to_string(builder.relation_case()) +
                                " relation for " + builder.target().str() + ": " + e.what());
        }
    }
    std::vector<std::size_t> choice(legs, 0);
    while (true) {
        std::vector<std::size_t> tuple;
        for (std::size_t k = 0; k < legs; ++k) tuple.push_back(sel.leg_pivots[k][choice[k]]);
        sel.rows.push_back(builder.row_of(tuple));
        std::size_t k = legs;
        while (k > 0 && ++choice[k - 1] == sel.leg_pivots[k - 1].size()) choice[--k] = 0;
        if (k == 0) break;
    }
    for (std::size_t r = 0; r < builder.row_count() && static_cast<int>(sel.checks.size()) < options.consistency_rows; ++r)
        if (std::find(sel.rows.begin(), sel.rows.end(), r) == sel.rows.end()) sel.checks.push_back(r);
    return sel;
}

std::vector<QSeries> solve_factored(RelationBuilder& builder, const FactoredSelection& sel, const SolveOptions& options) {
    const std::size_t legs = builder.factor_count();
    std::vector<QSeries> t;
    for (std::size_t r : sel.rows) t.push_back(builder.rhs(r));
    std::vector<std::size_t> shape;
    for (const auto& p : sel.leg_pivots) shape.push_back(p.size());
    for (std::size_t k = 0; k < legs; ++k) {
        std::vector<std::vector<QSeries>> m;
        for (std::size_t a : sel.leg_pivots[k]) m.push_back(leg_row(builder, k, a));
        const SquareSeriesSolver leg(std::move(m), options.max_terms);
        t = along_mode(t, shape, k, [&](const std::vector<QSeries>& r) { return leg.solve(r); });
    }
    if (t.size() != builder.unknowns().size()) throw SizeMismatch("internal: factored shape does not match the unknowns");

    for (std::size_t c : sel.checks) {
        const auto coeffs = builder.coefficients(c);
        QSeries residual = -builder.rhs(c);
        try {
            for (std::size_t j = 0; j < coeffs.size(); ++j)
                if (!(coeffs[j].is_zero() && !coeffs[j].bounded())) residual += coeffs[j] * t[j];
        } catch (const EmptyWindow&) {
            continue;  // the windows say nothing about this row
        }
        for (const auto& [e, coeff] : residual.terms())
            if (!coeff.is_zero())
                throw InconsistentSystem("consistency equation " + std::to_string(c) + " has residual " + coeff.str() +
                                         " at order " + std::to_string(e));
    }
    return t;
}

std::vector<QSeries> apply_factored(RelationBuilder& builder, const FactoredSelection& sel, std::vector<QSeries> values) {
    if (values.size() != builder.unknowns().size()) throw SizeMismatch("one value per unknown expected");
    std::vector<std::size_t> shape;
    for (const auto& p : sel.leg_pivots) shape.push_back(p.size());
    for (std::size_t k = 0; k < shape.size(); ++k) {
        std::vector<std::vector<QSeries>> m;
        for (std::size_t a : sel.leg_pivots[k]) m.push_back(leg_row(builder, k, a));
        values = along_mode(values, shape, k, [&](const std::vector<QSeries>& x) { return times(m, x); });
    }
    return values;
}

std::vector<std::size_t> rows_read(RelationBuilder& builder, const SolveOptions& options) {
    std::vector<std::size_t> rows;
    if (options.factored) {
        const FactoredSelection sel = select_factored(builder, options);
        rows = sel.rows;
        rows.insert(rows.end(), sel.checks.begin(), sel.checks.end());
    } else {
        const RowSelection sel = select_rows(builder, options);
        rows = sel.pivots;
        rows.insert(rows.end(), sel.checks.begin(), sel.checks.end());
    }
    return rows;
}

QSeries unsubstitute(const QSeries& y, const WeightTriple& images) {
    if (images == standard_weights()) return y;
    MatQ m(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (const auto& t : images[static_cast<std::size_t>(i)].terms())
            if (t.mono.degree() != 1) throw PreconditionViolation("weight substitution is not linear");
        for (int j = 0; j < 3; ++j) m(i, j) = images[static_cast<std::size_t>(i)].coefficient_in(j, 1).is_zero()
                                                  ? BigQ(0)
                                                  : images[static_cast<std::size_t>(i)].coefficient_in(j, 1).constant_value();
    }
    // Y(s) = X(M s), so X(t) = Y(M^{-1} t).
    const ExactLU<BigQ> lu(m);
    std::array<RF3, 3> back;
    for (int j = 0; j < 3; ++j) back[static_cast<std::size_t>(j)] = RF3(0);
    for (int i = 0; i < 3; ++i) {
        Vec<BigQ> e = Vec<BigQ>::Constant(3, BigQ(0));
        e(i) = BigQ(1);
        const Vec<BigQ> col = lu.solve(e);  // column i of M^{-1}
        for (int j = 0; j < 3; ++j) back[static_cast<std::size_t>(j)] += RF3(Poly3::var(i).scaled(col(j)));
    }
    return substitute(y, back);
}

// ---------------------------------------------------------------------------
// Reduction

Reducer::Reducer(const ProviderTable& providers, SolveOptions options) : providers_(providers), options_(options) {}

QSeries Reducer::vertex(const VertexKey& key) {
    const VertexKey canonical = canonicalize(key.alpha, key.legs).key;
    if (is_ground(canonical)) return providers_.vertex(canonical);
    if (!memo_.count(canonical)) reduce(canonical);
    return memo_.at(canonical);
}

QSeries Reducer::lookup(const VertexKey& canonical, const VertexKey& consumer) {
    if (is_ground(canonical)) return providers_.vertex(canonical);
    if (!(canonical.order_vector() < consumer.order_vector()))
        throw InductionOrderViolation(canonical.str() + " is needed by " + consumer.str() + " but does not precede it");
    stats_.consumed.push_back(canonical.str() + " for " + consumer.str());
    if (!memo_.count(canonical)) reduce(canonical);
    return memo_.at(canonical);
}

void Reducer::reduce(const VertexKey& key) {
    if (!in_progress_.insert(key).second) throw InductionOrderViolation("cyclic dependency at " + key.str());
    ProviderSource src{[this, key](const VertexKey& k) { return lookup(k, key); },
                       [this](const ProviderKey& pk) { return providers_.at(pk); }};
    RelationBuilder builder(key, src);
    std::vector<QSeries> y;
    if (options_.factored) {
        y = solve_factored(builder, select_factored(builder, options_), options_);
    } else {
        y = solve(assemble_system(builder, select_rows(builder, options_)), options_);
    }
    ++stats_.systems;
    const std::string label = to_string(builder.relation_case());
    for (std::size_t j = 0; j < y.size(); ++j) {
        const Unknown& u = builder.unknowns()[j];
        QSeries x = unsubstitute(y[j], u.images);
        auto it = memo_.find(u.key);
        if (it == memo_.end()) memo_.emplace(u.key, std::move(x));
        else if (!it->second.agrees_with(x))
            throw InconsistentSystem("two evaluations of " + u.key.str() + " disagree in the " + label + " relation");
    }
    in_progress_.erase(key);
}

std::vector<VertexKey> induction_sorted(std::vector<VertexKey> keys) {
    for (auto& k : keys) k = canonicalize(k.alpha, k.legs).key;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

std::map<VertexKey, QSeries> reduce_all(const std::vector<VertexKey>& targets, const ProviderTable& providers,
                                        const SolveOptions& options) {
    Reducer reducer(providers, options);
    std::map<VertexKey, QSeries> out;
    for (const auto& t : induction_sorted(targets)) out.emplace(t, reducer.vertex(t));
    return out;
}

}  // namespace capdesc
