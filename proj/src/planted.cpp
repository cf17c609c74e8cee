#include "capdesc/planted.hpp"

#include "capdesc/hilb.hpp"

#include <random>

namespace capdesc {

namespace {

std::mt19937_64 rng_for(const std::string& tag, unsigned long seed) {
    std::string text = tag + "#" + std::to_string(seed);
    std::seed_seq seq(text.begin(), text.end());
    return std::mt19937_64(seq);
}

RF3 random_coefficient(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 6), var(0, 2), shape(0, 5);
    long n = 0;
    while (n == 0) n = num(rng);
    const BigQ c(n, den(rng));
    const int i = static_cast<int>(var(rng));
    const int j = (i + 1 + static_cast<int>(var(rng) % 2)) % 3;
    switch (shape(rng)) {
        case 0: return RF3(Poly3::var(i).scaled(c)) / RF3(Poly3::var(j));
        case 1: return RF3((Poly3::var(i) + Poly3::var(j).scaled(BigQ(num(rng)))).scaled(c));
        default: return RF3(Poly3(c));
    }
}

// Average over the permutations of the variables fixing the leg pattern.
QSeries symmetrize(const QSeries& s, const LegTriple& legs) {
    std::vector<std::array<int, 3>> group;
    std::array<int, 3> pi{0, 1, 2};
    do {
        if (legs[static_cast<std::size_t>(pi[0])] == legs[0] && legs[static_cast<std::size_t>(pi[1])] == legs[1] &&
            legs[static_cast<std::size_t>(pi[2])] == legs[2])
            group.push_back(pi);
    } while (std::next_permutation(pi.begin(), pi.end()));
    if (group.size() == 1) return s;
    std::optional<QSeries> acc;
    for (const auto& g : group) {
        QSeries moved = substitute(s, WeightTriple{Poly3::var(g[0]), Poly3::var(g[1]), Poly3::var(g[2])});
        if (acc) *acc += moved;
        else acc = std::move(moved);
    }
    return acc->scaled(RF3(Poly3(BigQ(1, static_cast<long>(group.size())))));
}

}  // namespace

PlantedModel::PlantedModel(unsigned long seed, long window, SolveOptions options)
    : seed_(seed), window_(window), options_(options) {
    if (window_ < 1) throw PreconditionViolation("planted window must hold at least one term");
}

QSeries PlantedModel::random_series(const std::string& tag, long lo) {
    auto rng = rng_for(tag, seed_);
    std::bernoulli_distribution keep(0.75);
    QSeries s(lo, lo + window_ - 1);
    for (long n = lo; n < lo + window_; ++n)
        if (n == lo || keep(rng)) s.set(n, random_coefficient(rng));
    return s;
}

const QSeries& PlantedModel::true_vertex(const VertexKey& canonical) {
    if (auto it = truth_.find(canonical); it != truth_.end()) return it->second;
    if (!is_canonical(canonical)) throw PreconditionViolation(canonical.str() + " is not in canonical form");
    QSeries value = QSeries::zero();
    if (canonical.leg_count() == 0) {
        value = canonical.alpha.empty() ? QSeries::constant(RF3(1)) : QSeries::zero();
    } else {
        long lo = 0;
        for (const auto& l : canonical.legs) lo += l.size();
        value = symmetrize(random_series(canonical.str(), lo), canonical.legs);
        if (canonical.leg_count() == 1 && !canonical.alpha.empty()) {
            // Leading term from the Hilbert scheme pairing in the transverse plane.
            const Partition& lam = canonical.legs[0];
            const RF3 lead = hilb::HilbData(lam.size())
                                 .descendent_pairing(canonical.alpha, lam)
                                 .compose({RF3(Poly3::var(1)), RF3(Poly3::var(2)), RF3(Poly3::var(0))});
            value.set(lo, lead);
        }
    }
    return truth_.emplace(canonical, std::move(value)).first->second;
}

const QSeries& PlantedModel::generated_entry(const ProviderKey& key) {
    if (auto it = generated_.find(key); it != generated_.end()) return it->second;
    if (key.kind != ProviderKind::edge && key.kind != ProviderKind::rubber)
        throw PreconditionViolation("only edge and rubber entries are generated: " + key.str());
    return generated_.emplace(key, random_series(key.str(), 0)).first->second;
}

ProviderTable PlantedModel::plant(const std::vector<VertexKey>& targets) {
    for (const auto& t : induction_sorted(targets))
        if (!is_ground(t) && !covered_.count(t)) plant_key(t);
    return table_;
}

void PlantedModel::plant_key(const VertexKey& key) {
    ProviderSource src{[this](const VertexKey& k) -> QSeries {
                           if (is_ground(k)) {
                               const QSeries& v = true_vertex(k);
                               if (k.leg_count() > 0) table_.insert(vertex_key(k), v);
                               return v;
                           }
                           if (!covered_.count(k)) plant_key(k);
                           return true_vertex(k);
                       },
                       [this](const ProviderKey& pk) -> QSeries {
                           const QSeries& v = generated_entry(pk);
                           table_.insert(pk, v);
                           return v;
                       }};
    RelationBuilder builder(key, src);
    std::vector<QSeries> truth;
    for (const auto& u : builder.unknowns()) truth.push_back(substitute(true_vertex(u.key), u.images));
    auto plant_row = [&](std::size_t r, const QSeries& lhs) { table_.insert(builder.remainder(r), -(builder.known(r) + lhs)); };
    auto plant_direct = [&](std::size_t r) {
        const auto coeffs = builder.coefficients(r);
        QSeries acc = QSeries::zero();
        for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * truth[j];
        plant_row(r, acc);
    };
    if (options_.factored) {
        const FactoredSelection sel = select_factored(builder, options_);
        const auto lhs = apply_factored(builder, sel, truth);
        for (std::size_t i = 0; i < sel.rows.size(); ++i) plant_row(sel.rows[i], lhs[i]);
        for (std::size_t r : sel.checks) plant_direct(r);
    } else {
        const RowSelection sel = select_rows(builder, options_);
        for (std::size_t r : sel.pivots) plant_direct(r);
        for (std::size_t r : sel.checks) plant_direct(r);
    }
    for (const auto& u : builder.unknowns()) covered_.insert(u.key);
    order_.push_back(key);
}

}  // namespace capdesc
