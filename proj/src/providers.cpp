#include "capdesc/providers.hpp"

#include <algorithm>
#include <numeric>

namespace capdesc {

WeightTriple standard_weights() { return {Poly3::var(0), Poly3::var(1), Poly3::var(2)}; }

std::array<std::string, 3> render_weights(const WeightTriple& w) { return {w[0].str(), w[1].str(), w[2].str()}; }

int VertexKey::leg_count() const {
    return static_cast<int>(std::count_if(legs.begin(), legs.end(), [](const Partition& p) { return !p.empty(); }));
}

std::array<int, 4> VertexKey::order_vector() const {
    return {alpha.size(), legs[2].size(), legs[1].size(), legs[0].size()};
}

std::string VertexKey::str() const {
    return "C(" + alpha.str() + "|" + legs[0].str() + "," + legs[1].str() + "," + legs[2].str() + ")";
}

std::strong_ordering operator<=>(const VertexKey& a, const VertexKey& b) {
    if (auto c = a.order_vector() <=> b.order_vector(); c != 0) return c;
    if (auto c = a.alpha <=> b.alpha; c != 0) return c;
    for (std::size_t i = 0; i < 3; ++i)
        if (auto c = a.legs[i] <=> b.legs[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

namespace {

// Leg i goes before leg j in canonical order.
bool leg_before(const Partition& x, const Partition& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x < y;  // canonical partition order: lexicographically larger first
}

}  // namespace

CanonicalVertex canonicalize(const Partition& alpha, const LegTriple& legs) {
    std::array<int, 3> perm{0, 1, 2};
    std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) { return leg_before(legs[i], legs[j]); });
    CanonicalVertex cv;
    cv.perm = perm;
    cv.key.alpha = alpha;
    for (int i = 0; i < 3; ++i) cv.key.legs[i] = legs[perm[i]];
    return cv;
}

bool is_canonical(const VertexKey& key) { return canonicalize(key.alpha, key.legs).key == key; }

bool precedes(const VertexKey& a, const VertexKey& b) { return a.order_vector() < b.order_vector(); }

std::string to_string(ProviderKind k) {
    switch (k) {
        case ProviderKind::vertex: return "vertex";
        case ProviderKind::edge: return "edge";
        case ProviderKind::rubber: return "rubber";
        case ProviderKind::remainder: return "remainder";
    }
    return "?";
}

ProviderKind provider_kind_from_string(const std::string& s) {
    if (s == "vertex") return ProviderKind::vertex;
    if (s == "edge") return ProviderKind::edge;
    if (s == "rubber") return ProviderKind::rubber;
    if (s == "remainder") return ProviderKind::remainder;
    throw SchemaError("unknown provider kind '" + s + "'");
}

std::string ProviderKey::str() const {
    std::string s = to_string(kind);
    if (!label.empty()) s += ":" + label;
    s += " alpha=" + alpha.str() + " legs=(";
    for (std::size_t i = 0; i < legs.size(); ++i) s += (i ? "," : "") + legs[i].str();
    s += ") weights=(" + weights[0] + ", " + weights[1] + ", " + weights[2] + ")";
    if (!aux.empty()) {
        s += " aux=(";
        for (std::size_t i = 0; i < aux.size(); ++i) s += (i ? "," : "") + aux[i].str();
        s += ")";
    }
    return s;
}

ProviderKey vertex_key(const VertexKey& k) {
    ProviderKey p;
    p.kind = ProviderKind::vertex;
    p.alpha = k.alpha;
    p.legs.assign(k.legs.begin(), k.legs.end());
    return p;
}

ProviderKey edge_key(const Partition& first, const Partition& second, const WeightTriple& w) {
    ProviderKey p;
    p.kind = ProviderKind::edge;
    p.legs = {first, second};
    p.weights = render_weights(w);
    return p;
}

ProviderKey rubber_key(const Partition& leg, const WeightTriple& w) {
    ProviderKey p;
    p.kind = ProviderKind::rubber;
    p.legs = {leg};
    p.weights = render_weights(w);
    return p;
}

ProviderKey remainder_key(const std::string& label, const VertexKey& target, std::vector<Partition> aux) {
    ProviderKey p;
    p.kind = ProviderKind::remainder;
    p.label = label;
    p.alpha = target.alpha;
    p.legs.assign(target.legs.begin(), target.legs.end());
    p.aux = std::move(aux);
    return p;
}

void ProviderTable::insert(ProviderKey key, QSeries value) { entries_.insert_or_assign(std::move(key), std::move(value)); }

const QSeries* ProviderTable::find(const ProviderKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

const QSeries& ProviderTable::at(const ProviderKey& key) const {
    if (const QSeries* s = find(key)) return *s;
    if (auto it = defaults_.find(key.kind); it != defaults_.end()) return it->second;
    throw MissingProviderEntry("missing provider entry: " + key.str());
}

QSeries ProviderTable::vertex(const VertexKey& canonical) const {
    if (canonical.leg_count() == 0) return canonical.alpha.empty() ? QSeries::constant(RF3(1)) : QSeries::zero();
    return at(vertex_key(canonical));
}

QSeries substitute(const QSeries& s, const std::array<RF3, 3>& images) {
    return s.map([&](const RF3& c) { return c.is_constant() ? c : c.compose(images); });
}

QSeries substitute(const QSeries& s, const WeightTriple& images) {
    if (images == standard_weights()) return s;
    return substitute(s, std::array<RF3, 3>{RF3(images[0]), RF3(images[1]), RF3(images[2])});
}

QSeries ProviderTable::vertex_at(const Partition& alpha, const LegTriple& legs, const WeightTriple& w) const {
    const CanonicalVertex cv = canonicalize(alpha, legs);
    const QSeries base = vertex(cv.key);
    return substitute(base, WeightTriple{w[cv.perm[0]], w[cv.perm[1]], w[cv.perm[2]]});
}

QSeries ProviderTable::edge(const Partition& first, const Partition& second, const WeightTriple& w) const {
    return at(edge_key(first, second, w));
}

QSeries ProviderTable::rubber(const Partition& leg, const WeightTriple& w) const { return at(rubber_key(leg, w)); }

ProviderReport validate_providers(const ProviderTable& table) {
    ProviderReport report;
    const std::array<std::string, 3> standard{"s1", "s2", "s3"};
    for (const auto& [key, value] : table.entries()) {
        if (key.kind != ProviderKind::vertex) {
            if (key.kind == ProviderKind::edge && (key.legs.size() != 2 || key.legs[0].size() != key.legs[1].size()))
                report.violations.push_back({key.str(), "edge entry needs two legs of equal size"});
            if (key.kind == ProviderKind::rubber && key.legs.size() != 1)
                report.violations.push_back({key.str(), "rubber entry needs exactly one leg"});
            if (key.kind == ProviderKind::remainder && key.label.empty())
                report.violations.push_back({key.str(), "remainder entry needs a label"});
            continue;
        }
        if (key.legs.size() != 3) {
            report.violations.push_back({key.str(), "vertex entry needs three legs"});
            continue;
        }
        if (key.weights != standard) {
            report.violations.push_back({key.str(), "vertex entries must be stored in the standard variables"});
            continue;
        }
        const bool empty_legs = std::all_of(key.legs.begin(), key.legs.end(), [](const Partition& p) { return p.empty(); });
        if (empty_legs) {
            const QSeries expected = key.alpha.empty() ? QSeries::constant(RF3(1)) : QSeries::zero();
            if (!value.agrees_with(expected))
                report.violations.push_back(
                    {key.str(), key.alpha.empty() ? "convention C(0|0,0,0) = 1 violated" : "convention C(alpha|0,0,0) = 0 violated"});
            continue;
        }
        bool any_missing = false;
        std::array<int, 3> pi{0, 1, 2};
        do {
            ProviderKey partner = key;
            for (int i = 0; i < 3; ++i) partner.legs[static_cast<std::size_t>(i)] = key.legs[static_cast<std::size_t>(pi[i])];
            const QSeries* other = table.find(partner);
            if (!other) {
                any_missing = true;
                continue;
            }
            // C(α|legs)(s) = C(α|legs∘π)(s∘π).
            const QSeries moved = substitute(*other, WeightTriple{Poly3::var(pi[0]), Poly3::var(pi[1]), Poly3::var(pi[2])});
            if (!moved.agrees_with(value))
                report.violations.push_back({key.str(), "S3 symmetry violated against permutation (" + std::to_string(pi[0] + 1) +
                                                            std::to_string(pi[1] + 1) + std::to_string(pi[2] + 1) + ")"});
        } while (std::next_permutation(pi.begin(), pi.end()));
        if (any_missing) report.uncheckable.push_back(key.str());
    }
    return report;
}

}  // namespace capdesc
