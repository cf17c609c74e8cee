#include "capdesc/k3.hpp"

#include "capdesc/errors.hpp"

#include <functional>

namespace capdesc::k3 {

SurfaceBasis::SurfaceBasis(std::vector<SurfaceClass> classes) : classes_(std::move(classes)) {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        const auto& c = classes_[i];
        if (c.dim < 0 || c.dim > 2) throw SchemaError("class '" + c.label + "' has dimension outside 0..2");
        if (!index_.emplace(c.label, i).second) throw SchemaError("duplicate class label '" + c.label + "'");
    }
    for (const auto& c : classes_) {
        auto it = index_.find(c.dual);
        if (it == index_.end()) throw SchemaError("dual of '" + c.label + "' is not a basis class");
        const auto& d = classes_[it->second];
        if (d.dual != c.label) throw SchemaError("involution is not a bijection at '" + c.label + "'");
        if (c.dim + d.dim != 2) throw SchemaError("'" + c.label + "' and its dual do not have dimensions summing to 2");
    }
}

SurfaceBasis SurfaceBasis::k3() {
    std::vector<SurfaceClass> cs{{"1", 2, "pt"}};
    for (int i = 1; i <= 22; ++i) cs.push_back({"e" + std::to_string(i), 1, "e" + std::to_string(i)});
    cs.push_back({"pt", 0, "1"});
    return SurfaceBasis(std::move(cs));
}

const SurfaceClass& SurfaceBasis::find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw SchemaError("class label '" + label + "' is not in the surface basis");
    return classes_[it->second];
}

int SurfaceBasis::dim(const std::string& label) const { return find(label).dim; }
const std::string& SurfaceBasis::dual(const std::string& label) const { return find(label).dual; }

std::vector<int> SurfaceBasis::graded_dimensions() const {
    std::vector<int> g(3, 0);
    for (const auto& c : classes_) ++g[static_cast<std::size_t>(2 - c.dim)];
    return g;
}

BWeightedPartition dual(const BWeightedPartition& mu, const SurfaceBasis& basis) {
    std::vector<WeightedPartition::Pair> pairs;
    for (const auto& [p, w] : mu.pairs()) pairs.emplace_back(p, basis.dual(w));
    return BWeightedPartition(std::move(pairs));
}

bool canonical_less(const BWeightedPartition& a, const BWeightedPartition& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    const Partition sa = a.shape(), sb = b.shape();
    if (sa != sb) return sa < sb;
    return a.pairs() < b.pairs();
}

std::vector<BWeightedPartition> weighted_partitions(int d, const SurfaceBasis& basis) {
    if (d < 0) throw PreconditionViolation("size must be non-negative");
    const auto& cs = basis.classes();
    std::vector<BWeightedPartition> out;
    for (const auto& shape : enumerate_partitions(d)) {
        // (part value, multiplicity) groups; labels within a group are a multiset.
        std::vector<std::pair<int, int>> groups;
        for (int p : shape) {
            if (!groups.empty() && groups.back().first == p) ++groups.back().second;
            else groups.emplace_back(p, 1);
        }
        std::vector<WeightedPartition::Pair> pairs;
        std::function<void(std::size_t, int, std::size_t)> fill = [&](std::size_t g, int left, std::size_t from) {
            if (g == groups.size()) {
                out.emplace_back(pairs);
                return;
            }
            if (left == 0) {
                if (g + 1 < groups.size()) fill(g + 1, groups[g + 1].second, 0);
                else fill(g + 1, 0, 0);
                return;
            }
            for (std::size_t c = from; c < cs.size(); ++c) {
                pairs.emplace_back(groups[g].first, cs[c].label);
                fill(g, left - 1, c);
                pairs.pop_back();
            }
        };
        if (groups.empty()) out.emplace_back();
        else fill(0, groups[0].second, 0);
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

bool dimension_filter(const BWeightedPartition& mu, const BWeightedPartition& nu, const SurfaceBasis& basis) {
    if (mu.size() != nu.size())
        throw SizeMismatch("weighted partitions of sizes " + std::to_string(mu.size()) + " and " + std::to_string(nu.size()));
    long lhs = 0, rhs = mu.length() - nu.length();
    for (const auto& [p, w] : mu.pairs()) lhs += basis.codim(w);
    for (const auto& [p, w] : nu.pairs()) rhs += basis.dim(w);
    return lhs == rhs;
}

BigQ diagonal_normalization(const BWeightedPartition& mu) {
    mpz_class den = 1;
    const auto& pr = mu.pairs();
    for (std::size_t i = 0; i < pr.size();) {
        std::size_t j = i;
        while (j < pr.size() && pr[j] == pr[i]) ++j;
        mpz_class aut;
        mpz_fac_ui(aut.get_mpz_t(), j - i);
        den *= aut;
        i = j;
    }
    for (const auto& [p, w] : pr) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(p));
        den *= f;
    }
    return BigQ(mpz_class(1), den);
}

namespace {

// ν^∨ arises from μ by splitting one part (a, γ) into (b, γ), (a - b, e) with
// e a middle-dimensional class.
bool is_split(const BWeightedPartition& mu, const BWeightedPartition& nu_dual, const SurfaceBasis& basis) {
    if (nu_dual.length() != mu.length() + 1) return false;
    const auto& pr = mu.pairs();
    for (std::size_t i = 0; i < pr.size(); ++i) {
        if (i > 0 && pr[i] == pr[i - 1]) continue;
        for (int b = 1; b < pr[i].first; ++b)
            for (const auto& c : basis.classes()) {
                if (c.dim != 1) continue;
                auto pairs = pr;
                pairs[i].first = b;
                pairs.emplace_back(pr[i].first - b, c.label);
                if (BWeightedPartition(std::move(pairs)) == nu_dual) return true;
            }
    }
    return false;
}

}  // namespace

BigQ structural_pairing(const BWeightedPartition& mu, const BWeightedPartition& nu, const SurfaceBasis& basis) {
    if (!dimension_filter(mu, nu, basis)) return BigQ(0);
    if (mu.length() > nu.length()) return BigQ(0);
    const BWeightedPartition nd = dual(nu, basis);
    if (mu.length() == nu.length()) return nd == mu ? diagonal_normalization(mu) : BigQ(0);
    return is_split(mu, nd, basis) ? -diagonal_normalization(nu) : BigQ(0);
}

bool CorrespondencePairing::upper_triangular() const {
    for (Eigen::Index i = 0; i < matrix.outerSize(); ++i)
        for (decltype(matrix)::InnerIterator it(matrix, i); it; ++it)
            if (it.col() < i && !it.value().is_zero()) return false;
    return true;
}

bool CorrespondencePairing::invertible() const {
    if (matrix.rows() != matrix.cols() || !upper_triangular()) return false;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
        if (matrix.coeff(i, i).is_zero()) return false;
    return true;
}

CorrespondencePairing correspondence_matrix_K3(int d, const SurfaceBasis& basis) {
    if (d < 1) throw PreconditionViolation("correspondence matrix needs d >= 1");
    CorrespondencePairing cp;
    cp.d = d;
    cp.rows = weighted_partitions(d, basis);
    std::map<BWeightedPartition, Eigen::Index> column_of;
    for (const auto& r : cp.rows) {
        column_of.emplace(dual(r, basis), static_cast<Eigen::Index>(cp.columns.size()));
        cp.columns.push_back(dual(r, basis));
    }
    std::vector<Eigen::Triplet<BigQ>> entries;
    for (std::size_t i = 0; i < cp.rows.size(); ++i) {
        const auto& mu = cp.rows[i];
        // Only ν = μ^∨ and the duals of one-part splits of μ can pair nonzero.
        std::vector<BWeightedPartition> candidates{dual(mu, basis)};
        const auto& pr = mu.pairs();
        for (std::size_t k = 0; k < pr.size(); ++k)
            for (int b = 1; b < pr[k].first; ++b)
                for (const auto& c : basis.classes()) {
                    if (c.dim != 1) continue;
                    auto pairs = pr;
                    pairs[k].first = b;
                    pairs.emplace_back(pr[k].first - b, c.label);
                    candidates.push_back(dual(BWeightedPartition(std::move(pairs)), basis));
                }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (const auto& nu : candidates) {
            const BigQ v = structural_pairing(mu, nu, basis);
            if (!v.is_zero()) entries.emplace_back(static_cast<Eigen::Index>(i), column_of.at(nu), v);
        }
    }
    const auto n = static_cast<Eigen::Index>(cp.rows.size());
    cp.matrix.resize(n, n);
    cp.matrix.setFromTriplets(entries.begin(), entries.end());
    return cp;
}

namespace {

QSeries scaled(const QSeries& s, const BigQ& c) { return s.scaled(RF3(Poly3(c))); }

const QSeries& require_entry(const SeriesTable& t, const BWeightedPartition& key, const char* what) {
    auto it = t.find(key);
    if (it == t.end()) throw PreconditionViolation(std::string(what) + " series missing for " + key.str());
    return it->second;
}

}  // namespace

SeriesTable forward_degeneration(const SeriesTable& relative, int d, const SurfaceBasis& basis) {
    const CorrespondencePairing cp = correspondence_matrix_K3(d, basis);
    SeriesTable out;
    for (Eigen::Index i = 0; i < cp.matrix.outerSize(); ++i) {
        QSeries acc = QSeries::zero();
        for (decltype(cp.matrix)::InnerIterator it(cp.matrix, i); it; ++it)
            acc += scaled(require_entry(relative, cp.columns[static_cast<std::size_t>(it.col())], "relative"), it.value());
        out.emplace(cp.rows[static_cast<std::size_t>(i)], acc.shifted(d));
    }
    return out;
}

SeriesTable invert_degeneration(const SeriesTable& absolute, const CorrespondencePairing& cp) {
    if (!cp.invertible()) throw RankDeficient("correspondence matrix is not invertible");
    const auto n = static_cast<std::size_t>(cp.matrix.rows());
    std::vector<QSeries> y(n);
    for (std::size_t i = n; i-- > 0;) {
        const auto ii = static_cast<Eigen::Index>(i);
        QSeries acc = require_entry(absolute, cp.rows[i], "absolute").shifted(-cp.d);
        BigQ diag;
        for (decltype(cp.matrix)::InnerIterator it(cp.matrix, ii); it; ++it) {
            if (it.col() == ii) diag = it.value();
            else acc -= scaled(y[static_cast<std::size_t>(it.col())], it.value());
        }
        y[i] = scaled(acc, diag.inverse());
    }
    SeriesTable out;
    for (std::size_t j = 0; j < n; ++j) out.emplace(cp.columns[j], std::move(y[j]));
    return out;
}

SeriesTable invert_degeneration(const SeriesTable& absolute, int d, const SurfaceBasis& basis) {
    return invert_degeneration(absolute, correspondence_matrix_K3(d, basis));
}

}  // namespace capdesc::k3
