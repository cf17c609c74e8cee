#pragma once

#include "capdesc/partitions.hpp"
#include "capdesc/qseries.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace capdesc {

using LegTriple = std::array<Partition, 3>;
using WeightTriple = std::array<Poly3, 3>;

WeightTriple standard_weights();
std::array<std::string, 3> render_weights(const WeightTriple& w);

// Capped descendent vertex key C(α | λ, μ, ν).
struct VertexKey {
    Partition alpha;
    LegTriple legs;

    int leg_count() const;
    // Induction vector (|α|, |ν|, |μ|, |λ|); 2-leg keys have |ν| = 0.
    std::array<int, 4> order_vector() const;
    std::string str() const;
    friend bool operator==(const VertexKey&, const VertexKey&) = default;
    friend std::strong_ordering operator<=>(const VertexKey& a, const VertexKey& b);
};

// Σ3 canonical form: legs sorted by size, then canonical partition order,
// stably. `perm[i]` is the original position of canonical leg i.
struct CanonicalVertex {
    VertexKey key;
    std::array<int, 3> perm;
};
CanonicalVertex canonicalize(const Partition& alpha, const LegTriple& legs);
bool is_canonical(const VertexKey& key);
bool precedes(const VertexKey& a, const VertexKey& b);

enum class ProviderKind { vertex, edge, rubber, remainder };
std::string to_string(ProviderKind k);
ProviderKind provider_kind_from_string(const std::string& s);

// Key of one provider entry. Vertex entries are stored in the standard
// variables; edges and rubber are keyed by the tangent triple they were
// computed at (edges: along-edge weight first).
struct ProviderKey {
    ProviderKind kind = ProviderKind::vertex;
    Partition alpha;
    std::vector<Partition> legs;
    std::array<std::string, 3> weights{"s1", "s2", "s3"};
    std::string label;              // remainder entries only
    std::vector<Partition> aux;     // remainder entries only

    std::string str() const;
    friend bool operator==(const ProviderKey&, const ProviderKey&) = default;
    friend auto operator<=>(const ProviderKey&, const ProviderKey&) = default;
};

ProviderKey vertex_key(const VertexKey& k);
ProviderKey edge_key(const Partition& first, const Partition& second, const WeightTriple& w);
ProviderKey rubber_key(const Partition& leg, const WeightTriple& w);
ProviderKey remainder_key(const std::string& label, const VertexKey& target, std::vector<Partition> aux);

// Read-only store of provider series during assembly and induction.
class ProviderTable {
public:
    void insert(ProviderKey key, QSeries value);
    bool contains(const ProviderKey& key) const { return entries_.count(key) > 0; }
    const QSeries* find(const ProviderKey& key) const;
    // Stored entry or the kind's default; throws MissingProviderEntry.
    const QSeries& at(const ProviderKey& key) const;
    void set_default(ProviderKind kind, QSeries value) { defaults_[kind] = std::move(value); }
    const std::map<ProviderKey, QSeries>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    // Vertex series in the standard variables for a canonical key, with the
    // empty-leg conventions applied.
    QSeries vertex(const VertexKey& canonical) const;
    // C(α | legs) at a fixed point with tangent weights w (w[i] along legs[i]).
    QSeries vertex_at(const Partition& alpha, const LegTriple& legs, const WeightTriple& w) const;
    QSeries edge(const Partition& first, const Partition& second, const WeightTriple& w) const;
    QSeries rubber(const Partition& leg, const WeightTriple& w) const;

private:
    std::map<ProviderKey, QSeries> entries_;
    std::map<ProviderKind, QSeries> defaults_;
};

// Substitute s_i -> images[i] coefficient-wise.
QSeries substitute(const QSeries& s, const WeightTriple& images);
QSeries substitute(const QSeries& s, const std::array<RF3, 3>& images);

struct ProviderViolation {
    std::string key;
    std::string message;
};
struct ProviderReport {
    std::vector<ProviderViolation> violations;
    std::vector<std::string> uncheckable;  // Σ3 partner key absent
    bool clean() const { return violations.empty(); }
};
ProviderReport validate_providers(const ProviderTable& table);

}  // namespace capdesc
