#pragma once

#include "capdesc/providers.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace capdesc {

// A fixed point with its tangent weights; weights[d] is the weight of the
// direction d, and each incident edge names the direction it leaves along.
struct ToricVertex {
    std::string id;
    WeightTriple weights;
};

struct EdgeEnd {
    int vertex = 0;
    int direction = 0;  // index into the vertex's weight triple
};

// One end for a noncompact edge, two for a compact one. The curve class is
// an integer vector over the polytope's H2 basis.
struct ToricEdge {
    std::string id;
    std::vector<EdgeEnd> ends;
    std::vector<int> curve_class;
    bool compact() const { return ends.size() == 2; }
};

// Fixed-point expansion of an invariant class: [Y] = Σ coeff * [vertex].
struct ExpansionTerm {
    int vertex = 0;
    RF3 coeff;
};

class ToricPolytope {
public:
    std::string name;
    std::vector<ToricVertex> vertices;
    std::vector<ToricEdge> edges;
    std::vector<std::string> h2_basis;
    std::map<std::string, std::vector<ExpansionTerm>> class_expansions;

    int vertex_index(const std::string& id) const;
    int edge_index(const std::string& id) const;
    // (edge, end) leaving vertex v in direction d, if any.
    std::optional<std::pair<int, int>> half_edge_at(int vertex, int direction) const;
    // Throws SchemaError describing the first structural defect.
    void validate() const;
};

// Curve class as multiplicities over H2 basis labels.
using CurveClass = std::map<std::string, int>;

// Partitions on both halves of every edge (noncompact edges keep ∅).
struct CappedMarking {
    std::vector<std::array<Partition, 2>> legs;
    friend bool operator==(const CappedMarking&, const CappedMarking&) = default;
};

// Descendent τ_{order}(p_vertex) insertions.
struct DescendentAssignment {
    std::vector<std::pair<int, std::string>> parts;  // (order > 0, vertex id)
};

std::vector<CappedMarking> enumerate_capped_markings(const ToricPolytope& polytope, const CurveClass& beta);

// G = (-1)^{|λ|-ℓ(λ)} z(λ) (Π_j w_j / w_i)^{ℓ(λ)} q^{-|λ|}; i is 0-based.
QSeries gluing_factor(const Partition& lambda, const WeightTriple& weights, int i);

// Scalar by which τ0(p) acts on C(∅|λ, μ, ν).
RF3 tau0_scalar(const Partition& lambda, const Partition& mu, const Partition& nu);

QSeries assemble(const ToricPolytope& polytope, const DescendentAssignment& sigma, const CurveClass& beta,
                 const ProviderTable& providers);

// Tangent triple used to key an edge entry: taken at the edge's first end,
// along-edge weight first, then the other two in vertex order.
WeightTriple edge_key_weights(const ToricPolytope& polytope, int edge);

// c1(T_X) · [C_e] by localization over the two ends of a compact edge.
RF3 chern_pairing(const ToricPolytope& polytope, int edge);

}  // namespace capdesc
