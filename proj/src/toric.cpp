#include "capdesc/toric.hpp"

#include <functional>
#include <set>

namespace capdesc {

int ToricPolytope::vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].id == id) return static_cast<int>(i);
    throw SchemaError("unknown vertex id '" + id + "' in geometry " + name);
}

int ToricPolytope::edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id == id) return static_cast<int>(i);
    throw SchemaError("unknown edge id '" + id + "' in geometry " + name);
}

std::optional<std::pair<int, int>> ToricPolytope::half_edge_at(int vertex, int direction) const {
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (std::size_t k = 0; k < edges[e].ends.size(); ++k)
            if (edges[e].ends[k].vertex == vertex && edges[e].ends[k].direction == direction)
                return std::make_pair(static_cast<int>(e), static_cast<int>(k));
    return std::nullopt;
}

namespace {

bool is_linear_form(const Poly3& p) {
    if (p.is_zero()) return false;
    for (const auto& t : p.terms())
        if (t.mono.degree() != 1) return false;
    return true;
}

bool proportional(const Poly3& a, const Poly3& b) {
    const BigQ ratio = a.leading().coeff / b.leading().coeff;
    return a == b.scaled(ratio);
}

}  // namespace

void ToricPolytope::validate() const {
    std::set<std::string> ids;
    for (const auto& v : vertices) {
        if (!ids.insert(v.id).second) throw SchemaError("duplicate vertex id '" + v.id + "'");
        for (int i = 0; i < 3; ++i) {
            if (!is_linear_form(v.weights[i]))
                throw SchemaError("vertex '" + v.id + "': weight " + v.weights[i].str() + " is not a nonzero linear form");
            for (int j = 0; j < i; ++j)
                if (proportional(v.weights[i], v.weights[j]))
                    throw SchemaError("vertex '" + v.id + "': tangent weights are not pairwise independent");
        }
    }
    std::set<std::string> edge_ids;
    std::set<std::pair<int, int>> used;
    for (const auto& e : edges) {
        if (!edge_ids.insert(e.id).second) throw SchemaError("duplicate edge id '" + e.id + "'");
        if (e.ends.empty() || e.ends.size() > 2) throw SchemaError("edge '" + e.id + "' needs one or two ends");
        for (const auto& end : e.ends) {
            if (end.vertex < 0 || end.vertex >= static_cast<int>(vertices.size()))
                throw SchemaError("edge '" + e.id + "' refers to a missing vertex");
            if (end.direction < 0 || end.direction > 2) throw SchemaError("edge '" + e.id + "' has direction outside 0..2");
            if (!used.insert({end.vertex, end.direction}).second)
                throw SchemaError("two edges leave vertex '" + vertices[static_cast<std::size_t>(end.vertex)].id +
                                  "' in the same direction");
        }
        if (!e.compact()) continue;
        if (e.curve_class.size() != h2_basis.size())
            throw SchemaError("edge '" + e.id + "' class has the wrong number of H2 coordinates");
        bool nonzero = false;
        for (int c : e.curve_class) {
            if (c < 0) throw SchemaError("edge '" + e.id + "' class must have non-negative coordinates");
            nonzero = nonzero || c > 0;
        }
        if (!nonzero) throw SchemaError("edge '" + e.id + "' has zero curve class");
        const Poly3& w0 = vertices[static_cast<std::size_t>(e.ends[0].vertex)].weights[e.ends[0].direction];
        const Poly3& w1 = vertices[static_cast<std::size_t>(e.ends[1].vertex)].weights[e.ends[1].direction];
        if (!(w0 == -w1)) throw SchemaError("edge '" + e.id + "': tangent weights at its ends are not opposite");
    }
    for (const auto& [label, terms] : class_expansions)
        for (const auto& t : terms)
            if (t.vertex < 0 || t.vertex >= static_cast<int>(vertices.size()))
                throw SchemaError("class expansion '" + label + "' refers to a missing vertex");
}

std::vector<CappedMarking> enumerate_capped_markings(const ToricPolytope& polytope, const CurveClass& beta) {
    std::vector<int> target(polytope.h2_basis.size(), 0);
    for (const auto& [label, mult] : beta) {
        auto it = std::find(polytope.h2_basis.begin(), polytope.h2_basis.end(), label);
        if (it == polytope.h2_basis.end()) {
            if (mult != 0) throw UnsupportedClass("curve class label '" + label + "' is not in the H2 basis of " + polytope.name);
            continue;
        }
        if (mult < 0) throw PreconditionViolation("curve class multiplicities must be non-negative");
        target[static_cast<std::size_t>(it - polytope.h2_basis.begin())] = mult;
    }
    std::vector<int> compact;
    for (std::size_t e = 0; e < polytope.edges.size(); ++e)
        if (polytope.edges[e].compact()) compact.push_back(static_cast<int>(e));

    std::vector<std::vector<int>> degree_vectors;
    std::vector<int> degrees(compact.size(), 0);
    std::vector<int> remaining = target;
    std::function<void(std::size_t)> assign = [&](std::size_t k) {
        if (k == compact.size()) {
            if (std::all_of(remaining.begin(), remaining.end(), [](int r) { return r == 0; })) degree_vectors.push_back(degrees);
            return;
        }
        const auto& cls = polytope.edges[static_cast<std::size_t>(compact[k])].curve_class;
        int bound = std::numeric_limits<int>::max();
        for (std::size_t i = 0; i < cls.size(); ++i)
            if (cls[i] > 0) bound = std::min(bound, remaining[i] / cls[i]);
        for (int d = 0; d <= bound; ++d) {
            degrees[k] = d;
            for (std::size_t i = 0; i < cls.size(); ++i) remaining[i] -= d * cls[i];
            assign(k + 1);
            for (std::size_t i = 0; i < cls.size(); ++i) remaining[i] += d * cls[i];
        }
        degrees[k] = 0;
    };
    assign(0);

    std::vector<CappedMarking> out;
    for (const auto& dv : degree_vectors) {
        CappedMarking m;
        m.legs.assign(polytope.edges.size(), {Partition{}, Partition{}});
        std::function<void(std::size_t)> fill = [&](std::size_t k) {
            if (k == compact.size()) {
                out.push_back(m);
                return;
            }
            const auto parts = enumerate_partitions(dv[k]);
            auto& slot = m.legs[static_cast<std::size_t>(compact[k])];
            for (const auto& a : parts)
                for (const auto& b : parts) {
                    slot = {a, b};
                    fill(k + 1);
                }
            slot = {Partition{}, Partition{}};
        };
        fill(0);
    }
    return out;
}

QSeries gluing_factor(const Partition& lambda, const WeightTriple& weights, int i) {
    if (lambda.empty()) return QSeries::constant(RF3(1));
    if (i < 0 || i > 2) throw PreconditionViolation("gluing factor direction must be 0, 1 or 2");
    Poly3 others(1);
    for (int j = 0; j < 3; ++j)
        if (j != i) others *= weights[static_cast<std::size_t>(j)];
    const int sign = ((lambda.size() - lambda.length()) % 2) ? -1 : 1;
    const Poly3 coeff = others.pow(static_cast<unsigned>(lambda.length())).scaled(BigQ(centralizer_order(lambda)) * BigQ(sign));
    return QSeries::monomial(RF3(coeff), -lambda.size());
}

RF3 tau0_scalar(const Partition& lambda, const Partition& mu, const Partition& nu) {
    const Poly3 s1 = Poly3::var(0), s2 = Poly3::var(1), s3 = Poly3::var(2);
    return RF3((s2 * s3).scaled(BigQ(lambda.size())) + (s1 * s3).scaled(BigQ(mu.size())) + (s1 * s2).scaled(BigQ(nu.size())));
}

WeightTriple edge_key_weights(const ToricPolytope& p, int edge) {
    const auto& end = p.edges.at(static_cast<std::size_t>(edge)).ends[0];
    const auto& w = p.vertices[static_cast<std::size_t>(end.vertex)].weights;
    WeightTriple out;
    out[0] = w[static_cast<std::size_t>(end.direction)];
    int k = 1;
    for (int j = 0; j < 3; ++j)
        if (j != end.direction) out[static_cast<std::size_t>(k++)] = w[static_cast<std::size_t>(j)];
    return out;
}

QSeries assemble(const ToricPolytope& polytope, const DescendentAssignment& sigma, const CurveClass& beta,
                 const ProviderTable& providers) {
    std::vector<std::vector<int>> alpha_parts(polytope.vertices.size());
    for (const auto& [order, vid] : sigma.parts) {
        if (order <= 0) throw PreconditionViolation("descendent orders must be positive (tau_0 acts as a scalar)");
        alpha_parts[static_cast<std::size_t>(polytope.vertex_index(vid))].push_back(order);
    }
    std::vector<Partition> alphas;
    for (auto& parts : alpha_parts) alphas.push_back(Partition::from_unsorted(parts));

    const auto markings = enumerate_capped_markings(polytope, beta);
    std::optional<QSeries> total;
    for (const auto& m : markings) {
        QSeries term = QSeries::constant(RF3(1));
        for (std::size_t v = 0; v < polytope.vertices.size(); ++v) {
            LegTriple legs;
            for (int d = 0; d < 3; ++d)
                if (auto he = polytope.half_edge_at(static_cast<int>(v), d))
                    legs[static_cast<std::size_t>(d)] = m.legs[static_cast<std::size_t>(he->first)][static_cast<std::size_t>(he->second)];
            term *= providers.vertex_at(alphas[v], legs, polytope.vertices[v].weights);
        }
        for (std::size_t e = 0; e < polytope.edges.size(); ++e) {
            const auto& edge = polytope.edges[e];
            if (!edge.compact()) continue;
            const auto& lg = m.legs[e];
            if (lg[0].empty() && lg[1].empty()) continue;
            term *= providers.edge(lg[0], lg[1], edge_key_weights(polytope, static_cast<int>(e)));
            for (int k = 0; k < 2; ++k) {
                const auto& end = edge.ends[static_cast<std::size_t>(k)];
                term *= gluing_factor(lg[static_cast<std::size_t>(k)], polytope.vertices[static_cast<std::size_t>(end.vertex)].weights,
                                      end.direction);
            }
        }
        if (total) *total += term;
        else total = std::move(term);
    }
    if (!total) return QSeries::zero();
    return *total;
}

RF3 chern_pairing(const ToricPolytope& polytope, int edge) {
    const auto& e = polytope.edges.at(static_cast<std::size_t>(edge));
    if (!e.compact()) throw PreconditionViolation("Chern pairing needs a compact edge");
    RF3 acc;
    for (const auto& end : e.ends) {
        const auto& w = polytope.vertices[static_cast<std::size_t>(end.vertex)].weights;
        acc += RF3(w[0] + w[1] + w[2]) / RF3(w[static_cast<std::size_t>(end.direction)]);
    }
    return acc;
}

}  // namespace capdesc
