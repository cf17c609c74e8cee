#include "capdesc/geometries.hpp"

#include <regex>

namespace capdesc {

namespace {

Poly3 lin(long a, long b, long c) {
    return Poly3::var(0).scaled(BigQ(a)) + Poly3::var(1).scaled(BigQ(b)) + Poly3::var(2).scaled(BigQ(c));
}

class Builder {
public:
    explicit Builder(std::string name, std::vector<std::string> basis) {
        p_.name = std::move(name);
        p_.h2_basis = std::move(basis);
    }
    int vertex(const std::string& id, WeightTriple w) {
        p_.vertices.push_back({id, std::move(w)});
        return static_cast<int>(p_.vertices.size()) - 1;
    }
    void edge(const std::string& id, int v0, int d0, int v1, int d1, std::vector<int> cls) {
        p_.edges.push_back({id, {{v0, d0}, {v1, d1}}, std::move(cls)});
    }
    // Adds a noncompact edge on every direction still free.
    void close_open_directions() {
        for (int v = 0; v < static_cast<int>(p_.vertices.size()); ++v)
            for (int d = 0; d < 3; ++d)
                if (!p_.half_edge_at(v, d))
                    p_.edges.push_back({p_.vertices[static_cast<std::size_t>(v)].id + "/" + std::to_string(d), {{v, d}}, {}});
    }
    // [D] = Σ_{p in D} [p] / (product of the weights tangent to D at p).
    void divisor_expansion(const std::string& label, const std::vector<int>& points, int normal_direction) {
        auto& terms = p_.class_expansions[label];
        for (int v : points) {
            const auto& w = p_.vertices[static_cast<std::size_t>(v)].weights;
            Poly3 tangent(1);
            for (int d = 0; d < 3; ++d)
                if (d != normal_direction) tangent *= w[static_cast<std::size_t>(d)];
            terms.push_back({v, RF3(Poly3(1), tangent)});
        }
    }
    // [C] = Σ_{ends} [p] / (weight along C at p).
    void curve_expansion(const std::string& label, int edge) {
        auto& terms = p_.class_expansions[label];
        for (const auto& end : p_.edges[static_cast<std::size_t>(edge)].ends)
            terms.push_back({end.vertex, RF3(Poly3(1), p_.vertices[static_cast<std::size_t>(end.vertex)].weights[end.direction])});
    }
    ToricPolytope take() {
        p_.validate();
        return std::move(p_);
    }

private:
    ToricPolytope p_;
};

}  // namespace

ToricPolytope cap_u() {
    Builder b("cap_U", {});
    b.vertex("origin", standard_weights());
    b.close_open_directions();
    return b.take();
}

ToricPolytope f2_x_p1() {
    Builder b("F2xP1", {"C", "L", "P"});
    std::array<std::array<int, 4>, 2> v{};
    const std::array<std::string, 2> level{"0", "inf"};
    for (int h = 0; h < 2; ++h) {
        const long p = h == 0 ? 1 : -1;
        v[h][0] = b.vertex("star" + level[h], {lin(1, -1, 0), lin(0, 2, 0), lin(0, 0, p)});
        v[h][1] = b.vertex("bullet" + level[h], {lin(-1, 1, 0), lin(2, 0, 0), lin(0, 0, p)});
        v[h][2] = b.vertex("starbar" + level[h], {lin(1, -1, 0), lin(0, -2, 0), lin(0, 0, p)});
        v[h][3] = b.vertex("bulletbar" + level[h], {lin(-1, 1, 0), lin(-2, 0, 0), lin(0, 0, p)});
    }
    for (int h = 0; h < 2; ++h) {
        b.edge("C" + level[h], v[h][0], 0, v[h][1], 0, {1, 0, 0});
        b.edge("Cbar" + level[h], v[h][2], 0, v[h][3], 0, {1, 2, 0});
        b.edge("L" + level[h], v[h][0], 1, v[h][2], 1, {0, 1, 0});
        b.edge("Lbullet" + level[h], v[h][1], 1, v[h][3], 1, {0, 1, 0});
    }
    const std::array<std::string, 4> names{"star", "bullet", "starbar", "bulletbar"};
    for (int i = 0; i < 4; ++i) b.edge("P_" + names[i], v[0][i], 2, v[1][i], 2, {0, 0, 1});
    b.divisor_expansion("D0", {v[0][0], v[0][1], v[0][2], v[0][3]}, 2);
    b.curve_expansion("L0", 2);
    return b.take();
}

ToricPolytope fk_x_p1(int k) {
    if (k < 1) throw PreconditionViolation("FkxP1 needs k >= 1");
    Builder b("FkxP1(" + std::to_string(k) + ")", {"C-", "L", "P"});
    std::array<std::array<int, 4>, 2> v{};
    const std::array<std::string, 2> level{"0", "inf"};
    for (int h = 0; h < 2; ++h) {
        const long p = h == 0 ? 1 : -1;
        v[h][0] = b.vertex("star+" + level[h], {lin(1, 0, 0), lin(0, 1, 0), lin(0, 0, p)});
        v[h][1] = b.vertex("bullet+" + level[h], {lin(-1, 0, 0), lin(-k, 1, 0), lin(0, 0, p)});
        v[h][2] = b.vertex("star-" + level[h], {lin(1, 0, 0), lin(0, -1, 0), lin(0, 0, p)});
        v[h][3] = b.vertex("bullet-" + level[h], {lin(-1, 0, 0), lin(k, -1, 0), lin(0, 0, p)});
    }
    for (int h = 0; h < 2; ++h) {
        b.edge("C+" + level[h], v[h][0], 0, v[h][1], 0, {1, k, 0});
        b.edge("C-" + level[h], v[h][2], 0, v[h][3], 0, {1, 0, 0});
        b.edge("Lstar" + level[h], v[h][0], 1, v[h][2], 1, {0, 1, 0});
        b.edge("Lbullet" + level[h], v[h][1], 1, v[h][3], 1, {0, 1, 0});
    }
    const std::array<std::string, 4> names{"star+", "bullet+", "star-", "bullet-"};
    for (int i = 0; i < 4; ++i) b.edge("P_" + names[i], v[0][i], 2, v[1][i], 2, {0, 0, 1});
    b.divisor_expansion("D0", {v[0][0], v[0][1], v[0][2], v[0][3]}, 2);
    b.curve_expansion("L0", 2);
    return b.take();
}

ToricPolytope a2_compactified() {
    Builder b("A2_compactified", {"C", "Chat", "P"});
    std::array<std::array<int, 3>, 2> v{};
    const std::array<std::string, 2> level{"0", "inf"};
    for (int h = 0; h < 2; ++h) {
        const long p = h == 0 ? 1 : -1;
        // direction 0 points toward bullethat, direction 1 toward bullet.
        v[h][0] = b.vertex("bullethat" + level[h], {lin(3, 0, 0), lin(-2, 1, 0), lin(0, 0, p)});
        v[h][1] = b.vertex("star" + level[h], {lin(2, -1, 0), lin(-1, 2, 0), lin(0, 0, p)});
        v[h][2] = b.vertex("bullet" + level[h], {lin(1, -2, 0), lin(0, 3, 0), lin(0, 0, p)});
    }
    for (int h = 0; h < 2; ++h) {
        b.edge("Chat" + level[h], v[h][0], 1, v[h][1], 0, {0, 1, 0});
        b.edge("C" + level[h], v[h][1], 1, v[h][2], 0, {1, 0, 0});
    }
    const std::array<std::string, 3> names{"bullethat", "star", "bullet"};
    for (int i = 0; i < 3; ++i) b.edge("P_" + names[i], v[0][i], 2, v[1][i], 2, {0, 0, 1});
    b.close_open_directions();
    b.divisor_expansion("D0", {v[0][0], v[0][1], v[0][2]}, 2);
    return b.take();
}

ToricPolytope local_curve(int a, int b) {
    Builder g("local_curve(" + std::to_string(a) + "," + std::to_string(b) + ")", {"C"});
    const int v0 = g.vertex("v0", standard_weights());
    const int v1 = g.vertex("vinf", {lin(-1, 0, 0), lin(-a, 1, 0), lin(-b, 0, 1)});
    g.edge("C", v0, 0, v1, 0, {1});
    g.close_open_directions();
    return g.take();
}

ToricPolytope build_geometry(const std::string& name) {
    std::smatch m;
    if (name == "cap_U") return cap_u();
    if (name == "F2xP1") return f2_x_p1();
    if (name == "A2_compactified") return a2_compactified();
    if (name == "local_curve") return local_curve(-1, -1);
    if (std::regex_match(name, m, std::regex(R"(FkxP1\((\d+)\))"))) return fk_x_p1(std::stoi(m[1]));
    if (std::regex_match(name, m, std::regex(R"(local_curve\((-?\d+),\s*(-?\d+)\))")))
        return local_curve(std::stoi(m[1]), std::stoi(m[2]));
    throw PreconditionViolation("unknown geometry '" + name + "'");
}

}  // namespace capdesc
