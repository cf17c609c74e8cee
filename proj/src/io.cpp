#include "capdesc/io.hpp"

#include <fstream>
#include <sstream>

namespace capdesc::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw SchemaError((where.empty() ? std::string("document") : where) + ": " + msg);
}

const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) fail(where, std::string("missing field \"") + name + "\"");
    return *it;
}

std::string string_field(const Json& j, const char* name, const std::string& where) {
    const Json& v = field(j, name, where);
    if (!v.is_string()) fail(where + "/" + name, "expected a string");
    return v.get<std::string>();
}

long int_value(const Json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<long>();
}

std::string at_index(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

void expect_format(const Json& doc, const std::string& fmt) {
    if (format_of(doc) != fmt) fail("/format", "expected \"" + fmt + "\", found \"" + format_of(doc) + "\"");
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::array<std::string, 3> weights_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) fail(where, "expected three weight expressions");
    std::array<std::string, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!j[i].is_string()) fail(at_index(where, i), "expected a string");
        out[i] = parse_poly(j[i].get<std::string>()).str();
    }
    return out;
}

}  // namespace

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
    }
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_json(buf.str());
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << dump(doc);
    if (!out) throw IoError("write failed for " + path.string());
}

std::string format_of(const Json& doc) {
    if (!doc.is_object()) fail("", "top level must be an object");
    return string_field(doc, "format", "");
}

Poly3 parse_poly(const std::string& text) {
    const RF3 r = RF3::parse(text);
    if (!r.is_polynomial()) throw ParseError("'" + text + "' is not a polynomial");
    return r.num();
}

Partition partition_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of parts");
    std::vector<int> parts;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const long p = int_value(j[i], at_index(where, i));
        if (p <= 0) fail(at_index(where, i), "parts must be positive");
        parts.push_back(static_cast<int>(p));
    }
    if (!std::is_sorted(parts.rbegin(), parts.rend())) fail(where, "parts must be weakly decreasing");
    return Partition(std::move(parts));
}

Json to_json(const Partition& p) { return Json(p.parts()); }

QSeries series_from_json(const Json& j, const std::string& where) {
    const Json& w = field(j, "window", where);
    if (!w.is_array() || w.size() != 2) fail(where + "/window", "expected [lo, hi]");
    const long lo = int_value(w[0], where + "/window/0");
    const long hi = w[1].is_null() ? QSeries::kUnbounded : int_value(w[1], where + "/window/1");
    if (hi < lo) fail(where + "/window", "lo must not exceed hi");
    QSeries s(lo, hi);
    const Json& c = field(j, "coeffs", where);
    if (!c.is_object()) fail(where + "/coeffs", "expected an object of exponent -> expression");
    for (const auto& [key, value] : c.items()) {
        const std::string at = where + "/coeffs/" + key;
        long n = 0;
        try {
            std::size_t used = 0;
            n = std::stol(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            fail(at, "exponent key is not an integer");
        }
        if (n < lo || n > hi) fail(at, "exponent outside the declared window " + s.window_str());
        if (!value.is_string()) fail(at, "expected an expression string");
        try {
            s.set(n, RF3::parse(value.get<std::string>()));
        } catch (const ParseError& e) {
            fail(at, e.what());
        } catch (const DivisionByZero& e) {
            fail(at, e.what());
        }
    }
    return s;
}

Json to_json(const QSeries& s) {
    Json j;
    j["window"] = Json::array({s.lo(), s.bounded() ? Json(s.hi()) : Json(nullptr)});
    Json c = Json::object();
    for (const auto& [n, v] : s.terms()) c[std::to_string(n)] = v.str();
    j["coeffs"] = c;
    return j;
}

ProviderKey provider_key_from_json(const Json& j, const std::string& where) {
    ProviderKey k;
    try {
        k.kind = provider_kind_from_string(string_field(j, "kind", where));
    } catch (const SchemaError& e) {
        fail(where + "/kind", e.what());
    }
    if (j.contains("alpha")) k.alpha = partition_from_json(j["alpha"], where + "/alpha");
    const Json& legs = field(j, "legs", where);
    if (!legs.is_array()) fail(where + "/legs", "expected an array of partitions");
    for (std::size_t i = 0; i < legs.size(); ++i) k.legs.push_back(partition_from_json(legs[i], at_index(where + "/legs", i)));
    if (j.contains("weights")) {
        try {
            k.weights = weights_from_json(j["weights"], where + "/weights");
        } catch (const ParseError& e) {
            fail(where + "/weights", e.what());
        }
    }
    if (k.kind == ProviderKind::remainder) {
        k.label = string_field(j, "label", where);
        if (j.contains("aux")) {
            const Json& aux = j["aux"];
            if (!aux.is_array()) fail(where + "/aux", "expected an array of partitions");
            for (std::size_t i = 0; i < aux.size(); ++i) k.aux.push_back(partition_from_json(aux[i], at_index(where + "/aux", i)));
        }
    }
    if (k.kind == ProviderKind::vertex && k.legs.size() != 3) fail(where + "/legs", "vertex entries need three legs");
    return k;
}

ProviderTable providers_from_json(const Json& doc) {
    expect_format(doc, "providers");
    const Json& entries = field(doc, "entries", "");
    if (!entries.is_array()) fail("/entries", "expected an array");
    ProviderTable t;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string where = at_index("/entries", i);
        ProviderKey key = provider_key_from_json(entries[i], where);
        if (t.contains(key)) fail(where, "duplicate entry " + key.str());
        t.insert(std::move(key), series_from_json(entries[i], where));
    }
    return t;
}

Json to_json(const ProviderTable& table) {
    Json doc;
    doc["format"] = "providers";
    Json entries = Json::array();
    for (const auto& [k, v] : table.entries()) {
        Json e;
        e["kind"] = to_string(k.kind);
        if (!k.label.empty()) e["label"] = k.label;
        e["alpha"] = to_json(k.alpha);
        Json legs = Json::array();
        for (const auto& l : k.legs) legs.push_back(to_json(l));
        e["legs"] = legs;
        e["weights"] = Json(std::vector<std::string>(k.weights.begin(), k.weights.end()));
        if (!k.aux.empty()) {
            Json aux = Json::array();
            for (const auto& a : k.aux) aux.push_back(to_json(a));
            e["aux"] = aux;
        }
        const Json s = to_json(v);
        e["window"] = s["window"];
        e["coeffs"] = s["coeffs"];
        entries.push_back(e);
    }
    doc["entries"] = entries;
    return doc;
}

ToricPolytope geometry_from_json(const Json& doc) {
    expect_format(doc, "geometry");
    ToricPolytope p;
    p.name = string_field(doc, "name", "");
    const Json& basis = field(doc, "h2_basis", "");
    if (!basis.is_array()) fail("/h2_basis", "expected an array of labels");
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!basis[i].is_string()) fail(at_index("/h2_basis", i), "expected a string");
        p.h2_basis.push_back(basis[i].get<std::string>());
    }
    const Json& vs = field(doc, "vertices", "");
    if (!vs.is_array()) fail("/vertices", "expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string where = at_index("/vertices", i);
        ToricVertex v;
        v.id = string_field(vs[i], "id", where);
        const Json& w = field(vs[i], "weights", where);
        if (!w.is_array() || w.size() != 3) fail(where + "/weights", "expected three weights");
        for (std::size_t d = 0; d < 3; ++d) {
            if (!w[d].is_string()) fail(at_index(where + "/weights", d), "expected a string");
            try {
                v.weights[d] = parse_poly(w[d].get<std::string>());
            } catch (const ParseError& e) {
                fail(at_index(where + "/weights", d), e.what());
            }
        }
        p.vertices.push_back(std::move(v));
    }
    const Json& es = field(doc, "edges", "");
    if (!es.is_array()) fail("/edges", "expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string where = at_index("/edges", i);
        ToricEdge e;
        e.id = string_field(es[i], "id", where);
        const Json& ends = field(es[i], "ends", where);
        if (!ends.is_array()) fail(where + "/ends", "expected an array");
        for (std::size_t k = 0; k < ends.size(); ++k) {
            const std::string ew = at_index(where + "/ends", k);
            EdgeEnd end;
            end.vertex = p.vertex_index(string_field(ends[k], "vertex", ew));
            end.direction = static_cast<int>(int_value(field(ends[k], "direction", ew), ew + "/direction"));
            e.ends.push_back(end);
        }
        if (es[i].contains("class")) {
            const Json& c = es[i]["class"];
            if (!c.is_array()) fail(where + "/class", "expected an integer array");
            for (std::size_t k = 0; k < c.size(); ++k) e.curve_class.push_back(static_cast<int>(int_value(c[k], at_index(where + "/class", k))));
        }
        p.edges.push_back(std::move(e));
    }
    if (doc.contains("expansions")) {
        for (const auto& [label, terms] : doc["expansions"].items()) {
            const std::string where = "/expansions/" + label;
            if (!terms.is_array()) fail(where, "expected an array");
            auto& out = p.class_expansions[label];
            for (std::size_t k = 0; k < terms.size(); ++k) {
                const std::string tw = at_index(where, k);
                ExpansionTerm t;
                t.vertex = p.vertex_index(string_field(terms[k], "vertex", tw));
                try {
                    t.coeff = RF3::parse(string_field(terms[k], "coeff", tw));
                } catch (const ParseError& e) {
                    fail(tw + "/coeff", e.what());
                }
                out.push_back(std::move(t));
            }
        }
    }
    p.validate();
    return p;
}

Json to_json(const ToricPolytope& p) {
    Json doc;
    doc["format"] = "geometry";
    doc["name"] = p.name;
    doc["h2_basis"] = p.h2_basis;
    Json vs = Json::array();
    for (const auto& v : p.vertices) {
        const auto w = render_weights(v.weights);
        vs.push_back({{"id", v.id}, {"weights", std::vector<std::string>(w.begin(), w.end())}});
    }
    doc["vertices"] = vs;
    Json es = Json::array();
    for (const auto& e : p.edges) {
        Json ends = Json::array();
        for (const auto& end : e.ends)
            ends.push_back({{"vertex", p.vertices[static_cast<std::size_t>(end.vertex)].id}, {"direction", end.direction}});
        Json j{{"id", e.id}, {"ends", ends}};
        if (e.compact()) j["class"] = e.curve_class;
        es.push_back(j);
    }
    doc["edges"] = es;
    Json ex = Json::object();
    for (const auto& [label, terms] : p.class_expansions) {
        Json arr = Json::array();
        for (const auto& t : terms)
            arr.push_back({{"vertex", p.vertices[static_cast<std::size_t>(t.vertex)].id}, {"coeff", t.coeff.str()}});
        ex[label] = arr;
    }
    doc["expansions"] = ex;
    return doc;
}

k3::SurfaceBasis basis_from_json(const Json& doc) {
    expect_format(doc, "surface_basis");
    const Json& cs = field(doc, "classes", "");
    if (!cs.is_array()) fail("/classes", "expected an array");
    std::vector<k3::SurfaceClass> out;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string where = at_index("/classes", i);
        out.push_back({string_field(cs[i], "label", where),
                       static_cast<int>(int_value(field(cs[i], "dim", where), where + "/dim")),
                       string_field(cs[i], "dual", where)});
    }
    return k3::SurfaceBasis(std::move(out));
}

Json to_json(const k3::SurfaceBasis& b) {
    Json doc;
    doc["format"] = "surface_basis";
    Json cs = Json::array();
    for (const auto& c : b.classes()) cs.push_back({{"label", c.label}, {"dim", c.dim}, {"dual", c.dual}});
    doc["classes"] = cs;
    return doc;
}

k3::BWeightedPartition weighted_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of [part, label] pairs");
    std::vector<WeightedPartition::Pair> pairs;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string pw = at_index(where, i);
        if (!j[i].is_array() || j[i].size() != 2 || !j[i][1].is_string()) fail(pw, "expected [part, label]");
        const long part = int_value(j[i][0], pw + "/0");
        if (part <= 0) fail(pw + "/0", "parts must be positive");
        pairs.emplace_back(static_cast<int>(part), j[i][1].get<std::string>());
    }
    return k3::BWeightedPartition(std::move(pairs));
}

Json to_json(const k3::BWeightedPartition& w) {
    Json arr = Json::array();
    for (const auto& [p, l] : w.pairs()) arr.push_back(Json::array({p, l}));
    return arr;
}

k3::SeriesTable weighted_series_from_json(const Json& doc, int* d) {
    expect_format(doc, "weighted_series");
    const long size = int_value(field(doc, "d", ""), "/d");
    if (d) *d = static_cast<int>(size);
    const Json& es = field(doc, "entries", "");
    if (!es.is_array()) fail("/entries", "expected an array");
    k3::SeriesTable t;
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string where = at_index("/entries", i);
        auto key = weighted_from_json(field(es[i], "partition", where), where + "/partition");
        if (key.size() != size) fail(where + "/partition", "size differs from d = " + std::to_string(size));
        if (t.count(key)) fail(where, "duplicate partition " + key.str());
        t.emplace(std::move(key), series_from_json(es[i], where));
    }
    return t;
}

Json weighted_series_to_json(const k3::SeriesTable& table, int d) {
    Json doc;
    doc["format"] = "weighted_series";
    doc["d"] = d;
    Json es = Json::array();
    for (const auto& [k, v] : table) {
        Json e{{"partition", to_json(k)}};
        const Json s = to_json(v);
        e["window"] = s["window"];
        e["coeffs"] = s["coeffs"];
        es.push_back(e);
    }
    doc["entries"] = es;
    return doc;
}

namespace {

VertexKey vertex_key_from_json(const Json& j, const std::string& where) {
    VertexKey k;
    k.alpha = partition_from_json(field(j, "alpha", where), where + "/alpha");
    const Json& legs = field(j, "legs", where);
    if (!legs.is_array() || legs.size() != 3) fail(where + "/legs", "expected three partitions");
    for (std::size_t l = 0; l < 3; ++l) k.legs[l] = partition_from_json(legs[l], at_index(where + "/legs", l));
    return k;
}

}  // namespace

std::vector<VertexKey> targets_from_json(const Json& doc) {
    expect_format(doc, "targets");
    const Json& ts = field(doc, "targets", "");
    if (!ts.is_array()) fail("/targets", "expected an array");
    std::vector<VertexKey> out;
    for (std::size_t i = 0; i < ts.size(); ++i) out.push_back(vertex_key_from_json(ts[i], at_index("/targets", i)));
    return out;
}

std::map<VertexKey, QSeries> vertices_from_json(const Json& doc) {
    expect_format(doc, "vertices");
    const Json& vs = field(doc, "vertices", "");
    if (!vs.is_array()) fail("/vertices", "expected an array");
    std::map<VertexKey, QSeries> out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string where = at_index("/vertices", i);
        VertexKey k = vertex_key_from_json(vs[i], where);
        if (!is_canonical(k)) fail(where, k.str() + " is not in canonical form");
        if (!out.emplace(k, series_from_json(vs[i], where)).second) fail(where, "duplicate vertex " + k.str());
    }
    return out;
}

Json to_json(const VertexKey& k) {
    Json legs = Json::array();
    for (const auto& l : k.legs) legs.push_back(to_json(l));
    return Json{{"alpha", to_json(k.alpha)}, {"legs", legs}};
}

namespace {

// Issue from a failed parse; the message already starts with its location.
void record(SchemaReport& r, const std::string& fallback, const std::exception& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    if (!msg.empty() && msg[0] == '/' && colon != std::string::npos) r.issues.push_back({msg.substr(0, colon), msg.substr(colon + 2)});
    else r.issues.push_back({fallback, msg});
}

template <class F>
void guarded(SchemaReport& r, const std::string& where, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        record(r, where, e);
    } catch (const Json::exception& e) {
        r.issues.push_back({where, e.what()});
    }
}

}  // namespace

SchemaReport validate_document(const Json& doc) {
    SchemaReport r;
    guarded(r, "/format", [&] { r.format = format_of(doc); });
    if (!r.clean()) return r;
    if (r.format == "providers") {
        ProviderTable table;
        guarded(r, "/entries", [&] {
            const Json& entries = field(doc, "entries", "");
            if (!entries.is_array()) fail("/entries", "expected an array");
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const std::string where = at_index("/entries", i);
                guarded(r, where, [&] {
                    ProviderKey key = provider_key_from_json(entries[i], where);
                    QSeries value = series_from_json(entries[i], where);
                    if (table.contains(key)) fail(where, "duplicate entry " + key.str());
                    table.insert(std::move(key), std::move(value));
                });
            }
        });
        const ProviderReport pr = validate_providers(table);
        for (const auto& v : pr.violations) r.issues.push_back({v.key, v.message});
    } else if (r.format == "geometry") {
        guarded(r, "", [&] { geometry_from_json(doc); });
    } else if (r.format == "series") {
        guarded(r, "", [&] { series_from_json(doc); });
    } else if (r.format == "surface_basis") {
        guarded(r, "", [&] { basis_from_json(doc); });
    } else if (r.format == "weighted_series") {
        guarded(r, "", [&] { weighted_series_from_json(doc); });
    } else if (r.format == "targets") {
        guarded(r, "", [&] { targets_from_json(doc); });
    } else if (r.format == "vertices") {
        guarded(r, "", [&] { vertices_from_json(doc); });
    } else {
        r.issues.push_back({"/format", "unknown format \"" + r.format + "\""});
    }
    return r;
}

SchemaReport validate_file(const std::filesystem::path& path) {
    try {
        return validate_document(read_json(path));
    } catch (const Error& e) {
        SchemaReport r;
        r.issues.push_back({path.string(), e.what()});
        return r;
    }
}

}  // namespace capdesc::io
