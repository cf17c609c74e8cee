#include "capdesc/geometries.hpp"
#include "capdesc/hilb.hpp"
#include "capdesc/induction.hpp"
#include "capdesc/io.hpp"
#include "capdesc/k3.hpp"
#include "capdesc/planted.hpp"
#include "capdesc/rationality.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <regex>

using namespace capdesc;
using io::Json;

namespace {

enum Exit : int {
    kOk = 0,
    kOther = 1,
    kUsage = 2,
    kIo = 3,
    kSchema = 4,
    kMath = 5,
    kRank = 6,
    kMissing = 7,
    kWindow = 8,
};

int exit_code(const std::string& kind) {
    static const std::map<std::string, int> codes{
        {"io-error", kIo},
        {"schema-error", kSchema},
        {"parse-error", kSchema},
        {"division-by-zero", kMath},
        {"pole-at-point", kMath},
        {"size-mismatch", kMath},
        {"precondition-violation", kMath},
        {"unsupported-class", kMath},
        {"induction-order-violation", kMath},
        {"rank-deficient", kRank},
        {"inconsistent-system", kRank},
        {"missing-provider-entry", kMissing},
        {"out-of-window", kWindow},
        {"empty-window", kWindow},
        {"insufficient-window", kWindow},
    };
    auto it = codes.find(kind);
    return it == codes.end() ? kOther : it->second;
}

void emit(const Json& doc, const std::string& out) {
    if (out.empty()) std::cout << io::dump(doc);
    else io::write_json(out, doc);
}

CurveClass parse_beta(const std::string& text) {
    CurveClass beta;
    static const std::regex item(R"(\s*([A-Za-z0-9_+\-]+)\s*=\s*(-?\d+)\s*)");
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::smatch m;
        if (!std::regex_match(part, m, item)) throw ParseError("curve class item '" + part + "' is not label=multiplicity");
        beta[m[1]] = std::stoi(m[2]);
    }
    return beta;
}

DescendentAssignment parse_descendents(const std::string& text) {
    DescendentAssignment sigma;
    static const std::regex item(R"(\s*(-?\d+)\s*@\s*(\S+?)\s*)");
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::smatch m;
        if (!std::regex_match(part, m, item)) throw ParseError("descendent item '" + part + "' is not order@vertex");
        sigma.parts.emplace_back(std::stoi(m[1]), m[2]);
    }
    return sigma;
}

ToricPolytope load_geometry(const std::string& name, const std::string& file) {
    if (!file.empty()) return io::geometry_from_json(io::read_json(file));
    if (name.empty()) throw PreconditionViolation("give --geometry or --geometry-file");
    return build_geometry(name);
}

int cmd_hilb(int d, bool identity, const std::string& alpha, const std::string& lambda, const std::string& out) {
    if (identity) {
        bool ok = true;
        mpz_class fact = 1;
        for (int c = 1; c <= d; ++c) {
            fact *= c;
            const RF3 v = hilb::calibration_value(c);
            const bool match = v == RF3(BigQ(mpz_class(1), fact));
            ok = ok && match;
            std::cout << "c=" << c << " " << v.str() << (match ? "" : "  MISMATCH") << "\n";
        }
        return ok ? kOk : kMath;
    }
    if (!alpha.empty() || !lambda.empty()) {
        const Partition lam = Partition::parse(lambda.empty() ? "[]" : lambda);
        if (lam.size() != d) throw PreconditionViolation("--lambda must be a partition of --d");
        std::cout << hilb::HilbData(d).descendent_pairing(Partition::parse(alpha.empty() ? "[]" : alpha), lam).str() << "\n";
        return kOk;
    }
    const auto cm = hilb::correspondence_matrix(d);
    Json doc{{"format", "hilb_matrix"}, {"d", d}};
    Json rows = Json::array(), cols = Json::array(), entries = Json::array();
    for (const auto& a : cm.row_alphas) rows.push_back(io::to_json(a));
    for (const auto& c : cm.columns) cols.push_back(io::to_json(c));
    for (Eigen::Index i = 0; i < cm.matrix.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < cm.matrix.cols(); ++j) row.push_back(cm.matrix(i, j).str());
        entries.push_back(row);
    }
    doc["row_alphas"] = rows;
    doc["columns"] = cols;
    doc["entries"] = entries;
    doc["upper_triangular"] = hilb::is_upper_triangular(cm.matrix);
    emit(doc, out);
    return kOk;
}

int cmd_markings(const ToricPolytope& geo, const std::optional<int>& degree, const std::string& beta_text, const std::string& out) {
    CurveClass beta;
    if (!beta_text.empty()) {
        beta = parse_beta(beta_text);
    } else {
        if (!degree) throw PreconditionViolation("give --degree or --beta");
        if (geo.h2_basis.size() != 1)
            throw PreconditionViolation("--degree needs a geometry with one H2 class; use --beta for " + geo.name);
        beta[geo.h2_basis[0]] = *degree;
    }
    const auto markings = enumerate_capped_markings(geo, beta);
    Json list = Json::array();
    for (const auto& m : markings) {
        Json jm = Json::object();
        for (std::size_t e = 0; e < geo.edges.size(); ++e)
            if (geo.edges[e].compact()) jm[geo.edges[e].id] = Json::array({io::to_json(m.legs[e][0]), io::to_json(m.legs[e][1])});
        list.push_back(jm);
    }
    emit(Json{{"format", "markings"}, {"geometry", geo.name}, {"count", markings.size()}, {"markings", list}}, out);
    return kOk;
}

int cmd_assemble(const ToricPolytope& geo, const std::string& providers, const std::string& beta, const std::string& desc,
                 const std::optional<long>& window, const std::string& out) {
    const ProviderTable table = io::providers_from_json(io::read_json(providers));
    QSeries s = assemble(geo, parse_descendents(desc), parse_beta(beta), table);
    if (window) {
        if (*window < s.lo()) throw EmptyWindow("--window " + std::to_string(*window) + " ends below the result window " + s.window_str());
        s = s.truncated(*window);
    }
    Json doc = io::to_json(s);
    doc["format"] = "series";
    emit(doc, out);
    return kOk;
}

int cmd_reduce(const std::string& providers, const std::string& targets, const SolveOptions& opt, const std::string& out) {
    const ProviderTable table = io::providers_from_json(io::read_json(providers));
    const auto keys = io::targets_from_json(io::read_json(targets));
    Reducer reducer(table, opt);
    Json results = Json::array();
    for (const auto& k : induction_sorted(keys)) {
        const QSeries s = reducer.vertex(k);
        Json e = io::to_json(k);
        const Json sj = io::to_json(s);
        e["window"] = sj["window"];
        e["coeffs"] = sj["coeffs"];
        results.push_back(e);
    }
    Json doc{{"format", "vertices"}, {"seed", opt.seed}, {"systems", reducer.stats().systems}, {"vertices", results}};
    emit(doc, out);
    return kOk;
}

int cmd_plant(const std::string& targets, unsigned long seed, long window, const std::string& out, const std::string& truth_out) {
    const auto keys = io::targets_from_json(io::read_json(targets));
    PlantedModel model(seed, window);
    const ProviderTable table = model.plant(keys);
    emit(io::to_json(table), out);
    if (!truth_out.empty()) {
        Json vs = Json::array();
        for (const auto& k : induction_sorted(keys)) {
            Json e = io::to_json(k);
            const Json sj = io::to_json(model.true_vertex(k));
            e["window"] = sj["window"];
            e["coeffs"] = sj["coeffs"];
            vs.push_back(e);
        }
        io::write_json(truth_out, Json{{"format", "vertices"}, {"seed", seed}, {"vertices", vs}});
    }
    return kOk;
}

int cmd_geometry(const std::string& name, const std::string& out) {
    emit(io::to_json(build_geometry(name)), out);
    return kOk;
}

k3::SurfaceBasis load_basis(const std::string& file) {
    return file.empty() ? k3::SurfaceBasis::k3() : io::basis_from_json(io::read_json(file));
}

int cmd_k3(bool forward, int d, const std::string& basis_file, const std::string& input, const std::string& out) {
    const k3::SurfaceBasis basis = load_basis(basis_file);
    int file_d = d;
    const auto table = io::weighted_series_from_json(io::read_json(input), &file_d);
    if (file_d != d) throw SchemaError(input + ": d = " + std::to_string(file_d) + " but --d " + std::to_string(d));
    const auto result = forward ? k3::forward_degeneration(table, d, basis) : k3::invert_degeneration(table, d, basis);
    emit(io::weighted_series_to_json(result, d), out);
    return kOk;
}

int cmd_rational(const std::string& series_file, int max_num, int max_den, bool escalate, int probes, unsigned long seed,
                 const std::string& out) {
    const Json doc = io::read_json(series_file);
    if (io::format_of(doc) != "series") throw SchemaError(series_file + ": expected format \"series\"");
    const QSeries s = io::series_from_json(doc);
    FitOutcome r;
    Json result{{"format", "rational_check"}};
    if (probes > 0) {
        r = reconstruct_multivariate(s, max_num, max_den, probe_points(static_cast<std::size_t>(probes), seed));
        result["probe_seed"] = seed;
        result["probes"] = probes;
    } else if (escalate) {
        r = reconstruct_escalating(s);
    } else {
        r = reconstruct(s, max_num, max_den);
    }
    result["consistent"] = r.ok();
    if (r.ok()) {
        result["fit"] = r.fit->str();
        result["numerator_degree"] = r.fit->numerator_degree();
        result["denominator_degree"] = r.fit->denominator_degree();
        result["certified_window"] = Json::array({r.fit->certified_lo, r.fit->certified_hi});
    } else {
        result["reason"] = r.reason;
        if (r.residual_order) result["residual_order"] = *r.residual_order;
    }
    emit(result, out);
    return r.ok() ? kOk : kRank;
}

int cmd_validate(const std::vector<std::string>& files) {
    bool clean = true;
    Json reports = Json::array();
    for (const auto& f : files) {
        const io::SchemaReport r = io::validate_file(f);
        Json issues = Json::array();
        for (const auto& i : r.issues) issues.push_back({{"where", i.where}, {"message", i.message}});
        reports.push_back({{"file", f}, {"format", r.format}, {"clean", r.clean()}, {"issues", issues}});
        clean = clean && r.clean();
    }
    std::cout << io::dump(Json{{"format", "validation"}, {"reports", reports}});
    return clean ? kOk : kSchema;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact capped descendent vertex computations"};
    app.require_subcommand(1);
    std::string out;

    auto* hilb_cmd = app.add_subcommand("hilb-pairing", "Descendent/Nakajima pairings on Hilb(C^2, d)");
    int d = 1;
    bool identity = false;
    std::string alpha, lambda;
    hilb_cmd->add_option("--d", d, "number of points")->required()->check(CLI::Range(1, 12));
    hilb_cmd->add_flag("--identity-check", identity, "print s1 s2 <tau_{c-1}|(c)> for c = 1..d");
    hilb_cmd->add_option("--alpha", alpha, "descendent partition, e.g. [1,1]");
    hilb_cmd->add_option("--lambda", lambda, "Nakajima partition of d");
    hilb_cmd->add_option("--out", out, "output file (default stdout)");

    auto* mark_cmd = app.add_subcommand("capped-markings", "List capped markings of a curve class");
    std::string geometry, geometry_file, beta;
    std::optional<int> degree;
    mark_cmd->add_option("--geometry", geometry, "built-in geometry, e.g. local_curve or FkxP1(3)");
    mark_cmd->add_option("--geometry-file", geometry_file, "geometry JSON file");
    mark_cmd->add_option("--degree", degree, "degree for one-class geometries")->check(CLI::NonNegativeNumber);
    mark_cmd->add_option("--beta", beta, "class as label=mult,...");
    mark_cmd->add_option("--out", out, "output file");

    auto* asm_cmd = app.add_subcommand("assemble", "Capped localization sum from provider data");
    std::string providers, descendents;
    asm_cmd->add_option("--geometry", geometry, "built-in geometry");
    asm_cmd->add_option("--geometry-file", geometry_file, "geometry JSON file");
    asm_cmd->add_option("--providers", providers, "provider table")->required();
    asm_cmd->add_option("--beta", beta, "class as label=mult,...")->required();
    asm_cmd->add_option("--descendents", descendents, "insertions as order@vertex,...");
    std::optional<long> asm_window;
    asm_cmd->add_option("--window", asm_window, "drop coefficients above q^N");
    asm_cmd->add_option("--out", out, "output file");

    auto* red_cmd = app.add_subcommand("reduce", "Reduce capped vertices to ground data");
    std::string targets;
    SolveOptions opt;
    red_cmd->add_option("--providers", providers, "provider table")->required();
    red_cmd->add_option("--targets", targets, "targets file")->required();
    red_cmd->add_option("--seed", opt.seed, "probe seed for rank tests");
    red_cmd->add_option("--max-terms", opt.max_terms, "solution length cap for exact inputs")->check(CLI::PositiveNumber);
    bool general = false;
    red_cmd->add_flag("--general", general, "eliminate on the full coefficient rows instead of per leg");
    red_cmd->add_option("--out", out, "output file");

    auto* geo_cmd = app.add_subcommand("geometry", "Write a built-in geometry as JSON");
    std::string geo_name;
    geo_cmd->add_option("--name", geo_name, "cap_U, F2xP1, FkxP1(k), A2_compactified or local_curve(a,b)")->required();
    geo_cmd->add_option("--out", out, "output file");

    auto* plant_cmd = app.add_subcommand("plant", "Synthetic provider table with a known solution");
    unsigned long plant_seed = 1;
    long window = 8;
    std::string truth_out;
    plant_cmd->add_option("--targets", targets, "targets file")->required();
    plant_cmd->add_option("--seed", plant_seed, "generator seed");
    plant_cmd->add_option("--window", window, "terms per planted series")->check(CLI::PositiveNumber);
    plant_cmd->add_option("--out", out, "provider table output");
    plant_cmd->add_option("--truth", truth_out, "write the planted vertices here");

    auto* k3_cmd = app.add_subcommand("k3-invert", "Relative series from absolute ones via the correspondence matrix");
    std::string basis_file, input;
    k3_cmd->add_option("--d", d, "size")->required()->check(CLI::Range(1, 4));
    k3_cmd->add_option("--basis", basis_file, "surface basis file (default: K3)");
    k3_cmd->add_option("--absolute", input, "absolute series table")->required();
    k3_cmd->add_option("--out", out, "output file");

    auto* k3f_cmd = app.add_subcommand("k3-forward", "Absolute series from relative ones");
    k3f_cmd->add_option("--d", d, "size")->required()->check(CLI::Range(1, 4));
    k3f_cmd->add_option("--basis", basis_file, "surface basis file (default: K3)");
    k3f_cmd->add_option("--relative", input, "relative series table")->required();
    k3f_cmd->add_option("--out", out, "output file");

    auto* rat_cmd = app.add_subcommand("rational-check", "Rational-function reconstruction of a series");
    std::string series;
    int max_num = 2, max_den = 2, probes = 0;
    bool escalate = false;
    unsigned long probe_seed = 20240601;
    rat_cmd->add_option("--series", series, "series file")->required();
    rat_cmd->add_option("--max-num", max_num, "numerator degree bound")->check(CLI::NonNegativeNumber);
    rat_cmd->add_option("--max-den", max_den, "denominator degree bound")->check(CLI::NonNegativeNumber);
    rat_cmd->add_flag("--escalate", escalate, "double both bounds until the window is exhausted");
    rat_cmd->add_option("--probes", probes, "probe points for the multivariate path (0: exact only)")->check(CLI::NonNegativeNumber);
    rat_cmd->add_option("--seed", probe_seed, "probe seed");
    rat_cmd->add_option("--out", out, "output file");

    auto* val_cmd = app.add_subcommand("validate", "Schema and convention checks for data files");
    std::vector<std::string> files;
    val_cmd->add_option("files", files, "geometry, provider, series, basis or target files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*hilb_cmd) return cmd_hilb(d, identity, alpha, lambda, out);
        if (*mark_cmd) return cmd_markings(load_geometry(geometry, geometry_file), degree, beta, out);
        if (*asm_cmd) return cmd_assemble(load_geometry(geometry, geometry_file), providers, beta, descendents, asm_window, out);
        if (*red_cmd) {
            opt.factored = !general;
            return cmd_reduce(providers, targets, opt, out);
        }
        if (*geo_cmd) return cmd_geometry(geo_name, out);
        if (*plant_cmd) return cmd_plant(targets, plant_seed, window, out, truth_out);
        if (*k3_cmd) return cmd_k3(false, d, basis_file, input, out);
        if (*k3f_cmd) return cmd_k3(true, d, basis_file, input, out);
        if (*rat_cmd) return cmd_rational(series, max_num, max_den, escalate, probes, probe_seed, out);
        if (*val_cmd) return cmd_validate(files);
    } catch (const Error& e) {
        std::cerr << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return kOther;
    }
    return kUsage;
}
