#include "capdesc/errors.hpp"
#include "capdesc/geometries.hpp"
#include "capdesc/io.hpp"

#include <doctest.h>

#include <filesystem>

using namespace capdesc;
namespace fs = std::filesystem;

namespace {

const fs::path kData = CAPDESC_DATA_DIR;

std::vector<fs::path> json_files(const fs::path& dir, bool recursive) {
    std::vector<fs::path> out;
    if (recursive) {
        for (const auto& e : fs::recursive_directory_iterator(dir))
            if (e.path().extension() == ".json" && e.path().parent_path().filename() != "mutated") out.push_back(e.path());
    } else {
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".json") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("bundled files validate clean") {
        const auto files = json_files(kData, true);
        CHECK(files.size() >= 15);
        for (const auto& f : files) {
            const auto r = io::validate_file(f);
            INFO(f.string());
            for (const auto& i : r.issues) MESSAGE(i.where << ": " << i.message);
            CHECK(r.clean());
        }
    }

    TEST_CASE("mutated providers are flagged") {
        const auto files = json_files(kData / "providers" / "mutated", false);
        CHECK(files.size() == 7);
        for (const auto& f : files) {
            INFO(f.string());
            CHECK_FALSE(io::validate_file(f).clean());
        }
    }

    TEST_CASE("validation never throws") {
        CHECK_FALSE(io::validate_document(io::parse_json(R"({"format": "providers", "entries": 3})")).clean());
        CHECK_FALSE(io::validate_document(io::parse_json(R"({"no_format": 1})")).clean());
        CHECK_FALSE(io::validate_file(kData / "does_not_exist.json").clean());
    }

    TEST_CASE("syntax errors carry a position") {
        try {
            io::parse_json("{\"format\": \n  \"series\",, }");
            FAIL("no exception");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("line") != std::string::npos);
        }
        CHECK_THROWS_AS(io::read_json(kData / "missing.json"), IoError);
    }

    TEST_CASE("series round trip") {
        QSeries s(-1, 4);
        s.set(-1, RF3::var(0) / RF3::var(1));
        s.set(2, RF3(BigQ(-3, 7)));
        const auto j = io::to_json(s);
        CHECK(io::series_from_json(j) == s);
        const auto exact = QSeries::exact({{0, RF3(1)}, {3, RF3::var(2)}});
        CHECK(io::series_from_json(io::to_json(exact)) == exact);
        CHECK_THROWS_AS(io::series_from_json(io::parse_json(R"({"window": [0, 2], "coeffs": {"5": "1"}})")), SchemaError);
        CHECK_THROWS_AS(io::series_from_json(io::parse_json(R"({"window": [0, 2], "coeffs": {"1": "s1 +"}})")), SchemaError);
    }

    TEST_CASE("geometry round trip") {
        for (const auto& name : {"cap_U", "F2xP1", "FkxP1(5)", "A2_compactified", "local_curve(0,-2)"}) {
            const ToricPolytope g = build_geometry(name);
            const ToricPolytope back = io::geometry_from_json(io::to_json(g));
            CHECK(io::dump(io::to_json(back)) == io::dump(io::to_json(g)));
        }
    }

    TEST_CASE("provider tables") {
        const auto doc = io::read_json(kData / "providers" / "symmetric.json");
        const ProviderTable t = io::providers_from_json(doc);
        CHECK(t.size() > 0);
        CHECK(io::dump(io::to_json(io::providers_from_json(io::to_json(t)))) == io::dump(io::to_json(t)));
        CHECK_THROWS_AS(io::providers_from_json(io::parse_json(R"({"format": "providers", "entries": [{"kind": "nope"}]})")),
                        SchemaError);
    }

    TEST_CASE("weighted series and targets") {
        int d = 0;
        const auto table = io::weighted_series_from_json(io::read_json(kData / "k3" / "relative_p2_d2.json"), &d);
        CHECK(d == 2);
        CHECK(io::dump(io::weighted_series_to_json(table, d)) == io::dump(io::read_json(kData / "k3" / "relative_p2_d2.json")));
        const auto targets = io::targets_from_json(io::read_json(kData / "targets" / "two_and_three_leg.json"));
        CHECK(targets.size() == 4);
    }

    TEST_CASE("bundled planted table reduces to the bundled truth") {
        const ProviderTable t = io::providers_from_json(io::read_json(kData / "providers" / "planted.json"));
        const auto truth = io::vertices_from_json(io::read_json(kData / "providers" / "planted_truth.json"));
        const auto targets = io::targets_from_json(io::read_json(kData / "targets" / "two_and_three_leg.json"));
        const auto got = reduce_all(targets, t);
        CHECK(got.size() == truth.size());
        for (const auto& [k, v] : truth) CHECK(got.at(k).agrees_with(v));
    }
}
