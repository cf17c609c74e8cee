#pragma once

#include "capdesc/induction.hpp"
#include "capdesc/k3.hpp"
#include "capdesc/toric.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace capdesc::io {

using Json = nlohmann::ordered_json;

// Reads a JSON document; IoError if unreadable, SchemaError with line and
// column on a syntax error.
Json read_json(const std::filesystem::path& path);
Json parse_json(const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);
std::string dump(const Json& doc);

// Every document carries "format": one of the names below.
std::string format_of(const Json& doc);

Poly3 parse_poly(const std::string& text);
Partition partition_from_json(const Json& j, const std::string& where);
Json to_json(const Partition& p);

// {"window": [lo, hi|null], "coeffs": {"n": "<expr>"}}
QSeries series_from_json(const Json& j, const std::string& where = "");
Json to_json(const QSeries& s);

ProviderKey provider_key_from_json(const Json& j, const std::string& where);
ProviderTable providers_from_json(const Json& doc);
Json to_json(const ProviderTable& table);

ToricPolytope geometry_from_json(const Json& doc);
Json to_json(const ToricPolytope& p);

k3::SurfaceBasis basis_from_json(const Json& doc);
Json to_json(const k3::SurfaceBasis& b);

k3::BWeightedPartition weighted_from_json(const Json& j, const std::string& where);
Json to_json(const k3::BWeightedPartition& w);
k3::SeriesTable weighted_series_from_json(const Json& doc, int* d = nullptr);
Json weighted_series_to_json(const k3::SeriesTable& table, int d);

std::vector<VertexKey> targets_from_json(const Json& doc);
// Output of reduce / plant: canonical keys with their series.
std::map<VertexKey, QSeries> vertices_from_json(const Json& doc);
Json to_json(const VertexKey& k);

struct SchemaIssue {
    std::string where;
    std::string message;
};
struct SchemaReport {
    std::string format;
    std::vector<SchemaIssue> issues;
    bool clean() const { return issues.empty(); }
};
// Structural checks for any supported document, plus the provider
// convention checks for provider tables. Never throws on bad content.
SchemaReport validate_document(const Json& doc);
SchemaReport validate_file(const std::filesystem::path& path);

}  // namespace capdesc::io
