#pragma once

#include "capdesc/induction.hpp"

#include <map>
#include <set>

namespace capdesc {

// Synthetic ground truth for the induction engine. Every capped vertex gets
// a deterministic pseudo-random series; `plant` then writes the ground data,
// edges, rubber and exactly the remainder entries that make the relations
// hold for that truth.
class PlantedModel {
public:
    explicit PlantedModel(unsigned long seed = 1, long window = 8, SolveOptions options = {});

    // Truth in the standard variables, for a canonical key.
    const QSeries& true_vertex(const VertexKey& canonical);
    const QSeries& generated_entry(const ProviderKey& key);

    // Provider table from which reduce_all(targets) recovers the truth.
    ProviderTable plant(const std::vector<VertexKey>& targets);
    // Keys whose relations were planted, in planting order.
    const std::vector<VertexKey>& planted_keys() const { return order_; }

private:
    QSeries random_series(const std::string& tag, long lo);
    void plant_key(const VertexKey& key);

    unsigned long seed_;
    long window_;
    SolveOptions options_;
    std::map<VertexKey, QSeries> truth_;
    std::map<ProviderKey, QSeries> generated_;
    std::set<VertexKey> covered_;
    std::vector<VertexKey> order_;
    ProviderTable table_;
};

}  // namespace capdesc
