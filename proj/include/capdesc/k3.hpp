#pragma once

#include "capdesc/bigq.hpp"
#include "capdesc/matrix.hpp"
#include "capdesc/partitions.hpp"
#include "capdesc/qseries.hpp"

#include <Eigen/SparseCore>

#include <map>
#include <string>
#include <vector>

namespace capdesc::k3 {

// Graded self-dual basis of H*(S) for a surface S. `dim` is the complex
// dimension of the class's support: 2 for the unit, 0 for the point class.
struct SurfaceClass {
    std::string label;
    int dim = 0;
    std::string dual;
};

class SurfaceBasis {
public:
    SurfaceBasis() = default;
    // Throws SchemaError unless labels are unique, the involution is a
    // bijection with dim + dual dim = 2.
    explicit SurfaceBasis(std::vector<SurfaceClass> classes);
    // 1, e1..e22, pt with e_i self-dual.
    static SurfaceBasis k3();

    const std::vector<SurfaceClass>& classes() const { return classes_; }
    int dim(const std::string& label) const;
    int codim(const std::string& label) const { return 2 - dim(label); }
    const std::string& dual(const std::string& label) const;
    std::vector<int> graded_dimensions() const;  // counts of dim 2, 1, 0

private:
    const SurfaceClass& find(const std::string& label) const;
    std::vector<SurfaceClass> classes_;
    std::map<std::string, std::size_t> index_;
};

using BWeightedPartition = WeightedPartition;

// Apply the involution to every weight.
BWeightedPartition dual(const BWeightedPartition& mu, const SurfaceBasis& basis);
// All B-weighted partitions of d, by length, then shape, then labels.
std::vector<BWeightedPartition> weighted_partitions(int d, const SurfaceBasis& basis);
bool canonical_less(const BWeightedPartition& a, const BWeightedPartition& b);

// Σ codim γ_i = Σ dim δ_j + ℓ(μ) - ℓ(ν).
bool dimension_filter(const BWeightedPartition& mu, const BWeightedPartition& nu, const SurfaceBasis& basis);

// Π 1/μ_i! divided by the number of permutations of equal (part, label) pairs.
BigQ diagonal_normalization(const BWeightedPartition& mu);

BigQ structural_pairing(const BWeightedPartition& mu, const BWeightedPartition& nu, const SurfaceBasis& basis);

// Rows μ in canonical order; column j is the dual of row j, so equal-length
// blocks are diagonal and the matrix is upper triangular.
struct CorrespondencePairing {
    int d = 0;
    std::vector<BWeightedPartition> rows;
    std::vector<BWeightedPartition> columns;
    Eigen::SparseMatrix<BigQ, Eigen::RowMajor> matrix;

    bool upper_triangular() const;
    bool invertible() const;  // triangular with nonzero diagonal
};

CorrespondencePairing correspondence_matrix_K3(int d, const SurfaceBasis& basis = SurfaceBasis::k3());

using SeriesTable = std::map<BWeightedPartition, QSeries>;

// absolute(μ) = q^d Σ_ν M(μ,ν) relative(ν)
SeriesTable forward_degeneration(const SeriesTable& relative, int d, const SurfaceBasis& basis);
SeriesTable invert_degeneration(const SeriesTable& absolute, int d, const SurfaceBasis& basis);
// Same, reusing a precomputed matrix.
SeriesTable invert_degeneration(const SeriesTable& absolute, const CorrespondencePairing& pairing);

}  // namespace capdesc::k3
