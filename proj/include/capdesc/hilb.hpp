#pragma once

#include "capdesc/matrix.hpp"
#include "capdesc/partitions.hpp"
#include "capdesc/rational_function.hpp"

#include <map>
#include <utility>
#include <vector>

namespace capdesc::hilb {

// Localized equivariant class on Hilb(C^2, d): a value in Q(s1, s2) at
// every monomial ideal (partition of d).
struct HilbClass {
    int d = 0;
    std::map<Partition, RF3> values;

    const RF3& at(const Partition& lambda) const;
    friend bool operator==(const HilbClass&, const HilbClass&) = default;
};

// Boxes of λ as (row, column) pairs, row = part index.
std::vector<std::pair<int, int>> boxes(const Partition& lambda);
int arm(const Partition& lambda, int row, int col);
int leg(const Partition& lambda, int row, int col);

RF3 tangent_euler(const Partition& lambda);

HilbClass unit_class(int d);
// τ_c = π_*(ch_{2+c}(F)); box (r, c) contributes e^{s1*col + s2*row}.
HilbClass descendent_class(int c, int d);
// Π_i τ_{α_i}; the empty product is the unit class.
HilbClass descendent_product(const Partition& alpha, int d);
HilbClass multiply(const HilbClass& a, const HilbClass& b);
HilbClass scale(const HilbClass& a, const RF3& c);

// Integral-form Jack polynomials J_λ in the power-sum basis, as polynomials
// in the Jack parameter a (stored as the variable s1 of a Poly3).
// Result: theta[λ][μ] with J_λ = Σ_μ theta[λ][μ] p_μ.
std::map<Partition, std::map<Partition, Poly3>> jack_integral_form(int d);

// Nakajima element |μ> restricted to the fixed points:
// |μ>(λ) = s2^{d-ℓ(μ)} θ^λ_μ(a = -s1/s2).
HilbClass nakajima_in_fixed_points(const Partition& mu);

RF3 pairing(const HilbClass& a, const HilbClass& b);

// Precomputed fixed-point data for one d.
class HilbData {
public:
    explicit HilbData(int d);
    int d() const { return d_; }
    const std::vector<Partition>& fixed_points() const { return points_; }
    const RF3& euler(const Partition& lambda) const { return euler_.at(lambda); }
    const HilbClass& nakajima(const Partition& mu) const { return nakajima_.at(mu); }
    // (s1 s2)^{ℓ(α)} <Π τ_{α_i} | λ>.
    RF3 descendent_pairing(const Partition& alpha, const Partition& lambda) const;

private:
    int d_;
    std::vector<Partition> points_;
    std::map<Partition, RF3> euler_;
    std::map<Partition, HilbClass> nakajima_;
};

// s1 s2 <τ_{c-1} | (c)>; equals 1/c! under the conventions above.
RF3 calibration_value(int c);

struct CorrespondenceMatrix {
    int d = 0;
    std::vector<Partition> row_gammas;  // γ ⊢ d in length order
    std::vector<Partition> row_alphas;  // shift_down(γ)
    std::vector<Partition> columns;     // λ ⊢ d in length order
    MatRF matrix;
};

// Rows α = shift_down(γ), columns λ, both in length order.
CorrespondenceMatrix correspondence_matrix(int d);
bool is_upper_triangular(const MatRF& m);

}  // namespace capdesc::hilb
