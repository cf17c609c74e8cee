#pragma once

#include "capdesc/qseries.hpp"

#include <optional>
#include <string>
#include <vector>

namespace capdesc {

// q^shift * N(q) / D(q) with D(0) = 1 and gcd(N, D) = 1; coefficient k of a
// polynomial multiplies q^k.
struct RationalFit {
    long shift = 0;
    std::vector<RF3> numerator;
    std::vector<RF3> denominator;
    long certified_lo = 0;
    long certified_hi = 0;

    int numerator_degree() const { return static_cast<int>(numerator.size()) - 1; }  // -1 for zero
    int denominator_degree() const { return static_cast<int>(denominator.size()) - 1; }
    // Laurent expansion on [lo, hi].
    QSeries expand(long lo, long hi) const;
    std::string str() const;
};

struct FitOutcome {
    std::optional<RationalFit> fit;
    // On failure: first exponent at which no fit of the allowed degrees can
    // match the series.
    std::optional<long> residual_order;
    std::string reason;
    bool ok() const { return fit.has_value(); }
};

// Smallest denominator degree first; requires window length >= n + m + 2.
FitOutcome reconstruct(const QSeries& series, int max_num_deg, int max_den_deg);

// Specializes at each probe point, fits, checks that all probes agree on the
// degree pattern, then solves exactly at that pattern.
FitOutcome reconstruct_multivariate(const QSeries& series, int max_num_deg, int max_den_deg,
                                    const std::vector<std::array<BigQ, 3>>& probes);

// Small-height random probe points, reproducible from the seed.
std::vector<std::array<BigQ, 3>> probe_points(std::size_t count, unsigned long seed);

bool verify_fit(const RationalFit& fit, const QSeries& series);

// Doubles both bounds (starting at 1) until a fit is found or the window can
// no longer support the bounds.
FitOutcome reconstruct_escalating(const QSeries& series);

}  // namespace capdesc
