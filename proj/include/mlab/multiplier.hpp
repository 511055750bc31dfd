#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlab/grid.hpp"
#include "mlab/symbols.hpp"

namespace mlab::multiplier {

// What to do when the tuple loop touches a lattice point of the symbol's
// declared singular set. The contract default is to error naming the tuple;
// callers that know the set has measure zero (e.g. the commutator symbol at
// the origin, where the principal value vanishes by oddness) may opt into
// treating the point as zero.
enum class SingularPolicy { error, zero };

struct MultilinearPlan {
    symbols::Symbol symbol;
    GridSpec grid;              // input grid, dimension n
    int dealias_factor = 0;     // q; output spectrum lives on the q*N grid
    int trunc_radius = 0;       // K: per-axis frequency cut |k| <= K
    SingularPolicy policy = SingularPolicy::error;
    int jobs = 1;

    // Cached symbol values over the m-fold product of truncated index sets;
    // singular points hold NaN sentinels. Empty when the table would be
    // too large to keep.
    std::vector<Complex> symbol_table;

    std::size_t band_count() const;  // points in one truncated index box
};

// q = 0 picks the default dealias factor m+1. K must satisfy K <= N/2;
// the exhaustive accumulation is only budgeted for m*n <= 4.
MultilinearPlan make_plan(symbols::Symbol sigma, const GridSpec& g, int trunc_radius,
                          int dealias_factor = 0,
                          SingularPolicy policy = SingularPolicy::error,
                          int jobs = 1);

// Applies the m-linear multiplier operator: accumulates
// prod_i fhat_i(k_i) * sigma(k_1/2L, ..., k_m/2L) into the output spectrum
// at s = sum k_i on the dealiased q*N grid, then one inverse transform,
// subsampled back to the input grid.
SampledFunction apply(const MultilinearPlan& plan,
                      std::span<const SampledFunction> inputs);

struct NormEstimate {
    double max_ratio = 0.0;
    std::vector<double> ratios;
};

// Lower-bound sampler for the operator norm: seeded random band-limited
// inputs (random spectra under a Gaussian envelope), one ratio
// ||T(f_1..f_m)||_p / prod ||f_i||_{p_i} per trial, 1/p = sum 1/p_i.
// Deterministic for a fixed seed.
NormEstimate estimate_operator_norm(const MultilinearPlan& plan,
                                    std::span<const double> p_list, int trials,
                                    std::uint64_t seed);

// The random band-limited input used by the norm sampler (exposed so tests
// and experiments can reuse the exact stream).
SampledFunction random_band_limited(const GridSpec& g, int trunc_radius,
                                    std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t substream);

} // namespace mlab::multiplier
