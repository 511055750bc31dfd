#pragma once

#include <span>
#include <utility>

#include "mlab/grid.hpp"

namespace mlab::lp {

// C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
double smooth_step01(double t);
// C-infinity cutoff: exactly 1 on [0,1], exactly 0 on [2,inf).
double phi_cutoff(double u);

// Smooth dyadic partition of unity on R^d: the radial profile
// psi(r) = phi_cutoff(r) - phi_cutoff(2r) is supported in [1/2, 2] and
// telescopes to sum_j psi(2^-j r) = 1 for r != 0.
struct DyadicPartition {
    int dim = 1;

    double eval_radial(double r) const {
        r = r < 0 ? -r : r;
        return phi_cutoff(r) - phi_cutoff(2.0 * r);
    }
    double eval(std::span<const double> xi) const;
};

DyadicPartition build_dyadic_partition(int d);

// Frequency projection onto the dyadic annulus 2^(j-1) <= |xi| <= 2^(j+1).
SampledFunction delta_full(const SampledFunction& f, int j, const DyadicPartition& p);
SpectralFunction delta_full(const SpectralFunction& F, int j, const DyadicPartition& p);

// Same, but the multiplier depends only on the chosen axis frequency.
// axis is 0-based.
SampledFunction delta_coord(const SampledFunction& f, int j, int axis,
                            const DyadicPartition& p1);
SpectralFunction delta_coord(const SpectralFunction& F, int j, int axis,
                             const DyadicPartition& p1);

// Pointwise l^2 aggregation of the iterated coordinate projections over all
// scale tuples (j_1,...,j_q) in [jmin, jmax]^q for the chosen axes.
SampledFunction square_function(const SampledFunction& f, std::span<const int> axes,
                                int jmin, int jmax, const DyadicPartition& p1);

// Dyadic band [jmin, jmax] that covers every nonzero grid frequency:
// scales outside contribute nothing on band-limited data.
std::pair<int, int> resolvable_band(const GridSpec& g);

} // namespace mlab::lp
