#pragma once

#include <vector>

#include "mlab/grid.hpp"
#include "mlab/littlewood_paley.hpp"
#include "mlab/symbols.hpp"

namespace mlab::sobolev {

// The three fractional-derivative families. The frequency-side multipliers,
// with eta the physical dual variable in variable-major layout:
//   coordinatewise: prod_{i,l} (1 + 4 pi^2 eta_il^2)^(gamma_il / 2)
//   per_variable:   prod_i (1 + 4 pi^2 |eta_i|^2)^(gamma_i / 2)
//   full:           (1 + 4 pi^2 |eta|^2)^(gamma / 2)
enum class SmoothnessFamily { coordinatewise, per_variable, full };

struct SmoothnessSpec {
    SmoothnessFamily family = SmoothnessFamily::full;
    int arity = 1;              // m
    int dim = 1;                // n
    std::vector<double> gamma;  // m*n, m, or 1 entries depending on family
    double r = 2.0;             // integrability exponent of the localized norm

    static SmoothnessSpec coordinatewise(int m, int n, double g, double r);
    static SmoothnessSpec per_variable(int m, int n, double g, double r);
    static SmoothnessSpec full(int m, int n, double g, double r);

    std::size_t gamma_count() const;
    // Shape consistency only; sign-free so inverse applications can negate.
    void validate_shapes() const;
    // Hypothesis range for the localized-norm sups: exponents positive, r in [1, 2].
    void validate_hypothesis() const;

    double multiplier_at(const double* eta) const;
    SmoothnessSpec negated() const;
};

// Spectral application of the family multiplier; grid dim must equal m*n.
// The multiplier never vanishes, so negating gamma inverts exactly.
SpectralFunction fractional_apply(const SpectralFunction& F, const SmoothnessSpec& spec);
SampledFunction fractional_apply(const SampledFunction& f, const SmoothnessSpec& spec);

// || D^Gamma [ sigma(2^j .) psi_hat ] ||_{L^r} on the mn-dimensional grid g.
// The sample grid is offset by half a cell so no point lands on a coordinate
// hyperplane (singular sets of the cataloged symbols have measure zero).
double localized_norm(const symbols::Symbol& sigma, int j,
                      const lp::DyadicPartition& p, const SmoothnessSpec& spec,
                      const GridSpec& g);

struct JProfile {
    int jmin = 0;
    std::vector<double> norms;
    double max_norm = 0.0;
    // (max - min) / max; zero for a perfectly flat profile.
    double flatness() const;
};

// sup over j in [jmin, jmax] of the localized norm, with the whole profile.
JProfile hormander_constant(const symbols::Symbol& sigma, const lp::DyadicPartition& p,
                            const SmoothnessSpec& spec, const GridSpec& g, int jmin,
                            int jmax);

struct KProfile {
    std::vector<std::vector<int>> tuples;
    std::vector<double> norms;
    double max_norm = 0.0;
    double flatness() const;
};

// Multiparameter constant: for each (k_1,...,k_n) in [kmin,kmax]^n, column l
// of the coordinate matrix is dilated by 2^{k_l}, the n column-localizing
// bumps (each a dim-m profile) multiply in, the coordinatewise fractional
// operator applies, and the L^r norm is taken; the sup over the k-grid is
// returned with the full profile.
KProfile multiparameter_constant(const symbols::Symbol& sigma,
                                 const std::vector<lp::DyadicPartition>& column_bumps,
                                 const SmoothnessSpec& spec, const GridSpec& g,
                                 int kmin, int kmax);

// Pointwise functional (integral of |f(x)-f(y)|^2 / |x-y|^(d+2a) dy)^(1/2)
// by direct double-sum quadrature with the diagonal omitted. O(N^2d).
SampledFunction stein_ialpha(const SampledFunction& f, double alpha);

} // namespace mlab::sobolev
