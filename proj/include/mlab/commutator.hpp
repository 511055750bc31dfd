#pragma once

#include <vector>

#include "mlab/grid.hpp"
#include "mlab/multiplier.hpp"

namespace mlab::commutator {

// Principal-value quadrature: symmetric exclusion of |x-y| <= kappa*h per
// axis for each entry kappa of epsilons (decreasing, in grid-cell units),
// then extrapolation of the exclusion radius to zero. The exclusion-error
// expansion is odd in the radius in one dimension (epsilon, epsilon^3, ...)
// and gains the strip-crossing epsilon^2 term in two.
struct PvQuadratureSpec {
    std::vector<double> epsilons;
    enum class Extrapolation { none, richardson } extrapolation =
        Extrapolation::richardson;
    // The grid is periodic, so the faithful discrete kernel sums every wrap
    // image of (x-y)^-2; the image series has the closed form
    // (pi/2L)^2 / sin^2(pi t/2L) and its antiderivative continuation is
    // quasi-periodic. box_truncated keeps the literal one-box sum instead.
    enum class Kernel { periodized, box_truncated } kernel = Kernel::periodized;

    static PvQuadratureSpec richardson_default() {
        return PvQuadratureSpec{{3.0, 2.0, 1.0}, Extrapolation::richardson,
                                Kernel::periodized};
    }
    void validate() const;
};

// A with A' = a along every axis in turn: spectral division by 2 pi i xi on
// nonzero modes plus the line-mean ramp. Iterated over axes for d > 1.
// A is only meaningful through differences; the ramp makes it non-periodic
// when the mean of a is nonzero, which is harmless in box coordinates.
SampledFunction antiderivative(const SampledFunction& a);

// p.v. integral of (A(x)-A(y)) f(y) / (x-y)^2, d = 1.
SampledFunction calderon_c1_direct(const SampledFunction& f, const SampledFunction& a,
                                   const PvQuadratureSpec& q, int jobs = 1);

// Bilinear-multiplier representation: -i pi T_sigma(f, a) with the
// sgn(eta) Phi(xi/eta) symbol. trunc_radius 0 picks min(N/4, 128).
SampledFunction calderon_c1_multiplier(const SampledFunction& f,
                                       const SampledFunction& a,
                                       int trunc_radius = 0, int jobs = 1);

enum class Mode { direct, multiplier };

// n-parameter commutator on R^n, n in {1, 2} at desk scale. Direct mode:
// tensorized p.v. quadrature of the product kernel prod (x_l - y_l)^-2
// against the box difference of the iterated antiderivative, oriented so
// n = 1 reduces exactly to calderon_c1_direct. Multiplier mode: the tensor
// of n one-parameter symbols scaled by (-i pi)^n.
SampledFunction calderon_cn(const SampledFunction& f, const SampledFunction& a,
                            Mode mode, const PvQuadratureSpec& q,
                            int trunc_radius = 0, int jobs = 1);

// Extrapolation weights for samples at effective radii eps (descending):
// sum w_i = 1 and the leading error monomials are annihilated.
std::vector<double> richardson_weights(const std::vector<double>& eps, int dim);

} // namespace mlab::commutator
