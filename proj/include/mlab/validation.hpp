#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mlab/grid.hpp"

namespace mlab::validation {

// This layer holds closed-form checks and convergence machinery used as
// oracles for the rest of the project. It deliberately reimplements the
// pieces it needs (profiles, windows) instead of sharing kernels, and may
// depend only on the grid layer.

struct RefinementReport {
    std::vector<double> ladder;  // strictly monotone refinement parameter
    std::vector<double> errors;
    double fitted_order = 0.0;
};

// Least-squares slope of log(error) against -log(parameter); with the
// convention that the parameter shrinks as the grid refines (pass 1/N),
// a positive result is the observed convergence order.
double fit_order(std::span<const double> params, std::span<const double> errors);

struct PhiTransformReport {
    double gamma = 0.0;
    double fitted_c = 0.0;
    double residual = 0.0;  // relative l2 misfit on the fit window
    int samples = 0;        // grid points entering the fit
};

// Numerically inverts |xi|^gamma times the transform of the windowed
// commutator profile and fits the closed form
//   c * (|x+1|^(1-gamma) - |x|^(1-gamma))
// on x in [-4,4] minus radius-0.1 neighborhoods of -1 and 0. The constant
// is fitted, never assumed. gamma must lie in (1,2); window.dim must be 1.
PhiTransformReport phi_fractional_transform_check(double gamma, const GridSpec& window);

struct PhiDerivativeReport {
    double max_error = 0.0;    // on the band |xi| <= 8
    double band_limit = 8.0;
};

// Verifies 2 pi i xi * FT(Phi w) = 2 (e^{2 pi i xi} - 1)/(2 pi i xi) + FT(Phi w')
// on |xi| <= 8: the spectral derivative against the exact transform of the
// distributional derivative 2 chi_[-1,0] plus the window correction.
PhiDerivativeReport phi_derivative_identity_check(const GridSpec& window);

// Named refinement experiments; the registry is populated at startup by
// whoever owns the experiment (this layer registers the grid-only ones).
// Each hook maps a refinement parameter (e.g. N) to an error.
void register_refinement_experiment(const std::string& id,
                                    std::function<double(double)> error_at);
bool has_refinement_experiment(const std::string& id);
std::vector<std::string> refinement_experiment_ids();
RefinementReport refinement_study(const std::string& id, std::span<const double> ladder);

// Built-in grid-only experiments ("gaussian-transform", "gaussian-norm").
void register_builtin_experiments();

} // namespace mlab::validation
