#include "mlab/validation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace mlab::validation {

namespace {

// Local piecewise profile and window: the oracles here must not share code
// with the symbol catalog they are used to check.
double phi_profile(double s) {
    if (s <= -1.0) return -1.0;
    if (s <= 0.0) return 1.0 + 2.0 * s;
    return 1.0;
}

double bump01(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double bump01_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    double ap = a / (t * t);
    double bp = -b / ((1.0 - t) * (1.0 - t));
    double s = a + b;
    return (ap * s - a * (ap + bp)) / (s * s);
}

// Plateau window: 1 on |x| <= a, 0 on |x| >= b, smooth in between.
double window_value(double x, double a, double b) {
    double t = (b - std::abs(x)) / (b - a);
    return bump01(t);
}

double window_deriv(double x, double a, double b) {
    double ax = std::abs(x);
    if (ax <= a || ax >= b) return 0.0;
    double t = (b - ax) / (b - a);
    double sgn = x > 0.0 ? 1.0 : -1.0;
    return -sgn * bump01_deriv(t) / (b - a);
}

} // namespace

double fit_order(std::span<const double> params, std::span<const double> errors) {
    require(params.size() == errors.size() && params.size() >= 2,
            ErrorCode::invalid_argument, "fit_order: need matching lists, length >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        require(params[i] > 0.0, ErrorCode::invalid_argument,
                "fit_order: parameters must be positive");
        require(std::isfinite(errors[i]), ErrorCode::invalid_argument,
                "fit_order: errors must be finite");
        if (errors[i] <= 0.0) continue;  // exact rungs carry no slope information
        double x = -std::log(params[i]);
        double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    require(n >= 2, ErrorCode::invalid_argument, "fit_order: too few nonzero errors");
    double denom = n * sxx - sx * sx;
    require(denom != 0.0, ErrorCode::invalid_argument, "fit_order: degenerate ladder");
    return -(n * sxy - sx * sy) / denom;
}

PhiTransformReport phi_fractional_transform_check(double gamma, const GridSpec& window) {
    require(gamma > 1.0 && gamma < 2.0, ErrorCode::domain,
            "phi transform check: gamma must lie in (1,2)");
    window.validate();
    require(window.dim == 1, ErrorCode::invalid_argument,
            "phi transform check: one-dimensional window required");
    require(window.box_half_length >= 16.0, ErrorCode::invalid_argument,
            "phi transform check: window box too small (L >= 16)");

    const double L = window.box_half_length;
    const double wa = 0.4 * L, wb = 0.8 * L;
    SampledFunction f = sample(window, [&](std::span<const double> x) -> Complex {
        return phi_profile(x[0]) * window_value(x[0], wa, wb);
    });
    SpectralFunction F = forward_transform(f);
    for (int p = 0; p < window.samples_per_axis; ++p) {
        double xi = window.xi(window.freq_of_slot(p));
        F.coeffs[p] *= std::pow(std::abs(xi), gamma);
    }
    SampledFunction u = inverse_transform(F);

    // Fit u ~ c * (|x+1|^(1-gamma) - |x|^(1-gamma)) on [-4,4] away from the
    // closed-form singularities. The profile spectrum decays like
    // |xi|^(gamma-2), so the band truncation rings at exactly the Nyquist
    // frequency; averaging adjacent samples (of the data and of the model
    // alike) cancels that ringing without biasing the fit.
    auto model_at = [gamma](double x) {
        return std::pow(std::abs(x + 1.0), 1.0 - gamma) -
               std::pow(std::abs(x), 1.0 - gamma);
    };
    auto admissible = [](double x) {
        return x >= -4.0 && x <= 4.0 && std::abs(x + 1.0) > 0.1 &&
               std::abs(x) > 0.1;
    };
    double num = 0.0, den = 0.0;
    std::vector<double> us, ms;
    for (int i = 0; i + 1 < window.samples_per_axis; ++i) {
        double x0 = window.coord(i), x1 = window.coord(i + 1);
        if (!admissible(x0) || !admissible(x1)) continue;
        double val = 0.5 * (u.values[i].real() + u.values[i + 1].real());
        double model = 0.5 * (model_at(x0) + model_at(x1));
        num += val * model;
        den += model * model;
        us.push_back(val);
        ms.push_back(model);
    }
    require(den > 0.0, ErrorCode::internal, "phi transform check: empty fit window");
    PhiTransformReport rep;
    rep.gamma = gamma;
    rep.fitted_c = num / den;
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
        double r = us[i] - rep.fitted_c * ms[i];
        err2 += r * r;
        ref2 += us[i] * us[i];
    }
    rep.residual = ref2 > 0.0 ? std::sqrt(err2 / ref2) : 0.0;
    rep.samples = static_cast<int>(us.size());
    return rep;
}

PhiDerivativeReport phi_derivative_identity_check(const GridSpec& window) {
    window.validate();
    require(window.dim == 1, ErrorCode::invalid_argument,
            "phi derivative check: one-dimensional window required");
    require(window.box_half_length >= 16.0, ErrorCode::invalid_argument,
            "phi derivative check: window box too small (L >= 16)");
    const double L = window.box_half_length;
    const double wa = 0.4 * L, wb = 0.8 * L;

    SampledFunction f = sample(window, [&](std::span<const double> x) -> Complex {
        return phi_profile(x[0]) * window_value(x[0], wa, wb);
    });
    // Phi is constant outside [-1, 0], so Phi * w' only sees the +-1 plateaus.
    SampledFunction g = sample(window, [&](std::span<const double> x) -> Complex {
        return phi_profile(x[0]) * window_deriv(x[0], wa, wb);
    });
    SpectralFunction F = forward_transform(f);
    SpectralFunction G = forward_transform(g);

    const double two_pi = 6.28318530717958647692528676655900577;
    PhiDerivativeReport rep;
    for (int p = 0; p < window.samples_per_axis; ++p) {
        double xi = window.xi(window.freq_of_slot(p));
        if (std::abs(xi) > rep.band_limit) continue;
        Complex lhs = Complex(0.0, two_pi * xi) * F.coeffs[p];
        Complex chi_hat =
            xi == 0.0 ? Complex(1.0, 0.0)
                      : (std::exp(Complex(0.0, two_pi * xi)) - 1.0) /
                            Complex(0.0, two_pi * xi);
        Complex rhs = 2.0 * chi_hat + G.coeffs[p];
        rep.max_error = std::max(rep.max_error, std::abs(lhs - rhs));
    }
    return rep;
}

namespace {

std::mutex registry_mutex;
std::map<std::string, std::function<double(double)>>& registry() {
    static std::map<std::string, std::function<double(double)>> r;
    return r;
}

} // namespace

void register_refinement_experiment(const std::string& id,
                                    std::function<double(double)> error_at) {
    std::lock_guard<std::mutex> lock(registry_mutex);
    registry()[id] = std::move(error_at);
}

bool has_refinement_experiment(const std::string& id) {
    std::lock_guard<std::mutex> lock(registry_mutex);
    return registry().count(id) > 0;
}

std::vector<std::string> refinement_experiment_ids() {
    std::lock_guard<std::mutex> lock(registry_mutex);
    std::vector<std::string> ids;
    for (const auto& [k, v] : registry()) ids.push_back(k);
    return ids;
}

RefinementReport refinement_study(const std::string& id, std::span<const double> ladder) {
    std::function<double(double)> hook;
    {
        std::lock_guard<std::mutex> lock(registry_mutex);
        auto it = registry().find(id);
        require(it != registry().end(), ErrorCode::unknown_id,
                "refinement_study: unknown experiment '" + id + "'");
        hook = it->second;
    }
    require(ladder.size() >= 2, ErrorCode::invalid_argument,
            "refinement_study: ladder needs at least two rungs");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        require(ladder[i] > ladder[i - 1], ErrorCode::invalid_argument,
                "refinement_study: ladder must be strictly increasing");
    RefinementReport rep;
    for (double rung : ladder) {
        double err = hook(rung);
        require(std::isfinite(err), ErrorCode::evaluation,
                "refinement_study: non-finite error at rung " + std::to_string(rung));
        rep.ladder.push_back(rung);
        rep.errors.push_back(err);
    }
    // Convention: rungs are sizes (N); the small parameter is 1/N.
    std::vector<double> params;
    for (double rung : rep.ladder) params.push_back(1.0 / rung);
    rep.fitted_order = fit_order(params, rep.errors);
    return rep;
}

void register_builtin_experiments() {
    // Forward-transform accuracy against the closed-form transform of the
    // unit Gaussian (invariant under this convention).
    register_refinement_experiment("gaussian-transform", [](double rung) {
        int n = static_cast<int>(rung);
        if (n % 2) ++n;
        GridSpec g(1, n, 8.0);
        SampledFunction f = sample(g, [](std::span<const double> x) -> Complex {
            return std::exp(-M_PI * x[0] * x[0]);
        });
        SpectralFunction F = forward_transform(f);
        double err = 0.0;
        for (int p = 0; p < n; ++p) {
            double xi = g.xi(g.freq_of_slot(p));
            err = std::max(err, std::abs(F.coeffs[p] - std::exp(-M_PI * xi * xi)));
        }
        return err;
    });
    // L2-norm quadrature against the exact Gaussian integral.
    register_refinement_experiment("gaussian-norm", [](double rung) {
        int n = static_cast<int>(rung);
        if (n % 2) ++n;
        GridSpec g(1, n, 8.0);
        SampledFunction f = sample(g, [](std::span<const double> x) -> Complex {
            return std::exp(-M_PI * x[0] * x[0]);
        });
        const double exact = std::pow(2.0, -0.25);
        return std::abs(norm_lp(f, 2.0) - exact);
    });
}

} // namespace mlab::validation
