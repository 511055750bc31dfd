#include "mlab/sobolev.hpp"

#include <cmath>

namespace mlab::sobolev {

namespace {
constexpr double four_pi_sq = 39.478417604357434475337963999505;
}

SmoothnessSpec SmoothnessSpec::coordinatewise(int m, int n, double g, double r) {
    SmoothnessSpec s;
    s.family = SmoothnessFamily::coordinatewise;
    s.arity = m;
    s.dim = n;
    s.gamma.assign(static_cast<std::size_t>(m) * n, g);
    s.r = r;
    s.validate_shapes();
    return s;
}

SmoothnessSpec SmoothnessSpec::per_variable(int m, int n, double g, double r) {
    SmoothnessSpec s;
    s.family = SmoothnessFamily::per_variable;
    s.arity = m;
    s.dim = n;
    s.gamma.assign(static_cast<std::size_t>(m), g);
    s.r = r;
    s.validate_shapes();
    return s;
}

SmoothnessSpec SmoothnessSpec::full(int m, int n, double g, double r) {
    SmoothnessSpec s;
    s.family = SmoothnessFamily::full;
    s.arity = m;
    s.dim = n;
    s.gamma.assign(1, g);
    s.r = r;
    s.validate_shapes();
    return s;
}

std::size_t SmoothnessSpec::gamma_count() const {
    switch (family) {
        case SmoothnessFamily::coordinatewise:
            return static_cast<std::size_t>(arity) * dim;
        case SmoothnessFamily::per_variable:
            return static_cast<std::size_t>(arity);
        case SmoothnessFamily::full:
            return 1;
    }
    return 0;
}

void SmoothnessSpec::validate_shapes() const {
    require(arity >= 1 && dim >= 1, ErrorCode::invalid_argument,
            "smoothness spec: arity and dim must be >= 1");
    require(gamma.size() == gamma_count(), ErrorCode::invalid_argument,
            "smoothness spec: gamma shape inconsistent with family");
}

void SmoothnessSpec::validate_hypothesis() const {
    validate_shapes();
    for (double g : gamma)
        require(g > 0.0, ErrorCode::invalid_argument,
                "smoothness spec: exponents must be positive");
    require(r >= 1.0 && r <= 2.0, ErrorCode::invalid_argument,
            "smoothness spec: r must lie in [1, 2]");
}

double SmoothnessSpec::multiplier_at(const double* eta) const {
    const int m = arity, n = dim;
    double out = 1.0;
    switch (family) {
        case SmoothnessFamily::coordinatewise:
            for (int i = 0; i < m; ++i)
                for (int l = 0; l < n; ++l) {
                    double e = eta[i * n + l];
                    out *= std::pow(1.0 + four_pi_sq * e * e, 0.5 * gamma[i * n + l]);
                }
            return out;
        case SmoothnessFamily::per_variable:
            for (int i = 0; i < m; ++i) {
                double r2 = 0.0;
                for (int l = 0; l < n; ++l) r2 += eta[i * n + l] * eta[i * n + l];
                out *= std::pow(1.0 + four_pi_sq * r2, 0.5 * gamma[i]);
            }
            return out;
        case SmoothnessFamily::full: {
            double r2 = 0.0;
            for (int a = 0; a < m * n; ++a) r2 += eta[a] * eta[a];
            return std::pow(1.0 + four_pi_sq * r2, 0.5 * gamma[0]);
        }
    }
    return out;
}

SmoothnessSpec SmoothnessSpec::negated() const {
    SmoothnessSpec s = *this;
    for (double& g : s.gamma) g = -g;
    return s;
}

SpectralFunction fractional_apply(const SpectralFunction& F, const SmoothnessSpec& spec) {
    F.check();
    spec.validate_shapes();
    const GridSpec& g = F.spec;
    require(g.dim == spec.arity * spec.dim, ErrorCode::dimension_mismatch,
            "fractional_apply: grid dimension must equal m*n");
    SpectralFunction out = SpectralFunction::zeros(g);
    std::vector<int> idx(g.dim, 0);
    std::vector<double> eta(g.dim, 0.0);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < g.dim; ++a) eta[a] = g.xi(g.freq_of_slot(idx[a]));
        out.coeffs[flat] = spec.multiplier_at(eta.data()) * F.coeffs[flat];
        ++flat;
    } while (advance_index(idx.data(), g.dim, g.samples_per_axis));
    return out;
}

SampledFunction fractional_apply(const SampledFunction& f, const SmoothnessSpec& spec) {
    return inverse_transform(fractional_apply(forward_transform(f), spec));
}

double localized_norm(const symbols::Symbol& sigma, int j,
                      const lp::DyadicPartition& p, const SmoothnessSpec& spec,
                      const GridSpec& g) {
    spec.validate_hypothesis();
    require(sigma.arity == spec.arity && sigma.dim == spec.dim,
            ErrorCode::dimension_mismatch,
            "localized_norm: symbol and smoothness spec disagree");
    require(g.dim == spec.arity * spec.dim, ErrorCode::dimension_mismatch,
            "localized_norm: grid dimension must equal m*n");
    require(p.dim == g.dim, ErrorCode::dimension_mismatch,
            "localized_norm: partition dimension must equal m*n");
    require(g.box_half_length >= 2.0, ErrorCode::invalid_argument,
            "localized_norm: grid must cover the annulus (L >= 2, L >= 4 recommended)");

    const double scale = std::ldexp(1.0, j);
    std::vector<double> dilated(g.dim);
    SampledFunction loc = sample(
        g,
        [&](std::span<const double> xi) -> Complex {
            double b = p.eval(xi);
            if (b == 0.0) return 0.0;
            for (int a = 0; a < g.dim; ++a) dilated[a] = scale * xi[a];
            return sigma.eval(dilated) * b;
        },
        /*offset_cells=*/0.5);
    return norm_lp(fractional_apply(loc, spec), spec.r);
}

double JProfile::flatness() const {
    if (norms.empty() || max_norm == 0.0) return 0.0;
    double lo = norms[0];
    for (double v : norms) lo = std::min(lo, v);
    return (max_norm - lo) / max_norm;
}

JProfile hormander_constant(const symbols::Symbol& sigma, const lp::DyadicPartition& p,
                            const SmoothnessSpec& spec, const GridSpec& g, int jmin,
                            int jmax) {
    require(jmin <= jmax, ErrorCode::invalid_argument,
            "hormander_constant: empty scale range");
    JProfile prof;
    prof.jmin = jmin;
    for (int j = jmin; j <= jmax; ++j) {
        double v = localized_norm(sigma, j, p, spec, g);
        prof.norms.push_back(v);
        prof.max_norm = std::max(prof.max_norm, v);
    }
    return prof;
}

double KProfile::flatness() const {
    if (norms.empty() || max_norm == 0.0) return 0.0;
    double lo = norms[0];
    for (double v : norms) lo = std::min(lo, v);
    return (max_norm - lo) / max_norm;
}

KProfile multiparameter_constant(const symbols::Symbol& sigma,
                                 const std::vector<lp::DyadicPartition>& column_bumps,
                                 const SmoothnessSpec& spec, const GridSpec& g,
                                 int kmin, int kmax) {
    spec.validate_hypothesis();
    require(spec.family == SmoothnessFamily::coordinatewise, ErrorCode::invalid_argument,
            "multiparameter_constant: spec must be coordinatewise");
    const int m = spec.arity, n = spec.dim;
    require(sigma.arity == m && sigma.dim == n, ErrorCode::dimension_mismatch,
            "multiparameter_constant: symbol and spec disagree");
    require(static_cast<int>(column_bumps.size()) == n, ErrorCode::dimension_mismatch,
            "multiparameter_constant: need one bump per coordinate slot");
    for (const auto& b : column_bumps)
        require(b.dim == m, ErrorCode::dimension_mismatch,
                "multiparameter_constant: column bumps must have dimension m");
    require(g.dim == m * n, ErrorCode::dimension_mismatch,
            "multiparameter_constant: grid dimension must equal m*n");
    require(kmin <= kmax, ErrorCode::invalid_argument,
            "multiparameter_constant: empty k range");

    KProfile prof;
    const int span = kmax - kmin + 1;
    std::vector<int> offs(n, 0);
    std::vector<double> dilated(g.dim), column(m);
    do {
        std::vector<int> ks(n);
        for (int l = 0; l < n; ++l) ks[l] = kmin + offs[l];
        SampledFunction loc = sample(
            g,
            [&](std::span<const double> xi) -> Complex {
                double bump = 1.0;
                for (int l = 0; l < n && bump != 0.0; ++l) {
                    for (int i = 0; i < m; ++i) column[i] = xi[i * n + l];
                    bump *= column_bumps[l].eval(column);
                }
                if (bump == 0.0) return 0.0;
                for (int i = 0; i < m; ++i)
                    for (int l = 0; l < n; ++l)
                        dilated[i * n + l] = std::ldexp(xi[i * n + l], ks[l]);
                return sigma.eval(dilated) * bump;
            },
            /*offset_cells=*/0.5);
        double v = norm_lp(fractional_apply(loc, spec), spec.r);
        prof.tuples.push_back(std::move(ks));
        prof.norms.push_back(v);
        prof.max_norm = std::max(prof.max_norm, v);
    } while (advance_index(offs.data(), n, span));
    return prof;
}

SampledFunction stein_ialpha(const SampledFunction& f, double alpha) {
    f.check();
    require(alpha > 0.0 && alpha < 1.0, ErrorCode::domain,
            "stein_ialpha: alpha must lie in (0,1)");
    const GridSpec& g = f.spec;
    const int d = g.dim;
    const double measure = g.cell_volume();
    const double expo = d + 2.0 * alpha;
    const std::size_t total = g.total_points();

    std::vector<std::vector<int>> coords(total, std::vector<int>(d));
    {
        std::vector<int> idx(d, 0);
        std::size_t flat = 0;
        do {
            coords[flat] = idx;
            ++flat;
        } while (advance_index(idx.data(), d, g.samples_per_axis));
    }
    const double h = g.spacing();
    SampledFunction out = SampledFunction::zeros(g);
    for (std::size_t x = 0; x < total; ++x) {
        double acc = 0.0;
        for (std::size_t y = 0; y < total; ++y) {
            if (y == x) continue;
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                double t = (coords[x][a] - coords[y][a]) * h;
                r2 += t * t;
            }
            acc += std::norm(f.values[x] - f.values[y]) /
                   std::pow(r2, 0.5 * expo);
        }
        out.values[x] = std::sqrt(acc * measure);
    }
    return out;
}

} // namespace mlab::sobolev
