#include "mlab/littlewood_paley.hpp"

#include <cmath>
#include <vector>

namespace mlab::lp {

double smooth_step01(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double phi_cutoff(double u) {
    if (u <= 1.0) return 1.0;
    if (u >= 2.0) return 0.0;
    return smooth_step01(2.0 - u);
}

double DyadicPartition::eval(std::span<const double> xi) const {
    require(static_cast<int>(xi.size()) == dim, ErrorCode::dimension_mismatch,
            "partition eval: wrong dimension");
    double r2 = 0.0;
    for (double c : xi) r2 += c * c;
    return eval_radial(std::sqrt(r2));
}

DyadicPartition build_dyadic_partition(int d) {
    require(d >= 1, ErrorCode::invalid_argument, "partition: d must be >= 1");
    return DyadicPartition{d};
}

namespace {

double ldexp2(double x, int j) { return std::ldexp(x, j); }

// Multiply the spectrum by psi(2^-j |xi|) (full) or psi(2^-j |xi_axis|)
// (coordinate); diagonal in frequency, so everything commutes exactly.
SpectralFunction multiply_dyadic(const SpectralFunction& F, int j, int axis,
                                 const DyadicPartition& p) {
    F.check();
    const GridSpec& g = F.spec;
    SpectralFunction out = SpectralFunction::zeros(g);
    std::vector<int> idx(g.dim, 0);
    std::size_t flat = 0;
    do {
        double m;
        if (axis < 0) {
            double r2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                double xi = g.xi(g.freq_of_slot(idx[a]));
                r2 += xi * xi;
            }
            m = p.eval_radial(ldexp2(std::sqrt(r2), -j));
        } else {
            m = p.eval_radial(ldexp2(std::abs(g.xi(g.freq_of_slot(idx[axis]))), -j));
        }
        out.coeffs[flat] = m * F.coeffs[flat];
        ++flat;
    } while (advance_index(idx.data(), g.dim, g.samples_per_axis));
    return out;
}

} // namespace

SpectralFunction delta_full(const SpectralFunction& F, int j, const DyadicPartition& p) {
    require(p.dim == F.spec.dim, ErrorCode::dimension_mismatch,
            "delta_full: partition dimension mismatch");
    return multiply_dyadic(F, j, -1, p);
}

SampledFunction delta_full(const SampledFunction& f, int j, const DyadicPartition& p) {
    return inverse_transform(delta_full(forward_transform(f), j, p));
}

SpectralFunction delta_coord(const SpectralFunction& F, int j, int axis,
                             const DyadicPartition& p1) {
    require(p1.dim == 1, ErrorCode::dimension_mismatch,
            "delta_coord: needs a 1-d partition profile");
    require(axis >= 0 && axis < F.spec.dim, ErrorCode::invalid_argument,
            "delta_coord: axis out of range");
    return multiply_dyadic(F, j, axis, p1);
}

SampledFunction delta_coord(const SampledFunction& f, int j, int axis,
                            const DyadicPartition& p1) {
    return inverse_transform(delta_coord(forward_transform(f), j, axis, p1));
}

SampledFunction square_function(const SampledFunction& f, std::span<const int> axes,
                                int jmin, int jmax, const DyadicPartition& p1) {
    f.check();
    require(!axes.empty(), ErrorCode::invalid_argument,
            "square_function: axes set must be nonempty");
    require(jmin <= jmax, ErrorCode::invalid_argument,
            "square_function: empty scale range");
    for (int a : axes)
        require(a >= 0 && a < f.spec.dim, ErrorCode::invalid_argument,
                "square_function: axis out of range");

    const SpectralFunction F = forward_transform(f);
    const int q = static_cast<int>(axes.size());
    const int span = jmax - jmin + 1;
    std::vector<int> tuple(q, 0);
    std::vector<double> acc(f.values.size(), 0.0);
    for (;;) {
        SpectralFunction piece = F;
        for (int t = 0; t < q; ++t)
            piece = delta_coord(piece, jmin + tuple[t], axes[t], p1);
        SampledFunction part = inverse_transform(piece);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(part.values[i]);
        if (!advance_index(tuple.data(), q, span)) break;
    }
    SampledFunction out = SampledFunction::zeros(f.spec);
    for (std::size_t i = 0; i < acc.size(); ++i) out.values[i] = std::sqrt(acc[i]);
    return out;
}

std::pair<int, int> resolvable_band(const GridSpec& g) {
    g.validate();
    double lo = std::log2(1.0 / (2.0 * g.box_half_length));
    double hi = std::log2(g.samples_per_axis / (4.0 * g.box_half_length));
    return {static_cast<int>(std::floor(lo)) - 1, static_cast<int>(std::ceil(hi)) + 1};
}

} // namespace mlab::lp
