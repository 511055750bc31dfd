#include "mlab/commutator.hpp"

#include <cmath>
#include <functional>
#include <thread>

#include "mlab/symbols.hpp"

namespace mlab::commutator {

void PvQuadratureSpec::validate() const {
    require(!epsilons.empty(), ErrorCode::invalid_argument,
            "pv spec: epsilon list must not be empty");
    for (double e : epsilons)
        require(e >= 1.0, ErrorCode::invalid_argument,
                "pv spec: exclusion radius below one grid cell");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        require(epsilons[i] < epsilons[i - 1], ErrorCode::invalid_argument,
                "pv spec: epsilons must be strictly decreasing");
    if (extrapolation == Extrapolation::richardson)
        require(epsilons.size() >= 2, ErrorCode::invalid_argument,
                "pv spec: richardson needs at least two epsilons");
}

std::vector<double> richardson_weights(const std::vector<double>& eps, int dim) {
    const int m = static_cast<int>(eps.size());
    // Row 0: sum w = 1. Row t: sum w eps^e_t = 0 for the leading error
    // monomials e_t: odd powers in one dimension, all powers in two (the
    // strip-crossing corner contributes the even terms).
    std::vector<double> mat(static_cast<std::size_t>(m) * m), rhs(m, 0.0);
    rhs[0] = 1.0;
    for (int i = 0; i < m; ++i) mat[i] = 1.0;
    for (int t = 1; t < m; ++t) {
        double e = dim == 1 ? 2.0 * t - 1.0 : static_cast<double>(t);
        for (int i = 0; i < m; ++i)
            mat[static_cast<std::size_t>(t) * m + i] = std::pow(eps[i], e);
    }
    std::vector<double> w(m, 0.0);
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::abs(mat[static_cast<std::size_t>(r) * m + c]) >
                std::abs(mat[static_cast<std::size_t>(piv) * m + c]))
                piv = r;
        for (int k = 0; k < m; ++k)
            std::swap(mat[static_cast<std::size_t>(c) * m + k],
                      mat[static_cast<std::size_t>(piv) * m + k]);
        std::swap(rhs[c], rhs[piv]);
        double d = mat[static_cast<std::size_t>(c) * m + c];
        require(d != 0.0, ErrorCode::internal, "richardson weights: singular system");
        for (int r = c + 1; r < m; ++r) {
            double fac = mat[static_cast<std::size_t>(r) * m + c] / d;
            for (int k = c; k < m; ++k)
                mat[static_cast<std::size_t>(r) * m + k] -=
                    fac * mat[static_cast<std::size_t>(c) * m + k];
            rhs[r] -= fac * rhs[c];
        }
    }
    for (int r = m - 1; r >= 0; --r) {
        double acc = rhs[r];
        for (int k = r + 1; k < m; ++k)
            acc -= mat[static_cast<std::size_t>(r) * m + k] * w[k];
        w[r] = acc / mat[static_cast<std::size_t>(r) * m + r];
    }
    return w;
}

namespace {

constexpr Complex minus_i_pi(0.0, -3.14159265358979323846264338327950288);

SampledFunction antiderivative_axis(const SampledFunction& field, int axis) {
    const GridSpec& g = field.spec;
    SpectralFunction F = forward_transform(field);
    SpectralFunction nonmean = SpectralFunction::zeros(g);
    SpectralFunction meanpart = SpectralFunction::zeros(g);
    std::vector<int> idx(g.dim, 0);
    std::size_t flat = 0;
    do {
        int k = g.freq_of_slot(idx[axis]);
        if (k == 0) {
            meanpart.coeffs[flat] = F.coeffs[flat];
        } else {
            nonmean.coeffs[flat] =
                F.coeffs[flat] / Complex(0.0, 2.0 * M_PI * g.xi(k));
        }
        ++flat;
    } while (advance_index(idx.data(), g.dim, g.samples_per_axis));

    SampledFunction base = inverse_transform(nonmean);
    SampledFunction line_mean = inverse_transform(meanpart);
    // base' = field - line_mean along the axis; the ramp supplies the rest.
    flat = 0;
    std::fill(idx.begin(), idx.end(), 0);
    do {
        base.values[flat] += line_mean.values[flat] * g.coord(idx[axis]);
        ++flat;
    } while (advance_index(idx.data(), g.dim, g.samples_per_axis));
    return base;
}

void run_rows(int rows, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1) {
        for (int r = 0; r < rows; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            for (int r = w; r < rows; r += jobs) body(r);
        });
    for (auto& t : pool) t.join();
}

// Periodized kernel sums over all wrap images, P = 2L, z = pi t / P:
//   k2(t) = sum_m (t - Pm)^-2            = (pi/P)^2 csc^2 z
//   k1(t) = p.v. sum_m (t - Pm)^-1       = (pi/P)  cot z
//   k0(t) = sum_m Pm (t - Pm)^-2         = t k2(t) - k1(t)
// Near the excluded image the bare 1/t*^2 term is removed with series
// regularization: csc^2 z - z^-2 and z csc^2 z - cot z are analytic.
struct PeriodizedKernel {
    double period;
    double zfac;  // pi / P

    explicit PeriodizedKernel(double p) : period(p), zfac(M_PI / p) {}

    static double csc2_minus_inv(double z) {
        if (std::abs(z) < 0.3) {
            double z2 = z * z;
            return 1.0 / 3.0 + z2 / 15.0 + 2.0 * z2 * z2 / 189.0 +
                   z2 * z2 * z2 / 225.0;
        }
        double s = std::sin(z);
        return 1.0 / (s * s) - 1.0 / (z * z);
    }
    static double zcsc2_minus_cot(double z) {
        if (std::abs(z) < 0.3) {
            double z2 = z * z;
            return z * (2.0 / 3.0 + 4.0 * z2 / 45.0 + 4.0 * z2 * z2 / 315.0);
        }
        double s = std::sin(z);
        return z / (s * s) - std::cos(z) / s;
    }

    // Full sums for a pair whose nearest image is admissible (|t*| > eps).
    // t_star is the wrapped representative in (-P/2, P/2]; m_star the image
    // index with t = t_star + P m_star.
    double k2_full(double t_star) const {
        double s = std::sin(zfac * t_star);
        return zfac * zfac / (s * s);
    }
    double k0_full(double t, double t_star) const {
        double z = zfac * t_star;
        // t k2 - k1 = (t - t*) k2 + (t* k2 - k1)
        return (t - t_star) * k2_full(t_star) + zfac * zcsc2_minus_cot(z);
    }
    // Sums with the nearest image removed (the p.v. exclusion).
    double k2_excl(double t_star) const {
        double z = zfac * t_star;
        return zfac * zfac * csc2_minus_inv(z);
    }
    double k0_excl(double t, double t_star) const {
        double z = zfac * t_star;
        double m_star_p = t - t_star;  // P * m_star
        return zfac * zcsc2_minus_cot(z) + m_star_p * k2_excl(t_star);
    }
};

// Iterated antiderivative with its quasi-periodic continuation:
//   d = 1: A(y + Pm) = A(y) + Pm cbar
//   d = 2: A(y + P(m0,m1)) = A(y) + Pm0 D0(y1) + Pm1 D1(y0) + P^2 m0 m1 cbar
// where D0/D1 are antiderivatives of the axis means of a and cbar is the
// global mean.
struct QuasiPeriodicA {
    SampledFunction a_big;
    std::vector<Complex> d0;  // d = 2: D0 on the x1 grid
    std::vector<Complex> d1;  // d = 2: D1 on the x0 grid
    Complex cbar = 0.0;

    explicit QuasiPeriodicA(const SampledFunction& a) : a_big(antiderivative(a)) {
        const GridSpec& g = a.spec;
        const int n = g.samples_per_axis;
        for (const Complex& v : a.values) cbar += v;
        cbar /= static_cast<double>(a.values.size());
        if (g.dim == 2) {
            GridSpec line(1, n, g.box_half_length);
            SampledFunction mu0 = SampledFunction::zeros(line);
            SampledFunction mu1 = SampledFunction::zeros(line);
            for (int i0 = 0; i0 < n; ++i0)
                for (int i1 = 0; i1 < n; ++i1) {
                    Complex v = a.values[static_cast<std::size_t>(i0) * n + i1];
                    mu0.values[i1] += v;
                    mu1.values[i0] += v;
                }
            for (auto& v : mu0.values) v /= static_cast<double>(n);
            for (auto& v : mu1.values) v /= static_cast<double>(n);
            d0 = antiderivative(mu0).values;
            d1 = antiderivative(mu1).values;
        }
    }
};

// Per-axis kernel factors for a pair at index offset d = i - j, under the
// exclusion radius kappa (in cells, periodic index distance).
struct AxisKernel {
    double k2;  // pairs with the A-difference part
    double k0;  // pairs with the mean / ramp part
};

AxisKernel axis_kernel(const PeriodizedKernel& ker, int d, int n, double h,
                       int kappa, bool box_only) {
    double t = d * h;
    int d_star = d;  // wrapped representative in (-n/2, n/2]
    if (d_star > n / 2) d_star -= n;
    if (d_star <= -n / 2) d_star += n;
    double t_star = d_star * h;
    if (box_only) {
        // literal one-box kernel; the caller guarantees |d| > kappa
        return {1.0 / (t * t), 0.0};
    }
    if (std::abs(d_star) <= kappa)
        return {ker.k2_excl(t_star), ker.k0_excl(t, t_star)};
    return {ker.k2_full(t_star), ker.k0_full(t, t_star)};
}

// Direct p.v. sums for every exclusion radius in kappas (integer cells,
// descending). Results indexed [kappa][point].
std::vector<std::vector<Complex>> pv_sums_1d(const SampledFunction& f,
                                             const QuasiPeriodicA& qa,
                                             const std::vector<int>& kappas,
                                             bool box_only, int jobs) {
    const GridSpec& g = f.spec;
    const int n = g.samples_per_axis;
    const double h = g.spacing();
    const double P = 2.0 * g.box_half_length;
    PeriodizedKernel ker(P);
    std::vector<std::vector<Complex>> out(
        kappas.size(), std::vector<Complex>(static_cast<std::size_t>(n)));

    for (std::size_t e = 0; e < kappas.size(); ++e) {
        const int kap = kappas[e];
        run_rows(n, jobs, [&](int i) {
            const Complex Ax = qa.a_big.values[static_cast<std::size_t>(i)];
            Complex acc = 0.0;
            for (int j = 0; j < n; ++j) {
                int d = i - j;
                if (box_only && std::abs(d) <= kap) continue;
                AxisKernel k = axis_kernel(ker, d, n, h, kap, box_only);
                acc += f.values[j] *
                       ((qa.a_big.values[j] - Ax) * k.k2 + qa.cbar * k.k0);
            }
            out[e][i] = acc * h;
        });
    }
    return out;
}

std::vector<std::vector<Complex>> pv_sums_2d(const SampledFunction& f,
                                             const QuasiPeriodicA& qa,
                                             const std::vector<int>& kappas,
                                             bool box_only, int jobs) {
    const GridSpec& g = f.spec;
    const int n = g.samples_per_axis;
    const double h = g.spacing();
    const double P = 2.0 * g.box_half_length;
    PeriodizedKernel ker(P);
    const std::size_t total = g.total_points();
    std::vector<std::vector<Complex>> out(
        kappas.size(), std::vector<Complex>(total));

    const Complex* fv = f.values.data();
    const Complex* A = qa.a_big.values.data();
    for (std::size_t e = 0; e < kappas.size(); ++e) {
        const int kap = kappas[e];
        run_rows(n, jobs, [&](int i0) {
            std::vector<AxisKernel> k1cache(static_cast<std::size_t>(n));
            for (int i1 = 0; i1 < n; ++i1) {
                const std::size_t xi = static_cast<std::size_t>(i0) * n + i1;
                const Complex Axx = A[xi];
                for (int j1 = 0; j1 < n; ++j1)
                    k1cache[j1] = axis_kernel(ker, i1 - j1, n, h, kap, box_only);
                Complex acc = 0.0;
                for (int j0 = 0; j0 < n; ++j0) {
                    int d0 = i0 - j0;
                    if (box_only && std::abs(d0) <= kap) continue;
                    AxisKernel k0ax = axis_kernel(ker, d0, n, h, kap, box_only);
                    const std::size_t rowj = static_cast<std::size_t>(j0) * n;
                    const std::size_t rowi = static_cast<std::size_t>(i0) * n;
                    const Complex dD1 = qa.d0.empty()
                                            ? Complex{}
                                            : qa.d1[j0] - qa.d1[i0];
                    for (int j1 = 0; j1 < n; ++j1) {
                        int d1 = i1 - j1;
                        if (box_only && std::abs(d1) <= kap) continue;
                        const AxisKernel& k1ax = k1cache[j1];
                        Complex box = A[rowj + j1] - A[rowi + j1] -
                                      A[rowj + i1] + Axx;
                        Complex term = box * (k0ax.k2 * k1ax.k2);
                        if (!box_only) {
                            Complex dD0 = qa.d0[j1] - qa.d0[i1];
                            term += dD0 * (k0ax.k0 * k1ax.k2);
                            term += dD1 * (k0ax.k2 * k1ax.k0);
                            term += qa.cbar * (k0ax.k0 * k1ax.k0);
                        }
                        acc += term * fv[rowj + j1];
                    }
                }
                out[e][xi] = acc * (h * h);
            }
        });
    }
    return out;
}

SampledFunction pv_direct(const SampledFunction& f, const SampledFunction& a,
                          const PvQuadratureSpec& q, int jobs) {
    f.check();
    a.check();
    require(f.spec == a.spec, ErrorCode::dimension_mismatch,
            "commutator: f and a must share a grid");
    q.validate();
    const GridSpec& g = f.spec;
    require(g.dim <= 2, ErrorCode::invalid_argument,
            "commutator: n > 2 exceeds the desk-scale budget");
    require(boundary_mass_fraction(f) <= boundary_mass_limit, ErrorCode::domain,
            "commutator: f carries too much mass near the box boundary");
    require(boundary_mass_fraction(a) <= boundary_mass_limit, ErrorCode::domain,
            "commutator: a carries too much mass near the box boundary");

    std::vector<int> kappas;
    for (double e : q.epsilons) kappas.push_back(static_cast<int>(std::floor(e)));
    for (int kap : kappas)
        require(2 * kap < g.samples_per_axis / 2, ErrorCode::invalid_argument,
                "commutator: exclusion radius too large for the grid");
    const bool box_only = q.kernel == PvQuadratureSpec::Kernel::box_truncated;
    QuasiPeriodicA qa(a);
    auto sums = g.dim == 1 ? pv_sums_1d(f, qa, kappas, box_only, jobs)
                           : pv_sums_2d(f, qa, kappas, box_only, jobs);

    // Orientation: the box difference is the y-from-x iterated integral;
    // (-1)^n turns it into the commutator kernel (n = 1: A(x) - A(y)).
    const double orient = g.dim % 2 == 0 ? 1.0 : -1.0;

    SampledFunction out = SampledFunction::zeros(g);
    if (q.extrapolation == PvQuadratureSpec::Extrapolation::none) {
        const auto& last = sums.back();
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = orient * last[i];
        return out;
    }
    const double h = g.spacing();
    std::vector<double> eps_eff;
    for (int kap : kappas) eps_eff.push_back((kap + 0.5) * h);
    std::vector<double> w = richardson_weights(eps_eff, g.dim);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        Complex acc = 0.0;
        for (std::size_t e = 0; e < w.size(); ++e) acc += w[e] * sums[e][i];
        out.values[i] = orient * acc;
    }
    return out;
}

int default_trunc(const GridSpec& g, int requested) {
    if (requested > 0) return requested;
    return std::min(g.samples_per_axis / 4, 128);
}

} // namespace

SampledFunction antiderivative(const SampledFunction& a) {
    a.check();
    SampledFunction out = a;
    for (int axis = 0; axis < a.spec.dim; ++axis)
        out = antiderivative_axis(out, axis);
    return out;
}

SampledFunction calderon_c1_direct(const SampledFunction& f, const SampledFunction& a,
                                   const PvQuadratureSpec& q, int jobs) {
    require(f.spec.dim == 1, ErrorCode::dimension_mismatch,
            "calderon_c1_direct: one-dimensional inputs required");
    return pv_direct(f, a, q, jobs);
}

SampledFunction calderon_c1_multiplier(const SampledFunction& f,
                                       const SampledFunction& a, int trunc_radius,
                                       int jobs) {
    require(f.spec.dim == 1, ErrorCode::dimension_mismatch,
            "calderon_c1_multiplier: one-dimensional inputs required");
    require(f.spec == a.spec, ErrorCode::dimension_mismatch,
            "commutator: f and a must share a grid");
    auto plan = multiplier::make_plan(symbols::calderon_symbol(), f.spec,
                                      default_trunc(f.spec, trunc_radius), 0,
                                      multiplier::SingularPolicy::zero, jobs);
    std::vector<SampledFunction> in{f, a};
    SampledFunction out = multiplier::apply(plan, in);
    for (Complex& v : out.values) v *= minus_i_pi;
    return out;
}

SampledFunction calderon_cn(const SampledFunction& f, const SampledFunction& a,
                            Mode mode, const PvQuadratureSpec& q, int trunc_radius,
                            int jobs) {
    f.check();
    a.check();
    require(f.spec == a.spec, ErrorCode::dimension_mismatch,
            "commutator: f and a must share a grid");
    const int n = f.spec.dim;
    require(n >= 1 && n <= 2, ErrorCode::invalid_argument,
            "calderon_cn: n > 2 exceeds the desk-scale budget");
    if (mode == Mode::direct) return pv_direct(f, a, q, jobs);

    std::vector<symbols::Symbol> factors(static_cast<std::size_t>(n),
                                         symbols::calderon_symbol());
    auto plan = multiplier::make_plan(symbols::tensor_symbol(std::move(factors)),
                                      f.spec, default_trunc(f.spec, trunc_radius), 0,
                                      multiplier::SingularPolicy::zero, jobs);
    std::vector<SampledFunction> in{f, a};
    SampledFunction out = multiplier::apply(plan, in);
    Complex scale = 1.0;
    for (int l = 0; l < n; ++l) scale *= minus_i_pi;
    for (Complex& v : out.values) v *= scale;
    return out;
}

} // namespace mlab::commutator
