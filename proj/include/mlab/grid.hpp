#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mlab/error.hpp"

namespace mlab {

using Complex = std::complex<double>;

// Uniform periodic grid over the box [-L, L)^d with N samples per axis,
// spacing 2L/N. Frequencies are the centered integer lattice
// {-N/2, ..., N/2-1}^d; the physical frequency of index k is k/(2L).
struct GridSpec {
    int dim = 1;
    int samples_per_axis = 0;
    double box_half_length = 0.0;

    GridSpec() = default;
    GridSpec(int d, int n, double half_length)
        : dim(d), samples_per_axis(n), box_half_length(half_length) {
        validate();
    }

    void validate() const;

    double spacing() const { return 2.0 * box_half_length / samples_per_axis; }
    double cell_volume() const;
    std::size_t total_points() const;
    double coord(std::int64_t i) const { return -box_half_length + i * spacing(); }
    int freq_min() const { return -samples_per_axis / 2; }
    int freq_max() const { return samples_per_axis / 2 - 1; }
    // Frequency index of the p-th centered-storage slot, p in [0, N).
    int freq_of_slot(int p) const { return p - samples_per_axis / 2; }
    int slot_of_freq(int k) const { return k + samples_per_axis / 2; }
    double xi(int k) const { return k / (2.0 * box_half_length); }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && samples_per_axis == o.samples_per_axis &&
               box_half_length == o.box_half_length;
    }
};

// Complex samples on the grid, row-major in axis order (axis 0 slowest).
struct SampledFunction {
    GridSpec spec;
    std::vector<Complex> values;

    static SampledFunction zeros(const GridSpec& g) {
        return SampledFunction{g, std::vector<Complex>(g.total_points())};
    }
    void check() const;
};

// Fourier coefficients on the centered frequency lattice, stored row-major
// with slot p <-> frequency index p - N/2 along every axis.
struct SpectralFunction {
    GridSpec spec;
    std::vector<Complex> coeffs;

    static SpectralFunction zeros(const GridSpec& g) {
        return SpectralFunction{g, std::vector<Complex>(g.total_points())};
    }
    void check() const;
};

// Row-major multi-index decode/advance.
void decode_index(std::size_t flat, int dim, int n, int* out);
inline bool advance_index(int* idx, int dim, int n) {
    for (int a = dim - 1; a >= 0; --a) {
        if (++idx[a] < n) return true;
        idx[a] = 0;
    }
    return false;
}

// coeffs[k] ~ integral over the box of f(x) exp(-2*pi*i x.k/(2L)) dx,
// by the trapezoidal/DFT quadrature including the (2L/N)^d measure factor.
SpectralFunction forward_transform(const SampledFunction& f);
// Exact inverse of forward_transform on its image.
SampledFunction inverse_transform(const SpectralFunction& F);

// Riemann-sum L^p (quasi)norm; p may be +infinity. p <= 0 is a domain error.
double norm_lp(const SampledFunction& f, double p);
// Weak-L^p quasinorm sup_t t |{|f| > t}|^{1/p}, evaluated exactly for the
// grid simple function (the sup over all t > 0 is attained as t approaches
// a sample value from below, so it equals max over values v of
// v * measure{|f| >= v}^{1/p}).
double norm_weak_lp(const SampledFunction& f, double p);

using PointFunction = std::function<Complex(std::span<const double>)>;

// Pointwise evaluation on grid points shifted by offset_cells * spacing
// along every axis (offset 0.5 keeps samples off coordinate hyperplanes).
SampledFunction sample(const GridSpec& g, const PointFunction& expr,
                       double offset_cells = 0.0);

// Fraction of the squared L^2 mass lying within 10% of the box boundary
// along any axis. Experiments reject inputs with fraction > 1e-6.
double boundary_mass_fraction(const SampledFunction& f);
constexpr double boundary_mass_limit = 1e-6;

// Little-endian binary container: magic "MLAB1", then d, N, L as f64,
// then interleaved re/im f64 in index order. Sampled and spectral data
// share the container.
void write_field(const std::string& path, const SampledFunction& f);
SampledFunction read_field(const std::string& path);
void write_spectrum(const std::string& path, const SpectralFunction& F);
SpectralFunction read_spectrum(const std::string& path);

// CSV export of the values (d = 1) or of a 2-d sheet (d = 2):
// columns x0[,x1],re,im.
void export_csv(const std::string& path, const SampledFunction& f);

} // namespace mlab
