#include "mlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "mlab/fft.hpp"

namespace mlab {

void GridSpec::validate() const {
    require(dim >= 1, ErrorCode::invalid_argument, "grid: dim must be >= 1");
    require(samples_per_axis >= 4, ErrorCode::invalid_argument,
            "grid: samples_per_axis must be >= 4");
    require(samples_per_axis % 2 == 0, ErrorCode::invalid_argument,
            "grid: samples_per_axis must be even");
    require(box_half_length > 0.0 && std::isfinite(box_half_length),
            ErrorCode::invalid_argument, "grid: box_half_length must be positive");
    double points = std::pow(static_cast<double>(samples_per_axis), dim);
    require(points <= 1e18, ErrorCode::invalid_argument,
            "grid: total point count not representable");
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing();
    return v;
}

std::size_t GridSpec::total_points() const {
    std::size_t t = 1;
    for (int a = 0; a < dim; ++a) t *= static_cast<std::size_t>(samples_per_axis);
    return t;
}

void SampledFunction::check() const {
    spec.validate();
    require(values.size() == spec.total_points(), ErrorCode::dimension_mismatch,
            "sampled function: values length != N^d");
    for (const Complex& v : values)
        require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                ErrorCode::invalid_argument, "sampled function: non-finite entry");
}

void SpectralFunction::check() const {
    spec.validate();
    require(coeffs.size() == spec.total_points(), ErrorCode::dimension_mismatch,
            "spectral function: coeffs length != N^d");
}

void decode_index(std::size_t flat, int dim, int n, int* out) {
    for (int a = dim - 1; a >= 0; --a) {
        out[a] = static_cast<int>(flat % static_cast<std::size_t>(n));
        flat /= static_cast<std::size_t>(n);
    }
}

namespace {

// Centered-slot p along an axis carries frequency k = p - N/2; relative to
// the plain DFT bin (k mod N) the grid origin at -L contributes the phase
// (-1)^k per axis.
double parity_sign(const int* idx, int dim, int n) {
    int par = 0;
    for (int a = 0; a < dim; ++a) par ^= (idx[a] - n / 2) & 1;
    return par ? -1.0 : 1.0;
}

std::size_t dft_slot(const int* idx, int dim, int n) {
    // frequency k = idx[a] - N/2; DFT bin = k mod N = (idx[a] + N/2) mod N.
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
        int bin = idx[a] + n / 2;
        if (bin >= n) bin -= n;
        flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(bin);
    }
    return flat;
}

} // namespace

SpectralFunction forward_transform(const SampledFunction& f) {
    f.check();
    const GridSpec& g = f.spec;
    const int n = g.samples_per_axis;
    std::vector<Complex> work = f.values;
    std::vector<std::size_t> dims(g.dim, static_cast<std::size_t>(n));
    fft::transform_nd(work, dims, /*inverse=*/false);

    SpectralFunction out = SpectralFunction::zeros(g);
    const double measure = g.cell_volume();
    std::vector<int> idx(g.dim, 0);
    std::size_t flat = 0;
    do {
        out.coeffs[flat] =
            measure * parity_sign(idx.data(), g.dim, n) * work[dft_slot(idx.data(), g.dim, n)];
        ++flat;
    } while (advance_index(idx.data(), g.dim, n));
    return out;
}

SampledFunction inverse_transform(const SpectralFunction& F) {
    F.check();
    const GridSpec& g = F.spec;
    const int n = g.samples_per_axis;
    std::vector<Complex> work(g.total_points());
    std::vector<int> idx(g.dim, 0);
    std::size_t flat = 0;
    do {
        work[dft_slot(idx.data(), g.dim, n)] =
            parity_sign(idx.data(), g.dim, n) * F.coeffs[flat];
        ++flat;
    } while (advance_index(idx.data(), g.dim, n));

    std::vector<std::size_t> dims(g.dim, static_cast<std::size_t>(n));
    fft::transform_nd(work, dims, /*inverse=*/true);
    double scale = 1.0;
    for (int a = 0; a < g.dim; ++a) scale /= 2.0 * g.box_half_length;
    for (Complex& v : work) v *= scale;
    return SampledFunction{g, std::move(work)};
}

double norm_lp(const SampledFunction& f, double p) {
    f.check();
    require(p > 0.0, ErrorCode::domain, "norm_lp: p must be positive");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const Complex& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    const double measure = f.spec.cell_volume();
    double acc = 0.0;
    for (const Complex& v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc * measure, 1.0 / p);
}

double norm_weak_lp(const SampledFunction& f, double p) {
    f.check();
    require(p > 0.0 && std::isfinite(p), ErrorCode::domain,
            "norm_weak_lp: p must be positive and finite");
    std::vector<double> mags(f.values.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(f.values[i]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    const double measure = f.spec.cell_volume();
    double best = 0.0;
    // mags sorted descending: measure{|f| >= mags[i]} >= (i+1) cells, with
    // equality at the last slot of each tie block.
    for (std::size_t i = 0; i < mags.size(); ++i) {
        if (mags[i] == 0.0) break;
        if (i + 1 < mags.size() && mags[i + 1] == mags[i]) continue;
        double cand = mags[i] * std::pow(static_cast<double>(i + 1) * measure, 1.0 / p);
        best = std::max(best, cand);
    }
    return best;
}

SampledFunction sample(const GridSpec& g, const PointFunction& expr,
                       double offset_cells) {
    g.validate();
    SampledFunction out = SampledFunction::zeros(g);
    const double h = g.spacing();
    std::vector<int> idx(g.dim, 0);
    std::vector<double> x(g.dim, 0.0);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < g.dim; ++a)
            x[a] = -g.box_half_length + (idx[a] + offset_cells) * h;
        Complex v = expr(x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::string pt;
            for (int a = 0; a < g.dim; ++a)
                pt += (a ? "," : "") + std::to_string(x[a]);
            fail(ErrorCode::evaluation,
                 "sample: non-finite value at point (" + pt + ")");
        }
        out.values[flat] = v;
        ++flat;
    } while (advance_index(idx.data(), g.dim, g.samples_per_axis));
    return out;
}

double boundary_mass_fraction(const SampledFunction& f) {
    f.check();
    const GridSpec& g = f.spec;
    const double h = g.spacing();
    const double edge = 0.9 * g.box_half_length;
    double total = 0.0, outer = 0.0;
    std::vector<int> idx(g.dim, 0);
    std::size_t flat = 0;
    do {
        double m = std::norm(f.values[flat]);
        total += m;
        for (int a = 0; a < g.dim; ++a) {
            if (std::abs(-g.box_half_length + idx[a] * h) >= edge) {
                outer += m;
                break;
            }
        }
        ++flat;
    } while (advance_index(idx.data(), g.dim, g.samples_per_axis));
    return total > 0.0 ? outer / total : 0.0;
}

namespace {

constexpr char magic[5] = {'M', 'L', 'A', 'B', '1'};

void write_binary(const std::string& path, const GridSpec& g,
                  const std::vector<Complex>& data) {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), ErrorCode::io, "cannot open for writing: " + path);
    os.write(magic, 5);
    double header[3] = {static_cast<double>(g.dim),
                        static_cast<double>(g.samples_per_axis),
                        g.box_half_length};
    os.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (const Complex& v : data) {
        double re = v.real(), im = v.imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof(double));
        os.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
    require(os.good(), ErrorCode::io, "write failed: " + path);
}

std::pair<GridSpec, std::vector<Complex>> read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), ErrorCode::io, "cannot open for reading: " + path);
    char m[5];
    is.read(m, 5);
    require(is.good() && std::memcmp(m, magic, 5) == 0, ErrorCode::io,
            "bad magic in " + path);
    double header[3];
    is.read(reinterpret_cast<char*>(header), sizeof(header));
    require(is.good(), ErrorCode::io, "truncated header in " + path);
    GridSpec g(static_cast<int>(header[0]), static_cast<int>(header[1]), header[2]);
    std::vector<Complex> data(g.total_points());
    for (Complex& v : data) {
        double reim[2];
        is.read(reinterpret_cast<char*>(reim), sizeof(reim));
        require(is.good(), ErrorCode::io, "truncated data in " + path);
        v = Complex(reim[0], reim[1]);
    }
    return {g, std::move(data)};
}

} // namespace

void write_field(const std::string& path, const SampledFunction& f) {
    f.check();
    write_binary(path, f.spec, f.values);
}

SampledFunction read_field(const std::string& path) {
    auto [g, data] = read_binary(path);
    return SampledFunction{g, std::move(data)};
}

void write_spectrum(const std::string& path, const SpectralFunction& F) {
    F.check();
    write_binary(path, F.spec, F.coeffs);
}

SpectralFunction read_spectrum(const std::string& path) {
    auto [g, data] = read_binary(path);
    return SpectralFunction{g, std::move(data)};
}

void export_csv(const std::string& path, const SampledFunction& f) {
    f.check();
    require(f.spec.dim <= 2, ErrorCode::invalid_argument,
            "export_csv: only 1-d and 2-d fields");
    std::ofstream os(path);
    require(os.good(), ErrorCode::io, "cannot open for writing: " + path);
    char line[160];
    if (f.spec.dim == 1) {
        os << "x,re,im\n";
        for (int i = 0; i < f.spec.samples_per_axis; ++i) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", f.spec.coord(i),
                          f.values[i].real(), f.values[i].imag());
            os << line;
        }
    } else {
        os << "x0,x1,re,im\n";
        const int n = f.spec.samples_per_axis;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Complex& v = f.values[static_cast<std::size_t>(i) * n + j];
                std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n",
                              f.spec.coord(i), f.spec.coord(j), v.real(), v.imag());
                os << line;
            }
    }
    require(os.good(), ErrorCode::io, "write failed: " + path);
}

} // namespace mlab
