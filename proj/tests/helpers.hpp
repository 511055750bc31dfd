#pragma once

#include <cmath>
#include <complex>

#include "mlab/grid.hpp"
#include "mlab/rng.hpp"

namespace testutil {

inline double rel_l2(const mlab::SampledFunction& got,
                     const mlab::SampledFunction& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.values.size(); ++i) {
        num += std::norm(got.values[i] - want.values[i]);
        den += std::norm(want.values[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double max_abs_diff(const mlab::SampledFunction& got,
                           const mlab::SampledFunction& want) {
    double m = 0.0;
    for (std::size_t i = 0; i < got.values.size(); ++i)
        m = std::max(m, std::abs(got.values[i] - want.values[i]));
    return m;
}

inline mlab::SampledFunction random_field(const mlab::GridSpec& g,
                                          std::uint64_t seed) {
    mlab::Rng rng(seed);
    mlab::SampledFunction f = mlab::SampledFunction::zeros(g);
    for (auto& v : f.values) v = mlab::Complex(rng.gaussian(), rng.gaussian());
    return f;
}

inline mlab::SampledFunction gaussian(const mlab::GridSpec& g, double center = 0.0,
                                      double width = 1.0) {
    return mlab::sample(g, [=](std::span<const double> x) -> mlab::Complex {
        double r2 = 0.0;
        for (double c : x) r2 += (c - center) * (c - center) / (width * width);
        return std::exp(-M_PI * r2);
    });
}

inline mlab::SampledFunction plane_wave(const mlab::GridSpec& g,
                                        std::span<const int> k0) {
    return mlab::sample(g, [&](std::span<const double> x) -> mlab::Complex {
        double phase = 0.0;
        for (int a = 0; a < g.dim; ++a) phase += x[a] * g.xi(k0[a]);
        return std::exp(mlab::Complex(0.0, 2.0 * M_PI * phase));
    });
}

} // namespace testutil
