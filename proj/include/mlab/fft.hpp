#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mlab::fft {

// Unnormalized multi-dimensional DFT on row-major data:
//   forward:  X[q] = sum_j x[j] exp(-2*pi*i j.q / N)
//   inverse:  X[q] = sum_j x[j] exp(+2*pi*i j.q / N)
// dims lists the extent of each axis, slowest-varying first.
void transform_nd(std::vector<std::complex<double>>& data,
                  const std::vector<std::size_t>& dims, bool inverse);

} // namespace mlab::fft
