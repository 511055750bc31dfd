#include "mlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "mlab/error.hpp"

namespace mlab::fft {
namespace {

// FFTW planning is not thread safe; execution through fftw_execute_dft is.
// Plans are cached per (dims, direction) and created with FFTW_UNALIGNED so
// they can run on any buffer of the right shape.
std::mutex plan_mutex;

struct PlanKey {
    std::vector<std::size_t> dims;
    int sign;
    bool operator<(const PlanKey& o) const {
        if (sign != o.sign) return sign < o.sign;
        return dims < o.dims;
    }
};

fftw_plan plan_for(const std::vector<std::size_t>& dims, int sign,
                   fftw_complex* buf) {
    static std::map<PlanKey, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    PlanKey key{dims, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<int> n(dims.begin(), dims.end());
    fftw_plan p = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf,
                                sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    require(p != nullptr, ErrorCode::internal, "fftw plan creation failed");
    cache.emplace(key, p);
    return p;
}

} // namespace

void transform_nd(std::vector<std::complex<double>>& data,
                  const std::vector<std::size_t>& dims, bool inverse) {
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    require(total == data.size(), ErrorCode::dimension_mismatch,
            "transform_nd: data length does not match dims");
    if (total == 0) return;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan p = plan_for(dims, inverse ? FFTW_BACKWARD : FFTW_FORWARD, buf);
    fftw_execute_dft(p, buf, buf);
}

} // namespace mlab::fft
