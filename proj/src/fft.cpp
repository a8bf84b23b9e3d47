#include "fractrans/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fractrans::fft {
namespace {

struct Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

std::mutex plan_mutex;

// Plans are created once per size and never destroyed. FFTW_ESTIMATE keeps the
// chosen algorithm independent of timing, so repeated runs are bit-identical.
const Plans& plans_for(std::size_t n)
{
    static std::map<std::size_t, Plans> cache;
    std::lock_guard lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> r(n);
    std::vector<Complex> c(n / 2 + 1);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), r.data(), cp, flags);
    p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), cp, r.data(), flags);
    if (!p.r2c || !p.c2r) throw std::runtime_error("fftw planning failed");
    return cache.emplace(n, p).first->second;
}

} // namespace

void forward(std::span<const double> in, std::span<Complex> out)
{
    const std::size_t n = in.size();
    if (out.size() != n / 2 + 1) throw std::invalid_argument("fft::forward: output size mismatch");
    const Plans& p = plans_for(n);
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(std::span<const Complex> in, std::span<double> out)
{
    const std::size_t n = out.size();
    if (in.size() != n / 2 + 1) throw std::invalid_argument("fft::inverse: input size mismatch");
    const Plans& p = plans_for(n);
    // c2r overwrites its input
    thread_local std::vector<Complex> scratch;
    scratch.assign(in.begin(), in.end());
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    const double inv = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= inv;
}

} // namespace fractrans::fft
