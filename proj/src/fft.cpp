#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace lrvkit::detail {

namespace {

// fftw_plan_* is not thread-safe; fftw_execute_dft_* on an existing plan is.
// Plans are created once per (size, direction) and kept for the process lifetime.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan forward(int n) {
        std::lock_guard lock(mutex_);
        auto& slot = forward_[n];
        if (!slot) {
            std::unique_ptr<double, decltype(&fftw_free)> in(fftw_alloc_real(n), &fftw_free);
            std::unique_ptr<fftw_complex, decltype(&fftw_free)> out(fftw_alloc_complex(n / 2 + 1), &fftw_free);
            slot = fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        return slot;
    }

    fftw_plan backward(int n) {
        std::lock_guard lock(mutex_);
        auto& slot = backward_[n];
        if (!slot) {
            std::unique_ptr<fftw_complex, decltype(&fftw_free)> in(fftw_alloc_complex(n / 2 + 1), &fftw_free);
            std::unique_ptr<double, decltype(&fftw_free)> out(fftw_alloc_real(n), &fftw_free);
            slot = fftw_plan_dft_c2r_1d(n, in.get(), out.get(), FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        return slot;
    }

    ~PlanCache() {
        for (auto& [n, p] : forward_) fftw_destroy_plan(p);
        for (auto& [n, p] : backward_) fftw_destroy_plan(p);
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<int, fftw_plan> forward_;
    std::map<int, fftw_plan> backward_;
};

}  // namespace

std::vector<std::complex<double>> real_fft(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
    fftw_execute_dft_r2c(PlanCache::instance().forward(n), in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t len = a.size() + b.size() - 1;
    std::size_t size = 1;
    while (size < len) size <<= 1;
    const int n = static_cast<int>(size);

    std::vector<double> pa(size, 0.0), pb(size, 0.0);
    std::copy(a.begin(), a.end(), pa.begin());
    std::copy(b.begin(), b.end(), pb.begin());
    const auto fa = real_fft(pa);
    const auto fb = real_fft(pb);

    std::vector<std::complex<double>> prod(fa.size());
    for (std::size_t k = 0; k < fa.size(); ++k) prod[k] = fa[k] * fb[k];

    std::vector<double> out(size);
    fftw_execute_dft_c2r(PlanCache::instance().backward(n), reinterpret_cast<fftw_complex*>(prod.data()),
                         out.data());
    out.resize(len);
    for (double& v : out) v /= static_cast<double>(size);
    return out;
}

}  // namespace lrvkit::detail
