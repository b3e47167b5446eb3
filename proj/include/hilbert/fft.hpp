#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "hilbert/error.hpp"

namespace hilbert::fft {

namespace detail {

// The FFTW planner is not reentrant; execution of distinct plans is.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(std::vector<std::complex<double>>& data, int sign) {
        std::lock_guard lock(planner_mutex());
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        plan_ = fftw_plan_dft_1d(static_cast<int>(data.size()), p, p, sign, FFTW_ESTIMATE);
        if (plan_ == nullptr) throw error("fftw: planning failed");
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

}  // namespace detail

/// In-place forward DFT, X_k = sum_m x_m e^{-2 pi i k m / N}.
inline void forward(std::vector<std::complex<double>>& data) {
    if (data.empty()) return;
    detail::Plan(data, FFTW_FORWARD).execute();
}

/// In-place inverse DFT including the 1/N normalisation.
inline void inverse(std::vector<std::complex<double>>& data) {
    if (data.empty()) return;
    detail::Plan(data, FFTW_BACKWARD).execute();
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& c : data) c *= scale;
}

}  // namespace hilbert::fft
