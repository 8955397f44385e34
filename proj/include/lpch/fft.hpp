#pragma once

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "lpch/field.hpp"
#include "lpch/grid.hpp"

namespace lpch {

/// Process-wide FFTW plan cache. Plans are created with FFTW_ESTIMATE so the
/// chosen algorithm (and hence the floating-point summation order) is a pure
/// function of the transform shape; repeated runs stay bit-identical.
class FftEngine {
public:
    static FftEngine& instance() {
        static FftEngine engine;
        return engine;
    }

    /// Unnormalized inverse DFT: samples(x) = sum_m coef(m) exp(+i xi_m . x).
    void backward(const TorusGrid& grid, const std::vector<Complex>& in, std::vector<Complex>& out) {
        execute(grid, in, out, false);
    }

    /// Forward DFT normalized by 1/(M_0*...*M_{d-1}): Fourier-series coefficients.
    void forward(const TorusGrid& grid, const std::vector<Complex>& in, std::vector<Complex>& out) {
        execute(grid, in, out, true);
        const double inv = 1.0 / static_cast<double>(grid.points());
        for (auto& v : out) v *= inv;
    }

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

private:
    struct PlanSet {
        fftw_complex* buf_in = nullptr;
        fftw_complex* buf_out = nullptr;
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
        std::size_t points = 0;

        ~PlanSet() {
            if (fwd) fftw_destroy_plan(fwd);
            if (bwd) fftw_destroy_plan(bwd);
            if (buf_in) fftw_free(buf_in);
            if (buf_out) fftw_free(buf_out);
        }
    };

    FftEngine() = default;

    PlanSet& plans_for(const std::vector<int>& extent, std::size_t points) {
        auto it = cache_.find(extent);
        if (it != cache_.end()) return *it->second;
        auto set = std::make_unique<PlanSet>();
        set->points = points;
        set->buf_in = fftw_alloc_complex(points);
        set->buf_out = fftw_alloc_complex(points);
        if (!set->buf_in || !set->buf_out) throw std::runtime_error("FftEngine: allocation failed");
        set->fwd = fftw_plan_dft(static_cast<int>(extent.size()), extent.data(),
                                 set->buf_in, set->buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        set->bwd = fftw_plan_dft(static_cast<int>(extent.size()), extent.data(),
                                 set->buf_in, set->buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!set->fwd || !set->bwd) throw std::runtime_error("FftEngine: planning failed");
        auto [pos, _] = cache_.emplace(extent, std::move(set));
        return *pos->second;
    }

    void execute(const TorusGrid& grid, const std::vector<Complex>& in, std::vector<Complex>& out, bool forward) {
        if (in.size() != grid.points())
            throw std::invalid_argument("FftEngine: buffer size does not match grid");
        out.resize(grid.points());
        std::lock_guard<std::mutex> lock(mutex_);
        PlanSet& p = plans_for(grid.extent(), grid.points());
        std::memcpy(p.buf_in, in.data(), sizeof(Complex) * in.size());
        fftw_execute(forward ? p.fwd : p.bwd);
        std::memcpy(out.data(), p.buf_out, sizeof(Complex) * out.size());
    }

    std::mutex mutex_;
    std::map<std::vector<int>, std::unique_ptr<PlanSet>> cache_;
};

/// Inverse transform to physical samples. Requires Hermitian symmetry; the
/// imaginary residue of the complex inverse must sit below 1e-12 relative.
inline PhysicalField to_physical(const SpectralField& f) {
    const double defect = symmetry_defect(f);
    const double scale = max_abs(f);
    if (defect > 1e-10 * std::max(scale, 1e-300))
        throw std::runtime_error("to_physical: corrupted field (Hermitian symmetry violated)");

    PhysicalField out(f.grid, f.components());
    std::vector<Complex> work;
    for (int c = 0; c < f.components(); ++c) {
        FftEngine::instance().backward(f.grid, f[c], work);
        double max_imag = 0, max_mag = 0;
        auto& dst = out[c];
        for (std::size_t i = 0; i < work.size(); ++i) {
            max_imag = std::max(max_imag, std::abs(work[i].imag()));
            max_mag = std::max(max_mag, std::abs(work[i]));
            dst[i] = work[i].real();
        }
        if (max_imag > 1e-12 * std::max(max_mag, 1e-300) && max_imag > 1e-250)
            throw std::runtime_error("to_physical: corrupted field (imaginary residue too large)");
    }
    return out;
}

/// Forward transform of real samples; inverse of to_physical on band-limited
/// fields. Output is symmetrized exactly and has an empty Nyquist plane.
inline SpectralField to_spectral(const PhysicalField& samples) {
    for (const auto& comp : samples.comp)
        for (double v : comp)
            if (!std::isfinite(v)) throw std::invalid_argument("to_spectral: non-finite sample");

    SpectralField out(samples.grid, samples.components());
    std::vector<Complex> work(samples.grid.points());
    for (int c = 0; c < samples.components(); ++c) {
        const auto& src = samples[c];
        for (std::size_t i = 0; i < src.size(); ++i) work[i] = Complex{src[i], 0.0};
        FftEngine::instance().forward(samples.grid, work, out[c]);
    }
    zero_nyquist(out);
    symmetrize(out);
    return out;
}

} // namespace lpch
