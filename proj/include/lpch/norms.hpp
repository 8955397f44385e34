#pragma once

#include <cmath>
#include <stdexcept>

#include "lpch/fft.hpp"
#include "lpch/field.hpp"

namespace lpch {

/// Discrete L^p norm over the torus, (sum |f(x)|^p (L/M)^d)^(1/p), where
/// |f(x)| is the Euclidean length of the d-component vector; p = inf takes
/// the max over grid points.
inline double lp_norm(const SpectralField& f, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: exponent must lie in [1, inf]");
    const PhysicalField phys = to_physical(f);
    const std::size_t n = f.grid.points();

    if (std::isinf(p)) {
        double best = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sq = 0;
            for (const auto& comp : phys.comp) sq += comp[i] * comp[i];
            best = std::max(best, sq);
        }
        return std::sqrt(best);
    }

    double acc = 0;
    if (p == 2.0) {
        for (const auto& comp : phys.comp)
            for (double v : comp) acc += v * v;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double sq = 0;
            for (const auto& comp : phys.comp) sq += comp[i] * comp[i];
            acc += std::pow(std::sqrt(sq), p);
        }
    }
    return std::pow(acc * f.grid.cell_volume(), 1.0 / p);
}

/// L^2 norm straight from coefficients (Parseval); agrees with lp_norm(f, 2)
/// to rounding and skips both transforms.
inline double l2_norm_parseval(const SpectralField& f) {
    double acc = 0;
    for (const auto& comp : f.comp)
        for (const auto& v : comp) acc += std::norm(v);
    return std::sqrt(acc * f.grid.volume());
}

} // namespace lpch
