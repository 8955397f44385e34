#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lpch/dyadic.hpp"
#include "lpch/field.hpp"
#include "lpch/grid.hpp"

namespace lpch {

/// Deterministic random real field with Gaussian coefficients supported in
/// |m_axis| <= band[axis]. Same (grid, band, seed, ncomp) always produces the
/// same field.
inline SpectralField random_band_limited_field(const TorusGrid& grid, const std::vector<int>& band,
                                               std::uint64_t seed, int ncomp, double amplitude = 1.0) {
    if (static_cast<int>(band.size()) != grid.dim())
        throw std::invalid_argument("random_band_limited_field: band list must have one entry per axis");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField out(grid, ncomp);
    for (int c = 0; c < ncomp; ++c) {
        auto& comp = out[c];
        for (LatticeIter it(grid); !it.done(); it.next()) {
            bool inside = true;
            for (int ax = 0; ax < grid.dim(); ++ax) {
                const int m = grid.freq_index(ax, it.axis_index(ax));
                if (std::abs(m) > band[static_cast<std::size_t>(ax)] || m == -grid.extent(ax) / 2) {
                    inside = false;
                    break;
                }
            }
            if (inside) comp[it.flat()] = amplitude * Complex{gauss(rng), gauss(rng)};
        }
    }
    symmetrize(out);
    zero_nyquist(out);
    return out;
}

/// Random field supported in the dyadic annulus of block j: full-band noise
/// masked by the block multiplier.
inline SpectralField random_block_field(int j, std::uint64_t seed, int ncomp, const DyadicPartition& part) {
    const TorusGrid& grid = part.grid();
    std::vector<int> band(static_cast<std::size_t>(grid.dim()));
    for (int ax = 0; ax < grid.dim(); ++ax)
        band[static_cast<std::size_t>(ax)] = grid.extent(ax) / 2 - 1;
    SpectralField noise = random_band_limited_field(grid, band, seed, ncomp);
    return dyadic_block(noise, j, part);
}

} // namespace lpch
