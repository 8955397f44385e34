#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpch/cutoffs.hpp"
#include "lpch/dyadic.hpp"
#include "lpch/fft.hpp"
#include "lpch/field.hpp"
#include "lpch/grid.hpp"
#include "lpch/norms.hpp"

namespace lpch {

/// Radial profile of the bump's Fourier transform: even, smooth, equal to 1
/// on |xi| <= 1/4 and 0 on |xi| >= 1/2, built from the same smooth step as
/// the dyadic cutoffs. On the L = 24*pi lattice its samples theta(m/12) are
/// 1 for |m| <= 3 and 0 for |m| >= 6.
struct BumpProfile {
    double theta(double rho) const {
        rho = std::abs(rho);
        if (rho <= 0.25) return 1.0;
        if (rho >= 0.5) return 0.0;
        return 1.0 - smooth_step((rho - 0.25) / 0.25);
    }

    /// theta(m/12) for m = 0..6.
    std::array<double, 7> lattice() const {
        std::array<double, 7> out{};
        for (int m = 0; m <= 6; ++m) out[static_cast<std::size_t>(m)] = theta(m / 12.0);
        return out;
    }
};

inline BumpProfile bump() { return BumpProfile{}; }

/// Parameters of the lacunary initial datum
///   u0 = (sum_{n=0}^{N} 2^{-k n sigma} f_n^k, 0, ..., 0),
///   f_n^k = phi(x1) cos((17/12) 2^{kn} x1) phi(x2) ... phi(xd).
struct InitialDataSpec {
    int d = 2;
    int k = 2;
    int n_max = 3;
    double sigma = 4.5;
    double p = 2.0;
};

namespace detail {

inline bool lattice_resolves_bump(const TorusGrid& grid) {
    // The bump band [-1/2, 1/2] must be sampled at spacing 1/12.
    return std::abs(grid.freq_unit() * 12.0 - 1.0) < 1e-12;
}

inline std::int64_t carrier_index(int k, int n) {
    const std::int64_t e = static_cast<std::int64_t>(k) * n;
    if (e > 40) throw std::invalid_argument("carrier index 17*2^(kn) overflows any practical grid");
    return std::int64_t{17} << e;
}

/// Fourier-series coefficients of the spatial bump: beta(m) = theta(m/12)/L.
inline std::array<double, 7> bump_coefficients(const TorusGrid& grid) {
    auto samples = bump().lattice();
    for (auto& v : samples) v /= grid.period();
    return samples;
}

inline double beta_at(const std::array<double, 7>& beta, std::int64_t offset) {
    offset = std::abs(offset);
    return offset <= 6 ? beta[static_cast<std::size_t>(offset)] : 0.0;
}

/// Scalar profile phi(x1) cos(c * unit * x1) phi(x2)...phi(xd), assembled
/// directly in frequency space; c = 0 drops the cosine.
inline SpectralField modulated_bump(const TorusGrid& grid, std::int64_t c, int ncomp, int target_comp) {
    if (!lattice_resolves_bump(grid))
        throw std::invalid_argument("profile construction requires L = 24*pi (bump band at lattice spacing 1/12)");
    SpectralField out(grid, ncomp);
    const auto beta = bump_coefficients(grid);
    auto& comp = out[target_comp];
    for (LatticeIter it(grid); !it.done(); it.next()) {
        const std::int64_t m0 = grid.freq_index(0, it.axis_index(0));
        double w = c == 0 ? beta_at(beta, m0)
                          : 0.5 * (beta_at(beta, m0 - c) + beta_at(beta, m0 + c));
        if (w == 0.0) continue;
        for (int ax = 1; ax < grid.dim(); ++ax) {
            w *= beta_at(beta, grid.freq_index(ax, it.axis_index(ax)));
            if (w == 0.0) break;
        }
        comp[it.flat()] = Complex{w, 0.0};
    }
    return out;
}

/// Coefficients of phi^2 (self-convolution of beta), support |m| <= 10.
inline std::array<double, 11> squared_bump_coefficients(const TorusGrid& grid) {
    const auto beta = bump_coefficients(grid);
    std::array<double, 11> sq{};
    for (int m = 0; m <= 10; ++m) {
        double acc = 0;
        for (int i = -6; i <= 6; ++i) acc += beta_at(beta, i) * beta_at(beta, m - i);
        sq[static_cast<std::size_t>(m)] = acc;
    }
    return sq;
}

inline double sq_beta_at(const std::array<double, 11>& sq, std::int64_t offset) {
    offset = std::abs(offset);
    return offset <= 10 ? sq[static_cast<std::size_t>(offset)] : 0.0;
}

/// Scalar profile phi^2(x1) cos(a u x1) cos(b u x1) phi^2(x2)...phi^2(xd).
inline SpectralField squared_bump_two_cosines(const TorusGrid& grid, std::int64_t a, std::int64_t b) {
    if (!lattice_resolves_bump(grid))
        throw std::invalid_argument("profile construction requires L = 24*pi (bump band at lattice spacing 1/12)");
    if (a + b + 10 > grid.extent(0) / 2 - 1)
        throw std::invalid_argument("squared-bump profile does not fit the frequency lattice");
    SpectralField out(grid, 1);
    const auto sq = squared_bump_coefficients(grid);
    auto& comp = out[0];
    for (LatticeIter it(grid); !it.done(); it.next()) {
        const std::int64_t m0 = grid.freq_index(0, it.axis_index(0));
        double w = 0.25 * (sq_beta_at(sq, m0 - a - b) + sq_beta_at(sq, m0 + a + b) +
                           sq_beta_at(sq, m0 - a + b) + sq_beta_at(sq, m0 + a - b));
        if (w == 0.0) continue;
        for (int ax = 1; ax < grid.dim(); ++ax) {
            w *= sq_beta_at(sq, grid.freq_index(ax, it.axis_index(ax)));
            if (w == 0.0) break;
        }
        comp[it.flat()] = Complex{w, 0.0};
    }
    return out;
}

} // namespace detail

/// Validates an InitialDataSpec against a grid; throws naming the violated
/// constraint.
inline void validate(const InitialDataSpec& spec, const TorusGrid& grid) {
    if (spec.d < 2)
        throw std::invalid_argument("InitialDataSpec: dimension d must be >= 2");
    if (spec.d != grid.dim())
        throw std::invalid_argument("InitialDataSpec: dimension does not match the grid");
    if (spec.k < 1)
        throw std::invalid_argument("InitialDataSpec: lacunarity k must be a positive integer");
    if (spec.n_max < 1)
        throw std::invalid_argument("InitialDataSpec: truncation N must be >= 1");
    if (!(spec.p >= 1.0))
        throw std::invalid_argument("InitialDataSpec: exponent p must lie in [1, inf]");
    const double dp = std::isinf(spec.p) ? 0.0 : spec.d / spec.p;
    const double sigma_floor = 2.0 + std::max(1.0 + dp, 1.5);
    if (!(spec.sigma > sigma_floor))
        throw std::invalid_argument("InitialDataSpec: sigma must exceed 2 + max(1 + d/p, 3/2) = " +
                                    std::to_string(sigma_floor));
    if (!detail::lattice_resolves_bump(grid))
        throw std::invalid_argument("InitialDataSpec: period must be 24*pi so bump samples land on the lattice");

    const std::int64_t c_top = detail::carrier_index(spec.k, spec.n_max);
    const double band_edge = kDealiasFraction * (grid.extent(0) / 2) * grid.freq_unit();
    if (!(band_edge > (17.0 / 12.0) * static_cast<double>(std::int64_t{1} << (static_cast<std::int64_t>(spec.k) * spec.n_max)) + 0.5))
        throw std::invalid_argument(
            "InitialDataSpec: dealiased band (2/3)(M/2)(2pi/L) must exceed (17/12)2^{kN} + 1/2; axis-1 grid too tight");
    const std::int64_t c_pair = c_top + detail::carrier_index(spec.k, spec.n_max - 1);
    if (c_pair + 5 > grid.dealias_keep(0))
        throw std::invalid_argument(
            "InitialDataSpec: highest paired frequency (17/12)(2^{kN}+2^{k(N-1)}) does not fit the dealiased band");
    for (int ax = 1; ax < grid.dim(); ++ax)
        if (grid.dealias_keep(ax) < 10)
            throw std::invalid_argument(
                "InitialDataSpec: perpendicular axes must hold the squared bump band (need extent >= 32)");
}

/// f_n^k placed in component 1 of a d-component field.
inline SpectralField f_profile(int k, int n, const TorusGrid& grid) {
    if (k < 1 || n < 0) throw std::invalid_argument("f_profile: need k >= 1 and n >= 0");
    const std::int64_t c = detail::carrier_index(k, n);
    if (c + 5 > grid.dealias_keep(0))
        throw std::invalid_argument("f_profile: carrier frequency outside the dealiased band");
    return detail::modulated_bump(grid, c, grid.dim(), 0);
}

/// g_{m,n}^k with carrier (17/12)(2^{kn} + sign * 2^{km}), 0 <= m <= n-1.
inline SpectralField g_profile(int k, int m, int n, int sign, const TorusGrid& grid) {
    if (k < 1) throw std::invalid_argument("g_profile: need k >= 1");
    if (m < 0 || m >= n) throw std::invalid_argument("g_profile: index m must satisfy 0 <= m <= n-1");
    if (sign != 1 && sign != -1) throw std::invalid_argument("g_profile: sign must be +1 or -1");
    const std::int64_t c = detail::carrier_index(k, n) + sign * detail::carrier_index(k, m);
    if (c + 5 > grid.dealias_keep(0))
        throw std::invalid_argument("g_profile: carrier frequency outside the dealiased band");
    return detail::modulated_bump(grid, c, grid.dim(), 0);
}

/// The lacunary datum u0; component 1 carries the modulated bumps, the rest
/// are zero.
inline SpectralField build_u0(const InitialDataSpec& spec, const TorusGrid& grid) {
    validate(spec, grid);
    SpectralField u0(grid, spec.d);
    for (int n = 0; n <= spec.n_max; ++n) {
        const double weight = std::pow(2.0, -static_cast<double>(spec.k) * n * spec.sigma);
        axpy(u0, weight, f_profile(spec.k, n, grid));
    }
    return u0;
}

/// Pointwise |u|^2 as a one-component field: squared pseudo-spectrally and
/// band-limited by the 2/3 rule.
inline SpectralField square_pseudo_spectral(const SpectralField& u, double dealias_fraction = kDealiasFraction) {
    const PhysicalField phys = to_physical(u);
    PhysicalField sq(u.grid, 1);
    auto& dst = sq[0];
    for (std::size_t i = 0; i < dst.size(); ++i) {
        double acc = 0;
        for (const auto& comp : phys.comp) acc += comp[i] * comp[i];
        dst[i] = acc;
    }
    SpectralField out = to_spectral(sq);
    dealias(out, dealias_fraction);
    return out;
}

/// The three structured pieces of |u0|^2 coming from the cosine product
/// identity: near-zero frequencies, doubled carriers, and n > m cross terms.
struct SquareGroups {
    SpectralField low;
    SpectralField doubled;
    SpectralField cross;
};

inline SquareGroups square_group_decomposition(const InitialDataSpec& spec, const TorusGrid& grid) {
    validate(spec, grid);
    SquareGroups out{SpectralField(grid, 1), SpectralField(grid, 1), SpectralField(grid, 1)};
    for (int n = 0; n <= spec.n_max; ++n) {
        const double w = std::pow(2.0, -2.0 * spec.k * n * spec.sigma);
        const std::int64_t c = detail::carrier_index(spec.k, n);
        axpy(out.low, 0.5 * w, detail::squared_bump_two_cosines(grid, 0, 0));
        axpy(out.doubled, 0.5 * w, detail::squared_bump_two_cosines(grid, 2 * c, 0));
        for (int m = 0; m < n; ++m) {
            const double wc = 2.0 * std::pow(2.0, -static_cast<double>(spec.k) * (n + m) * spec.sigma);
            axpy(out.cross, wc,
                 detail::squared_bump_two_cosines(grid, c, detail::carrier_index(spec.k, m)));
        }
    }
    return out;
}

/// One row of the block lower-bound table: all norms carry the 2^{kn sigma}
/// normalization, so a bounded-below column is the quantitative statement.
struct BlockLowerBoundRow {
    int n;
    double block_norm;  // 2^{kn sigma} ||Delta_kn |u0|^2||_{L^p}
    double i1_norm;     // same normalization, cross term with the n = 0 carrier
    double i2_norm;     // same normalization, cross terms with carriers 1..n-1
};

inline std::vector<BlockLowerBoundRow> block_lower_bound_report(const SpectralField& u0,
                                                                const InitialDataSpec& spec,
                                                                const DyadicPartition& part) {
    validate(spec, part.grid());
    if (u0.grid != part.grid())
        throw std::invalid_argument("block_lower_bound_report: grid mismatch");
    const SpectralField usq = square_pseudo_spectral(u0);
    std::vector<BlockLowerBoundRow> rows;
    for (int n = 1; n <= spec.n_max; ++n) {
        const double norm_weight = std::pow(2.0, static_cast<double>(spec.k) * n * spec.sigma);
        const std::int64_t c_n = detail::carrier_index(spec.k, n);

        SpectralField i1 = detail::squared_bump_two_cosines(part.grid(), c_n, detail::carrier_index(spec.k, 0));
        scale(i1, 2.0 * std::pow(2.0, -static_cast<double>(spec.k) * n * spec.sigma));

        SpectralField i2(part.grid(), 1);
        for (int m = 1; m < n; ++m) {
            const double w = 2.0 * std::pow(2.0, -static_cast<double>(spec.k) * (n + m) * spec.sigma);
            axpy(i2, w, detail::squared_bump_two_cosines(part.grid(), c_n, detail::carrier_index(spec.k, m)));
        }

        rows.push_back(BlockLowerBoundRow{
            n,
            norm_weight * block_lp_norm(usq, spec.k * n, part, spec.p),
            norm_weight * lp_norm(i1, spec.p),
            norm_weight * lp_norm(i2, spec.p),
        });
    }
    return rows;
}

/// Tensor product of plain bumps along every axis (test helper for the
/// spatial profile phi(x1)...phi(xd)).
inline SpectralField bump_field(const TorusGrid& grid) {
    return detail::modulated_bump(grid, 0, 1, 0);
}

} // namespace lpch
