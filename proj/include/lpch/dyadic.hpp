#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpch/cutoffs.hpp"
#include "lpch/field.hpp"
#include "lpch/grid.hpp"
#include "lpch/norms.hpp"
#include "lpch/util.hpp"

namespace lpch {

/// Parameters (s, p, r) of a Besov norm B^s_{p,r}. p and r may be kInf.
struct BesovParams {
    double s;
    double p = 2.0;
    double r = kInf;
};

/// Precomputed dyadic multiplier tables on a grid's frequency lattice:
/// table(-1) holds chi(|xi|), table(j) holds psi(2^-j |xi|) for j = 0..j_max,
/// where j_max is minimal with all higher tables identically zero.
class DyadicPartition {
public:
    explicit DyadicPartition(TorusGrid grid, CutoffPair cutoffs = build_cutoffs())
        : grid_(std::move(grid)), cutoffs_(cutoffs) {
        radius_.resize(grid_.points());
        double rho_max = 0;
        for (LatticeIter it(grid_); !it.done(); it.next()) {
            double sq = 0;
            for (int ax = 0; ax < grid_.dim(); ++ax) {
                const double x = grid_.xi(ax, it.axis_index(ax));
                sq += x * x;
            }
            radius_[it.flat()] = std::sqrt(sq);
            rho_max = std::max(rho_max, radius_[it.flat()]);
        }
        jmax_ = 0;
        while (std::ldexp(rho_max, -(jmax_ + 1)) > cutoffs_.ramp_lo) ++jmax_;

        tables_.resize(static_cast<std::size_t>(jmax_) + 2);
        for (int j = -1; j <= jmax_; ++j) {
            auto& t = tables_[static_cast<std::size_t>(j + 1)];
            t.resize(grid_.points());
            const double scale = std::ldexp(1.0, -j);
            for (std::size_t i = 0; i < t.size(); ++i)
                t[i] = j < 0 ? cutoffs_.chi(radius_[i]) : cutoffs_.psi(scale * radius_[i]);
        }
    }

    const TorusGrid& grid() const { return grid_; }
    const CutoffPair& cutoffs() const { return cutoffs_; }
    int j_max() const { return jmax_; }
    const std::vector<double>& table(int j) const {
        if (j < -1 || j > jmax_) throw std::invalid_argument("DyadicPartition: block index out of range");
        return tables_[static_cast<std::size_t>(j + 1)];
    }
    const std::vector<double>& radius() const { return radius_; }

private:
    TorusGrid grid_;
    CutoffPair cutoffs_;
    int jmax_ = 0;
    std::vector<double> radius_;
    std::vector<std::vector<double>> tables_;
};

/// Dyadic block as a Fourier multiplier. Blocks below -1 and above j_max are
/// identically zero.
inline SpectralField dyadic_block(const SpectralField& f, int j, const DyadicPartition& part) {
    if (part.grid() != f.grid)
        throw std::invalid_argument("dyadic_block: partition built on a different grid");
    SpectralField out(f.grid, f.components());
    if (j < -1 || j > part.j_max()) return out;
    const auto& t = part.table(j);
    for (int c = 0; c < f.components(); ++c) {
        const auto& src = f[c];
        auto& dst = out[c];
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = t[i] * src[i];
    }
    return out;
}

/// L^p norm of one dyadic block; p = 2 goes through Parseval so no transform
/// is needed, other p transform the masked field.
inline double block_lp_norm(const SpectralField& f, int j, const DyadicPartition& part, double p) {
    if (part.grid() != f.grid)
        throw std::invalid_argument("block_lp_norm: partition built on a different grid");
    if (j < -1 || j > part.j_max()) return 0.0;
    if (p == 2.0) {
        const auto& t = part.table(j);
        double acc = 0;
        for (const auto& comp : f.comp)
            for (std::size_t i = 0; i < comp.size(); ++i) {
                const double w = t[i];
                if (w != 0.0) acc += w * w * std::norm(comp[i]);
            }
        return std::sqrt(acc * f.grid.volume());
    }
    return lp_norm(dyadic_block(f, j, part), p);
}

/// Besov norm B^s_{p,r}: the l^r norm over j = -1..j_max of
/// a_j = 2^{js} ||Delta_j f||_{L^p}. Truncation at j_max is exact because all
/// higher blocks vanish on the lattice.
inline double besov_norm(const SpectralField& f, const BesovParams& params, const DyadicPartition& part) {
    if (!(params.p >= 1.0) || !(params.r >= 1.0))
        throw std::invalid_argument("besov_norm: exponents must lie in [1, inf]");
    double sup = 0, sum = 0;
    for (int j = -1; j <= part.j_max(); ++j) {
        const double a = std::pow(2.0, j * params.s) * block_lp_norm(f, j, part, params.p);
        if (std::isinf(params.r))
            sup = std::max(sup, a);
        else
            sum += std::pow(a, params.r);
    }
    return std::isinf(params.r) ? sup : std::pow(sum, 1.0 / params.r);
}

enum class SupportRegion { Ball, Annulus };

struct BernsteinReport {
    double base_norm;       // ||f||_{L^p}
    double derivative_norm; // sup_{|alpha|=k} ||d^alpha f||_{L^q}
    double ratio;           // derivative_norm / (lambda^k base_norm)
};

namespace detail {
inline void enumerate_multi_indices(int d, int order, std::vector<std::vector<int>>& out,
                                    std::vector<int>& cur, int axis) {
    if (axis == d) {
        int total = 0;
        for (int v : cur) total += v;
        if (total == order) out.push_back(cur);
        return;
    }
    for (int v = 0; v <= order; ++v) {
        cur[static_cast<std::size_t>(axis)] = v;
        enumerate_multi_indices(d, order, out, cur, axis + 1);
    }
}
} // namespace detail

/// Measures the frequency/derivative equivalence for a field supported in
/// lambda * (ball or annulus). Used by property tests, not by the solver.
inline BernsteinReport bernstein_check(const SpectralField& f, double lambda, int order,
                                       double p, double q, SupportRegion region,
                                       const DyadicPartition& part) {
    if (order < 1 || order > 2) throw std::invalid_argument("bernstein_check: derivative order must be 1 or 2");
    if (!(q >= p)) throw std::invalid_argument("bernstein_check: need q >= p");

    // Support precondition: every non-negligible coefficient inside the region.
    const double floor_mag = 1e-13 * std::max(max_abs(f), 1e-300);
    const auto& rho = part.radius();
    for (const auto& comp : f.comp)
        for (std::size_t i = 0; i < comp.size(); ++i)
            if (std::abs(comp[i]) > floor_mag) {
                const double r = rho[i] / lambda;
                const bool ok = region == SupportRegion::Ball ? r <= 4.0 / 3.0 + 1e-12
                                                              : (r >= 3.0 / 4.0 - 1e-12 && r <= 8.0 / 3.0 + 1e-12);
                if (!ok) throw std::invalid_argument("bernstein_check: field not supported in the stated region");
            }

    std::vector<std::vector<int>> alphas;
    std::vector<int> cur(static_cast<std::size_t>(f.grid.dim()), 0);
    detail::enumerate_multi_indices(f.grid.dim(), order, alphas, cur, 0);

    double dnorm = 0;
    for (const auto& alpha : alphas) {
        SpectralField g = f;
        for (int c = 0; c < g.components(); ++c) {
            auto& comp = g[c];
            for (LatticeIter it(g.grid); !it.done(); it.next()) {
                Complex mult{1.0, 0.0};
                for (int ax = 0; ax < g.grid.dim(); ++ax)
                    for (int rep = 0; rep < alpha[static_cast<std::size_t>(ax)]; ++rep)
                        mult *= Complex{0.0, g.grid.xi(ax, it.axis_index(ax))};
                comp[it.flat()] *= mult;
            }
        }
        dnorm = std::max(dnorm, lp_norm(g, q));
    }
    const double base = lp_norm(f, p);
    const double lam_k = std::pow(lambda, order);
    return BernsteinReport{base, dnorm, base > 0 ? dnorm / (lam_k * base) : 0.0};
}

} // namespace lpch
