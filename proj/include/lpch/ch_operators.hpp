#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpch/fft.hpp"
#include "lpch/field.hpp"
#include "lpch/grid.hpp"

namespace lpch {

// Jacobian convention used throughout: (grad u)_{ij} = d_j u_i, so
// (u . grad u)_i = sum_j u_j d_j u_i and (grad u^T m)_i = sum_j m_j d_i u_j.
// The divergence of a matrix field is taken row-wise, (div M)_i = sum_j d_j M_ij,
// and |grad u|^2 is the Frobenius norm squared. This is the unique combination
// under which the velocity-form right-hand side matches the momentum-form one
// through (1 - Laplacian); the cross-formulation test enforces it.

inline SpectralField apply_isotropic_symbol(const SpectralField& f, double (*symbol)(double xi_sq)) {
    SpectralField out(f.grid, f.components());
    const TorusGrid& g = f.grid;
    std::vector<double> xi_sq(g.points());
    for (LatticeIter it(g); !it.done(); it.next()) {
        double acc = 0;
        for (int ax = 0; ax < g.dim(); ++ax) {
            const double x = g.xi(ax, it.axis_index(ax));
            acc += x * x;
        }
        xi_sq[it.flat()] = acc;
    }
    for (int c = 0; c < f.components(); ++c) {
        const auto& src = f[c];
        auto& dst = out[c];
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = symbol(xi_sq[i]) * src[i];
    }
    return out;
}

/// (1 - Laplacian): multiply by 1 + |xi|^2.
inline SpectralField helmholtz(const SpectralField& f) {
    return apply_isotropic_symbol(f, [](double s) { return 1.0 + s; });
}

/// (1 - Laplacian)^{-1}: the symbol never vanishes.
inline SpectralField helmholtz_inverse(const SpectralField& f) {
    return apply_isotropic_symbol(f, [](double s) { return 1.0 / (1.0 + s); });
}

/// Partial derivative along one axis as the Fourier multiplier i xi_axis.
inline SpectralField derivative(const SpectralField& f, int axis) {
    if (axis < 0 || axis >= f.grid.dim()) throw std::invalid_argument("derivative: axis out of range");
    SpectralField out(f.grid, f.components());
    const TorusGrid& g = f.grid;
    for (int c = 0; c < f.components(); ++c) {
        const auto& src = f[c];
        auto& dst = out[c];
        for (LatticeIter it(g); !it.done(); it.next()) {
            const double xi = g.xi(axis, it.axis_index(axis));
            dst[it.flat()] = Complex{0.0, xi} * src[it.flat()];
        }
    }
    return out;
}

namespace detail {

/// Physical-space samples of u and of its full Jacobian, shared by all the
/// quadratic forms so each right-hand side costs one set of transforms.
struct VelocityParts {
    TorusGrid grid;
    int d;
    std::vector<std::vector<double>> u;     // u[i]
    std::vector<std::vector<double>> grad;  // grad[i*d + j] = d_j u_i

    explicit VelocityParts(const SpectralField& field)
        : grid(field.grid), d(field.components()) {
        if (d != grid.dim())
            throw std::invalid_argument("VelocityParts: need one component per spatial axis");
        u.resize(static_cast<std::size_t>(d));
        grad.resize(static_cast<std::size_t>(d) * d);
        std::vector<Complex> work(grid.points()), spec(grid.points());
        FftEngine& engine = FftEngine::instance();
        for (int i = 0; i < d; ++i) {
            engine.backward(grid, field[i], work);
            u[static_cast<std::size_t>(i)] = real_part(work);
            for (int j = 0; j < d; ++j) {
                for (LatticeIter it(grid); !it.done(); it.next()) {
                    const double xi = grid.xi(j, it.axis_index(j));
                    spec[it.flat()] = Complex{0.0, xi} * field[i][it.flat()];
                }
                engine.backward(grid, spec, work);
                grad[static_cast<std::size_t>(i * d + j)] = real_part(work);
            }
        }
    }

    const std::vector<double>& du(int i, int j) const { return grad[static_cast<std::size_t>(i * d + j)]; }

private:
    static std::vector<double> real_part(const std::vector<Complex>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
        return out;
    }
};

inline void forward_into(const TorusGrid& grid, const std::vector<double>& phys,
                         std::vector<Complex>& work, std::vector<Complex>& out) {
    work.resize(grid.points());
    for (std::size_t i = 0; i < phys.size(); ++i) work[i] = Complex{phys[i], 0.0};
    FftEngine::instance().forward(grid, work, out);
}

inline std::vector<int> dealias_keeps(const TorusGrid& grid, double fraction) {
    std::vector<int> keep(static_cast<std::size_t>(grid.dim()));
    for (int ax = 0; ax < grid.dim(); ++ax) keep[static_cast<std::size_t>(ax)] = grid.dealias_keep(ax, fraction);
    return keep;
}

inline SpectralField advection_from_parts(const VelocityParts& parts, double dealias_fraction) {
    const int d = parts.d;
    SpectralField out(parts.grid, d);
    std::vector<double> acc(parts.grid.points());
    std::vector<Complex> work;
    for (int i = 0; i < d; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int j = 0; j < d; ++j) {
            const auto& uj = parts.u[static_cast<std::size_t>(j)];
            const auto& dji = parts.du(i, j);
            for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += uj[x] * dji[x];
        }
        forward_into(parts.grid, acc, work, out[i]);
    }
    apply_band_limit(out, dealias_keeps(parts.grid, dealias_fraction));
    return out;
}

inline SpectralField q_from_parts(const VelocityParts& parts, double dealias_fraction) {
    const int d = parts.d;
    const TorusGrid& grid = parts.grid;
    const std::size_t n = grid.points();

    std::vector<double> divu(n, 0.0), frob(n, 0.0);
    for (int i = 0; i < d; ++i) {
        const auto& dii = parts.du(i, i);
        for (std::size_t x = 0; x < n; ++x) divu[x] += dii[x];
        for (int j = 0; j < d; ++j) {
            const auto& dij = parts.du(i, j);
            for (std::size_t x = 0; x < n; ++x) frob[x] += dij[x] * dij[x];
        }
    }

    // Matrix rows transformed one entry at a time; divergence and the inverse
    // Helmholtz symbol are applied in frequency space.
    SpectralField out(grid, d);
    std::vector<double> entry(n);
    std::vector<Complex> work, entry_hat(n);
    for (int i = 0; i < d; ++i) {
        auto& dst = out[i];
        std::fill(dst.begin(), dst.end(), Complex{0.0, 0.0});
        for (int j = 0; j < d; ++j) {
            for (std::size_t x = 0; x < n; ++x) {
                double v = 0;
                for (int kk = 0; kk < d; ++kk) {
                    v += parts.du(i, kk)[x] * parts.du(kk, j)[x];  // grad u grad u
                    v += parts.du(i, kk)[x] * parts.du(j, kk)[x];  // grad u grad u^T
                    v -= parts.du(kk, i)[x] * parts.du(kk, j)[x];  // - grad u^T grad u
                }
                v -= parts.du(i, j)[x] * divu[x];                  // - grad u (div u)
                if (i == j) v += 0.5 * frob[x];                    // + I |grad u|^2 / 2
                entry[x] = v;
            }
            forward_into(grid, entry, work, entry_hat);
            for (LatticeIter it(grid); !it.done(); it.next()) {
                const double xi = grid.xi(j, it.axis_index(j));
                dst[it.flat()] += Complex{0.0, xi} * entry_hat[it.flat()];
            }
        }
    }
    for (int i = 0; i < d; ++i) {
        auto& dst = out[i];
        for (LatticeIter it(grid); !it.done(); it.next()) {
            double xi_sq = 0;
            for (int ax = 0; ax < d; ++ax) {
                const double x = grid.xi(ax, it.axis_index(ax));
                xi_sq += x * x;
            }
            dst[it.flat()] *= -1.0 / (1.0 + xi_sq);
        }
    }
    apply_band_limit(out, dealias_keeps(grid, dealias_fraction));
    return out;
}

inline SpectralField r_from_parts(const VelocityParts& parts, double dealias_fraction) {
    const int d = parts.d;
    const TorusGrid& grid = parts.grid;
    const std::size_t n = grid.points();

    std::vector<double> divu(n, 0.0), half_usq(n, 0.0);
    for (int i = 0; i < d; ++i) {
        const auto& dii = parts.du(i, i);
        const auto& ui = parts.u[static_cast<std::size_t>(i)];
        for (std::size_t x = 0; x < n; ++x) {
            divu[x] += dii[x];
            half_usq[x] += 0.5 * ui[x] * ui[x];
        }
    }

    SpectralField out(grid, d);
    std::vector<double> entry(n);
    std::vector<Complex> work, usq_hat(n);
    forward_into(grid, half_usq, work, usq_hat);
    for (int i = 0; i < d; ++i) {
        const auto& ui = parts.u[static_cast<std::size_t>(i)];
        for (std::size_t x = 0; x < n; ++x) entry[x] = ui[x] * divu[x];
        forward_into(grid, entry, work, out[i]);
        // u . (grad u)^T = grad(|u|^2)/2, applied spectrally.
        auto& dst = out[i];
        for (LatticeIter it(grid); !it.done(); it.next()) {
            const double xi = grid.xi(i, it.axis_index(i));
            dst[it.flat()] += Complex{0.0, xi} * usq_hat[it.flat()];
        }
        for (LatticeIter it(grid); !it.done(); it.next()) {
            double xi_sq = 0;
            for (int ax = 0; ax < d; ++ax) {
                const double x = grid.xi(ax, it.axis_index(ax));
                xi_sq += x * x;
            }
            dst[it.flat()] *= -1.0 / (1.0 + xi_sq);
        }
    }
    apply_band_limit(out, dealias_keeps(grid, dealias_fraction));
    return out;
}

} // namespace detail

/// u . grad u via the pseudo-spectral product, band-limited afterwards.
inline SpectralField advection(const SpectralField& u, double dealias_fraction = kDealiasFraction) {
    return detail::advection_from_parts(detail::VelocityParts(u), dealias_fraction);
}

/// Q(u,u) = -(1-Lap)^{-1} div( grad u grad u + grad u grad u^T - grad u^T grad u
///                             - grad u (div u) + I |grad u|^2 / 2 ).
inline SpectralField q_form(const SpectralField& u, double dealias_fraction = kDealiasFraction) {
    return detail::q_from_parts(detail::VelocityParts(u), dealias_fraction);
}

/// R(u,u) = -(1-Lap)^{-1}( u (div u) + u . (grad u)^T ).
inline SpectralField r_form(const SpectralField& u, double dealias_fraction = kDealiasFraction) {
    return detail::r_from_parts(detail::VelocityParts(u), dealias_fraction);
}

/// Velocity-form right-hand side: du/dt = -u.grad u + Q(u,u) + R(u,u).
/// Evaluated at the lacunary datum this is the first-order coefficient v0.
inline SpectralField rhs(const SpectralField& u, double dealias_fraction = kDealiasFraction) {
    const detail::VelocityParts parts(u);
    SpectralField out = detail::q_from_parts(parts, dealias_fraction);
    axpy(out, 1.0, detail::r_from_parts(parts, dealias_fraction));
    axpy(out, -1.0, detail::advection_from_parts(parts, dealias_fraction));
    return out;
}

/// Momentum-form right-hand side: dm/dt = -(u.grad m + grad u^T m + (div u) m).
inline SpectralField m_form_rhs(const SpectralField& m, const SpectralField& u,
                                double dealias_fraction = kDealiasFraction) {
    require_same_shape(m, u, "m_form_rhs");
    const detail::VelocityParts up(u);
    const detail::VelocityParts mp(m);
    const int d = up.d;
    const TorusGrid& grid = up.grid;
    const std::size_t n = grid.points();

    std::vector<double> divu(n, 0.0);
    for (int i = 0; i < d; ++i) {
        const auto& dii = up.du(i, i);
        for (std::size_t x = 0; x < n; ++x) divu[x] += dii[x];
    }

    SpectralField out(grid, d);
    std::vector<double> entry(n);
    std::vector<Complex> work;
    for (int i = 0; i < d; ++i) {
        const auto& mi = mp.u[static_cast<std::size_t>(i)];
        for (std::size_t x = 0; x < n; ++x) {
            double v = divu[x] * mi[x];
            for (int j = 0; j < d; ++j) {
                v += up.u[static_cast<std::size_t>(j)][x] * mp.du(i, j)[x];  // u . grad m
                v += mp.u[static_cast<std::size_t>(j)][x] * up.du(j, i)[x];  // grad u^T m
            }
            entry[x] = -v;
        }
        detail::forward_into(grid, entry, work, out[i]);
    }
    apply_band_limit(out, detail::dealias_keeps(grid, dealias_fraction));
    return out;
}

} // namespace lpch
