#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lpch/grid.hpp"

namespace lpch {

using Complex = std::complex<double>;

/// Real vector field on the torus stored as Fourier coefficients.
/// Coefficients are Fourier-series coefficients: the forward transform
/// carries 1/(M_0*...*M_{d-1}) so multiplier formulas need no extra
/// normalization. Real-valuedness in space corresponds to Hermitian
/// symmetry, coef(-m) = conj(coef(m)).
struct SpectralField {
    TorusGrid grid;
    std::vector<std::vector<Complex>> comp;

    SpectralField(TorusGrid g, int ncomp)
        : grid(std::move(g)),
          comp(static_cast<std::size_t>(ncomp), std::vector<Complex>(grid.points(), Complex{0.0, 0.0})) {
        if (ncomp < 1) throw std::invalid_argument("SpectralField: need at least one component");
    }

    int components() const { return static_cast<int>(comp.size()); }
    std::vector<Complex>& operator[](int c) { return comp[static_cast<std::size_t>(c)]; }
    const std::vector<Complex>& operator[](int c) const { return comp[static_cast<std::size_t>(c)]; }
};

/// Physical-space samples of a real field, one flat array per component.
struct PhysicalField {
    TorusGrid grid;
    std::vector<std::vector<double>> comp;

    PhysicalField(TorusGrid g, int ncomp)
        : grid(std::move(g)),
          comp(static_cast<std::size_t>(ncomp), std::vector<double>(grid.points(), 0.0)) {}

    int components() const { return static_cast<int>(comp.size()); }
    std::vector<double>& operator[](int c) { return comp[static_cast<std::size_t>(c)]; }
    const std::vector<double>& operator[](int c) const { return comp[static_cast<std::size_t>(c)]; }
};

inline SpectralField zero_field(const TorusGrid& grid, int ncomp) { return SpectralField(grid, ncomp); }

inline void require_same_shape(const SpectralField& a, const SpectralField& b, const char* what) {
    if (a.grid != b.grid || a.components() != b.components())
        throw std::invalid_argument(std::string(what) + ": grid or component mismatch");
}

// In-place linear algebra used by the integrator hot path.
inline void scale(SpectralField& f, double c) {
    for (auto& comp : f.comp)
        for (auto& v : comp) v *= c;
}

inline void axpy(SpectralField& y, double a, const SpectralField& x) {
    require_same_shape(y, x, "axpy");
    for (int c = 0; c < y.components(); ++c) {
        auto& yc = y[c];
        const auto& xc = x[c];
        for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += a * xc[i];
    }
}

inline SpectralField linear_combination(double a, const SpectralField& x, double b, const SpectralField& y) {
    require_same_shape(x, y, "linear_combination");
    SpectralField out = x;
    scale(out, a);
    axpy(out, b, y);
    return out;
}

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    return linear_combination(1.0, a, 1.0, b);
}
inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    return linear_combination(1.0, a, -1.0, b);
}
inline SpectralField operator*(double c, const SpectralField& f) {
    SpectralField out = f;
    scale(out, c);
    return out;
}

/// Mirror storage index of -m (Nyquist maps to itself).
inline std::size_t conjugate_partner(const TorusGrid& grid, const std::vector<int>& idx) {
    std::size_t flat = 0;
    for (int ax = 0; ax < grid.dim(); ++ax) {
        const int m = grid.extent(ax);
        const int a = idx[static_cast<std::size_t>(ax)];
        const int mirrored = a == 0 ? 0 : m - a;
        flat += static_cast<std::size_t>(mirrored) * grid.stride(ax);
    }
    return flat;
}

inline double max_abs(const SpectralField& f) {
    double m = 0;
    for (const auto& comp : f.comp)
        for (const auto& v : comp) m = std::max(m, std::abs(v));
    return m;
}

/// Largest Hermitian-symmetry defect |coef(m) - conj(coef(-m))|.
inline double symmetry_defect(const SpectralField& f) {
    double worst = 0;
    for (const auto& comp : f.comp) {
        for (LatticeIter it(f.grid); !it.done(); it.next()) {
            const std::size_t partner = conjugate_partner(f.grid, it.indices());
            worst = std::max(worst, std::abs(comp[it.flat()] - std::conj(comp[partner])));
        }
    }
    return worst;
}

/// Project onto the Hermitian-symmetric (real-valued in space) subspace.
inline void symmetrize(SpectralField& f) {
    for (auto& comp : f.comp) {
        for (LatticeIter it(f.grid); !it.done(); it.next()) {
            const std::size_t partner = conjugate_partner(f.grid, it.indices());
            if (partner < it.flat()) continue;
            const Complex avg = 0.5 * (comp[it.flat()] + std::conj(comp[partner]));
            comp[it.flat()] = avg;
            comp[partner] = std::conj(avg);
        }
    }
}

/// Zero every coefficient with |m_axis| > keep[axis] on some axis, plus the
/// unpaired Nyquist plane m = -M/2.
inline void apply_band_limit(SpectralField& f, const std::vector<int>& keep) {
    const TorusGrid& g = f.grid;
    if (static_cast<int>(keep.size()) != g.dim())
        throw std::invalid_argument("apply_band_limit: keep list must have one entry per axis");
    std::vector<std::vector<bool>> kill(static_cast<std::size_t>(g.dim()));
    for (int ax = 0; ax < g.dim(); ++ax) {
        auto& k = kill[static_cast<std::size_t>(ax)];
        k.assign(static_cast<std::size_t>(g.extent(ax)), false);
        for (int a = 0; a < g.extent(ax); ++a) {
            const int m = g.freq_index(ax, a);
            k[static_cast<std::size_t>(a)] =
                std::abs(m) > keep[static_cast<std::size_t>(ax)] || m == -g.extent(ax) / 2;
        }
    }
    for (auto& comp : f.comp) {
        for (LatticeIter it(g); !it.done(); it.next()) {
            for (int ax = 0; ax < g.dim(); ++ax) {
                if (kill[static_cast<std::size_t>(ax)][static_cast<std::size_t>(it.axis_index(ax))]) {
                    comp[it.flat()] = Complex{0.0, 0.0};
                    break;
                }
            }
        }
    }
}

inline void zero_nyquist(SpectralField& f) {
    std::vector<int> keep(static_cast<std::size_t>(f.grid.dim()));
    for (int ax = 0; ax < f.grid.dim(); ++ax)
        keep[static_cast<std::size_t>(ax)] = f.grid.extent(ax) / 2 - 1;
    apply_band_limit(f, keep);
}

inline void dealias(SpectralField& f, double fraction = kDealiasFraction) {
    std::vector<int> keep(static_cast<std::size_t>(f.grid.dim()));
    for (int ax = 0; ax < f.grid.dim(); ++ax)
        keep[static_cast<std::size_t>(ax)] = f.grid.dealias_keep(ax, fraction);
    apply_band_limit(f, keep);
}

/// Copies coefficients into a finer grid by frequency index; the same torus
/// function at higher resolution.
inline SpectralField embed_field(const SpectralField& src, const TorusGrid& fine) {
    if (fine.dim() != src.grid.dim() || fine.period() != src.grid.period())
        throw std::invalid_argument("embed_field: dimension or period mismatch");
    for (int ax = 0; ax < fine.dim(); ++ax)
        if (fine.extent(ax) < src.grid.extent(ax))
            throw std::invalid_argument("embed_field: target grid must be at least as fine");
    SpectralField out(fine, src.components());
    for (int c = 0; c < src.components(); ++c) {
        const auto& s = src[c];
        auto& d = out[c];
        for (LatticeIter it(src.grid); !it.done(); it.next()) {
            bool nyquist = false;
            std::size_t flat = 0;
            for (int ax = 0; ax < fine.dim(); ++ax) {
                const int m = src.grid.freq_index(ax, it.axis_index(ax));
                if (m == -src.grid.extent(ax) / 2) { nyquist = true; break; }
                flat += static_cast<std::size_t>(fine.storage_index(ax, m)) * fine.stride(ax);
            }
            if (!nyquist) d[flat] = s[it.flat()];
        }
    }
    return out;
}

inline bool all_finite(const SpectralField& f) {
    for (const auto& comp : f.comp)
        for (const auto& v : comp)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

} // namespace lpch
