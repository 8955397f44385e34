#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lpch/ch_operators.hpp"
#include "lpch/experiment.hpp"
#include "lpch/initial_data.hpp"
#include "lpch/random_fields.hpp"
#include "lpch/solver.hpp"
#include "lpch/util.hpp"

namespace lpch {

struct CheckResult {
    std::string name;
    double measured = 0;
    std::string criterion;
    bool pass = false;
    std::string note;
};

enum class NegativeControl { None, ShiftedCutoff, InadmissibleGrid };

inline bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.pass; });
}

inline void print_report(const std::vector<CheckResult>& results, std::ostream& out) {
    for (const auto& c : results) {
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  measured=" << format_full(c.measured)
            << "  criterion: " << c.criterion;
        if (!c.note.empty()) out << "  (" << c.note << ")";
        out << "\n";
    }
}

namespace checks {

inline CheckResult le(const std::string& name, double measured, double threshold, std::string note = "") {
    return CheckResult{name, measured, "<= " + format_full(threshold), measured <= threshold, std::move(note)};
}
inline CheckResult ge(const std::string& name, double measured, double threshold, std::string note = "") {
    return CheckResult{name, measured, ">= " + format_full(threshold), measured >= threshold, std::move(note)};
}
inline CheckResult within(const std::string& name, double measured, double lo, double hi, std::string note = "") {
    return CheckResult{name, measured, "in [" + format_full(lo) + ", " + format_full(hi) + "]",
                       measured >= lo && measured <= hi, std::move(note)};
}
inline CheckResult recorded(const std::string& name, double measured, std::string note = "") {
    return CheckResult{name, measured, "recorded (finite, positive)",
                       std::isfinite(measured) && measured > 0, std::move(note)};
}

/// Sample radii covering the partition identities: the fixed probes plus a
/// dense linear/log mix out past the largest lattice radius in use.
inline std::vector<double> partition_radii(std::size_t count = 10000) {
    std::vector<double> rho{0.1, 1.0, 7.3, 1000.0, 17.0 / 12.0, 0.75, 4.0 / 3.0, 1.5};
    for (std::size_t i = 0; i < count; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(count - 1);
        rho.push_back(3000.0 * x * x);      // quadratic ramp: dense near 0
        rho.push_back(0.5 + 2.5 * x);       // dense across the transition region
    }
    return rho;
}

template <typename Chi, typename Psi>
inline CheckResult partition_identity(Chi chi, Psi psi, const std::string& name = "cutoff_partition_identity") {
    double worst = 0;
    for (double rho : partition_radii()) {
        double sum = chi(rho);
        for (int j = 0; j <= 48; ++j) sum += psi(std::ldexp(rho, -j));
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return le(name, worst, 1e-12);
}

template <typename Chi, typename Psi>
inline CheckResult partition_square_bound(Chi chi, Psi psi) {
    double lo = 2.0, hi = 0.0;
    for (double rho : partition_radii()) {
        double sum = chi(rho) * chi(rho);
        for (int j = 0; j <= 48; ++j) {
            const double v = psi(std::ldexp(rho, -j));
            sum += v * v;
        }
        lo = std::min(lo, sum);
        hi = std::max(hi, sum);
    }
    CheckResult c = within("cutoff_square_bound", lo, 0.5 - 1e-12, 1.0 + 1e-12,
                           "max=" + format_full(hi));
    c.pass = c.pass && hi <= 1.0 + 1e-12;
    return c;
}

inline CheckResult cutoff_plateau(const CutoffPair& cut) {
    double worst = std::abs(cut.chi(0.0) - 1.0);
    worst = std::max(worst, std::abs(cut.chi(2.0)));
    worst = std::max(worst, std::abs(cut.psi(17.0 / 12.0) - 1.0));
    for (int i = 0; i <= 200; ++i) {
        const double rho = 4.0 / 3.0 + (1.5 - 4.0 / 3.0) * i / 200.0;
        worst = std::max(worst, std::abs(cut.psi(rho) - 1.0));
        worst = std::max(worst, std::abs(cut.chi(4.0 / 3.0 + i * 0.05)));
        worst = std::max(worst, std::abs(cut.psi(0.75 * i / 200.0)));
        worst = std::max(worst, std::abs(cut.psi(8.0 / 3.0 + i * 0.05)));
    }
    return le("cutoff_plateau_and_support", worst, 1e-12,
              "chi(0)=1, chi=0 beyond 4/3, psi=1 on [4/3,3/2], supp psi in [3/4,8/3]");
}

inline CheckResult lattice_partition_unity(const DyadicPartition& part) {
    double worst = 0;
    const std::size_t n = part.grid().points();
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0;
        for (int j = -1; j <= part.j_max(); ++j) sum += part.table(j)[i];
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return le("lattice_partition_unity", worst, 1e-12);
}

inline CheckResult block_completeness(const DyadicPartition& part, std::uint64_t seed) {
    const TorusGrid& grid = part.grid();
    std::vector<int> band(static_cast<std::size_t>(grid.dim()));
    for (int ax = 0; ax < grid.dim(); ++ax) band[static_cast<std::size_t>(ax)] = grid.extent(ax) / 2 - 1;
    const SpectralField f = random_band_limited_field(grid, band, seed, grid.dim());
    SpectralField sum(grid, grid.dim());
    for (int j = -1; j <= part.j_max(); ++j) axpy(sum, 1.0, dyadic_block(f, j, part));
    axpy(sum, -1.0, f);
    return le("block_completeness", max_abs(sum) / std::max(max_abs(f), 1e-300), 1e-12);
}

inline CheckResult almost_orthogonality(const DyadicPartition& part) {
    double worst = 0;
    for (int j = -1; j <= part.j_max(); ++j)
        for (int jp = j + 2; jp <= part.j_max(); ++jp) {
            const auto& a = part.table(j);
            const auto& b = part.table(jp);
            for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] * b[i]));
        }
    return le("almost_orthogonality", worst, 0.0, "multiplier supports are lattice-disjoint for |j-j'|>=2");
}

inline CheckResult bernstein_block_ratio(const DyadicPartition& part, std::uint64_t seed) {
    const int j = 3;
    const SpectralField f = random_block_field(j, seed, part.grid().dim(), part);
    const BernsteinReport rep = bernstein_check(f, std::ldexp(1.0, j), 1, 2.0, 2.0, SupportRegion::Annulus, part);
    return within("bernstein_annulus_ratio", rep.ratio, 0.75 * 0.9, (8.0 / 3.0) * 1.1);
}

inline CheckResult besov_embedding(const DyadicPartition& part, std::uint64_t seed) {
    const TorusGrid& grid = part.grid();
    std::vector<int> band(static_cast<std::size_t>(grid.dim()));
    for (int ax = 0; ax < grid.dim(); ++ax) band[static_cast<std::size_t>(ax)] = grid.extent(ax) / 2 - 1;
    const SpectralField f = random_band_limited_field(grid, band, seed, 1);
    const double s1 = 2.5, s2 = 1.5;
    const double lhs = besov_norm(f, BesovParams{s2, 2.0, kInf}, part);
    const double rhs_full = std::pow(2.0, s1 - s2) * besov_norm(f, BesovParams{s1, 2.0, kInf}, part);
    // High-pass part obeys plain monotonicity (no 2^{-s} weight from block -1).
    SpectralField high = f;
    axpy(high, -1.0, dyadic_block(f, -1, part));
    const double mono = besov_norm(high, BesovParams{s2, 2.0, kInf}, part) /
                        std::max(besov_norm(high, BesovParams{s1, 2.0, kInf}, part), 1e-300);
    CheckResult c = le("besov_embedding", lhs / std::max(rhs_full, 1e-300), 1.0 + 1e-12,
                       "high-pass monotonicity ratio = " + format_full(mono));
    c.pass = c.pass && mono <= 1.0 + 1e-12;
    return c;
}

inline SpectralField pointwise_product(const SpectralField& a, const SpectralField& b, double frac) {
    const PhysicalField pa = to_physical(a), pb = to_physical(b);
    PhysicalField prod(a.grid, 1);
    for (std::size_t i = 0; i < prod[0].size(); ++i) prod[0][i] = pa[0][i] * pb[0][i];
    SpectralField out = to_spectral(prod);
    dealias(out, frac);
    return out;
}

inline CheckResult product_law_constant(const DyadicPartition& part, std::uint64_t seed) {
    const double s = 2.5;
    double worst = 0;
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<int> band(static_cast<std::size_t>(part.grid().dim()), 8);
        const SpectralField u = random_band_limited_field(part.grid(), band, seed + 2 * trial, 1);
        const SpectralField v = random_band_limited_field(part.grid(), band, seed + 2 * trial + 1, 1);
        const SpectralField uv = pointwise_product(u, v, kDealiasFraction);
        const double num = besov_norm(uv, BesovParams{s - 2.0, 2.0, kInf}, part);
        const double den = besov_norm(u, BesovParams{s - 2.0, 2.0, kInf}, part) *
                           besov_norm(v, BesovParams{s - 1.0, 2.0, kInf}, part);
        worst = std::max(worst, num / std::max(den, 1e-300));
    }
    return recorded("product_law_constant", worst, "||uv||_{s-2} / (||u||_{s-2} ||v||_{s-1}), s=2.5");
}

inline CheckResult algebra_law_constant(const DyadicPartition& part, std::uint64_t seed) {
    const double s = 2.5;
    double worst = 0;
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<int> band(static_cast<std::size_t>(part.grid().dim()), 8);
        const SpectralField u = random_band_limited_field(part.grid(), band, seed + 100 + 2 * trial, 1);
        const SpectralField v = random_band_limited_field(part.grid(), band, seed + 101 + 2 * trial, 1);
        const SpectralField uv = pointwise_product(u, v, kDealiasFraction);
        const double num = besov_norm(uv, BesovParams{s, 2.0, kInf}, part);
        const double den = besov_norm(u, BesovParams{s, 2.0, kInf}, part) * lp_norm(v, kInf) +
                           besov_norm(v, BesovParams{s, 2.0, kInf}, part) * lp_norm(u, kInf);
        worst = std::max(worst, num / std::max(den, 1e-300));
    }
    return recorded("algebra_law_constant", worst, "||uv||_s / (||u||_s ||v||_inf + ||v||_s ||u||_inf), s=2.5");
}

/// Relative deviation of Delta_j f from (f if j == j_star else 0), maximized
/// over all blocks.
inline double localization_defect(const SpectralField& f, int j_star, const DyadicPartition& part) {
    const double base = l2_norm_parseval(f);
    double worst = 0;
    for (int j = -1; j <= part.j_max(); ++j) {
        SpectralField blk = dyadic_block(f, j, part);
        if (j == j_star) axpy(blk, -1.0, f);
        worst = std::max(worst, l2_norm_parseval(blk) / std::max(base, 1e-300));
    }
    return worst;
}

inline CheckResult f_localization(const InitialDataSpec& spec, const DyadicPartition& part) {
    double worst = 0;
    for (int n = 0; n <= spec.n_max; ++n)
        worst = std::max(worst, localization_defect(f_profile(spec.k, n, part.grid()), spec.k * n, part));
    return le("f_profile_localization", worst, 1e-10, "n = 0.." + std::to_string(spec.n_max));
}

inline CheckResult g_localization(const InitialDataSpec& spec, const DyadicPartition& part) {
    double worst = 0;
    for (int n = 1; n <= spec.n_max; ++n)
        for (int m = 0; m < n; ++m)
            for (int sign : {+1, -1})
                worst = std::max(worst,
                                 localization_defect(g_profile(spec.k, m, n, sign, part.grid()), spec.k * n, part));
    return le("g_profile_localization", worst, 1e-10, "both signs, 0 <= m < n <= N");
}

inline CheckResult u0_block_uniformity(const SpectralField& u0, const InitialDataSpec& spec,
                                       const DyadicPartition& part) {
    double lo = kInf, hi = 0;
    for (int n = 0; n <= spec.n_max; ++n) {
        const double a = std::pow(2.0, spec.k * n * spec.sigma) *
                         block_lp_norm(u0, spec.k * n, part, spec.p);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    return le("u0_block_uniformity", hi / lo, 1.1, "normalized block norms across n = 0..N");
}

inline CheckResult u0_offblock_vanishing(const SpectralField& u0, const InitialDataSpec& spec,
                                         const DyadicPartition& part) {
    const double base = l2_norm_parseval(u0);
    double worst = 0;
    for (int j = -1; j <= part.j_max(); ++j) {
        if (j >= 0 && j % spec.k == 0 && j <= spec.k * spec.n_max) continue;
        worst = std::max(worst, block_lp_norm(u0, j, part, 2.0) / base);
    }
    return le("u0_offblock_vanishing", worst, 1e-10);
}

inline CheckResult u0_single_component(const SpectralField& u0) {
    double worst = 0;
    for (int c = 1; c < u0.components(); ++c)
        for (const auto& v : u0[c]) worst = std::max(worst, std::abs(v));
    return le("u0_single_component", worst, 0.0, "|u0|^2 = (u0_1)^2 because the other components vanish");
}

inline CheckResult u0_advection_identity(const SpectralField& u0, double frac) {
    const SpectralField adv = advection(u0, frac);
    SpectralField expected = derivative(square_pseudo_spectral(u0, frac), 0);
    scale(expected, 0.5);
    double worst = 0;
    const double base = l2_norm_parseval(adv);
    for (LatticeIter it(u0.grid); !it.done(); it.next()) {
        worst = std::max(worst, std::abs(adv[0][it.flat()] - expected[0][it.flat()]));
        for (int c = 1; c < u0.components(); ++c)
            worst = std::max(worst, std::abs(adv[c][it.flat()]));
    }
    return le("u0_advection_identity", worst * u0.grid.volume() / std::max(base, 1e-300), 1e-8,
              "u0.grad u0 = (d_1 |u0|^2 / 2, 0, ...)");
}

inline std::vector<CheckResult> block_lower_bound_checks(const SpectralField& u0, const InitialDataSpec& spec,
                                                         const DyadicPartition& part) {
    const auto rows = block_lower_bound_report(u0, spec, part);
    double lo = kInf, hi = 0, worst_ratio = 0;
    for (const auto& r : rows) {
        lo = std::min(lo, r.block_norm);
        hi = std::max(hi, r.block_norm);
        if (r.n >= 2) worst_ratio = std::max(worst_ratio, r.i2_norm / std::max(r.i1_norm, 1e-300));
    }
    std::vector<CheckResult> out;
    out.push_back(ge("block_lower_bound_positive", lo, 1e-12, "2^{kn sigma}||Delta_kn |u0|^2||, n=1..N"));
    out.push_back(le("block_lower_bound_uniform", hi / lo, 2.0));
    out.push_back(le("block_square_i2_over_i1", worst_ratio,
                     std::pow(2.0, -spec.k * spec.sigma + 1.0)));
    return out;
}

inline CheckResult square_group_reconstruction(const SpectralField& u0, const InitialDataSpec& spec,
                                               const DyadicPartition& part, double frac) {
    const SpectralField usq = square_pseudo_spectral(u0, frac);
    SquareGroups groups = square_group_decomposition(spec, part.grid());
    SpectralField sum = groups.low;
    axpy(sum, 1.0, groups.doubled);
    axpy(sum, 1.0, groups.cross);
    dealias(sum, frac);
    axpy(sum, -1.0, usq);
    return le("square_group_reconstruction", l2_norm_parseval(sum) / l2_norm_parseval(usq), 1e-10,
              "low + doubled + cross groups rebuild the pseudo-spectral square");
}

inline CheckResult u0_besov_bounded(const SpectralField& u0, const InitialDataSpec& spec,
                                    const DyadicPartition& part) {
    const double norm = besov_norm(u0, BesovParams{spec.sigma, spec.p, kInf}, part);
    double bound = 0;
    for (int n = 0; n <= spec.n_max; ++n)
        bound = std::max(bound, lp_norm(f_profile(spec.k, n, part.grid()), spec.p));
    return le("u0_besov_bounded", norm, bound * (1.0 + 1e-10),
              "||u0||_{B^sigma} <= max_n ||f_n||_{L^p} = " + format_full(bound));
}

inline CheckResult helmholtz_roundtrip(const TorusGrid& grid, std::uint64_t seed) {
    std::vector<int> band(static_cast<std::size_t>(grid.dim()), 8);
    const SpectralField f = random_band_limited_field(grid, band, seed, grid.dim());
    SpectralField back = helmholtz(helmholtz_inverse(f));
    axpy(back, -1.0, f);
    return le("helmholtz_roundtrip", max_abs(back) / std::max(max_abs(f), 1e-300), 1e-12);
}

inline CheckResult formulation_equivalence(const TorusGrid& grid, std::uint64_t seed, double frac,
                                           int trials = 20) {
    double worst = 0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<int> band(static_cast<std::size_t>(grid.dim()), 6 + trial % 3);
        const SpectralField u = random_band_limited_field(grid, band, seed + 7 * trial, grid.dim(), 0.1);
        const SpectralField lhs = helmholtz_inverse(m_form_rhs(helmholtz(u), u, frac));
        SpectralField diff = rhs(u, frac);
        const double base = l2_norm_parseval(diff);
        axpy(diff, -1.0, lhs);
        worst = std::max(worst, l2_norm_parseval(diff) / std::max(base, 1e-300));
    }
    return le("formulation_equivalence", worst, 1e-8,
              std::to_string(trials) + " random band-limited fields");
}

inline CheckResult quadratic_polarization(const TorusGrid& grid, std::uint64_t seed, double frac) {
    std::vector<int> band(static_cast<std::size_t>(grid.dim()), 6);
    const SpectralField u1 = random_band_limited_field(grid, band, seed + 1, grid.dim(), 0.2);
    const SpectralField u2 = random_band_limited_field(grid, band, seed + 2, grid.dim(), 0.2);
    const SpectralField v = random_band_limited_field(grid, band, seed + 3, grid.dim(), 0.2);
    auto bilin = [&](const SpectralField& a, const SpectralField& b) {
        SpectralField out = rhs(a + b, frac);
        axpy(out, -1.0, rhs(a, frac));
        axpy(out, -1.0, rhs(b, frac));
        return out;
    };
    SpectralField resid = bilin(u1 + u2, v);
    axpy(resid, -1.0, bilin(u1, v));
    axpy(resid, -1.0, bilin(u2, v));
    const double scale_ref = l2_norm_parseval(rhs(u1, frac));
    return le("quadratic_polarization", l2_norm_parseval(resid) / std::max(scale_ref, 1e-300), 1e-10,
              "F(u+v) - F(u) - F(v) is bilinear for the full right-hand side");
}

inline CheckResult helmholtz_smoothing_gain(const DyadicPartition& part, std::uint64_t seed) {
    const TorusGrid& grid = part.grid();
    std::vector<int> band(static_cast<std::size_t>(grid.dim()));
    for (int ax = 0; ax < grid.dim(); ++ax) band[static_cast<std::size_t>(ax)] = grid.extent(ax) / 2 - 1;
    const SpectralField f = random_band_limited_field(grid, band, seed, 1);
    const SpectralField g = helmholtz_inverse(f);
    double lo = kInf, hi = 0;
    for (int j = 2; j <= std::min(part.j_max(), 5); ++j) {
        const double a = block_lp_norm(f, j, part, 2.0);
        const double b = block_lp_norm(g, j, part, 2.0);
        if (a <= 0) continue;
        const double gain = std::ldexp(b / a, 2 * j); // 2^{2j} * damping on block j
        lo = std::min(lo, gain);
        hi = std::max(hi, gain);
    }
    CheckResult c = within("helmholtz_smoothing_gain", lo, 1.0 / 8.0, 8.0, "max=" + format_full(hi));
    c.pass = c.pass && hi <= 8.0;
    return c;
}

inline SpectralField single_harmonic(const TorusGrid& grid, const std::vector<int>& m, double amplitude) {
    SpectralField f(grid, grid.dim());
    std::size_t flat = 0, mirror = 0;
    for (int ax = 0; ax < grid.dim(); ++ax) {
        flat += static_cast<std::size_t>(grid.storage_index(ax, m[static_cast<std::size_t>(ax)])) * grid.stride(ax);
        mirror += static_cast<std::size_t>(grid.storage_index(ax, -m[static_cast<std::size_t>(ax)])) * grid.stride(ax);
    }
    f[0][flat] = Complex{0.5 * amplitude, 0.0};
    f[0][mirror] += Complex{0.5 * amplitude, 0.0};
    return f;
}

inline CheckResult rk4_self_convergence(const TorusGrid& grid) {
    const SpectralField u0 = single_harmonic(grid, std::vector<int>(static_cast<std::size_t>(grid.dim()), 3), 0.4);
    const double T = 2.0;
    auto final_state = [&](double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        return integrate(u0, cfg, {T}).snapshots.at(0);
    };
    const SpectralField a = final_state(T / 10), b = final_state(T / 20), c = final_state(T / 40);
    SpectralField d1 = a, d2 = b;
    axpy(d1, -1.0, b);
    axpy(d2, -1.0, c);
    const double factor = l2_norm_parseval(d1) / std::max(l2_norm_parseval(d2), 1e-300);
    return within("rk4_self_convergence", factor, 12.0, 20.0, "error contraction per dt halving");
}

inline CheckResult m_form_cross_check(const TorusGrid& grid, std::uint64_t seed) {
    std::vector<int> band(static_cast<std::size_t>(grid.dim()), 5);
    const SpectralField u0 = random_band_limited_field(grid, band, seed, grid.dim(), 0.1);
    SolverConfig cfg;
    cfg.dt = 0.02;
    const double T = 10 * cfg.dt;
    const SpectralField a = integrate(u0, cfg, {T}).snapshots.at(0);
    const SpectralField b = integrate_m_form(u0, cfg, {T}).snapshots.at(0);
    SpectralField diff = a;
    axpy(diff, -1.0, b);
    return le("m_form_cross_check", l2_norm_parseval(diff) / l2_norm_parseval(a), 1e-6,
              "velocity vs momentum formulation at T = 10 dt");
}

inline CheckResult a_priori_bound(const TorusGrid& grid, const DyadicPartition& part, std::uint64_t seed) {
    std::vector<int> band(static_cast<std::size_t>(grid.dim()), 5);
    const SpectralField u0 = random_band_limited_field(grid, band, seed, grid.dim(), 0.05);
    SolverConfig cfg;
    cfg.dt = 0.05;
    const BesovParams params{2.5, 2.0, kInf};
    const double base = besov_norm(u0, params, part);
    double worst = 0;
    for (const auto& u : integrate(u0, cfg, {0.25, 0.5, 0.75, 1.0}).snapshots)
        worst = std::max(worst, besov_norm(u, params, part) / base);
    return le("a_priori_norm_bound", worst, 1.5, "sup_t ||u(t)||_{B^s} / ||u0||_{B^s}, small datum");
}

inline CheckResult dealias_soundness(const TorusGrid& coarse, std::uint64_t seed) {
    std::vector<int> band(static_cast<std::size_t>(coarse.dim()), 4);
    const SpectralField u0 = random_band_limited_field(coarse, band, seed, coarse.dim(), 0.02);
    std::vector<int> fine_extent = coarse.extent();
    for (auto& m : fine_extent) m *= 2;
    const TorusGrid fine(coarse.period(), fine_extent);
    const SpectralField u0_fine = embed_field(u0, fine);
    SolverConfig cfg;
    cfg.dt = 0.05;
    const double T = 1.0;
    const double a = l2_norm_parseval(integrate(u0, cfg, {T}).snapshots.at(0));
    const double b = l2_norm_parseval(integrate(u0_fine, cfg, {T}).snapshots.at(0));
    return le("dealias_soundness", std::abs(a - b) / std::max(a, 1e-300), 1e-6,
              "||u(T)||_{L^2} change when doubling every extent");
}

inline CheckResult rk4_reversibility(const TorusGrid& grid) {
    const SpectralField u0 = single_harmonic(grid, std::vector<int>(static_cast<std::size_t>(grid.dim()), 3), 0.4);
    const double T = 1.0;
    auto round_trip_error = [&](double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        const SpectralField uT = integrate(u0, cfg, {T}).snapshots.at(0);
        SpectralField back = integrate(uT, cfg, {-T}).snapshots.at(0);
        axpy(back, -1.0, u0);
        return l2_norm_parseval(back);
    };
    const double e1 = round_trip_error(T / 10), e2 = round_trip_error(T / 20);
    return within("rk4_reversibility_order", e1 / std::max(e2, 1e-300), 8.0, 32.0,
                  "forward-backward error contracts at fourth order");
}

inline CheckResult integration_determinism(const TorusGrid& grid, std::uint64_t seed) {
    std::vector<int> band(static_cast<std::size_t>(grid.dim()), 5);
    const SpectralField u0 = random_band_limited_field(grid, band, seed, grid.dim(), 0.1);
    SolverConfig cfg;
    cfg.dt = 0.05;
    const SpectralField a = integrate(u0, cfg, {0.5}).snapshots.at(0);
    const SpectralField b = integrate(u0, cfg, {0.5}).snapshots.at(0);
    double worst = 0;
    for (int c = 0; c < a.components(); ++c)
        for (std::size_t i = 0; i < a[c].size(); ++i)
            worst = std::max(worst, std::abs(a[c][i] - b[c][i]));
    return le("integration_determinism", worst, 0.0, "identical runs are bitwise identical");
}

struct ScalingChecks {
    CheckResult slope_s;
    CheckResult slope_sm1;
    CheckResult constant_ordering;
    CheckResult slope_w;
    CheckResult slope_control;
};

/// Probe times for the difference laws: one decade below t = 2^{-kn},
/// scaled by [1e-4, 1e-3].
inline std::vector<double> scaling_times(int k, int n, int points) {
    const double base = std::pow(2.0, -static_cast<double>(k) * n);
    std::vector<double> times;
    for (int i = 0; i < points; ++i)
        times.push_back(1e-4 * base * std::pow(10.0, static_cast<double>(i) / (points - 1)));
    return times;
}

inline ScalingChecks scaling_laws(const SpectralField& u0, const InitialDataSpec& spec,
                                  const DyadicPartition& part, double frac, int points) {
    const std::vector<double> times = scaling_times(spec.k, 2, points);
    SolverConfig cfg;
    cfg.dt = times.front() / 4;
    cfg.dealias = frac;
    const auto rows = trajectory_diffs(u0, spec.sigma, spec.p, part, cfg, times);

    std::vector<double> ts, ns, nsm1, nsp1, ws;
    for (const auto& r : rows) {
        ts.push_back(r.t);
        ns.push_back(r.norm_s);
        nsm1.push_back(r.norm_sm1);
        nsp1.push_back(r.norm_sp1);
        ws.push_back(r.w_norm);
    }
    double c_sm1 = 0, c_sp1 = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        c_sm1 = std::max(c_sm1, nsm1[i] / ts[i]);
        c_sp1 = std::max(c_sp1, nsp1[i] / ts[i]);
    }
    ScalingChecks out{
        within("first_order_slope_s", loglog_slope(ts, ns), 0.85, 1.15,
               "||u(t)-u0||_{B^s} vs t, n=2 decade"),
        within("first_order_slope_sm1", loglog_slope(ts, nsm1), 0.85, 1.15),
        le("difference_constant_ordering", c_sm1, c_sp1, "measured C(s-1) <= C(s+1)"),
        within("second_order_slope_w", loglog_slope(ts, ws), 1.8, 2.2,
               "||w(t)||_{B^{sigma-2}} vs t"),
        within("w_control_slope_v0_zero", loglog_slope(ts, ns), 0.85, 1.15,
               "dropping the t*v0 correction leaves a first-order residual"),
    };
    return out;
}

inline std::vector<CheckResult> record_invariant_checks(const std::vector<ExperimentRecord>& records) {
    double worst_dom = 0;   // block_norm <= besov_sigma_diff
    double worst_chain = 0; // block_norm >= v0_block - w_bound
    for (const auto& r : records) {
        if (!r.complete) continue;
        worst_dom = std::max(worst_dom, (r.block_norm - r.besov_sigma_diff) / std::max(r.besov_sigma_diff, 1e-300));
        worst_chain = std::max(worst_chain, (r.v0_block - r.w_bound - r.block_norm) / std::max(r.block_norm, 1e-300));
    }
    return {le("record_besov_dominates_block", worst_dom, 1e-10),
            le("record_triangle_chain", worst_chain, 1e-10,
               "block_norm >= v0_block - w_bound on every complete row")};
}

} // namespace checks

/// Runs every module invariant and emits one result per check. The negative
/// controls corrupt one ingredient and must make the suite fail.
inline std::vector<CheckResult> run_verification_suite(const ExperimentConfig& config,
                                                       NegativeControl control = NegativeControl::None,
                                                       std::ostream* log = nullptr) {
    std::vector<CheckResult> results;
    auto add = [&](CheckResult c) {
        if (log) print_report({c}, *log);
        results.push_back(std::move(c));
    };

    const CutoffPair cut = build_cutoffs();
    if (control == NegativeControl::ShiftedCutoff) {
        // chi displaced while psi keeps its built shape: the telescoping sum
        // must break.
        auto chi_bad = [&](double rho) { return cut.chi(rho - 0.05); };
        auto psi = [&](double rho) { return cut.psi(rho); };
        add(checks::partition_identity(chi_bad, psi, "cutoff_partition_identity[shifted-chi]"));
        return results;
    }

    ExperimentConfig cfg = config;
    if (control == NegativeControl::InadmissibleGrid) {
        cfg.spec.k = 1;
        cfg.spec.n_max = 3;
        cfg.grid_m = 256;
    }

    auto chi = [&](double rho) { return cut.chi(rho); };
    auto psi = [&](double rho) { return cut.psi(rho); };
    add(checks::partition_identity(chi, psi));
    add(checks::partition_square_bound(chi, psi));
    add(checks::cutoff_plateau(cut));

    // Datum construction gate: an inadmissible spec/grid pair must be refused.
    std::optional<TorusGrid> maybe_grid;
    try {
        validate(cfg);
        maybe_grid = make_experiment_grid(cfg);
        validate(cfg.spec, *maybe_grid);
        add(checks::le("datum_admissible", 0.0, 0.0, "spec accepted on grid"));
    } catch (const std::exception& e) {
        add(CheckResult{"datum_admissible", 1.0, "constructible", false, e.what()});
        return results;
    }
    const TorusGrid& grid = *maybe_grid;

    const DyadicPartition part(grid, cut);
    const SpectralField u0 = build_u0(cfg.spec, grid);

    add(checks::lattice_partition_unity(part));
    add(checks::block_completeness(part, cfg.seed));
    add(checks::almost_orthogonality(part));
    add(checks::bernstein_block_ratio(part, cfg.seed + 1));
    add(checks::besov_embedding(part, cfg.seed + 2));

    // Small grid for the operator and product ensembles.
    std::vector<int> ops_extent(static_cast<std::size_t>(cfg.spec.d), 32);
    ops_extent[0] = 64;
    if (cfg.spec.d == 2) ops_extent[1] = 64;
    const TorusGrid ops_grid(cfg.length, ops_extent);
    const DyadicPartition ops_part(ops_grid, cut);

    add(checks::product_law_constant(ops_part, cfg.seed + 3));
    add(checks::algebra_law_constant(ops_part, cfg.seed + 4));

    add(checks::f_localization(cfg.spec, part));
    add(checks::g_localization(cfg.spec, part));
    add(checks::u0_block_uniformity(u0, cfg.spec, part));
    add(checks::u0_offblock_vanishing(u0, cfg.spec, part));
    add(checks::u0_single_component(u0));
    add(checks::u0_advection_identity(u0, cfg.dealias));
    for (auto& c : checks::block_lower_bound_checks(u0, cfg.spec, part)) add(std::move(c));
    add(checks::square_group_reconstruction(u0, cfg.spec, part, cfg.dealias));
    add(checks::u0_besov_bounded(u0, cfg.spec, part));

    add(checks::helmholtz_roundtrip(ops_grid, cfg.seed + 5));
    add(checks::formulation_equivalence(ops_grid, cfg.seed + 6, cfg.dealias));
    add(checks::quadratic_polarization(ops_grid, cfg.seed + 7, cfg.dealias));
    add(checks::helmholtz_smoothing_gain(part, cfg.seed + 8));

    add(checks::rk4_self_convergence(ops_grid));
    add(checks::m_form_cross_check(ops_grid, cfg.seed + 9));
    add(checks::a_priori_bound(ops_grid, ops_part, cfg.seed + 10));
    {
        std::vector<int> coarse_extent(static_cast<std::size_t>(cfg.spec.d), 32);
        add(checks::dealias_soundness(TorusGrid(cfg.length, coarse_extent), cfg.seed + 11));
    }
    add(checks::rk4_reversibility(ops_grid));
    add(checks::integration_determinism(ops_grid, cfg.seed + 12));

    const auto scaling = checks::scaling_laws(u0, cfg.spec, part, cfg.dealias, 4);
    add(scaling.slope_s);
    add(scaling.slope_sm1);
    add(scaling.constant_ordering);
    add(scaling.slope_w);
    add(scaling.slope_control);

    // Mini sweep for the record invariants and CSV stability.
    {
        ExperimentConfig mini = cfg;
        mini.eps_list = {cfg.eps_list.front()};
        mini.steps_per_run = std::min(cfg.steps_per_run, 6);
        nlohmann::json timings;
        const auto records = detail::run_cells(u0, mini, part, nullptr, &timings);
        for (auto& c : checks::record_invariant_checks(records)) add(std::move(c));

        ExperimentConfig tiny = cfg;
        tiny.eps_list = {cfg.eps_list.front()};
        tiny.n_list = {1};
        tiny.steps_per_run = 4;
        std::vector<int> small_extent(static_cast<std::size_t>(cfg.spec.d), cfg.grid_m_perp);
        small_extent[0] = cfg.baseline_grid_m;
        const TorusGrid small_grid(cfg.length, small_extent);
        const DyadicPartition small_part(small_grid, cut);
        SpectralField datum = f_profile(tiny.spec.k, 1, small_grid);
        scale(datum, std::pow(2.0, -tiny.spec.k * tiny.spec.sigma));
        const std::string csv_a = records_to_csv(detail::run_cells(datum, tiny, small_part, nullptr, nullptr));
        const std::string csv_b = records_to_csv(detail::run_cells(datum, tiny, small_part, nullptr, nullptr));
        add(checks::le("csv_bit_stability", csv_a == csv_b ? 0.0 : 1.0, 0.0,
                       "two runs of the same cell render identical CSV bytes"));
    }

    return results;
}

} // namespace lpch
