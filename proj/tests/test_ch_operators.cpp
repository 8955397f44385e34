#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lpch/ch_operators.hpp"
#include "lpch/dyadic.hpp"
#include "lpch/initial_data.hpp"
#include "lpch/random_fields.hpp"
#include "lpch/verification.hpp"
#include "oracle_dft.hpp"

using namespace lpch;

namespace {

SpectralField harmonic(const TorusGrid& grid, int comp, const std::vector<int>& m, double amplitude,
                       bool sine = false) {
    SpectralField f(grid, grid.dim());
    std::size_t ip = 0, im = 0;
    for (int ax = 0; ax < grid.dim(); ++ax) {
        ip += static_cast<std::size_t>(grid.storage_index(ax, m[static_cast<std::size_t>(ax)])) * grid.stride(ax);
        im += static_cast<std::size_t>(grid.storage_index(ax, -m[static_cast<std::size_t>(ax)])) * grid.stride(ax);
    }
    if (sine) {
        f[comp][ip] += Complex{0.0, -0.5 * amplitude};
        f[comp][im] += Complex{0.0, 0.5 * amplitude};
    } else {
        f[comp][ip] += Complex{0.5 * amplitude, 0.0};
        f[comp][im] += Complex{0.5 * amplitude, 0.0};
    }
    return f;
}

/// Direct evaluation of Q and R at doubled resolution with brute-force DFTs.
/// Everything below re-derives the formulas from scratch; nothing is shared
/// with the production operator path.
struct DirectForms {
    SpectralField q;
    SpectralField r;
};

DirectForms direct_forms_double_resolution(const SpectralField& u_coarse) {
    const TorusGrid& coarse = u_coarse.grid;
    std::vector<int> fine_extent = coarse.extent();
    for (auto& v : fine_extent) v *= 2;
    const TorusGrid fine(coarse.period(), fine_extent);
    const int d = coarse.dim();
    const std::size_t n = fine.points();

    // Coefficient embedding by frequency index.
    std::vector<std::vector<Complex>> coef(static_cast<std::size_t>(d),
                                           std::vector<Complex>(n, Complex{0.0, 0.0}));
    for (int c = 0; c < d; ++c)
        for (LatticeIter it(coarse); !it.done(); it.next()) {
            std::size_t flat = 0;
            bool nyquist = false;
            for (int ax = 0; ax < d; ++ax) {
                const int m = coarse.freq_index(ax, it.axis_index(ax));
                if (m == -coarse.extent(ax) / 2) { nyquist = true; break; }
                flat += static_cast<std::size_t>(fine.storage_index(ax, m)) * fine.stride(ax);
            }
            if (!nyquist) coef[static_cast<std::size_t>(c)][flat] = u_coarse[c][it.flat()];
        }

    auto xi_of = [&](int axis, const LatticeIter& it) { return fine.xi(axis, it.axis_index(axis)); };

    // Physical samples of u and of every partial derivative.
    std::vector<std::vector<double>> u(static_cast<std::size_t>(d));
    std::vector<std::vector<double>> du(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i) {
        u[static_cast<std::size_t>(i)] = oracle::dft_backward(fine, coef[static_cast<std::size_t>(i)]);
        for (int j = 0; j < d; ++j) {
            std::vector<Complex> tmp(n);
            for (LatticeIter it(fine); !it.done(); it.next())
                tmp[it.flat()] = Complex{0.0, xi_of(j, it)} * coef[static_cast<std::size_t>(i)][it.flat()];
            du[static_cast<std::size_t>(i * d + j)] = oracle::dft_backward(fine, tmp);
        }
    }
    auto D = [&](int i, int j) -> const std::vector<double>& { return du[static_cast<std::size_t>(i * d + j)]; };

    std::vector<double> divu(n, 0.0), frob(n, 0.0);
    for (int i = 0; i < d; ++i)
        for (std::size_t x = 0; x < n; ++x) divu[x] += D(i, i)[x];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (std::size_t x = 0; x < n; ++x) frob[x] += D(i, j)[x] * D(i, j)[x];

    DirectForms out{SpectralField(fine, d), SpectralField(fine, d)};

    for (int i = 0; i < d; ++i) {
        // Row i of the matrix inside Q, transformed entry by entry.
        std::vector<Complex> div_row(n, Complex{0.0, 0.0});
        for (int j = 0; j < d; ++j) {
            std::vector<double> entry(n, 0.0);
            for (std::size_t x = 0; x < n; ++x) {
                double v = 0;
                for (int k = 0; k < d; ++k)
                    v += D(i, k)[x] * D(k, j)[x] + D(i, k)[x] * D(j, k)[x] - D(k, i)[x] * D(k, j)[x];
                v -= D(i, j)[x] * divu[x];
                if (i == j) v += 0.5 * frob[x];
                entry[x] = v;
            }
            const auto entry_hat = oracle::dft_forward(fine, entry);
            for (LatticeIter it(fine); !it.done(); it.next())
                div_row[it.flat()] += Complex{0.0, xi_of(j, it)} * entry_hat[it.flat()];
        }

        // R ingredients: u (div u) and grad(|u|^2)/2 assembled physically.
        std::vector<double> r_entry(n, 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            double grad_half_usq = 0;
            for (int j = 0; j < d; ++j) grad_half_usq += u[static_cast<std::size_t>(j)][x] * D(j, i)[x];
            r_entry[x] = u[static_cast<std::size_t>(i)][x] * divu[x] + grad_half_usq;
        }
        const auto r_hat = oracle::dft_forward(fine, r_entry);

        for (LatticeIter it(fine); !it.done(); it.next()) {
            double xi_sq = 0;
            for (int ax = 0; ax < d; ++ax) xi_sq += xi_of(ax, it) * xi_of(ax, it);
            out.q[i][it.flat()] = -div_row[it.flat()] / (1.0 + xi_sq);
            out.r[i][it.flat()] = -r_hat[it.flat()] / (1.0 + xi_sq);
        }
    }
    return out;
}

/// Max coefficient mismatch on the coarse grid's dealiased band.
double band_mismatch(const SpectralField& prod_coarse, const SpectralField& oracle_fine) {
    const TorusGrid& coarse = prod_coarse.grid;
    const TorusGrid& fine = oracle_fine.grid;
    double worst = 0;
    for (int c = 0; c < prod_coarse.components(); ++c)
        for (LatticeIter it(coarse); !it.done(); it.next()) {
            bool in_band = true;
            std::size_t fine_flat = 0;
            for (int ax = 0; ax < coarse.dim(); ++ax) {
                const int m = coarse.freq_index(ax, it.axis_index(ax));
                if (std::abs(m) > coarse.dealias_keep(ax)) { in_band = false; break; }
                fine_flat += static_cast<std::size_t>(fine.storage_index(ax, m)) * fine.stride(ax);
            }
            if (in_band)
                worst = std::max(worst, std::abs(prod_coarse[c][it.flat()] - oracle_fine[c][fine_flat]));
        }
    return worst;
}

} // namespace

TEST_CASE("helmholtz operators") {
    TorusGrid grid(2, kDefaultPeriod, 32);

    SECTION("constant fields are fixed points of both maps") {
        SpectralField f(grid, 2);
        f[0][0] = Complex{2.0, 0.0};
        f[1][0] = Complex{-1.0, 0.0};
        SpectralField a = helmholtz(f), b = helmholtz_inverse(f);
        axpy(a, -1.0, f);
        axpy(b, -1.0, f);
        CHECK(max_abs(a) == 0.0);
        CHECK(max_abs(b) == 0.0);
    }

    SECTION("cos((17/12)x1) is damped by exactly 1/(1 + (17/12)^2)") {
        TorusGrid g(2, kDefaultPeriod, 64);
        SpectralField f = harmonic(g, 0, {17, 0}, 1.0);
        SpectralField damped = helmholtz_inverse(f);
        const double symbol = 1.0 / (1.0 + (17.0 / 12.0) * (17.0 / 12.0));
        SpectralField expected = f;
        scale(expected, symbol);
        axpy(damped, -1.0, expected);
        CHECK(max_abs(damped) <= 1e-15);
    }

    SECTION("round trip is the identity to 1e-12") {
        SpectralField f = random_band_limited_field(grid, {10, 10}, 5, 2);
        SpectralField back = helmholtz(helmholtz_inverse(f));
        axpy(back, -1.0, f);
        CHECK(max_abs(back) <= 1e-12 * max_abs(f));
    }
}

TEST_CASE("advection") {
    TorusGrid grid(2, kDefaultPeriod, 32);

    SECTION("constant velocity transports nothing") {
        SpectralField f(grid, 2);
        f[0][0] = Complex{1.5, 0.0};
        f[1][0] = Complex{-0.5, 0.0};
        CHECK(max_abs(advection(f)) <= 1e-15);
    }

    SECTION("u = (sin(x2/12), 0): every term carries a vanishing factor") {
        SpectralField f = harmonic(grid, 0, {0, 1}, 1.0, true);
        CHECK(max_abs(advection(f)) <= 1e-15);
    }

    SECTION("the lacunary datum reduces to the gradient of its square") {
        TorusGrid big(kDefaultPeriod, {4096, 32});
        const SpectralField u0 = build_u0(InitialDataSpec{}, big);
        CHECK(checks::u0_advection_identity(u0, kDealiasFraction).pass);
    }
}

TEST_CASE("Q and R match a direct double-resolution evaluation") {
    TorusGrid grid(2, kDefaultPeriod, 16);
    // Two-harmonic velocity: small integer frequencies so the doubled grid
    // holds every product mode exactly.
    SpectralField u = harmonic(grid, 0, {2, 1}, 0.8);
    axpy(u, 1.0, harmonic(grid, 1, {1, 2}, -0.6, true));

    const DirectForms oracle_result = direct_forms_double_resolution(u);

    SECTION("quadratic homogeneity first") {
        SpectralField q1 = q_form(u);
        SpectralField u2 = u;
        scale(u2, 3.0);
        SpectralField q9 = q_form(u2);
        scale(q1, 9.0);
        axpy(q9, -1.0, q1);
        CHECK(max_abs(q9) <= 1e-12);
    }

    SECTION("zero and constant fields are annihilated") {
        SpectralField z(grid, 2);
        CHECK(max_abs(q_form(z)) == 0.0);
        CHECK(max_abs(r_form(z)) == 0.0);
        z[0][0] = Complex{2.0, 0.0};
        CHECK(max_abs(q_form(z)) <= 1e-15);
        CHECK(max_abs(r_form(z)) <= 1e-15);
    }

    SECTION("Q agrees with the oracle on the dealiased band") {
        CHECK(band_mismatch(q_form(u), oracle_result.q) <= 1e-8);
    }

    SECTION("R agrees with the oracle on the dealiased band") {
        CHECK(band_mismatch(r_form(u), oracle_result.r) <= 1e-8);
    }
}

TEST_CASE("R smooths by two derivatives") {
    TorusGrid grid(kDefaultPeriod, {1024, 32});
    DyadicPartition part(grid);
    CHECK(checks::helmholtz_smoothing_gain(part, 3).pass);
}

TEST_CASE("rhs block structure on the lacunary datum") {
    // On block kn the advection part dominates Q and R by one power of 2^{kn}.
    TorusGrid grid(kDefaultPeriod, {4096, 32});
    DyadicPartition part(grid);
    const InitialDataSpec spec{};
    const SpectralField u0 = build_u0(spec, grid);

    const detail::VelocityParts parts(u0);
    const SpectralField adv = detail::advection_from_parts(parts, kDealiasFraction);
    SpectralField qr = detail::q_from_parts(parts, kDealiasFraction);
    axpy(qr, 1.0, detail::r_from_parts(parts, kDealiasFraction));

    SECTION("rhs of zero and of constants vanishes") {
        SpectralField z(grid, 2);
        CHECK(max_abs(rhs(z)) == 0.0);
        z[0][0] = Complex{0.7, 0.0};
        CHECK(max_abs(rhs(z)) <= 1e-15);
    }

    SECTION("advection-to-smoothed ratio grows like 2^{kn}") {
        std::vector<double> ratios;
        for (int n = 1; n <= spec.n_max; ++n) {
            const double a = block_lp_norm(adv, spec.k * n, part, spec.p);
            const double b = block_lp_norm(qr, spec.k * n, part, spec.p);
            REQUIRE(b > 0.0);
            ratios.push_back(a / b);
        }
        for (std::size_t i = 1; i < ratios.size(); ++i) {
            const double growth = ratios[i] / ratios[i - 1];
            CHECK(growth >= 2.0);   // one extra power of 2^k = 4 per n, with slack
            CHECK(growth <= 16.0);
        }
    }
}

TEST_CASE("velocity and momentum forms agree through the Helmholtz map") {
    TorusGrid grid(2, kDefaultPeriod, 64);

    SECTION("constant velocity is stationary in the momentum form") {
        SpectralField f(grid, 2);
        f[0][0] = Complex{1.0, 0.0};
        CHECK(max_abs(m_form_rhs(helmholtz(f), f)) <= 1e-15);
    }

    SECTION("cross-formulation identity on random band-limited fields") {
        CHECK(checks::formulation_equivalence(grid, 1234, kDealiasFraction, 20).pass);
    }

    SECTION("joint quadratic homogeneity in (m, u)") {
        SpectralField u = random_band_limited_field(grid, {6, 6}, 77, 2, 0.1);
        SpectralField m = helmholtz(u);
        SpectralField once = m_form_rhs(m, u);
        SpectralField u2 = u, m2 = m;
        scale(u2, 2.0);
        scale(m2, 2.0);
        SpectralField four = m_form_rhs(m2, u2);
        scale(once, 4.0);
        axpy(four, -1.0, once);
        CHECK(max_abs(four) <= 1e-12);
    }

    SECTION("the full right-hand side polarizes bilinearly") {
        CHECK(checks::quadratic_polarization(grid, 4321, kDealiasFraction).pass);
    }
}

