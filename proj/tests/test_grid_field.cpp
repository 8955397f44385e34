#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lpch/fft.hpp"
#include "lpch/field.hpp"
#include "lpch/grid.hpp"
#include "lpch/norms.hpp"
#include "lpch/random_fields.hpp"
#include "oracle_dft.hpp"

using namespace lpch;

namespace {

SpectralField cosine_axis0(const TorusGrid& grid, int m, double amplitude, int comp = 0, int ncomp = -1) {
    SpectralField f(grid, ncomp < 0 ? grid.dim() : ncomp);
    std::vector<int> plus(static_cast<std::size_t>(grid.dim()), 0), minus = plus;
    plus[0] = m;
    minus[0] = -m;
    std::size_t ip = 0, im = 0;
    for (int ax = 0; ax < grid.dim(); ++ax) {
        ip += static_cast<std::size_t>(grid.storage_index(ax, plus[static_cast<std::size_t>(ax)])) * grid.stride(ax);
        im += static_cast<std::size_t>(grid.storage_index(ax, minus[static_cast<std::size_t>(ax)])) * grid.stride(ax);
    }
    f[comp][ip] = Complex{0.5 * amplitude, 0.0};
    f[comp][im] += Complex{0.5 * amplitude, 0.0};
    return f;
}

} // namespace

TEST_CASE("grid construction and frequency lattice") {
    TorusGrid grid(2, kDefaultPeriod, 64);
    CHECK(grid.dim() == 2);
    CHECK(grid.points() == 64u * 64u);
    // With L = 24*pi the lattice frequencies are m/12.
    CHECK(grid.xi(0, 17) == Catch::Approx(17.0 / 12.0).epsilon(1e-14));
    CHECK(grid.freq_index(0, 63) == -1);
    CHECK(grid.storage_index(0, -1) == 63);

    CHECK_THROWS_AS(TorusGrid(2, kDefaultPeriod, 48), std::invalid_argument); // not a power of two
    CHECK_THROWS_AS(TorusGrid(2, -1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid(4, kDefaultPeriod, 64), std::invalid_argument);

    TorusGrid aniso(kDefaultPeriod, {256, 32});
    CHECK(aniso.extent(0) == 256);
    CHECK(aniso.dealias_keep(0) == 85);
    CHECK(aniso.dealias_keep(1) == 10);
}

TEST_CASE("to_physical on elementary coefficient sets") {
    TorusGrid grid(2, kDefaultPeriod, 32);

    SECTION("zero coefficients give the zero array") {
        PhysicalField phys = to_physical(SpectralField(grid, 2));
        for (int c = 0; c < 2; ++c)
            for (double v : phys[c]) CHECK(v == 0.0);
    }

    SECTION("a conjugate pair at +-m samples cos(xi_m . x)") {
        SpectralField f = cosine_axis0(grid, 5, 1.0);
        PhysicalField phys = to_physical(f);
        for (LatticeIter it(grid); !it.done(); it.next()) {
            const double x0 = grid.period() * it.axis_index(0) / grid.extent(0);
            CHECK(phys[0][it.flat()] == Catch::Approx(std::cos(grid.freq_unit() * 5 * x0)).margin(1e-12));
        }
    }

    SECTION("round trip to_physical then to_spectral is the identity") {
        SpectralField f = random_band_limited_field(grid, {10, 10}, 17, 2);
        SpectralField back = to_spectral(to_physical(f));
        axpy(back, -1.0, f);
        CHECK(max_abs(back) <= 1e-12 * max_abs(f));
    }

    SECTION("asymmetric coefficients are rejected as corrupted") {
        SpectralField f(grid, 1);
        f[0][grid.storage_index(0, 3) * grid.stride(0)] = Complex{1.0, 0.5};
        CHECK_THROWS_AS(to_physical(f), std::runtime_error);
    }
}

TEST_CASE("to_spectral on elementary sample sets") {
    TorusGrid grid(1, kDefaultPeriod, 64);

    SECTION("constant c concentrates at m = 0") {
        PhysicalField samples(grid, 1);
        for (double& v : samples[0]) v = 3.25;
        SpectralField f = to_spectral(samples);
        CHECK(f[0][0].real() == Catch::Approx(3.25).epsilon(1e-14));
        double off = 0;
        for (std::size_t i = 1; i < f[0].size(); ++i) off = std::max(off, std::abs(f[0][i]));
        CHECK(off <= 1e-13);
    }

    SECTION("cos((17/12) x1) lands as one half at m = +-17, matching the direct DFT") {
        PhysicalField samples(grid, 1);
        const auto xs = oracle::grid_coordinates(grid, 0);
        for (int i = 0; i < grid.extent(0); ++i)
            samples[0][static_cast<std::size_t>(i)] = std::cos((17.0 / 12.0) * xs[static_cast<std::size_t>(i)]);
        SpectralField f = to_spectral(samples);
        CHECK(f[0][17].real() == Catch::Approx(0.5).epsilon(1e-12));
        CHECK(f[0][static_cast<std::size_t>(grid.storage_index(0, -17))].real() ==
              Catch::Approx(0.5).epsilon(1e-12));

        const auto ref = oracle::dft_forward(grid, samples[0]);
        for (std::size_t i = 0; i < ref.size(); ++i)
            CHECK(std::abs(f[0][i] - ref[i]) <= 1e-12);
    }

    SECTION("linearity: transform of a sum is the sum of transforms") {
        TorusGrid g2(2, kDefaultPeriod, 16);
        SpectralField a = random_band_limited_field(g2, {5, 5}, 3, 2);
        SpectralField b = random_band_limited_field(g2, {5, 5}, 4, 2);
        PhysicalField pa = to_physical(a), pb = to_physical(b);
        PhysicalField sum(g2, 2);
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < sum[c].size(); ++i) sum[c][i] = pa[c][i] + pb[c][i];
        SpectralField lhs = to_spectral(sum);
        SpectralField rhs_field = a + b;
        axpy(lhs, -1.0, rhs_field);
        CHECK(max_abs(lhs) <= 1e-12 * std::max(max_abs(a), max_abs(b)));
    }

    SECTION("non-finite samples are rejected") {
        PhysicalField samples(grid, 1);
        samples[0][5] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(to_spectral(samples), std::invalid_argument);
    }
}

TEST_CASE("lp norms") {
    SECTION("constant field (c, 0): L^2 norm is |c| L^{d/2}") {
        TorusGrid grid(2, kDefaultPeriod, 16);
        SpectralField f(grid, 2);
        f[0][0] = Complex{-2.5, 0.0};
        CHECK(lp_norm(f, 2.0) == Catch::Approx(2.5 * grid.period()).epsilon(1e-13));
    }

    SECTION("cos((17/12)x1) in component 1, d = 2: sup norm is 1") {
        TorusGrid grid(2, kDefaultPeriod, 64);
        SpectralField f = cosine_axis0(grid, 17, 1.0);
        CHECK(lp_norm(f, kInf) == Catch::Approx(1.0).epsilon(1e-13));
    }

    SECTION("cos((17/12)x1), d = 1, p = 2: closed form sqrt(L/2)") {
        TorusGrid grid(1, kDefaultPeriod, 64);
        SpectralField f = cosine_axis0(grid, 17, 1.0, 0, 1);
        CHECK(lp_norm(f, 2.0) == Catch::Approx(std::sqrt(grid.period() / 2.0)).epsilon(1e-13));
    }

    SECTION("invalid exponent is rejected") {
        TorusGrid grid(1, kDefaultPeriod, 16);
        CHECK_THROWS_AS(lp_norm(SpectralField(grid, 1), 0.5), std::invalid_argument);
    }
}

TEST_CASE("Parseval identity on random fields") {
    TorusGrid grid(2, kDefaultPeriod, 32);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        SpectralField f = random_band_limited_field(grid, {10, 10}, seed, 2);
        const double grid_sum = lp_norm(f, 2.0);
        const double coef_sum = l2_norm_parseval(f);
        CHECK(std::abs(grid_sum - coef_sum) <= 1e-10 * coef_sum);
    }
}

TEST_CASE("Nyquist plane is cleared by public operations") {
    TorusGrid grid(1, kDefaultPeriod, 16);
    PhysicalField samples(grid, 1);
    // Alternating samples: all energy at the unpaired Nyquist mode m = -8.
    for (int i = 0; i < grid.extent(0); ++i) samples[0][static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
    SpectralField f = to_spectral(samples);
    CHECK(std::abs(f[0][8]) == 0.0);
}

TEST_CASE("embed_field reproduces the same torus function at finer resolution") {
    TorusGrid coarse(2, kDefaultPeriod, 16), fine(2, kDefaultPeriod, 32);
    SpectralField f = random_band_limited_field(coarse, {6, 6}, 9, 2);
    SpectralField g = embed_field(f, fine);
    PhysicalField pf = to_physical(f), pg = to_physical(g);
    // Compare on the shared sample points (every second fine point).
    for (LatticeIter it(coarse); !it.done(); it.next()) {
        std::size_t fine_flat = 0;
        for (int ax = 0; ax < 2; ++ax)
            fine_flat += static_cast<std::size_t>(2 * it.axis_index(ax)) * fine.stride(ax);
        CHECK(pf[0][it.flat()] == Catch::Approx(pg[0][fine_flat]).margin(1e-12));
    }
}
