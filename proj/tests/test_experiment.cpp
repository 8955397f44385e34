#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lpch/config_file.hpp"
#include "lpch/experiment.hpp"
#include "lpch/field_io.hpp"
#include "lpch/random_fields.hpp"
#include "lpch/verification.hpp"

using namespace lpch;

namespace {

/// Small, fast experiment profile: k = 1, a single probed block, modest grid.
ExperimentConfig tiny_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.spec = InitialDataSpec{2, 1, 1, 4.5, 2.0};
    cfg.grid_m = 256;
    cfg.grid_m_perp = 32;
    cfg.baseline_grid_m = 256;
    cfg.steps_per_run = 4;
    cfg.eps_list = {0.05, 0.1};
    cfg.n_list = {1};
    cfg.out_dir = out_dir;
    return cfg;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg = tiny_config("unused");
    SECTION("eps values must lie in (0, 1]") {
        cfg.eps_list = {0.0};
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
        cfg.eps_list = {1.5};
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SECTION("probed blocks must exist in the datum") {
        cfg.n_list = {2};
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SECTION("auto grid selection finds the smallest admissible extent") {
        ExperimentConfig dflt;
        dflt.grid_m = 0;
        const TorusGrid grid = make_experiment_grid(dflt);
        CHECK(grid.extent(0) == 4096);
        CHECK(grid.extent(1) == 128);
        // One size down must be rejected.
        dflt.grid_m = 2048;
        CHECK_THROWS_AS(make_experiment_grid(dflt), std::invalid_argument);
    }
}

TEST_CASE("config file parsing and overrides") {
    TempDir dir("lpch_cfg_test");
    const std::string path = (dir.path / "run.ini").string();
    {
        std::ofstream out(path);
        out << "# experiment profile\n"
            << "[initial_data]\n"
            << "d = 2\nk = 1\nN = 1\nsigma = 4.25\np = inf\n"
            << "[grid]\n"
            << "m = 256\nm_perp = 32\n"
            << "[solver]\n"
            << "steps_per_run = 4\n"
            << "[sweep]\n"
            << "eps = 0.05, 0.1\nn_list = 1\nseed = 99\n"
            << "[output]\n"
            << "dir = from_file\n";
    }
    ExperimentConfig cfg;
    apply_config_file(path, cfg);
    CHECK(cfg.spec.k == 1);
    CHECK(cfg.spec.sigma == 4.25);
    CHECK(std::isinf(cfg.spec.p));
    CHECK(cfg.grid_m == 256);
    CHECK(cfg.eps_list == std::vector<double>{0.05, 0.1});
    CHECK(cfg.n_list == std::vector<int>{1});
    CHECK(cfg.seed == 99);
    CHECK(cfg.out_dir == "from_file");

    SECTION("unknown keys are reported with their location") {
        std::ofstream out(path, std::ios::app);
        out << "[grid]\nwhat = 3\n";
        out.close();
        ExperimentConfig fresh;
        CHECK_THROWS_WITH(apply_config_file(path, fresh), Catch::Matchers::ContainsSubstring("grid.what"));
    }
}

TEST_CASE("inflation sweep output and invariants") {
    TempDir dir("lpch_sweep_test");
    ExperimentConfig cfg = tiny_config((dir.path / "out").string());
    const auto records = run_inflation_sweep(cfg);
    REQUIRE(records.size() == 2);

    SECTION("records are ordered, complete, and satisfy the norm chain") {
        CHECK(records[0].eps < records[1].eps);
        for (const auto& r : records) {
            CHECK(r.complete);
            CHECK(r.t == r.eps * std::pow(2.0, -cfg.spec.k * r.n));
            CHECK(r.besov_sigma_diff >= r.block_norm * (1.0 - 1e-12));
            CHECK(r.block_norm >= r.v0_block - r.w_bound - 1e-12 * r.block_norm);
            CHECK(r.v0_block > 0.0);
            CHECK(r.w_bound > 0.0);
        }
        for (auto& c : checks::record_invariant_checks(records)) CHECK(c.pass);
    }

    SECTION("CSV file carries the pinned header and parses back") {
        std::ifstream csv(dir.path / "out" / "sweep.csv");
        REQUIRE(csv.good());
        std::string header;
        std::getline(csv, header);
        CHECK(header == "k,n,eps,t,block_norm,besov_sigma_diff,v0_block,w_bound");
        std::string row;
        int count = 0;
        while (std::getline(csv, row)) {
            if (row.empty()) continue;
            ++count;
            double k, n, eps, t, a, b, c, d;
            REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf",
                                &k, &n, &eps, &t, &a, &b, &c, &d) == 8);
        }
        CHECK(count == 2);
    }

    SECTION("manifest echoes the config and the measured epsilon0") {
        std::ifstream mf(dir.path / "out" / "manifest.json");
        REQUIRE(mf.good());
        const nlohmann::json manifest = nlohmann::json::parse(mf);
        CHECK(manifest.at("version").get<std::string>() == kVersion);
        CHECK(manifest.at("config").at("initial_data").at("k").get<int>() == cfg.spec.k);
        CHECK(manifest.at("epsilon0_measured").get<double>() > 0.0);
    }

    SECTION("identical configs render identical CSV bytes") {
        const std::string once = records_to_csv(records);
        const std::string again = records_to_csv(run_inflation_sweep(cfg));
        CHECK(once == again);
    }
}

TEST_CASE("smooth baseline decays linearly and matches the scaling table") {
    TempDir dir("lpch_baseline_test");
    ExperimentConfig cfg = tiny_config((dir.path / "out").string());
    cfg.eps_list = {0.02, 0.05, 0.1};
    const auto records = run_smooth_baseline(cfg);
    REQUIRE(records.size() == 3);

    SECTION("difference norms shrink linearly in t") {
        std::vector<double> ts, vals;
        for (const auto& r : records) {
            ts.push_back(r.t);
            vals.push_back(r.besov_sigma_diff);
        }
        CHECK(loglog_slope(ts, vals) == Catch::Approx(1.0).margin(0.15));
    }

    SECTION("the sigma-level column equals the scaling-table value: one computation, two paths") {
        std::vector<int> extent{cfg.baseline_grid_m, cfg.grid_m_perp};
        const TorusGrid grid(cfg.length, extent);
        const DyadicPartition part(grid);
        SpectralField datum = f_profile(cfg.spec.k, 1, grid);
        scale(datum, std::pow(2.0, -cfg.spec.k * cfg.spec.sigma));
        for (const auto& r : records) {
            SolverConfig solver;
            solver.dt = r.t / cfg.steps_per_run;
            const auto rows = difference_scaling(datum, cfg.spec.sigma, cfg.spec.p, part, solver, {r.t});
            REQUIRE(rows.size() == 1);
            CHECK(std::abs(rows[0].norm_sigma - r.besov_sigma_diff) <=
                  1e-10 * std::max(r.besov_sigma_diff, 1e-300));
        }
    }
}

TEST_CASE("field snapshots round-trip through the raw dump format") {
    TempDir dir("lpch_io_test");
    TorusGrid grid(kDefaultPeriod, {64, 32});
    SpectralField f = random_band_limited_field(grid, {10, 10}, 31, 2);
    const std::string base = (dir.path / "snap").string();
    save_field(f, base);

    SECTION("loads back bit-identical") {
        const SpectralField g = load_field(base);
        REQUIRE(g.grid == f.grid);
        REQUIRE(g.components() == 2);
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < f[c].size(); ++i) CHECK(f[c][i] == g[c][i]);
    }

    SECTION("sidecar documents the layout") {
        std::ifstream js(base + ".json");
        const nlohmann::json side = nlohmann::json::parse(js);
        CHECK(side.at("extent").get<std::vector<int>>() == std::vector<int>{64, 32});
        CHECK(side.at("byte_order").get<std::string>() == "little-endian");
    }

    SECTION("size mismatch against the sidecar is rejected") {
        std::ofstream bin(base + ".bin", std::ios::binary | std::ios::trunc);
        bin << "short";
        bin.close();
        CHECK_THROWS_AS(load_field(base), std::runtime_error);
    }
}

TEST_CASE("verification suite negative controls") {
    SECTION("shifted cutoff fails the partition check") {
        ExperimentConfig cfg = tiny_config("unused");
        const auto results = run_verification_suite(cfg, NegativeControl::ShiftedCutoff);
        REQUIRE_FALSE(results.empty());
        CHECK_FALSE(all_passed(results));
    }

    SECTION("inadmissible grid is refused at datum construction") {
        ExperimentConfig cfg = tiny_config("unused");
        const auto results = run_verification_suite(cfg, NegativeControl::InadmissibleGrid);
        REQUIRE_FALSE(results.empty());
        CHECK_FALSE(all_passed(results));
        bool saw_admissibility_failure = false;
        for (const auto& c : results)
            if (c.name == "datum_admissible" && !c.pass) saw_admissibility_failure = true;
        CHECK(saw_admissibility_failure);
    }
}
