#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpch/dyadic.hpp"
#include "lpch/field_io.hpp"
#include "lpch/initial_data.hpp"
#include "lpch/solver.hpp"
#include "lpch/util.hpp"

namespace lpch {

inline constexpr const char* kVersion = "0.1.0";

/// Everything one reproducible run needs: the datum parameters, grid sizing,
/// stepping policy, and the (eps, n) probe lattice for t = eps * 2^{-kn}.
struct ExperimentConfig {
    InitialDataSpec spec{};
    double length = kDefaultPeriod;
    int grid_m = 0;          // axis-1 points per axis; 0 selects the smallest admissible power of two
    int grid_m_perp = 128;   // points along axes >= 2
    int baseline_grid_m = 512;
    double dealias = kDealiasFraction;
    int steps_per_run = 8;   // RK4 substeps from 0 to each probe time
    std::vector<double> eps_list{0.02, 0.05, 0.1};
    std::vector<int> n_list{1, 2, 3};
    std::uint64_t seed = 20260810;
    std::string out_dir = "out";
};

inline void validate(const ExperimentConfig& cfg) {
    for (double e : cfg.eps_list)
        if (!(e > 0.0) || e > 1.0)
            throw std::invalid_argument("ExperimentConfig: eps values must lie in (0, 1]");
    if (cfg.eps_list.empty() || cfg.n_list.empty())
        throw std::invalid_argument("ExperimentConfig: eps_list and n_list must be nonempty");
    for (int n : cfg.n_list)
        if (n < 1 || n > cfg.spec.n_max)
            throw std::invalid_argument("ExperimentConfig: probed block indices must lie in 1..N");
    if (cfg.steps_per_run < 1)
        throw std::invalid_argument("ExperimentConfig: steps_per_run must be >= 1");
    if (cfg.grid_m_perp < 32)
        throw std::invalid_argument("ExperimentConfig: perpendicular extent must be >= 32");
}

/// Smallest power-of-two axis-1 extent admissible for the spec, or the
/// explicitly configured one (validated).
inline TorusGrid make_experiment_grid(const ExperimentConfig& cfg) {
    auto assemble = [&](int m0) {
        std::vector<int> extent(static_cast<std::size_t>(cfg.spec.d), cfg.grid_m_perp);
        extent[0] = m0;
        return TorusGrid(cfg.length, extent);
    };
    if (cfg.grid_m > 0) {
        TorusGrid grid = assemble(cfg.grid_m);
        validate(cfg.spec, grid);
        return grid;
    }
    for (int m0 = 64; m0 <= (1 << 22); m0 *= 2) {
        TorusGrid grid = assemble(m0);
        try {
            validate(cfg.spec, grid);
            return grid;
        } catch (const std::invalid_argument&) {
        }
    }
    throw std::invalid_argument("make_experiment_grid: no admissible axis-1 extent up to 2^22");
}

/// One sweep cell. All norms use the spec's exponent p and third index inf.
struct ExperimentRecord {
    int k = 0;
    int n = 0;
    double eps = 0;
    double t = 0;
    double block_norm = 0;       // 2^{kn sigma} ||Delta_kn (u(t)-u0)||_{L^p}
    double besov_sigma_diff = 0; // ||u(t)-u0||_{B^sigma_{p,inf}}
    double v0_block = 0;         // t 2^{kn sigma} ||Delta_kn v0||_{L^p}
    double w_bound = 0;          // 2^{2kn} ||w||_{B^{sigma-2}_{p,inf}}
    bool complete = true;
};

inline std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
    std::ostringstream out;
    out << "k,n,eps,t,block_norm,besov_sigma_diff,v0_block,w_bound\n";
    for (const auto& r : records)
        out << r.k << ',' << r.n << ',' << format_full(r.eps) << ',' << format_full(r.t) << ','
            << format_full(r.block_norm) << ',' << format_full(r.besov_sigma_diff) << ','
            << format_full(r.v0_block) << ',' << format_full(r.w_bound) << '\n';
    return out.str();
}

namespace detail {

inline void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["initial_data"] = {{"d", cfg.spec.d}, {"k", cfg.spec.k}, {"N", cfg.spec.n_max},
                         {"sigma", cfg.spec.sigma}, {"p", std::isinf(cfg.spec.p) ? -1.0 : cfg.spec.p}};
    j["grid"] = {{"m", cfg.grid_m}, {"m_perp", cfg.grid_m_perp}, {"baseline_m", cfg.baseline_grid_m},
                 {"period", cfg.length}};
    j["solver"] = {{"steps_per_run", cfg.steps_per_run}, {"dealias", cfg.dealias}};
    j["sweep"] = {{"eps", cfg.eps_list}, {"n_list", cfg.n_list}, {"seed", cfg.seed}};
    j["output"] = {{"dir", cfg.out_dir}};
    return j;
}

/// Runs the probe cells for one datum: for every (n, eps), integrate from the
/// datum to t = eps 2^{-kn} and measure the record columns.
inline std::vector<ExperimentRecord> run_cells(const SpectralField& datum, const ExperimentConfig& cfg,
                                               const DyadicPartition& part, std::ostream* log,
                                               nlohmann::json* timings) {
    const int k = cfg.spec.k;
    const double sigma = cfg.spec.sigma;
    const double p = cfg.spec.p;
    const SpectralField v0 = rhs(datum, cfg.dealias);

    std::vector<int> ns = cfg.n_list;
    std::vector<double> epss = cfg.eps_list;
    std::sort(ns.begin(), ns.end());
    std::sort(epss.begin(), epss.end());

    std::vector<ExperimentRecord> records;
    for (int n : ns) {
        const double scale = std::pow(2.0, -static_cast<double>(k) * n);
        const double block_weight = std::pow(2.0, static_cast<double>(k) * n * sigma);
        for (double eps : epss) {
            const double t = eps * scale;
            const auto start = std::chrono::steady_clock::now();

            ExperimentRecord rec;
            rec.k = k;
            rec.n = n;
            rec.eps = eps;
            rec.t = t;
            rec.v0_block = t * block_weight * block_lp_norm(v0, k * n, part, p);

            SolverConfig solver;
            solver.dt = t / cfg.steps_per_run;
            solver.dealias = cfg.dealias;
            bool visited = false;
            SolverDiagnostics diag =
                integrate_deviation(datum, solver, {t}, [&](double, const SpectralField& delta) {
                    visited = true;
                    rec.block_norm = block_weight * block_lp_norm(delta, k * n, part, p);
                    rec.besov_sigma_diff = besov_norm(delta, BesovParams{sigma, p, kInf}, part);
                    SpectralField w = delta;
                    axpy(w, -t, v0);
                    rec.w_bound = std::pow(2.0, 2.0 * k * n) *
                                  besov_norm(w, BesovParams{sigma - 2.0, p, kInf}, part);
                });
            if (!visited || diag.halted) {
                rec.complete = false;
                const double q = std::numeric_limits<double>::quiet_NaN();
                rec.block_norm = rec.besov_sigma_diff = rec.v0_block = rec.w_bound = q;
            }
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (timings)
                (*timings)["cell_n" + std::to_string(n) + "_eps" + format_full(eps)] = secs;
            if (log)
                *log << "  cell n=" << n << " eps=" << eps << " t=" << t
                     << (rec.complete ? "" : "  [halted]") << "  (" << secs << " s)\n";
            records.push_back(rec);
        }
    }
    return records;
}

} // namespace detail

/// Norm-inflation sweep from the lacunary datum. Writes sweep.csv and
/// manifest.json under cfg.out_dir and returns the records in (n, eps) order.
inline std::vector<ExperimentRecord> run_inflation_sweep(const ExperimentConfig& cfg,
                                                         std::ostream* log = nullptr,
                                                         bool save_fields = false) {
    validate(cfg);
    const TorusGrid grid = make_experiment_grid(cfg);
    const DyadicPartition part(grid);
    const SpectralField u0 = build_u0(cfg.spec, grid);

    nlohmann::json timings;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ExperimentRecord> records = detail::run_cells(u0, cfg, part, log, &timings);
    timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    double eps0 = kInf;
    nlohmann::json incomplete = nlohmann::json::array();
    for (const auto& r : records) {
        if (r.complete)
            eps0 = std::min(eps0, r.block_norm / r.eps);
        else
            incomplete.push_back({{"n", r.n}, {"eps", r.eps}});
    }

    const std::filesystem::path dir(cfg.out_dir);
    detail::write_text_file((dir / "sweep.csv").string(), records_to_csv(records));
    nlohmann::json manifest;
    manifest["command"] = "sweep";
    manifest["version"] = kVersion;
    manifest["config"] = detail::config_to_json(cfg);
    manifest["grid_extent"] = grid.extent();
    manifest["epsilon0_measured"] = std::isinf(eps0) ? -1.0 : eps0;
    manifest["incomplete_cells"] = incomplete;
    manifest["timings_s"] = timings;
    detail::write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    if (save_fields) save_field(u0, (dir / "u0").string());
    if (log) *log << "epsilon0 measured (min block_norm/eps): " << (std::isinf(eps0) ? -1.0 : eps0) << "\n";
    return records;
}

/// Control experiment: the same probe cells run from the smooth single-block
/// datum 2^{-k sigma} f_1^k, whose difference norms vanish linearly in t.
inline std::vector<ExperimentRecord> run_smooth_baseline(const ExperimentConfig& cfg,
                                                         std::ostream* log = nullptr,
                                                         bool save_fields = false) {
    validate(cfg);
    std::vector<int> extent(static_cast<std::size_t>(cfg.spec.d), cfg.grid_m_perp);
    extent[0] = cfg.baseline_grid_m;
    const TorusGrid grid(cfg.length, extent);
    const DyadicPartition part(grid);
    SpectralField datum = f_profile(cfg.spec.k, 1, grid);
    scale(datum, std::pow(2.0, -cfg.spec.k * cfg.spec.sigma));

    nlohmann::json timings;
    std::vector<ExperimentRecord> records = detail::run_cells(datum, cfg, part, log, &timings);

    const std::filesystem::path dir(cfg.out_dir);
    detail::write_text_file((dir / "baseline.csv").string(), records_to_csv(records));
    nlohmann::json manifest;
    manifest["command"] = "baseline";
    manifest["version"] = kVersion;
    manifest["config"] = detail::config_to_json(cfg);
    manifest["grid_extent"] = grid.extent();
    manifest["timings_s"] = timings;
    detail::write_text_file((dir / "baseline_manifest.json").string(), manifest.dump(2) + "\n");
    if (save_fields) save_field(datum, (dir / "baseline_datum").string());
    return records;
}

} // namespace lpch
