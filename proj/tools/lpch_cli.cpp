// Command-line front end: configures the lacunary datum, runs the inflation
// sweep and its smooth baseline, executes the verification suite, and
// evaluates Besov norms of stored field snapshots.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lpch/config_file.hpp"
#include "lpch/dyadic.hpp"
#include "lpch/experiment.hpp"
#include "lpch/field_io.hpp"
#include "lpch/util.hpp"
#include "lpch/verification.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    lpch::ExperimentConfig cfg;
    std::string p_text;
};

void add_common_flags(CLI::App* app, CommonFlags& flags) {
    app->add_option("-c,--config", flags.config_path, "key = value config file (sections per module)");
    app->add_option("--d", flags.cfg.spec.d, "spatial dimension");
    app->add_option("--k", flags.cfg.spec.k, "lacunarity parameter");
    app->add_option("--N", flags.cfg.spec.n_max, "truncation of the lacunary sum");
    app->add_option("--sigma", flags.cfg.spec.sigma, "Besov regularity sigma");
    app->add_option("--p", flags.p_text, "Lebesgue exponent p (number or 'inf')");
    app->add_option("--grid-m", flags.cfg.grid_m, "axis-1 grid points (0 = auto)");
    app->add_option("--grid-m-perp", flags.cfg.grid_m_perp, "grid points along the other axes");
    app->add_option("--baseline-m", flags.cfg.baseline_grid_m, "axis-1 grid points for the baseline datum");
    app->add_option("--steps", flags.cfg.steps_per_run, "RK4 substeps per probe time");
    app->add_option("--eps", [&flags](const std::vector<std::string>& vals) {
        flags.cfg.eps_list = lpch::detail::parse_double_list(vals.at(0));
        return true;
    }, "comma-separated eps values for t = eps 2^{-kn}");
    app->add_option("--n-list", [&flags](const std::vector<std::string>& vals) {
        flags.cfg.n_list = lpch::detail::parse_int_list(vals.at(0));
        return true;
    }, "comma-separated block indices to probe");
    app->add_option("--seed", flags.cfg.seed, "seed for randomized checks");
    app->add_option("--out", flags.cfg.out_dir, "output directory");
}

lpch::ExperimentConfig resolve(CommonFlags& flags, CLI::App* app) {
    lpch::ExperimentConfig cfg;
    if (!flags.config_path.empty()) lpch::apply_config_file(flags.config_path, cfg);
    // Flags override file values.
    auto take = [&](const char* name, auto& dst, const auto& src) {
        if (app->count(name) > 0) dst = src;
    };
    take("--d", cfg.spec.d, flags.cfg.spec.d);
    take("--k", cfg.spec.k, flags.cfg.spec.k);
    take("--N", cfg.spec.n_max, flags.cfg.spec.n_max);
    take("--sigma", cfg.spec.sigma, flags.cfg.spec.sigma);
    if (app->count("--p") > 0) cfg.spec.p = lpch::detail::parse_exponent(flags.p_text);
    take("--grid-m", cfg.grid_m, flags.cfg.grid_m);
    take("--grid-m-perp", cfg.grid_m_perp, flags.cfg.grid_m_perp);
    take("--baseline-m", cfg.baseline_grid_m, flags.cfg.baseline_grid_m);
    take("--steps", cfg.steps_per_run, flags.cfg.steps_per_run);
    take("--eps", cfg.eps_list, flags.cfg.eps_list);
    take("--n-list", cfg.n_list, flags.cfg.n_list);
    take("--seed", cfg.seed, flags.cfg.seed);
    take("--out", cfg.out_dir, flags.cfg.out_dir);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Littlewood-Paley toolkit for the higher-dimensional Camassa-Holm norm-inflation experiment"};
    app.require_subcommand(1);

    CommonFlags sweep_flags, baseline_flags, verify_flags;
    bool sweep_save_fields = false, baseline_save_fields = false;
    std::string control_name = "none";

    CLI::App* sweep = app.add_subcommand("sweep", "run the norm-inflation sweep and write CSV");
    add_common_flags(sweep, sweep_flags);
    sweep->add_flag("--save-fields", sweep_save_fields, "dump the datum as a raw coefficient snapshot");

    CLI::App* baseline = app.add_subcommand("baseline", "run the smooth single-block control sweep");
    add_common_flags(baseline, baseline_flags);
    baseline->add_flag("--save-fields", baseline_save_fields, "dump the baseline datum snapshot");

    CLI::App* verify = app.add_subcommand("verify", "run the verification suite (nonzero exit on failure)");
    add_common_flags(verify, verify_flags);
    verify->add_option("--negative-control", control_name,
                       "inject a defect: none | shifted-cutoff | inadmissible-grid");

    std::string field_path, r_text = "inf", norms_p_text = "2";
    double norm_s = 0.0;
    CLI::App* norms = app.add_subcommand("norms", "Besov norm of a stored field snapshot");
    norms->add_option("--field", field_path, "snapshot base path (expects .bin and .json)")->required();
    norms->add_option("--s", norm_s, "regularity s")->required();
    norms->add_option("--p", norms_p_text, "Lebesgue exponent (number or 'inf')");
    norms->add_option("--r", r_text, "summation exponent (number or 'inf')");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            lpch::ExperimentConfig cfg = resolve(sweep_flags, sweep);
            std::cout << "inflation sweep: k=" << cfg.spec.k << " N=" << cfg.spec.n_max
                      << " sigma=" << cfg.spec.sigma << "\n";
            lpch::run_inflation_sweep(cfg, &std::cout, sweep_save_fields);
            std::cout << "wrote " << cfg.out_dir << "/sweep.csv\n";
        } else if (baseline->parsed()) {
            lpch::ExperimentConfig cfg = resolve(baseline_flags, baseline);
            std::cout << "smooth baseline sweep (single-block datum)\n";
            const auto records = lpch::run_smooth_baseline(cfg, &std::cout, baseline_save_fields);
            std::vector<double> ts, vals;
            for (const auto& r : records)
                if (r.complete && r.besov_sigma_diff > 0) {
                    ts.push_back(r.t);
                    vals.push_back(r.besov_sigma_diff);
                }
            if (ts.size() >= 2)
                std::cout << "baseline log-log slope of ||u(t)-u0||_{B^sigma}: "
                          << lpch::loglog_slope(ts, vals) << "\n";
            std::cout << "wrote " << cfg.out_dir << "/baseline.csv\n";
        } else if (verify->parsed()) {
            lpch::ExperimentConfig cfg = resolve(verify_flags, verify);
            lpch::NegativeControl control = lpch::NegativeControl::None;
            if (control_name == "shifted-cutoff") control = lpch::NegativeControl::ShiftedCutoff;
            else if (control_name == "inadmissible-grid") control = lpch::NegativeControl::InadmissibleGrid;
            else if (control_name != "none") throw std::runtime_error("unknown negative control " + control_name);
            const auto results = lpch::run_verification_suite(cfg, control, &std::cout);
            const bool ok = lpch::all_passed(results);
            std::cout << (ok ? "verification suite: all checks passed\n"
                             : "verification suite: FAILURES present\n");
            return ok ? 0 : 1;
        } else if (norms->parsed()) {
            const lpch::SpectralField f = lpch::load_field(field_path);
            const lpch::DyadicPartition part(f.grid);
            const lpch::BesovParams params{norm_s, lpch::detail::parse_exponent(norms_p_text),
                                           lpch::detail::parse_exponent(r_text)};
            std::cout << lpch::format_full(lpch::besov_norm(f, params, part)) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
