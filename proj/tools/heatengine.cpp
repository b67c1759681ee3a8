// Command-line front end for the optomechanical heat-engine library.
//
//   heatengine --config run.ini [--output dir] [--format csv|json]
//              [--threads N] [--strict]
//
// The scenario comes from the config file: spectrum (polariton branches
// over a detuning range), cycle (full four-stroke master-equation run),
// sweep (analytic efficiency/work surfaces), bath (reduced lower-polariton
// evolution against its effective squeezed reservoir) or validate (check a
// config and report, run nothing).  Exit codes: 0 ok, 2 parse error,
// 3 validation error, 4 runtime failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "config.hpp"
#include "omhe/fock.hpp"
#include "omhe/normal_modes.hpp"
#include "omhe/otto.hpp"
#include "omhe/squeezed_bath.hpp"
#include "output.hpp"

namespace {

using namespace omhe;
using namespace omhe::cli;

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) out[k] = lo + (hi - lo) * double(k) / double(n - 1);
    return out;
}

void ensure_output_dir(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec)
        throw ValidationError({"output directory '" + cfg.output_dir + "': " + ec.message()});
    const fs::path probe = fs::path(cfg.output_dir) / ".heatengine_probe";
    {
        std::ofstream f(probe);
        if (!f)
            throw ValidationError({"output directory '" + cfg.output_dir + "' is not writable"});
    }
    fs::remove(probe, ec);
}

void print_written(const std::vector<std::string>& paths) {
    for (const std::string& p : paths) std::printf("wrote %s\n", p.c_str());
}

int run_spectrum(const RunConfig& cfg) {
    const SpectrumSpec& spec = *cfg.spectrum;
    SpectrumTable table;
    table.delta = linspace(spec.delta_min, spec.delta_max, spec.points);
    table.omega_A.reserve(spec.points);
    table.omega_B.reserve(spec.points);
    table.stable.reserve(spec.points);
    int n_stable = 0;
    for (double d : table.delta) {
        if (stability_check(d, cfg.params.g)) {
            const PolaritonSpectrum s = polariton_frequencies(d, cfg.params.g);
            table.omega_A.push_back(s.omega_A);
            table.omega_B.push_back(s.omega_B);
            table.stable.push_back(1);
            ++n_stable;
        } else {
            table.omega_A.push_back(std::nan(""));
            table.omega_B.push_back(std::nan(""));
            table.stable.push_back(0);
        }
    }
    std::printf("spectrum: delta in [%.6g, %.6g], g = %.6g, %d points (%d stable)\n",
                spec.delta_min, spec.delta_max, cfg.params.g, spec.points, n_stable);
    print_written(write_spectrum(cfg, table));
    return 0;
}

int run_cycle_scenario(const RunConfig& cfg) {
    const CycleRecord rec = run_cycle(*cfg.cycle);
    for (const Trajectory& t : rec.trajectories)
        for (const std::string& w : t.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    double drift = 0.0;
    for (const Trajectory& t : rec.trajectories) drift = std::max(drift, t.max_trace_drift);
    const WorkEfficiency ana =
        work_efficiency_analytic(cfg.cycle->delta_i, cfg.cycle->delta_f, cfg.params.g,
                                 cfg.params.nbar_a, cfg.params.nbar_b);

    std::printf("cycle: delta %.6g -> %.6g, g = %.6g\n", cfg.cycle->delta_i, cfg.cycle->delta_f,
                cfg.params.g);
    std::printf("W_tot = %.6g, eta = %.6g (analytic frequency-ratio eta = %.6g)\n", rec.W_tot,
                rec.eta, ana.eta_B);
    std::printf("Q2 = %.6g, Q4 = %.6g, ramp heats Q1 = %.6g, Q3 = %.6g\n", rec.Q2, rec.Q4, rec.Q1,
                rec.Q3);
    const double rel = rec.W_tot != 0.0 ? std::abs(rec.closure / rec.W_tot) : 0.0;
    std::printf("closure W1+W3+Q2+Q4 = %.6g (|closure/W_tot| = %.3g)\n", rec.closure, rel);
    std::printf("bare ledger residuals:");
    for (int k = 0; k < 4; ++k) {
        const BareLedger& b = rec.bare_ledger[k];
        const double gap =
            b.Q_a + b.W_a + b.Q_b + b.correlation_term - rec.strokes[k].delta_U;
        std::printf(" %.3g", gap);
    }
    std::printf("\n");
    std::printf("max trace drift = %.3g, final <N_B> gap = %.6g\n", drift, rec.final_NB_gap);
    print_written(write_cycle(cfg, rec));
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    const SweepSpec& spec = *cfg.sweep;
    const SweepMap map =
        sweep_map(spec.delta_i, linspace(spec.delta_f_min, spec.delta_f_max, spec.delta_f_points),
                  linspace(spec.g_min, spec.g_max, spec.g_points), cfg.params.nbar_a,
                  cfg.params.nbar_b, cfg.threads);

    int n_stable = 0;
    std::size_t best = map.efficiency.size();
    for (std::size_t k = 0; k < map.stable.size(); ++k) {
        if (!map.stable[k]) continue;
        ++n_stable;
        if (best == map.efficiency.size() || map.abs_work[k] > map.abs_work[best]) best = k;
    }
    std::printf("sweep: %d x %d grid at delta_i = %.6g, %d/%zu cells stable\n",
                spec.delta_f_points, spec.g_points, spec.delta_i, n_stable, map.stable.size());
    if (best < map.efficiency.size()) {
        const std::size_t i = best / map.g_axis.size(), j = best % map.g_axis.size();
        std::printf("largest |W| = %.6g at delta_f = %.6g, g = %.6g (eta = %.6g)\n",
                    map.abs_work[best], map.delta_f_axis[i], map.g_axis[j],
                    map.efficiency[best]);
    }
    print_written(write_sweep(cfg, map));
    return 0;
}

int run_bath(const RunConfig& cfg) {
    const BathSpec& spec = *cfg.bath;
    const SystemParams& p = cfg.params;
    BathResult res;
    const BogoliubovMatrices bog = bogoliubov_numeric(spec.delta, p.g);
    res.bath = effective_bath_exact(bog, p.kappa, p.gamma, p.nbar_a, p.nbar_b);
    res.decomposition = squeezing_decomposition(res.bath);
    res.steady = steady_variances(res.bath);
    res.omega_B = bog.spectrum.omega_B;
    const DensityMatrix rho0 = thermal_state(spec.initial_population, FockCutoff{spec.cutoff}).rho;
    res.trajectory = evolve_effective_B(res.bath, res.omega_B, rho0, spec.t, spec.dt);
    for (const std::string& w : res.trajectory.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());

    std::printf("effective bath at delta = %.6g, g = %.6g: Gamma_B = %.6g, Nbar_B = %.6g, "
                "Mbar = %.6g\n",
                spec.delta, p.g, res.bath.Gamma_B, res.bath.Nbar_B, res.bath.Mbar_real);
    std::printf("squeezing decomposition: N_th = %.6g, r = %.6g\n", res.decomposition.N_th,
                res.decomposition.r);
    std::printf("steady variances: var_X = %.6g, var_Y = %.6g (product %.6g, bound 0.25)\n",
                res.steady.var_X, res.steady.var_Y, res.steady.var_X * res.steady.var_Y);
    std::printf("final population = %.6g (steady value %.6g)\n",
                res.trajectory.population.back(), res.bath.Nbar_B);
    print_written(write_bath(cfg, res));
    return 0;
}

int run_validate(const RunConfig& cfg) {
    std::printf("heatengine %s: %s\n", kVersion, cfg.source_path.c_str());
    for (const std::string& line : resolved_parameters(cfg))
        std::printf("  %s\n", line.c_str());

    if (cfg.params.pump) {
        const MeanFieldState mf = mean_field(cfg.params.pump->alpha_in, cfg.params);
        std::printf("pump working point: alpha = %.6g, beta = %.6g, delta_p/omega_m = %.6g, "
                    "g = %.6g (fixed-point residual %.3g)\n",
                    mf.alpha, mf.beta, mf.delta_p / cfg.params.omega_m,
                    cfg.params.pump->g0 * mf.alpha / cfg.params.omega_m, mf.residual);
    }
    if (cfg.cycle) {
        const TimescaleReport rep = validate_timescales(*cfg.cycle);
        std::printf("timescale hierarchy:\n");
        for (const TimescaleCheck& c : rep.checks) {
            const char* level = c.level == CheckLevel::Pass ? "pass"
                                : c.level == CheckLevel::Warn ? "warn"
                                                              : "FAIL";
            std::printf("  %-4s  %-16s ratio %.3g\n", level, c.relation.c_str(), c.ratio);
        }
    }
    for (const std::string& w : cfg.warnings) std::printf("warning: %s\n", w.c_str());
    std::printf("configuration valid (%zu warning(s))\n", cfg.warnings.size());
    return 0;
}

int run(const RunConfig& cfg) {
    if (cfg.scenario != Scenario::Validate) ensure_output_dir(cfg);
    switch (cfg.scenario) {
        case Scenario::Spectrum: return run_spectrum(cfg);
        case Scenario::Cycle: return run_cycle_scenario(cfg);
        case Scenario::Sweep: return run_sweep(cfg);
        case Scenario::Bath: return run_bath(cfg);
        case Scenario::Validate: return run_validate(cfg);
    }
    return 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optomechanical heat-engine simulator"};
    app.set_version_flag("--version", kVersion);
    std::string config_path;
    app.add_option("--config", config_path, "path to the INI run configuration")->required();
    std::string output_dir, format;
    app.add_option("--output", output_dir, "output directory (overrides the config)");
    app.add_option("--format", format, "output format (overrides the config)")
        ->check(CLI::IsMember({"csv", "json"}));
    int threads = 0;
    app.add_option("--threads", threads, "worker threads for the sweep scenario")
        ->check(CLI::PositiveNumber);
    bool strict = false;
    app.add_flag("--strict", strict, "treat configuration warnings as errors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunConfig cfg;
    try {
        cfg = omhe::cli::parse_config(config_path);
    } catch (const omhe::cli::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 3;
    } catch (const omhe::cli::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    }

    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (!format.empty())
        cfg.format = format == "json" ? omhe::cli::OutputFormat::Json
                                      : omhe::cli::OutputFormat::Csv;
    if (threads > 0) cfg.threads = threads;
    if (strict) cfg.strict = true;

    if (cfg.strict && !cfg.warnings.empty()) {
        std::fprintf(stderr, "strict: %zu warning(s) promoted to errors\n", cfg.warnings.size());
        for (const std::string& w : cfg.warnings)
            std::fprintf(stderr, "  - %s\n", w.c_str());
        return 3;
    }
    for (const std::string& w : cfg.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    try {
        return run(cfg);
    } catch (const omhe::cli::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 4;
    }
}
