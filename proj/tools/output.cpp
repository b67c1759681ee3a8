#include "output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace omhe::cli {

namespace {

using nlohmann::json;

std::string join(const RunConfig& cfg, const char* name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

// The header block lists the physics configuration only; where the file
// lives, the format and the thread count leave the numbers unchanged and
// would break byte-for-byte comparisons between equivalent runs.
std::string header_block(const RunConfig& cfg) {
    std::string out = std::string("# heatengine ") + kVersion + "\n";
    for (const std::string& line : resolved_parameters(cfg)) out += "# " + line + "\n";
    return out;
}

json parameters_json(const RunConfig& cfg) {
    json p;
    p["scenario"] = scenario_name(cfg.scenario);
    json sys;
    sys["omega_m"] = cfg.params.omega_m;
    sys["delta"] = cfg.params.delta;
    sys["g"] = cfg.params.g;
    sys["kappa"] = cfg.params.kappa;
    sys["gamma"] = cfg.params.gamma;
    sys["nbar_a"] = cfg.params.nbar_a;
    sys["nbar_b"] = cfg.params.nbar_b;
    p["system"] = sys;
    if (cfg.params.pump) {
        const PumpParams& pp = *cfg.params.pump;
        p["pump"] = {{"g0", pp.g0},
                     {"alpha_in", pp.alpha_in},
                     {"omega_c", pp.omega_c},
                     {"omega_p", pp.omega_p},
                     {"mass", pp.mass}};
    }
    if (cfg.spectrum) {
        const SpectrumSpec& s = *cfg.spectrum;
        p["spectrum"] = {{"delta_min", s.delta_min},
                         {"delta_max", s.delta_max},
                         {"points", s.points}};
    }
    if (cfg.cycle) {
        const CycleConfig& c = *cfg.cycle;
        p["cycle"] = {{"delta_i", c.delta_i},   {"delta_f", c.delta_f},
                      {"tau1", c.tau[0]},       {"tau2", c.tau[1]},
                      {"tau3", c.tau[2]},       {"tau4", c.tau[3]},
                      {"cutoff_a", c.optical.n_max}, {"cutoff_b", c.mechanical.n_max},
                      {"dt_ramp", c.dt.ramp},   {"dt_hold", c.dt.hold}};
    }
    if (cfg.sweep) {
        const SweepSpec& s = *cfg.sweep;
        p["sweep"] = {{"delta_i", s.delta_i},
                      {"delta_f_min", s.delta_f_min},
                      {"delta_f_max", s.delta_f_max},
                      {"delta_f_points", s.delta_f_points},
                      {"g_min", s.g_min},
                      {"g_max", s.g_max},
                      {"g_points", s.g_points}};
    }
    if (cfg.bath) {
        const BathSpec& b = *cfg.bath;
        p["bath"] = {{"delta", b.delta},
                     {"t", b.t},
                     {"dt", b.dt},
                     {"cutoff", b.cutoff},
                     {"initial_population", b.initial_population}};
    }
    return p;
}

json document(const RunConfig& cfg) {
    json doc;
    doc["version"] = kVersion;
    doc["scenario"] = scenario_name(cfg.scenario);
    doc["parameters"] = parameters_json(cfg);
    return doc;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

const char* level_name(CheckLevel level) {
    switch (level) {
        case CheckLevel::Pass: return "pass";
        case CheckLevel::Warn: return "warn";
        case CheckLevel::Fail: return "fail";
    }
    return "?";
}

json trajectory_json(const Trajectory& traj) {
    json t;
    t["times"] = traj.times;
    t["deltas"] = traj.deltas;
    t["n_a"] = traj.n_a;
    t["n_b"] = traj.n_b;
    t["N_A"] = traj.N_A;
    t["N_B"] = traj.N_B;
    t["energy"] = traj.energy;
    t["purity"] = traj.purity;
    t["coupling"] = traj.coupling;
    t["max_trace_drift"] = traj.max_trace_drift;
    t["max_hermiticity_defect"] = traj.max_hermiticity_defect;
    t["warnings"] = traj.warnings;
    return t;
}

}  // namespace

std::string fmt_cell(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string fmt_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> resolved_parameters(const RunConfig& cfg) {
    std::vector<std::string> out;
    auto num = [&](const std::string& key, double v) { out.push_back(key + " = " + fmt_value(v)); };
    auto integer = [&](const std::string& key, int v) {
        out.push_back(key + " = " + std::to_string(v));
    };

    out.push_back(std::string("scenario = ") + scenario_name(cfg.scenario));
    num("system.omega_m", cfg.params.omega_m);
    num("system.delta", cfg.params.delta);
    num("system.g", cfg.params.g);
    num("system.kappa", cfg.params.kappa);
    num("system.gamma", cfg.params.gamma);
    num("system.nbar_a", cfg.params.nbar_a);
    num("system.nbar_b", cfg.params.nbar_b);
    if (cfg.params.pump) {
        const PumpParams& pp = *cfg.params.pump;
        num("pump.g0", pp.g0);
        num("pump.alpha_in", pp.alpha_in);
        num("pump.omega_c", pp.omega_c);
        num("pump.omega_p", pp.omega_p);
        num("pump.mass", pp.mass);
    }
    if (cfg.spectrum) {
        num("spectrum.delta_min", cfg.spectrum->delta_min);
        num("spectrum.delta_max", cfg.spectrum->delta_max);
        integer("spectrum.points", cfg.spectrum->points);
    }
    if (cfg.cycle) {
        const CycleConfig& c = *cfg.cycle;
        num("cycle.delta_i", c.delta_i);
        num("cycle.delta_f", c.delta_f);
        num("cycle.tau1", c.tau[0]);
        num("cycle.tau2", c.tau[1]);
        num("cycle.tau3", c.tau[2]);
        num("cycle.tau4", c.tau[3]);
        integer("cycle.cutoff_a", c.optical.n_max);
        integer("cycle.cutoff_b", c.mechanical.n_max);
        num("cycle.dt_ramp", c.dt.ramp);
        num("cycle.dt_hold", c.dt.hold);
    }
    if (cfg.sweep) {
        const SweepSpec& s = *cfg.sweep;
        num("sweep.delta_i", s.delta_i);
        num("sweep.delta_f_min", s.delta_f_min);
        num("sweep.delta_f_max", s.delta_f_max);
        integer("sweep.delta_f_points", s.delta_f_points);
        num("sweep.g_min", s.g_min);
        num("sweep.g_max", s.g_max);
        integer("sweep.g_points", s.g_points);
    }
    if (cfg.bath) {
        const BathSpec& b = *cfg.bath;
        num("bath.delta", b.delta);
        num("bath.t", b.t);
        num("bath.dt", b.dt);
        integer("bath.cutoff", b.cutoff);
        num("bath.initial_population", b.initial_population);
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::string> write_spectrum(const RunConfig& cfg, const SpectrumTable& table) {
    if (cfg.format == OutputFormat::Json) {
        json doc = document(cfg);
        json t;
        t["delta"] = table.delta;
        t["omega_A"] = table.omega_A;
        t["omega_B"] = table.omega_B;
        t["stable"] = std::vector<int>(table.stable.begin(), table.stable.end());
        doc["table"] = t;
        const std::string path = join(cfg, "spectrum.json");
        write_text_file(path, dump(doc));
        return {path};
    }
    std::string out = header_block(cfg);
    out += "delta,omega_A,omega_B,stable\n";
    for (std::size_t k = 0; k < table.delta.size(); ++k) {
        out += fmt_cell(table.delta[k]) + ',' + fmt_cell(table.omega_A[k]) + ',' +
               fmt_cell(table.omega_B[k]) + ',' + std::to_string(int(table.stable[k])) + '\n';
    }
    const std::string path = join(cfg, "spectrum.csv");
    write_text_file(path, out);
    return {path};
}

std::vector<std::string> write_cycle(const RunConfig& cfg, const CycleRecord& rec) {
    if (cfg.format == OutputFormat::Json) {
        json doc = document(cfg);
        json record;
        record["node_energies"] = rec.node_energies;
        record["analytic_nodes"] = rec.analytic_nodes;
        record["W1"] = rec.W1;
        record["Q2"] = rec.Q2;
        record["W3"] = rec.W3;
        record["Q4"] = rec.Q4;
        record["Q1"] = rec.Q1;
        record["Q3"] = rec.Q3;
        record["W_tot"] = rec.W_tot;
        record["eta"] = rec.eta;
        record["closure"] = rec.closure;
        record["final_NB_gap"] = rec.final_NB_gap;
        json strokes = json::array();
        for (const StrokeLedger& s : rec.strokes)
            strokes.push_back({{"work", s.work}, {"heat", s.heat}, {"delta_U", s.delta_U}});
        record["strokes"] = strokes;
        json bare = json::array();
        for (const BareLedger& b : rec.bare_ledger)
            bare.push_back({{"Q_a", b.Q_a},
                            {"Q_b", b.Q_b},
                            {"W_a", b.W_a},
                            {"correlation_term", b.correlation_term}});
        record["bare_ledger"] = bare;
        json checks = json::array();
        for (const TimescaleCheck& c : rec.timescales.checks)
            checks.push_back({{"relation", c.relation},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"ratio", c.ratio},
                              {"level", level_name(c.level)}});
        record["timescales"] = {{"checks", checks},
                                {"warnings", rec.timescales.warnings},
                                {"failures", rec.timescales.failures}};
        json trajs = json::array();
        for (const Trajectory& t : rec.trajectories) trajs.push_back(trajectory_json(t));
        record["trajectories"] = trajs;
        doc["record"] = record;
        const std::string path = join(cfg, "cycle.json");
        write_text_file(path, dump(doc));
        return {path};
    }

    std::string traj_csv = header_block(cfg);
    traj_csv += "t,n_a,n_b,N_A,N_B,energy,purity\n";
    for (const Trajectory& t : rec.trajectories) {
        for (std::size_t k = 0; k < t.times.size(); ++k) {
            traj_csv += fmt_cell(t.times[k]) + ',' + fmt_cell(t.n_a[k]) + ',' +
                        fmt_cell(t.n_b[k]) + ',' + fmt_cell(t.N_A[k]) + ',' +
                        fmt_cell(t.N_B[k]) + ',' + fmt_cell(t.energy[k]) + ',' +
                        fmt_cell(t.purity[k]) + '\n';
        }
    }
    const std::string traj_path = join(cfg, "cycle_trajectory.csv");
    write_text_file(traj_path, traj_csv);

    std::string ledger = header_block(cfg);
    ledger += "quantity,value\n";
    auto row = [&](const std::string& name, double v) {
        ledger += name + ',' + fmt_cell(v) + '\n';
    };
    row("W1", rec.W1);
    row("Q1", rec.Q1);
    row("Q2", rec.Q2);
    row("W3", rec.W3);
    row("Q3", rec.Q3);
    row("Q4", rec.Q4);
    row("W_tot", rec.W_tot);
    row("eta", rec.eta);
    row("closure", rec.closure);
    row("final_NB_gap", rec.final_NB_gap);
    for (int k = 0; k < 4; ++k) row("node_energy_" + std::to_string(k + 1), rec.node_energies[k]);
    for (int k = 0; k < 4; ++k) row("analytic_node_" + std::to_string(k + 1), rec.analytic_nodes[k]);
    for (int k = 0; k < 4; ++k) {
        const std::string s = "stroke" + std::to_string(k + 1) + "_";
        row(s + "work", rec.strokes[k].work);
        row(s + "heat", rec.strokes[k].heat);
        row(s + "delta_U", rec.strokes[k].delta_U);
        row(s + "Q_a", rec.bare_ledger[k].Q_a);
        row(s + "Q_b", rec.bare_ledger[k].Q_b);
        row(s + "W_a", rec.bare_ledger[k].W_a);
        row(s + "correlation_term", rec.bare_ledger[k].correlation_term);
        row(s + "max_trace_drift", rec.trajectories[k].max_trace_drift);
    }
    const std::string ledger_path = join(cfg, "cycle_ledger.csv");
    write_text_file(ledger_path, ledger);
    return {traj_path, ledger_path};
}

std::vector<std::string> write_sweep(const RunConfig& cfg, const SweepMap& map) {
    if (cfg.format == OutputFormat::Json) {
        json doc = document(cfg);
        json m;
        m["delta_f_axis"] = map.delta_f_axis;
        m["g_axis"] = map.g_axis;
        m["efficiency"] = map.efficiency;
        m["abs_work"] = map.abs_work;
        m["stable"] = std::vector<int>(map.stable.begin(), map.stable.end());
        doc["map"] = m;
        const std::string path = join(cfg, "sweep.json");
        write_text_file(path, dump(doc));
        return {path};
    }
    std::string out = header_block(cfg);
    out += "delta_f,g,efficiency,abs_work,stable\n";
    for (std::size_t i = 0; i < map.delta_f_axis.size(); ++i) {
        for (std::size_t j = 0; j < map.g_axis.size(); ++j) {
            const std::size_t k = map.index(i, j);
            out += fmt_cell(map.delta_f_axis[i]) + ',' + fmt_cell(map.g_axis[j]) + ',' +
                   fmt_cell(map.efficiency[k]) + ',' + fmt_cell(map.abs_work[k]) + ',' +
                   std::to_string(int(map.stable[k])) + '\n';
        }
    }
    const std::string path = join(cfg, "sweep.csv");
    write_text_file(path, out);
    return {path};
}

std::vector<std::string> write_bath(const RunConfig& cfg, const BathResult& res) {
    if (cfg.format == OutputFormat::Json) {
        json doc = document(cfg);
        doc["bath"] = {{"Gamma_B", res.bath.Gamma_B},
                       {"Nbar_B", res.bath.Nbar_B},
                       {"Mbar_abs", std::abs(res.bath.Mbar_B)},
                       {"Mbar_real", res.bath.Mbar_real},
                       {"rotation_angle", res.bath.rotation_angle}};
        doc["decomposition"] = {{"N_th", res.decomposition.N_th}, {"r", res.decomposition.r}};
        doc["steady"] = {{"var_X", res.steady.var_X}, {"var_Y", res.steady.var_Y}};
        doc["omega_B"] = res.omega_B;
        const EffectiveTrajectory& t = res.trajectory;
        doc["trajectory"] = {{"times", t.times},           {"population", t.population},
                             {"var_X", t.var_X},           {"var_Y", t.var_Y},
                             {"purity", t.purity},         {"max_trace_drift", t.max_trace_drift},
                             {"warnings", t.warnings}};
        const std::string path = join(cfg, "bath.json");
        write_text_file(path, dump(doc));
        return {path};
    }
    std::string out = header_block(cfg);
    auto derived = [&](const std::string& name, double v) {
        out += "# " + name + " = " + fmt_value(v) + "\n";
    };
    derived("omega_B", res.omega_B);
    derived("Gamma_B", res.bath.Gamma_B);
    derived("Nbar_B", res.bath.Nbar_B);
    derived("Mbar_abs", std::abs(res.bath.Mbar_B));
    derived("Mbar_real", res.bath.Mbar_real);
    derived("rotation_angle", res.bath.rotation_angle);
    derived("N_th", res.decomposition.N_th);
    derived("r", res.decomposition.r);
    derived("var_X_steady", res.steady.var_X);
    derived("var_Y_steady", res.steady.var_Y);
    for (const std::string& w : res.trajectory.warnings) out += "# warning: " + w + "\n";
    out += "t,population,var_X,var_Y,purity\n";
    const EffectiveTrajectory& t = res.trajectory;
    for (std::size_t k = 0; k < t.times.size(); ++k) {
        out += fmt_cell(t.times[k]) + ',' + fmt_cell(t.population[k]) + ',' +
               fmt_cell(t.var_X[k]) + ',' + fmt_cell(t.var_Y[k]) + ',' + fmt_cell(t.purity[k]) +
               '\n';
    }
    const std::string path = join(cfg, "bath.csv");
    write_text_file(path, out);
    return {path};
}

}  // namespace omhe::cli
