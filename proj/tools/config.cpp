#include "config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "omhe/fock.hpp"
#include "omhe/normal_modes.hpp"

namespace omhe::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string join_problems(const std::vector<std::string>& v) {
    std::string out = std::to_string(v.size()) + " configuration problem(s)";
    for (const std::string& p : v) out += "\n  - " + p;
    return out;
}

struct IniEntry {
    std::string value;
    int line = 0;
    bool used = false;
};
using IniSection = std::map<std::string, IniEntry>;

// Comments start at '#' or ';' anywhere on a line.  Keys before the first
// [section] header belong to the top level.
std::map<std::string, IniSection> read_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open config file");

    std::map<std::string, IniSection> sections;
    sections[""];
    std::string current;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + " line " + std::to_string(lineno);
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ParseError(where + ": malformed section header '" + line + "'");
            current = trim(line.substr(1, line.size() - 2));
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(where + ": expected key = value");
        auto [it, inserted] = sections[current].emplace(key, IniEntry{value, lineno, false});
        if (!inserted)
            throw ParseError(where + ": duplicate key '" + key + "' (first set on line " +
                             std::to_string(it->second.line) + ")");
    }
    return sections;
}

// Typed access to one section.  finish() rejects keys nothing consumed, so
// misspelled entries fail loudly instead of silently taking defaults.
class SectionReader {
  public:
    SectionReader(const std::string& path, std::string name, IniSection* sec)
        : path_(path), name_(std::move(name)), sec_(sec) {}

    bool has(const std::string& key) const { return sec_ && sec_->count(key) > 0; }

    std::string text(const std::string& key, const std::string& fallback) {
        const IniEntry* e = fetch(key);
        return e ? e->value : fallback;
    }

    double number(const std::string& key, double fallback) {
        const IniEntry* e = fetch(key);
        return e ? parse_number(key, e->value) : fallback;
    }

    double require_number(const std::string& key) {
        const IniEntry* e = fetch(key);
        if (!e)
            throw ParseError(path_ + ": missing required key '" + key + "' in " + label());
        return parse_number(key, e->value);
    }

    int integer(const std::string& key, int fallback) {
        const IniEntry* e = fetch(key);
        if (!e) return fallback;
        char* end = nullptr;
        const long v = std::strtol(e->value.c_str(), &end, 10);
        if (end != e->value.c_str() + e->value.size())
            throw ParseError(bad_value(key, e->value) + " is not an integer");
        return static_cast<int>(v);
    }

    bool boolean(const std::string& key, bool fallback) {
        const IniEntry* e = fetch(key);
        if (!e) return fallback;
        const std::string& v = e->value;
        if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
        if (v == "false" || v == "no" || v == "off" || v == "0") return false;
        throw ParseError(bad_value(key, v) + " is not a boolean (use true/false)");
    }

    void finish() const {
        if (!sec_) return;
        for (const auto& [key, entry] : *sec_)
            if (!entry.used)
                throw ParseError(path_ + " line " + std::to_string(entry.line) +
                                 ": unknown key '" + key + "' in " + label());
    }

  private:
    std::string label() const { return name_.empty() ? "the top level" : "[" + name_ + "]"; }

    std::string bad_value(const std::string& key, const std::string& v) const {
        return path_ + ": key '" + key + "' in " + label() + ": '" + v + "'";
    }

    IniEntry* fetch(const std::string& key) {
        if (!sec_) return nullptr;
        auto it = sec_->find(key);
        if (it == sec_->end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    double parse_number(const std::string& key, const std::string& raw) const {
        char* end = nullptr;
        const double v = std::strtod(raw.c_str(), &end);
        if (end != raw.c_str() + raw.size())
            throw ParseError(bad_value(key, raw) + " is not a number");
        return v;
    }

    const std::string& path_;
    std::string name_;
    IniSection* sec_;
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Spectrum: return "spectrum";
        case Scenario::Cycle: return "cycle";
        case Scenario::Sweep: return "sweep";
        case Scenario::Bath: return "bath";
        case Scenario::Validate: return "validate";
    }
    return "?";
}

const char* format_name(OutputFormat f) {
    return f == OutputFormat::Csv ? "csv" : "json";
}

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

RunConfig parse_config(const std::string& path) {
    auto sections = read_ini(path);

    static const char* const known[] = {"",      "system", "si",    "pump",
                                        "spectrum", "cycle",  "sweep", "bath"};
    for (const auto& [name, sec] : sections) {
        (void)sec;
        if (std::find(std::begin(known), std::end(known), name) == std::end(known))
            throw ParseError(path + ": unknown section [" + name + "]");
    }
    auto section = [&](const char* name) -> IniSection* {
        auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    };

    RunConfig cfg;
    cfg.source_path = path;
    std::vector<std::string> problems;
    auto check = [&](bool ok, std::string msg) {
        if (!ok) problems.push_back(std::move(msg));
    };

    // ---- top level ----
    SectionReader top(path, "", section(""));
    const std::string scen = top.text("scenario", "");
    if (scen.empty()) throw ParseError(path + ": missing required top-level key 'scenario'");
    if (scen == "spectrum") cfg.scenario = Scenario::Spectrum;
    else if (scen == "cycle") cfg.scenario = Scenario::Cycle;
    else if (scen == "sweep") cfg.scenario = Scenario::Sweep;
    else if (scen == "bath") cfg.scenario = Scenario::Bath;
    else if (scen == "validate") cfg.scenario = Scenario::Validate;
    else
        throw ParseError(path + ": unknown scenario '" + scen +
                         "' (expected spectrum, cycle, sweep, bath or validate)");

    cfg.output_dir = top.text("output", ".");
    const std::string fmt_s = top.text("format", "csv");
    if (fmt_s == "csv") cfg.format = OutputFormat::Csv;
    else if (fmt_s == "json") cfg.format = OutputFormat::Json;
    else throw ParseError(path + ": format must be csv or json, got '" + fmt_s + "'");
    cfg.threads = top.integer("threads", 1);
    if (cfg.threads < 1) throw ParseError(path + ": threads must be >= 1");
    cfg.strict = top.boolean("strict", false);
    top.finish();

    // ---- [system] ----
    SectionReader sys(path, "system", section("system"));
    SystemParams& p = cfg.params;
    const bool own_omega = sys.has("omega_m");
    const bool own_kappa = sys.has("kappa");
    const bool own_gamma = sys.has("gamma");
    const bool own_nbar_b = sys.has("nbar_b");
    p.omega_m = sys.number("omega_m", 1.0);
    p.delta = sys.number("delta", -1.0);
    p.g = sys.number("g", 0.0);
    p.kappa = sys.number("kappa", 0.0);
    p.gamma = sys.number("gamma", 0.0);
    p.nbar_a = sys.number("nbar_a", 0.0);
    p.nbar_b = sys.number("nbar_b", 0.0);
    sys.finish();

    // ---- [si]: rad/s and kelvin inputs, converted here ----
    if (IniSection* si_sec = section("si")) {
        SectionReader si(path, "si", si_sec);
        auto clash = [&](bool owned, const char* key) {
            if (owned)
                throw ParseError(path + ": '" + key + "' set in both [system] and [si]");
        };
        clash(own_omega, "omega_m");
        const double w = si.require_number("omega_m");
        check(w > 0.0, "si: omega_m must be > 0");
        if (si.has("kappa")) {
            clash(own_kappa, "kappa");
            const double k = si.number("kappa", 0.0);
            if (w > 0.0) p.kappa = k / w;
        }
        if (si.has("gamma")) {
            clash(own_gamma, "gamma");
            const double gm = si.number("gamma", 0.0);
            if (w > 0.0) p.gamma = gm / w;
        }
        if (si.has("temperature_b")) {
            clash(own_nbar_b, "nbar_b");
            const double T = si.number("temperature_b", 0.0);
            check(T >= 0.0, "si: temperature_b must be >= 0");
            if (T > 0.0 && w > 0.0) p.nbar_b = thermal_occupation(T, w);
            else if (T == 0.0) p.nbar_b = 0.0;
        }
        si.finish();
        if (w > 0.0) p.omega_m = w;
    }

    // ---- [pump] ----
    if (IniSection* pump_sec = section("pump")) {
        SectionReader pr(path, "pump", pump_sec);
        PumpParams pp;
        pp.g0 = pr.require_number("g0");
        pp.alpha_in = pr.require_number("alpha_in");
        pp.omega_c = pr.require_number("omega_c");
        pp.omega_p = pr.require_number("omega_p");
        pp.mass = pr.require_number("mass");
        pr.finish();
        check(pp.mass > 0.0, "pump: mass must be > 0");
        p.pump = pp;
    }

    check(p.omega_m > 0.0, "system: omega_m must be > 0");
    check(p.g >= 0.0, "system: g must be >= 0");
    check(p.kappa >= 0.0, "system: kappa must be >= 0");
    check(p.gamma >= 0.0, "system: gamma must be >= 0");
    check(p.nbar_a >= 0.0, "system: nbar_a must be >= 0");
    check(p.nbar_b >= 0.0, "system: nbar_b must be >= 0");
    check(p.delta < 0.0, "system: delta must be < 0 (red-detuned regime)");

    auto stability_problem = [&](const std::string& sec_name, const char* key, double d) {
        if (stability_check(d, p.g)) return;
        problems.push_back(sec_name + ": " + key + " = " + fmt(d) + " is unstable at g = " +
                           fmt(p.g) + "; stability requires delta < -4 g^2 = " +
                           fmt(-4.0 * p.g * p.g));
    };

    // ---- scenario sections: parse all that are present ----
    const char* wanted = nullptr;
    switch (cfg.scenario) {
        case Scenario::Spectrum: wanted = "spectrum"; break;
        case Scenario::Cycle: wanted = "cycle"; break;
        case Scenario::Sweep: wanted = "sweep"; break;
        case Scenario::Bath: wanted = "bath"; break;
        case Scenario::Validate: wanted = nullptr; break;
    }
    if (wanted && !section(wanted))
        throw ParseError(path + ": scenario '" + wanted + "' needs a [" + wanted + "] section");

    if (IniSection* sec = section("spectrum")) {
        SectionReader r(path, "spectrum", sec);
        SpectrumSpec s;
        s.delta_min = r.require_number("delta_min");
        s.delta_max = r.require_number("delta_max");
        s.points = r.integer("points", 0);
        r.finish();
        check(s.points >= 2, "spectrum: points must be >= 2");
        check(s.delta_min < s.delta_max, "spectrum: need delta_min < delta_max");
        cfg.spectrum = s;
    }

    if (IniSection* sec = section("cycle")) {
        SectionReader r(path, "cycle", sec);
        CycleConfig c;
        c.params = p;
        c.delta_i = r.require_number("delta_i");
        c.delta_f = r.require_number("delta_f");
        c.tau[0] = r.number("tau1", c.tau[0]);
        c.tau[1] = r.number("tau2", c.tau[1]);
        c.tau[2] = r.number("tau3", c.tau[2]);
        c.tau[3] = r.number("tau4", c.tau[3]);
        const int cutoff_a = r.integer("cutoff_a", c.optical.n_max);
        const int cutoff_b = r.integer("cutoff_b", c.mechanical.n_max);
        c.dt.ramp = r.number("dt_ramp", c.dt.ramp);
        c.dt.hold = r.number("dt_hold", c.dt.hold);
        r.finish();

        check(cutoff_a >= 1 && cutoff_b >= 1, "cycle: cutoffs must be >= 1");
        if (cutoff_a >= 1) c.optical = FockCutoff{cutoff_a};
        if (cutoff_b >= 1) c.mechanical = FockCutoff{cutoff_b};
        const bool geometry = c.delta_i < c.delta_f && c.delta_f < 0.0;
        check(geometry, "cycle: need delta_i < delta_f < 0");
        stability_problem("cycle", "delta_i", c.delta_i);
        stability_problem("cycle", "delta_f", c.delta_f);
        bool taus_ok = true;
        for (int k = 0; k < 4; ++k) taus_ok = taus_ok && c.tau[k] > 0.0;
        check(taus_ok, "cycle: stroke durations tau1..tau4 must be > 0");
        check(c.dt.ramp > 0.0 && c.dt.hold > 0.0, "cycle: dt_ramp and dt_hold must be > 0");

        if (taus_ok && p.g >= 0.0 && p.kappa >= 0.0 && p.gamma >= 0.0) {
            const TimescaleReport rep = validate_timescales(c);
            for (const std::string& f : rep.failures) problems.push_back("timescales: " + f);
            for (const std::string& w : rep.warnings) cfg.warnings.push_back("timescales: " + w);
        }
        cfg.cycle = c;
    }

    if (IniSection* sec = section("sweep")) {
        SectionReader r(path, "sweep", sec);
        SweepSpec s;
        s.delta_i = r.require_number("delta_i");
        s.delta_f_min = r.require_number("delta_f_min");
        s.delta_f_max = r.require_number("delta_f_max");
        s.delta_f_points = r.integer("delta_f_points", 0);
        s.g_min = r.require_number("g_min");
        s.g_max = r.require_number("g_max");
        s.g_points = r.integer("g_points", 0);
        r.finish();
        check(s.delta_i < 0.0, "sweep: delta_i must be < 0");
        check(s.delta_f_points >= 2, "sweep: delta_f_points must be >= 2");
        check(s.g_points >= 2, "sweep: g_points must be >= 2");
        check(s.delta_f_min < s.delta_f_max, "sweep: need delta_f_min < delta_f_max");
        check(s.g_min < s.g_max, "sweep: need g_min < g_max");
        check(s.g_min >= 0.0, "sweep: g_min must be >= 0");
        cfg.sweep = s;
    }

    if (IniSection* sec = section("bath")) {
        SectionReader r(path, "bath", sec);
        BathSpec b;
        b.delta = r.require_number("delta");
        b.t = r.number("t", b.t);
        b.dt = r.number("dt", b.dt);
        b.cutoff = r.integer("cutoff", b.cutoff);
        b.initial_population = r.number("initial_population", 0.0);
        r.finish();
        stability_problem("bath", "delta", b.delta);
        check(b.t > 0.0, "bath: t must be > 0");
        check(b.dt > 0.0 && b.dt <= b.t, "bath: need 0 < dt <= t");
        check(b.cutoff >= 1, "bath: cutoff must be >= 1");
        check(b.initial_population >= 0.0, "bath: initial_population must be >= 0");
        check(p.kappa > 0.0 || p.gamma > 0.0,
              "bath: the reduced mode needs kappa > 0 or gamma > 0");
        cfg.bath = b;
    }

    if (!problems.empty()) throw ValidationError(std::move(problems));
    return cfg;
}

}  // namespace omhe::cli
