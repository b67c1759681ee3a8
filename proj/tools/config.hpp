#pragma once

// Run configuration for the heatengine tool.
//
// Configs are INI-style key = value files with one [section] per concern.
// Frequencies and rates are in units of omega_m, times in 1/omega_m, unless
// the optional [si] block supplies rad/s and kelvin inputs; those are
// converted right here so the library below never sees SI numbers.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omhe/model.hpp"
#include "omhe/otto.hpp"

namespace omhe::cli {

inline constexpr char kVersion[] = "0.1.0";

enum class Scenario { Spectrum, Cycle, Sweep, Bath, Validate };
enum class OutputFormat { Csv, Json };

const char* scenario_name(Scenario s);
const char* format_name(OutputFormat f);

// Malformed file, unknown key, missing required entry: exit code 2.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Physically inconsistent configuration: exit code 3.  Problems are
// collected so one run reports everything that is wrong at once.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

  private:
    std::vector<std::string> problems_;
};

// [spectrum]: polariton branches over a detuning range at fixed g.
struct SpectrumSpec {
    double delta_min = 0.0;
    double delta_max = 0.0;
    int points = 0;
};

// [sweep]: efficiency and |W| surfaces over a (delta_f, g) grid.
struct SweepSpec {
    double delta_i = 0.0;
    double delta_f_min = 0.0, delta_f_max = 0.0;
    int delta_f_points = 0;
    double g_min = 0.0, g_max = 0.0;
    int g_points = 0;
};

// [bath]: reduced lower-polariton evolution against its effective
// squeezed reservoir during a hold at fixed detuning.
struct BathSpec {
    double delta = 0.0;
    double t = 50.0;
    double dt = 1e-2;
    int cutoff = 20;
    double initial_population = 0.0;  // thermal occupation of the start state
};

struct RunConfig {
    Scenario scenario = Scenario::Validate;
    SystemParams params;
    std::optional<CycleConfig> cycle;
    std::optional<SpectrumSpec> spectrum;
    std::optional<SweepSpec> sweep;
    std::optional<BathSpec> bath;

    std::string output_dir = ".";
    OutputFormat format = OutputFormat::Csv;
    int threads = 1;
    bool strict = false;

    std::string source_path;
    // non-fatal findings (marginal timescale separations and the like);
    // --strict turns them into errors before anything runs
    std::vector<std::string> warnings;
};

// Reads and validates a config file.  Throws ParseError on bad syntax,
// unknown keys or missing required entries; throws ValidationError carrying
// the full list of problems when the physics or geometry is inconsistent.
// Every scenario section present in the file is parsed and validated, so
// scenario = validate checks a config without running anything.
RunConfig parse_config(const std::string& path);

}  // namespace omhe::cli
