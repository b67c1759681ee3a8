#pragma once

// Result serialization: CSV tables with a commented header block, or JSON
// documents mirroring the result structs field by field.  Every file starts
// with the tool version and the fully resolved configuration, so any output
// can be traced back to its inputs, and all content is assembled in memory
// and written in one call per file.

#include <string>
#include <vector>

#include "config.hpp"
#include "omhe/otto.hpp"
#include "omhe/squeezed_bath.hpp"

namespace omhe::cli {

// lossless scientific form for data cells (17 significant digits)
std::string fmt_cell(double x);
// shortest round-trip form for header echoes
std::string fmt_value(double x);

// resolved "key = value" description of cfg, one line per entry, in a
// fixed order
std::vector<std::string> resolved_parameters(const RunConfig& cfg);

void write_text_file(const std::string& path, const std::string& contents);

struct SpectrumTable {
    std::vector<double> delta, omega_A, omega_B;
    std::vector<unsigned char> stable;
};

struct BathResult {
    EffectiveBath bath;
    SqueezingDecomposition decomposition;
    QuadratureStats steady;
    double omega_B = 0.0;
    EffectiveTrajectory trajectory;
};

// Each writer emits the files for cfg.format into cfg.output_dir and
// returns the paths written.
std::vector<std::string> write_spectrum(const RunConfig& cfg, const SpectrumTable& table);
std::vector<std::string> write_cycle(const RunConfig& cfg, const CycleRecord& rec);
std::vector<std::string> write_sweep(const RunConfig& cfg, const SweepMap& map);
std::vector<std::string> write_bath(const RunConfig& cfg, const BathResult& res);

}  // namespace omhe::cli
