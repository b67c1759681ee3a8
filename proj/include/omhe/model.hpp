#pragma once

// Linearised optomechanical system model.
//
// Internally everything runs in units hbar = 1, omega_m = 1: detunings and
// coupling are given as delta = Delta_p/omega_m and g = G/omega_m, rates as
// kappa/omega_m, gamma/omega_m, and energies come out in units of
// hbar*omega_m.  SI quantities only appear in the pump mean-field reduction
// and in CLI-level conversions.

#include <optional>
#include <vector>

#include "omhe/fock.hpp"

namespace omhe {

// ---- Parameters ----------------------------------------------------------

// Pump / bare-cavity data used to derive the linearised working point.
// All frequencies in rad/s, mass in kg.
struct PumpParams {
    double g0 = 0.0;        // single-photon coupling
    double alpha_in = 0.0;  // drive amplitude (rad/s units, |alpha_in| used)
    double omega_c = 0.0;   // bare cavity frequency
    double omega_p = 0.0;   // pump frequency
    double mass = 0.0;      // effective mechanical mass
};

struct SystemParams {
    double omega_m = 1.0;  // mechanical frequency in rad/s (1.0 = work in omega_m units)
    double delta = -1.0;   // pump detuning Delta_p/omega_m, < 0 in the stable regime
    double g = 0.0;        // linearised coupling G/omega_m, >= 0
    double kappa = 0.0;    // optical linewidth / omega_m
    double gamma = 0.0;    // mechanical linewidth / omega_m
    double nbar_a = 0.0;   // optical reservoir occupation
    double nbar_b = 0.0;   // mechanical reservoir occupation
    std::optional<PumpParams> pump;

    void validate() const;
};

// ---- Hamiltonian ----------------------------------------------------------

// H/(hbar omega_m) = -delta a^dag a + b^dag b + g (a + a^dag)(b + b^dag),
// on the optical (x) mechanical product space.
OperatorMatrix build_hamiltonian(const SystemParams& p, FockCutoff optical,
                                 FockCutoff mechanical);

// Split form H(delta) = -delta * number_a + rest, so a time-dependent
// detuning only rescales a cached diagonal instead of rebuilding H.
struct HamiltonianParts {
    OperatorMatrix number_a;  // a^dag a (x) 1
    OperatorMatrix rest;      // 1 (x) b^dag b + g (a+a^dag)(x)(b+b^dag)
    OperatorMatrix at(double delta) const { return rest - delta * number_a; }
};

HamiltonianParts build_hamiltonian_parts(const SystemParams& p, FockCutoff optical,
                                         FockCutoff mechanical);

// ---- Mean field -----------------------------------------------------------

struct MeanFieldState {
    double alpha = 0.0;    // steady cavity amplitude (taken real positive)
    double beta = 0.0;     // static mechanical displacement
    double delta_p = 0.0;  // self-consistent pump detuning, rad/s
    double x_zpt = 0.0;    // zero-point spread sqrt(hbar/(2 m omega_m)), m
    int iterations = 0;
    double residual = 0.0;
};

// Solves the static working point alpha ~ alpha_in/Delta_p,
// beta = -g0 alpha^2/omega_m, Delta_p = omega_p - omega_c - 2 g0 beta by
// damped fixed-point iteration (relaxation 0.5, tolerance 1e-12).
MeanFieldState mean_field(double alpha_in, const SystemParams& p);

// ---- Detuning schedule -----------------------------------------------------

struct ScheduleSegment {
    double duration = 0.0;     // in 1/omega_m
    double delta_start = 0.0;  // delta at segment start
    double delta_end = 0.0;    // delta at segment end (equal for a hold)
};

// Piecewise-linear delta(t).  Segments must be contiguous in delta; time
// starts at 0.
class DetuningSchedule {
  public:
    explicit DetuningSchedule(std::vector<ScheduleSegment> segments);

    double total_duration() const { return total_; }
    double delta(double t) const;
    // d delta/dt; right-continuous at segment joins
    double rate(double t) const;
    const std::vector<ScheduleSegment>& segments() const { return segs_; }

  private:
    std::vector<ScheduleSegment> segs_;
    std::vector<double> t_end_;
    double total_ = 0.0;
};

}  // namespace omhe
