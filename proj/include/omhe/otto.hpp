#pragma once

// Otto-cycle driver and thermodynamic ledger.  A cycle is four strokes:
//   1. ramp delta_i -> delta_f over tau_1 (work stroke),
//   2. hold at delta_f over tau_2 (thermalization with the photon-dominated
//      reservoir),
//   3. ramp back over tau_3,
//   4. hold at delta_i over tau_4 (rethermalization with the
//      phonon-dominated reservoir).
// Detuning ramps are linear in time and the coupling g stays constant.
// Heat and work follow Q = int Tr[d_t rho H] dt, W = int Tr[rho d_t H] dt;
// during holds W = 0 exactly and Q reduces to the energy difference.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "omhe/dynamics.hpp"
#include "omhe/normal_modes.hpp"

namespace omhe {

// Integrator step sizes: fine during ramps, coarser during holds where the
// populated subspace evolves slowly.
struct DtPolicy {
    double ramp = 1e-3;
    double hold = 1e-2;
};

struct CycleConfig {
    double delta_i = -3.0;
    double delta_f = -0.4;
    std::array<double, 4> tau{25.0, 50.0, 25.0, 1e4};  // stroke durations, 1/omega_m
    SystemParams params;  // delta member is ignored; the schedule drives it
    FockCutoff optical{12};
    FockCutoff mechanical{12};
    DtPolicy dt;
};

// ---- Timescale hierarchy ----------------------------------------------------

enum class CheckLevel { Pass, Warn, Fail };

struct TimescaleCheck {
    std::string relation;  // e.g. "gamma << 1/tau2"
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // rhs / lhs
    CheckLevel level = CheckLevel::Pass;
};

struct TimescaleReport {
    std::vector<TimescaleCheck> checks;
    std::vector<std::string> warnings;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// Checks the rate ordering 1/tau4 < gamma << 1/tau2 < kappa < 1/tau1,3
// << G << omega_m.  Plain "<" links fail when violated and warn when the
// margin ratio is below 2; "<<" links fail below ratio 2, warn in [2, 5)
// and pass from 5 up (ratios get 1e-9 relative slack).  For a closed
// system (kappa = gamma = 0) only the ramp-speed links are checked.
TimescaleReport validate_timescales(const CycleConfig& cfg);

// ---- Ledgers ----------------------------------------------------------------

// Bare-mode decomposition of one stroke, H_a = -delta(t) a^dag a,
// H_b = b^dag b, V = g (a + a^dag)(b + b^dag):
struct BareLedger {
    double Q_a = 0.0;               // int Tr[d_t rho_a H_a] dt
    double Q_b = 0.0;               // int Tr[d_t rho_b H_b] dt
    double W_a = 0.0;               // int Tr[rho_a d_t H_a] dt
    double correlation_term = 0.0;  // int Tr[d_t rho V] dt
};

struct StrokeLedger {
    double work = 0.0;     // int Tr[rho d_t H] dt
    double heat = 0.0;     // delta_U - work
    double delta_U = 0.0;  // <H> change over the stroke
};

struct CycleRecord {
    // numeric <H(delta)> at the four cycle nodes (start, after stroke 1,
    // after stroke 2, after stroke 3) and the B-branch closed forms
    std::array<double, 4> node_energies{};
    std::array<double, 4> analytic_nodes{};

    double W1 = 0.0, Q2 = 0.0, W3 = 0.0, Q4 = 0.0;  // headline ledger
    double Q1 = 0.0, Q3 = 0.0;                      // residual ramp heats
    double W_tot = 0.0;                             // W1 + W3
    double eta = 0.0;                               // -W_tot / Q4
    double closure = 0.0;                           // W1 + W3 + Q2 + Q4

    std::array<StrokeLedger, 4> strokes{};
    std::array<BareLedger, 4> bare_ledger{};
    std::array<Trajectory, 4> trajectories;
    TimescaleReport timescales;

    // |<N_B> at cycle end - thermal target at delta_i|: how far stroke 4
    // was from complete rethermalization
    double final_NB_gap = 0.0;
};

// Evolves the full master equation through the four strokes starting from
// the thermal product state at (nbar_a, nbar_b).  Trajectories sample every
// step (times shifted to a common cycle clock) and carry polariton
// populations in the instantaneous Bogoliubov basis; snapshots are stored
// densely enough for the quadrature routines below.  Throws
// std::invalid_argument on bad geometry (need delta_i < delta_f < 0, both
// stable, delta_i != delta_f) or a failing timescale report.
CycleRecord run_cycle(const CycleConfig& cfg);

// ---- Analytic cycle ----------------------------------------------------------

struct NodeEnergies {
    double E1 = 0.0, E2 = 0.0, E3 = 0.0, E4 = 0.0;  // units hbar omega_m
    std::vector<std::string> warnings;  // validity-regime annotations
};

// Closed-form B-branch node energies to second order in g, valid for
// delta_i < -1 < delta_f < 0 and small g.
NodeEnergies analytic_node_energies(double delta_i, double delta_f, double g, double nbar_b);

struct WorkEfficiency {
    double W_tot_A = 0.0;
    double W_tot_B = 0.0;
    double eta_A = 0.0;
    double eta_B = 0.0;
};

// W_tot per branch from exact Bogoliubov frequencies and thermal
// populations, W = (omega_i - omega_f)(<N>_f - <N>_i), and the frequency
// ratio efficiencies eta = 1 - omega_f/omega_i.
WorkEfficiency work_efficiency_analytic(double delta_i, double delta_f, double g, double nbar_a,
                                        double nbar_b);

struct SecondOrderPerformance {
    double eta = 0.0;       // 1 + delta_f + 2 g^2
    double W_tot = 0.0;     // (-delta_f - 2g^2 - 1)[(1 - 2g^2) nbar_b - g^2]
    double g2_opt = 0.0;    // work-optimal g^2
    double eta_P = 0.0;     // efficiency at maximum work
    double ca_bound = 0.0;  // Curzon-Ahlborn form 1 - sqrt(-delta_f/(2 nbar_b + 1))
};

// Small-g, near-resonant-delta_f performance expressions in the
// high-temperature reading nbar_b = k_B T_b/(hbar omega_m) - 1/2.
SecondOrderPerformance second_order_performance(double delta_f, double g, double nbar_b);

// ---- Quadrature on stored snapshots -------------------------------------------

struct HeatWork {
    double Q = 0.0;
    double W = 0.0;
};

// Q = int Tr[d_t rho H] dt and W = int Tr[rho d_t H] dt on the trajectory's
// snapshots.  d_t rho uses central differences (second-order one-sided at
// the ends); d_t H uses a symmetric difference of H_of_t, exact for the
// linear schedules used here.  Needs >= 3 snapshots.
HeatWork heat_work_integrals(const Trajectory& traj,
                             const std::function<OperatorMatrix(double)>& H_of_t);

// Bare-mode ledger of one stroke from its snapshots; the trajectory must
// come from evolve_detuned (snapshot detunings recorded) on the
// optical (x) mechanical product space with coupling params.g.
BareLedger bare_decomposition(const Trajectory& traj, const SystemParams& params,
                              FockCutoff optical, FockCutoff mechanical);

// <N_A>, <N_B> for an arbitrary two-mode state, contracted from the six
// bare second moments against the Bogoliubov coefficients at (delta, g).
// Unlike an expectation of the truncated polariton number operator this
// route commutes the ladder operators analytically, so it has no
// top-of-Fock-layer artifacts.
std::array<double, 2> branch_populations(const DensityMatrix& rho, FockCutoff optical,
                                         FockCutoff mechanical, double delta, double g);

// ---- Parameter sweeps ----------------------------------------------------------

struct SweepMap {
    std::vector<double> delta_f_axis;
    std::vector<double> g_axis;
    // row-major over [delta_f index][g index]; unstable cells hold NaN
    std::vector<double> efficiency;
    std::vector<double> abs_work;
    std::vector<unsigned char> stable;  // 1 = stable, 0 = masked

    std::size_t index(std::size_t i_delta, std::size_t j_g) const {
        return i_delta * g_axis.size() + j_g;
    }
};

// eta_B and |W_B,tot| on the (delta_f, g) grid at fixed delta_i via
// work_efficiency_analytic; cells failing stability_check are masked.
// threads > 1 splits rows across workers; cells are written to
// preallocated slots, so the result is identical for any thread count.
SweepMap sweep_map(double delta_i, const std::vector<double>& delta_f_axis,
                   const std::vector<double>& g_axis, double nbar_a, double nbar_b,
                   int threads = 1);

}  // namespace omhe
