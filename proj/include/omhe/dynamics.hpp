#pragma once

// Open-system time evolution: Lindblad right-hand side, fixed-step RK4
// integration with a time-dependent Hamiltonian, and a dense
// matrix-exponential oracle for cross-validation on small systems.
//
// The integrator exploits that every right-hand side here has the form
//   d rho/dt = L rho + (L rho)^dag + sum_r rate_r x_r rho x_r^dag,
//   L = -i H - (1/2) sum_r rate_r x_r^dag x_r,
// valid whenever H is Hermitian and rho is; RK4 stage states stay Hermitian
// because the right-hand side of a Hermitian matrix is Hermitian.  This
// halves the sparse work per stage and keeps rho exactly Hermitian in
// floating point.

#include <functional>
#include <string>
#include <vector>

#include "omhe/model.hpp"

namespace omhe {

// ---- Dissipators ----------------------------------------------------------

// One Lindblad term rate * (x rho x^dag - 1/2 {x^dag x, rho}).
struct Dissipator {
    OperatorMatrix jump_op;
    double rate = 0.0;
};

// The four reservoir couplings of the two-mode master equation:
// kappa(nbar_a+1) L[a], kappa nbar_a L[a^dag], gamma(nbar_b+1) L[b],
// gamma nbar_b L[b^dag].  Terms with zero rate are omitted.
std::vector<Dissipator> thermal_dissipators(const SystemParams& p, FockCutoff optical,
                                            FockCutoff mechanical);

// Full master-equation right-hand side at one instant.  Output is Hermitian
// and traceless up to roundoff.
OperatorMatrix lindblad_rhs(const DensityMatrix& rho, const OperatorMatrix& H,
                            const std::vector<Dissipator>& dissipators);

// ---- Trajectories ----------------------------------------------------------

// Sampled observables along an integration.  Series that were not requested
// (no operator provided) stay empty; all present series share times.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> n_a;       // <a^dag a>
    std::vector<double> n_b;       // <b^dag b>
    std::vector<double> N_A;       // polariton populations, filled by the
    std::vector<double> N_B;       //   caller's sampler when provided
    std::vector<double> energy;    // <H(t)>
    std::vector<double> purity;    // Tr rho^2
    std::vector<double> coupling;  // <V> for the interaction part, if given
    std::vector<double> deltas;    // delta(t) at sample times (evolve_detuned only)

    std::vector<double> snapshot_times;
    std::vector<double> snapshot_deltas;  // evolve_detuned only
    std::vector<Dense> snapshots;

    Dense final_state;
    double max_trace_drift = 0.0;
    double max_hermiticity_defect = 0.0;
    std::vector<std::string> warnings;
};

struct EvolveOptions {
    int sample_stride = 10;    // record observables every this many steps
    int snapshot_stride = 0;   // 0 = keep no snapshots
    double trace_error_tol = 1e-6;  // abort when |Tr rho - 1| exceeds this

    // Optional observable operators; n_a/n_b/coupling series are filled
    // only when the matching pointer is set.  Pointees must outlive the run.
    const OperatorMatrix* number_a = nullptr;
    const OperatorMatrix* number_b = nullptr;
    const OperatorMatrix* coupling_op = nullptr;

    // Called at every sample point after the built-in series are recorded;
    // used for observables that depend on time (polariton numbers).
    std::function<void(double t, const Dense& rho, Trajectory& out)> extra_sampler;
};

// ---- Integrators -----------------------------------------------------------

// Fixed-step RK4 for a general time-dependent Hamiltonian.  H_of_t is
// evaluated at the three RK4 substage times per step.  The step count is
// round((t1-t0)/dt), with dt adjusted to land on t1 exactly.  Emits a
// warning when dt * (spectral scale of H) > 0.1; throws std::runtime_error
// on NaN or trace drift beyond trace_error_tol.  The final state is
// renormalized by its trace (drift below the tolerance only).
Trajectory rk4_evolve(const DensityMatrix& rho0,
                      const std::function<OperatorMatrix(double)>& H_of_t,
                      const std::vector<Dissipator>& dissipators, double t0, double t1, double dt,
                      const EvolveOptions& opt = {});

// Fast path for the detuning-driven Hamiltonian H(t) = rest - delta(t) na:
// the static sparse parts are factored once and the time dependence reduces
// to a diagonal scaling per stage.  Semantics match rk4_evolve.
Trajectory evolve_detuned(const DensityMatrix& rho0, const HamiltonianParts& parts,
                          const std::function<double(double)>& delta_of_t,
                          const std::vector<Dissipator>& dissipators, double t0, double t1,
                          double dt, const EvolveOptions& opt = {});

// Dense Liouvillian exponential exp(L t) applied to rho0, for
// time-independent H.  Exact up to the scaling-and-squaring tolerance;
// dimension capped at 200 because the superoperator is dim^2 x dim^2.
DensityMatrix expm_oracle(const DensityMatrix& rho0, const OperatorMatrix& H,
                          const std::vector<Dissipator>& dissipators, double t);

}  // namespace omhe
