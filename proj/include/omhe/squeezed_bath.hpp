#pragma once

// Effective single-mode description of the lower polariton B.
//
// Tracing out branch A (assumed empty) leaves B coupled to a squeezed
// thermal reservoir with decay rate Gamma_B, occupation Nbar_B and
// squeezing correlation Mbar_B built from the Bogoliubov coefficients and
// the two bare reservoirs.  The reduced master equation is integrated in
// the frame rotating at omega_B, where its coefficients are constant; the
// quadratures below are the rotating-frame ones, whose steady variances
// are N - M + 1/2 and N + M + 1/2.

#include <string>
#include <vector>

#include "omhe/dynamics.hpp"
#include "omhe/normal_modes.hpp"

namespace omhe {

struct EffectiveBath {
    double Gamma_B = 0.0;  // effective decay rate of branch B
    double Nbar_B = 0.0;   // steady occupation
    cd Mbar_B{0.0, 0.0};   // squeezing correlation as computed from U, V

    // Phase gauge: absorbing B -> B e^{i rotation_angle} makes the
    // correlation real and non-positive, the convention the thermal
    // squeezing decomposition assumes.
    double Mbar_real = 0.0;        // = -|Mbar_B|
    double rotation_angle = 0.0;
};

struct QuadratureStats {
    double var_X = 0.0;  // anti-squeezed for Mbar_real < 0
    double var_Y = 0.0;
};

struct SqueezingDecomposition {
    double N_th = 0.0;  // thermal occupation of the unsqueezed core
    double r = 0.0;     // squeezing parameter, >= 0 in our gauge
};

// Exact reservoir parameters of branch B:
//   Gamma_B = kappa (|U12|^2 - |V12|^2) + gamma (|U22|^2 - |V22|^2)
//   Nbar_B  = [kappa (nbar_a+1)|V12|^2 + kappa nbar_a |U12|^2
//              + gamma (nbar_b+1)|V22|^2 + gamma nbar_b |U22|^2] / Gamma_B
//   Mbar_B  = [kappa (2 nbar_a+1) V12 U12 + gamma (2 nbar_b+1) V22 U22] / Gamma_B
// with U, V indexed (bare mode, branch), 1-based as written.  Throws
// std::domain_error when the decay-rate combination is not positive.
EffectiveBath effective_bath_exact(const BogoliubovMatrices& bog, double kappa, double gamma,
                                   double nbar_a, double nbar_b);

// Steady rotating-frame quadrature variances; uses the gauge-fixed real
// correlation.  Satisfies var_X var_Y >= 1/4 and
// Nbar_B = (var_X + var_Y - 1)/2.
QuadratureStats steady_variances(const EffectiveBath& bath);

// Solves Nbar = N_th + (2 N_th + 1) sinh^2 r and
// Mbar = -cosh(r) sinh(r) (2 N_th + 1) for (N_th, r).  Throws
// std::domain_error if |Mbar|^2 > Nbar (Nbar + 1) beyond roundoff.
SqueezingDecomposition squeezing_decomposition(const EffectiveBath& bath);

// Time series of the reduced B-mode evolution.  population and the
// variances are rotating-frame quantities; final_state is mapped back to
// the lab frame at the end time.
struct EffectiveTrajectory {
    std::vector<double> times;
    std::vector<double> population;  // <B^dag B>
    std::vector<double> var_X;
    std::vector<double> var_Y;
    std::vector<double> purity;
    Dense final_state;
    double max_trace_drift = 0.0;
    std::vector<std::string> warnings;
};

// RK4 integration of the reduced master equation
//   d rho/dt = Gamma (N+1) L[B] rho + Gamma N L[B^dag] rho
//              + Gamma M (J[B] + J[B^dag]) rho,       J[x]r = x r x - {x x, r}/2
// in the rotating frame (M = Mbar_real).  The cutoff is taken from rho_B0;
// a warning is recorded when it is below 8 Nbar_B + 10.
EffectiveTrajectory evolve_effective_B(const EffectiveBath& bath, double omega_B,
                                       const DensityMatrix& rho_B0, double t, double dt);

}  // namespace omhe
