#pragma once

// Normal-mode (polariton) analysis of the linearised two-mode Hamiltonian
//   H = -delta a^dag a + b^dag b + g (a + a^dag)(b + b^dag)       [omega_m = 1]
//
// The quadratic form is diagonalised by a Bogoliubov transformation
//   (A, B, A^dag, B^dag)^T = [[U^dag, -V^dag], [-V^T, U^T]] (a, b, a^dag, b^dag)^T
// with inverse [[U, V*], [V, U*]], subject to U^dag U - V^dag V = 1 and
// U^T V - V^T U = 0.  Branch A is the upper polariton (photonlike for
// delta < -1), branch B the lower one; the two never cross for g > 0, so
// ordering by frequency and adiabatic continuation agree.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "omhe/fock.hpp"

namespace omhe {

enum class Branch { A, B };
// Which bare mode dominates a polariton branch on a given side of the
// avoided crossing.
enum class Side { PhononLike, PhotonLike };

// ---- Spectrum -------------------------------------------------------------

struct PolaritonSpectrum {
    double omega_A = 0.0;  // upper branch, in units of omega_m
    double omega_B = 0.0;  // lower branch
};

// true iff the linearised dynamics is stable: delta < -4 g^2
bool stability_check(double delta, double g);

// Closed-form branch frequencies
//   omega_{A,B}^2 = (delta^2 + 1 +- sqrt((delta^2-1)^2 - 16 g^2 delta)) / 2.
// Throws std::domain_error outside the stable region.
PolaritonSpectrum polariton_frequencies(double delta, double g);

// sqrt(1+2g) - sqrt(1-2g), the branch splitting at delta = -1
double avoided_crossing_gap(double g);

// Ground-state energy of H relative to the bare vacuum:
// (omega_A + omega_B + delta - 1)/2.
double spectrum_offset(double delta, double g);

// ---- Bogoliubov transformation ---------------------------------------------

struct BogoliubovMatrices {
    Eigen::Matrix2cd U, V;  // rows: bare (a, b); cols: branches (A, B)
    PolaritonSpectrum spectrum;
    double delta = 0.0, g = 0.0;

    // max-entry residuals of the two symplectic constraints
    double constraint_residual() const;
    // max-entry deviation of forward * inverse from the 4x4 identity
    double roundtrip_residual() const;
};

// Numeric symplectic eigensolve of the 4x4 dynamical matrix.  Gauge: the
// diagonal of U is made real and non-negative (falling back to the largest
// entry of a column if its diagonal entry vanishes).  Throws
// std::domain_error when unstable, std::runtime_error if the constraint
// residual exceeds 1e-8 after refinement.
BogoliubovMatrices bogoliubov_numeric(double delta, double g);

// Detuning sweep with branch labels assigned by eigenvector-overlap
// continuity, seeded at deltas.front().  Refuses to sweep through the
// delta = -1 crossing when g < 1e-6 (the gap closes and labels become
// meaningless).  All points must be stable.
std::vector<BogoliubovMatrices> bogoliubov_sweep(const std::vector<double>& deltas, double g);

// ---- Polariton operators ----------------------------------------------------

// Truncated-space image of the annihilation operator of one branch,
//   A = sum_j U*_{jA} a_j - V*_{jA} a_j^dag.
OperatorMatrix polariton_annihilation(const BogoliubovMatrices& bog, FockCutoff optical,
                                      FockCutoff mechanical, Branch branch);

// N_branch = A^dag A on the truncated product space.  Exact up to cutoff
// artifacts in the top few Fock layers.
OperatorMatrix polariton_number_operator(const BogoliubovMatrices& bog, FockCutoff optical,
                                         FockCutoff mechanical, Branch branch);

// Exact <N_branch> on an (untruncated) thermal product state:
// sum_j |U_jB|^2 nbar_j + |V_jB|^2 (nbar_j + 1).
double polariton_population_thermal(const BogoliubovMatrices& bog, double nbar_a, double nbar_b,
                                    Branch branch);

// Second-order (in g) population of branch B on a thermal product state:
//   phonon-like side:  (1 + 4 delta g^2/(delta^2-1)^2) nbar_b
//                      + 2 (1+delta^2) g^2/(delta^2-1)^2 nbar_a + (g/(1-delta))^2
//   photon-like side:  same with nbar_a and nbar_b swapped.
double approx_population_B(double delta, double g, double nbar_a, double nbar_b, Side side);

}  // namespace omhe
