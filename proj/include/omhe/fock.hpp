#pragma once

// Truncated Fock-space primitives for a two-mode (optical x mechanical)
// cavity optomechanics setup: sparse operators, density matrices, thermal
// states and occupation bookkeeping.
//
// Conventions fixed here and relied on everywhere else:
//   * a Fock cutoff n_max keeps levels |0..n_max>, so the local dimension
//     is n_max + 1;
//   * two-mode operators act on the Kronecker product space
//     optical (x) mechanical, in that order;
//   * sparse matrices never store entries with |value| <= kDropTol.

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace omhe {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd, Eigen::RowMajor>;
using Dense = Eigen::MatrixXcd;

// Magnitude below which sparse entries are discarded on construction and
// after arithmetic.
inline constexpr double kDropTol = 1e-14;

// ---- Cutoff -------------------------------------------------------------

struct FockCutoff {
    int n_max = 0;

    explicit FockCutoff(int n) : n_max(n) {
        if (n < 1) throw std::invalid_argument("FockCutoff: n_max must be >= 1");
    }
    int dim() const { return n_max + 1; }
};

enum class Mode { Optical, Mechanical };

// ---- Sparse operator ----------------------------------------------------

// Square sparse complex matrix with the drop-tolerance invariant applied at
// every construction point.
class OperatorMatrix {
  public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(SpMat m);
    explicit OperatorMatrix(const Dense& m);

    static OperatorMatrix identity(int dim);
    static OperatorMatrix zero(int dim);

    int dim() const { return static_cast<int>(mat_.rows()); }
    long nnz() const { return mat_.nonZeros(); }
    const SpMat& sparse() const { return mat_; }
    Dense dense() const { return Dense(mat_); }

    OperatorMatrix adjoint() const;
    cd trace() const;
    // max |M - M^dag| entry; 0 for exactly Hermitian storage
    double hermiticity_defect() const;
    double max_abs() const;

    OperatorMatrix operator+(const OperatorMatrix& o) const;
    OperatorMatrix operator-(const OperatorMatrix& o) const;
    OperatorMatrix operator*(const OperatorMatrix& o) const;
    OperatorMatrix operator*(cd s) const;

  private:
    SpMat mat_;
    void prune_();
    void check_same_dim_(const OperatorMatrix& o) const;
};

inline OperatorMatrix operator*(cd s, const OperatorMatrix& m) { return m * s; }

// ---- Density matrix -----------------------------------------------------

// State of the (possibly composite) truncated system.  Construction checks
// trace and Hermiticity to 1e-10; positivity is only checked on demand
// because it needs a full eigensolve.
class DensityMatrix {
  public:
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kHermTol = 1e-10;
    static constexpr double kPsdTol = -1e-8;

    explicit DensityMatrix(OperatorMatrix op);

    int dim() const { return op_.dim(); }
    const OperatorMatrix& op() const { return op_; }
    Dense dense() const { return op_.dense(); }

    double min_eigenvalue() const;
    bool is_positive_semidefinite() const { return min_eigenvalue() >= kPsdTol; }

  private:
    OperatorMatrix op_;
};

// ---- Operator builders --------------------------------------------------

// a|n> = sqrt(n)|n-1>
OperatorMatrix annihilation_op(FockCutoff c);
OperatorMatrix creation_op(FockCutoff c);
OperatorMatrix number_op(FockCutoff c);

// Kronecker product; the left factor is the optical mode by convention.
OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b);

// Convenience: op on one mode lifted to the two-mode space.
OperatorMatrix lift(const OperatorMatrix& op, FockCutoff other, Mode acts_on);

// ---- States and measurements --------------------------------------------

struct ThermalState {
    DensityMatrix rho;
    // probability mass of the untruncated Bose-Einstein distribution that
    // falls above the cutoff (before renormalisation)
    double tail_mass = 0.0;
    bool tail_warning = false;  // set when tail_mass > 1e-2
};

// Thermal (geometric) state with mean occupation nbar, renormalised on the
// truncated space.
ThermalState thermal_state(double nbar, FockCutoff c);

DensityMatrix partial_trace(const DensityMatrix& rho, FockCutoff optical,
                            FockCutoff mechanical, Mode keep);

cd expectation(const DensityMatrix& rho, const OperatorMatrix& op);

struct NumberDistribution {
    std::vector<double> p;  // p[n], n = 0..n_max of the kept mode
};

// Marginal occupation distribution of one mode of a two-mode state.
NumberDistribution number_distribution(const DensityMatrix& rho, FockCutoff optical,
                                       FockCutoff mechanical, Mode which);
// Single-mode variant.
NumberDistribution number_distribution(const DensityMatrix& rho);

// Bose-Einstein occupation for SI inputs (temperature in K, omega in rad/s).
double thermal_occupation(double temperature, double omega);

}  // namespace omhe
