#include "omhe/fock.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace omhe {

// ---- OperatorMatrix -----------------------------------------------------

OperatorMatrix::OperatorMatrix(SpMat m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols())
        throw std::invalid_argument("OperatorMatrix: matrix must be square");
    prune_();
}

OperatorMatrix::OperatorMatrix(const Dense& m) : OperatorMatrix(SpMat(m.sparseView())) {}

OperatorMatrix OperatorMatrix::identity(int dim) {
    SpMat m(dim, dim);
    m.setIdentity();
    return OperatorMatrix(std::move(m));
}

OperatorMatrix OperatorMatrix::zero(int dim) {
    if (dim < 1) throw std::invalid_argument("OperatorMatrix: dim must be >= 1");
    return OperatorMatrix(SpMat(dim, dim));
}

void OperatorMatrix::prune_() {
    mat_.prune([](const Eigen::Index&, const Eigen::Index&, const cd& v) {
        return std::abs(v) > kDropTol;
    });
    mat_.makeCompressed();
}

void OperatorMatrix::check_same_dim_(const OperatorMatrix& o) const {
    if (dim() != o.dim())
        throw std::invalid_argument("OperatorMatrix: dimension mismatch");
}

OperatorMatrix OperatorMatrix::adjoint() const {
    return OperatorMatrix(SpMat(mat_.adjoint()));
}

cd OperatorMatrix::trace() const {
    cd t = 0.0;
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SpMat::InnerIterator it(mat_, k); it; ++it)
            if (it.row() == it.col()) t += it.value();
    return t;
}

double OperatorMatrix::hermiticity_defect() const {
    SpMat d = mat_ - SpMat(mat_.adjoint());
    double m = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

double OperatorMatrix::max_abs() const {
    double m = 0.0;
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SpMat::InnerIterator it(mat_, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& o) const {
    check_same_dim_(o);
    return OperatorMatrix(SpMat(mat_ + o.mat_));
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& o) const {
    check_same_dim_(o);
    return OperatorMatrix(SpMat(mat_ - o.mat_));
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const {
    check_same_dim_(o);
    return OperatorMatrix(SpMat(mat_ * o.mat_));
}

OperatorMatrix OperatorMatrix::operator*(cd s) const {
    return OperatorMatrix(SpMat(mat_ * s));
}

// ---- DensityMatrix ------------------------------------------------------

DensityMatrix::DensityMatrix(OperatorMatrix op) : op_(std::move(op)) {
    const double tr_err = std::abs(op_.trace() - cd(1.0));
    if (tr_err > kTraceTol)
        throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                    std::to_string(tr_err));
    if (op_.hermiticity_defect() > kHermTol)
        throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Dense> es(op_.dense(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ---- Operator builders --------------------------------------------------

OperatorMatrix annihilation_op(FockCutoff c) {
    const int d = c.dim();
    SpMat m(d, d);
    m.reserve(Eigen::VectorXi::Constant(d, 1));
    // a|n> = sqrt(n)|n-1>  ->  a_{n-1,n} = sqrt(n)
    for (int n = 1; n < d; ++n) m.insert(n - 1, n) = std::sqrt(double(n));
    return OperatorMatrix(std::move(m));
}

OperatorMatrix creation_op(FockCutoff c) { return annihilation_op(c).adjoint(); }

OperatorMatrix number_op(FockCutoff c) {
    const int d = c.dim();
    SpMat m(d, d);
    m.reserve(Eigen::VectorXi::Constant(d, 1));
    for (int n = 1; n < d; ++n) m.insert(n, n) = double(n);
    return OperatorMatrix(std::move(m));
}

OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b) {
    SpMat out = Eigen::kroneckerProduct(a.sparse(), b.sparse());
    return OperatorMatrix(std::move(out));
}

OperatorMatrix lift(const OperatorMatrix& op, FockCutoff other, Mode acts_on) {
    const OperatorMatrix id = OperatorMatrix::identity(other.dim());
    return acts_on == Mode::Optical ? tensor_product(op, id) : tensor_product(id, op);
}

// ---- States and measurements --------------------------------------------

ThermalState thermal_state(double nbar, FockCutoff c) {
    if (nbar < 0.0) throw std::invalid_argument("thermal_state: nbar must be >= 0");
    const int d = c.dim();
    // p_n = (1-q) q^n with q = nbar/(nbar+1); tail above the cutoff is q^d.
    const double q = nbar / (nbar + 1.0);
    const double tail = (nbar == 0.0) ? 0.0 : std::pow(q, d);
    const double kept = 1.0 - tail;

    SpMat m(d, d);
    m.reserve(Eigen::VectorXi::Constant(d, 1));
    double p = 1.0 - q;
    for (int n = 0; n < d; ++n) {
        m.insert(n, n) = p / kept;
        p *= q;
    }
    ThermalState out{DensityMatrix(OperatorMatrix(std::move(m))), tail, tail > 1e-2};
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, FockCutoff optical,
                            FockCutoff mechanical, Mode keep) {
    const int da = optical.dim(), db = mechanical.dim();
    if (rho.dim() != da * db)
        throw std::invalid_argument("partial_trace: state dimension does not match cutoffs");
    const Dense r = rho.dense();
    if (keep == Mode::Optical) {
        Dense out = Dense::Zero(da, da);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j)
                for (int k = 0; k < db; ++k) out(i, j) += r(i * db + k, j * db + k);
        return DensityMatrix(OperatorMatrix(out));
    }
    Dense out = Dense::Zero(db, db);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j)
            for (int k = 0; k < da; ++k) out(i, j) += r(k * db + i, k * db + j);
    return DensityMatrix(OperatorMatrix(out));
}

cd expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
    if (rho.dim() != op.dim())
        throw std::invalid_argument("expectation: dimension mismatch");
    // tr(rho Op) = sum_{ij} rho_ij Op_ji, iterating the sparse operator
    cd out = 0.0;
    const Dense r = rho.dense();
    const SpMat& m = op.sparse();
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) out += r(it.col(), it.row()) * it.value();
    return out;
}

NumberDistribution number_distribution(const DensityMatrix& rho, FockCutoff optical,
                                       FockCutoff mechanical, Mode which) {
    const int da = optical.dim(), db = mechanical.dim();
    if (rho.dim() != da * db)
        throw std::invalid_argument("number_distribution: state dimension mismatch");
    const Dense r = rho.dense();
    NumberDistribution nd;
    if (which == Mode::Optical) {
        nd.p.assign(da, 0.0);
        for (int n = 0; n < da; ++n)
            for (int k = 0; k < db; ++k) nd.p[n] += r(n * db + k, n * db + k).real();
    } else {
        nd.p.assign(db, 0.0);
        for (int n = 0; n < db; ++n)
            for (int k = 0; k < da; ++k) nd.p[n] += r(k * db + n, k * db + n).real();
    }
    return nd;
}

NumberDistribution number_distribution(const DensityMatrix& rho) {
    const Dense r = rho.dense();
    NumberDistribution nd;
    nd.p.assign(rho.dim(), 0.0);
    for (int n = 0; n < rho.dim(); ++n) nd.p[n] = r(n, n).real();
    return nd;
}

double thermal_occupation(double temperature, double omega) {
    if (temperature <= 0.0) throw std::invalid_argument("thermal_occupation: T must be > 0");
    if (omega <= 0.0) throw std::invalid_argument("thermal_occupation: omega must be > 0");
    constexpr double hbar = 1.054571817e-34;  // J s
    constexpr double kB = 1.380649e-23;       // J / K
    return 1.0 / std::expm1(hbar * omega / (kB * temperature));
}

}  // namespace omhe
