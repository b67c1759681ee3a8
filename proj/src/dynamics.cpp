#include "omhe/dynamics.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace omhe {

namespace {

constexpr cd kI{0.0, 1.0};

// Gershgorin bound on the spectral radius of H, used for the step-size
// warning only.
double spectral_scale(const SpMat& h) {
    double best = 0.0;
    Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(h.rows());
    for (int k = 0; k < h.outerSize(); ++k)
        for (SpMat::InnerIterator it(h, k); it; ++it) row_sum(it.row()) += std::abs(it.value());
    for (int i = 0; i < h.rows(); ++i) best = std::max(best, row_sum(i));
    return best;
}

// Prepared dissipator data: jump operator, its adjoint, and the rate.
// The anticommutator part is folded into the left factor by the caller.
struct JumpTerm {
    SpMat x;
    SpMat x_dag;
    double rate;
};

// rhs = left * rho + (left * rho)^dag + sum_r rate_r x_r rho x_r^dag, where
// left = -iH - (1/2) sum rate x^dag x.  Valid for Hermitian rho.
struct RhsWorkspace {
    Dense k;  // left * rho scratch
    Dense y;  // x * rho scratch

    void compute(const SpMat& left, const std::vector<JumpTerm>& jumps, const Dense& rho,
                 Dense& out) {
        k.noalias() = left * rho;
        out = k + k.adjoint();
        for (const JumpTerm& j : jumps) {
            y.noalias() = j.x * rho;
            out.noalias() += cd(j.rate) * (y * j.x_dag);
        }
    }
};

// In-place projection onto the Hermitian part.  The rhs preserves
// Hermiticity only in exact arithmetic; on the anti-Hermitian error sector
// the dissipative damping turns into a commutator, so roundoff there can
// grow exponentially instead of decaying.  Projecting once per step keeps
// that sector empty.
void hermitize(Dense& rho) {
    const int dim = static_cast<int>(rho.rows());
    for (int i = 0; i < dim; ++i) {
        rho(i, i) = rho(i, i).real();
        for (int j = i + 1; j < dim; ++j) {
            const cd m = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = m;
            rho(j, i) = std::conj(m);
        }
    }
}

cd sparse_trace_product(const SpMat& op, const Dense& rho) {
    cd out = 0.0;
    for (int k = 0; k < op.outerSize(); ++k)
        for (SpMat::InnerIterator it(op, k); it; ++it) out += rho(it.col(), it.row()) * it.value();
    return out;
}

// Shared RK4 driver.  LeftAt must write the instantaneous left factor
// -iH(t) - (1/2) sum rate x^dag x into its argument; EnergyAt must return
// <H(t)> for the given state.
template <class LeftAt, class EnergyAt>
Trajectory run_rk4(const DensityMatrix& rho0, LeftAt&& left_at, EnergyAt&& energy_at,
                   const std::vector<Dissipator>& dissipators, double t0, double t1, double dt,
                   const EvolveOptions& opt, double spectral,
                   const std::function<double(double)>& delta_of = {}) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_evolve: dt must be > 0");
    if (!(t1 > t0)) throw std::invalid_argument("rk4_evolve: need t1 > t0");
    if (opt.sample_stride < 1)
        throw std::invalid_argument("rk4_evolve: sample_stride must be >= 1");

    const long n_steps = std::max(1L, std::lround((t1 - t0) / dt));
    const double h = (t1 - t0) / double(n_steps);

    std::vector<JumpTerm> jumps;
    jumps.reserve(dissipators.size());
    for (const Dissipator& d : dissipators) {
        if (d.rate < 0.0) throw std::invalid_argument("rk4_evolve: negative dissipator rate");
        if (d.rate == 0.0) continue;
        jumps.push_back({d.jump_op.sparse(), SpMat(d.jump_op.sparse().adjoint()), d.rate});
    }

    Trajectory traj;
    if (h * spectral > 0.1)
        traj.warnings.push_back("step size: dt*omega_max = " + std::to_string(h * spectral) +
                                " > 0.1; accuracy relies on the populated subspace being slow");

    const int dim = rho0.dim();
    Dense rho = rho0.dense();
    Dense k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim);
    SpMat left(dim, dim);
    RhsWorkspace ws;

    auto sample = [&](long step, double t) {
        traj.times.push_back(t);
        if (delta_of) traj.deltas.push_back(delta_of(t));
        if (opt.number_a) traj.n_a.push_back(sparse_trace_product(opt.number_a->sparse(), rho).real());
        if (opt.number_b) traj.n_b.push_back(sparse_trace_product(opt.number_b->sparse(), rho).real());
        if (opt.coupling_op)
            traj.coupling.push_back(sparse_trace_product(opt.coupling_op->sparse(), rho).real());
        traj.energy.push_back(energy_at(t, rho));
        traj.purity.push_back(rho.squaredNorm());

        const double drift = std::abs(rho.trace() - cd(1.0));
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        if (!std::isfinite(drift) || drift > opt.trace_error_tol)
            throw std::runtime_error("rk4_evolve: trace drift " + std::to_string(drift) +
                                     " at t = " + std::to_string(t) +
                                     " (step size too large or state blew up)");
        double herm = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
        traj.max_hermiticity_defect = std::max(traj.max_hermiticity_defect, herm);

        if (opt.snapshot_stride > 0 && (step % opt.snapshot_stride == 0 || step == n_steps)) {
            traj.snapshot_times.push_back(t);
            if (delta_of) traj.snapshot_deltas.push_back(delta_of(t));
            traj.snapshots.push_back(rho);
        }
        if (opt.extra_sampler) opt.extra_sampler(t, rho, traj);
    };

    sample(0, t0);
    for (long s = 0; s < n_steps; ++s) {
        const double t = t0 + double(s) * h;

        left_at(t, left);
        ws.compute(left, jumps, rho, k1);
        stage = rho + (0.5 * h) * k1;

        left_at(t + 0.5 * h, left);
        ws.compute(left, jumps, stage, k2);
        stage = rho + (0.5 * h) * k2;
        ws.compute(left, jumps, stage, k3);
        stage = rho + h * k3;

        left_at(t + h, left);
        ws.compute(left, jumps, stage, k4);

        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        hermitize(rho);

        if ((s + 1) % opt.sample_stride == 0 || s + 1 == n_steps)
            sample(s + 1, t0 + double(s + 1) * h);
    }

    // drift is below trace_error_tol here, so this is a roundoff cleanup,
    // never a silent repair of a broken run
    rho /= rho.trace().real();
    traj.final_state = std::move(rho);
    return traj;
}

SpMat anticommutator_part(const std::vector<Dissipator>& dissipators, int dim) {
    SpMat acc(dim, dim);
    for (const Dissipator& d : dissipators) {
        if (d.rate == 0.0) continue;
        SpMat xdx = d.jump_op.sparse().adjoint() * d.jump_op.sparse();
        acc = acc + SpMat(cd(-0.5 * d.rate) * xdx);
    }
    return acc;
}

}  // namespace

std::vector<Dissipator> thermal_dissipators(const SystemParams& p, FockCutoff optical,
                                            FockCutoff mechanical) {
    p.validate();
    std::vector<Dissipator> out;
    const OperatorMatrix a = lift(annihilation_op(optical), mechanical, Mode::Optical);
    const OperatorMatrix b = lift(annihilation_op(mechanical), optical, Mode::Mechanical);
    if (p.kappa * (p.nbar_a + 1.0) > 0.0) out.push_back({a, p.kappa * (p.nbar_a + 1.0)});
    if (p.kappa * p.nbar_a > 0.0) out.push_back({a.adjoint(), p.kappa * p.nbar_a});
    if (p.gamma * (p.nbar_b + 1.0) > 0.0) out.push_back({b, p.gamma * (p.nbar_b + 1.0)});
    if (p.gamma * p.nbar_b > 0.0) out.push_back({b.adjoint(), p.gamma * p.nbar_b});
    return out;
}

OperatorMatrix lindblad_rhs(const DensityMatrix& rho, const OperatorMatrix& H,
                            const std::vector<Dissipator>& dissipators) {
    if (H.dim() != rho.dim()) throw std::invalid_argument("lindblad_rhs: dimension mismatch");
    const Dense r = rho.dense();
    const Dense h = H.dense();
    Dense out = -kI * (h * r - r * h);
    for (const Dissipator& d : dissipators) {
        if (d.jump_op.dim() != rho.dim())
            throw std::invalid_argument("lindblad_rhs: dissipator dimension mismatch");
        if (d.rate < 0.0) throw std::invalid_argument("lindblad_rhs: negative rate");
        const Dense x = d.jump_op.dense();
        const Dense xdx = x.adjoint() * x;
        out += cd(d.rate) * (x * r * x.adjoint() - 0.5 * (xdx * r + r * xdx));
    }
    return OperatorMatrix(out);
}

Trajectory rk4_evolve(const DensityMatrix& rho0,
                      const std::function<OperatorMatrix(double)>& H_of_t,
                      const std::vector<Dissipator>& dissipators, double t0, double t1, double dt,
                      const EvolveOptions& opt) {
    const int dim = rho0.dim();
    const OperatorMatrix h0 = H_of_t(t0);
    if (h0.dim() != dim) throw std::invalid_argument("rk4_evolve: H dimension mismatch");
    if (h0.hermiticity_defect() > 1e-10)
        throw std::invalid_argument("rk4_evolve: Hamiltonian is not Hermitian");

    const SpMat anti = anticommutator_part(dissipators, dim);
    auto left_at = [&](double t, SpMat& left) {
        left = SpMat(cd(-kI) * H_of_t(t).sparse()) + anti;
    };
    auto energy_at = [&](double t, const Dense& rho) {
        return sparse_trace_product(H_of_t(t).sparse(), rho).real();
    };
    return run_rk4(rho0, left_at, energy_at, dissipators, t0, t1, dt, opt,
                   spectral_scale(h0.sparse()));
}

Trajectory evolve_detuned(const DensityMatrix& rho0, const HamiltonianParts& parts,
                          const std::function<double(double)>& delta_of_t,
                          const std::vector<Dissipator>& dissipators, double t0, double t1,
                          double dt, const EvolveOptions& opt) {
    const int dim = rho0.dim();
    if (parts.rest.dim() != dim || parts.number_a.dim() != dim)
        throw std::invalid_argument("evolve_detuned: dimension mismatch");

    // number_a is diagonal, so -delta(t) na contributes a diagonal update to
    // the left factor; the sparse pattern of left is fixed once.
    Eigen::VectorXcd na_diag = Eigen::VectorXcd::Zero(dim);
    for (int k = 0; k < parts.number_a.sparse().outerSize(); ++k)
        for (SpMat::InnerIterator it(parts.number_a.sparse(), k); it; ++it) {
            if (it.row() != it.col())
                throw std::invalid_argument("evolve_detuned: number_a must be diagonal");
            na_diag(it.row()) = it.value();
        }

    SpMat static_left = SpMat(cd(-kI) * parts.rest.sparse()) + anticommutator_part(dissipators, dim);
    // make sure every diagonal slot exists so the per-stage update never
    // changes the sparsity pattern
    SpMat eye(dim, dim);
    eye.setIdentity();
    static_left = SpMat(static_left + SpMat(cd(0.0, 0.0) * eye));
    static_left.makeCompressed();

    // capture the static diagonal values once
    Eigen::VectorXcd static_diag(dim);
    for (int i = 0; i < dim; ++i) static_diag(i) = static_left.coeff(i, i);

    auto left_at = [&, left_cache = static_left](double t, SpMat& left) mutable {
        const double delta = delta_of_t(t);
        for (int i = 0; i < dim; ++i)
            left_cache.coeffRef(i, i) = static_diag(i) + kI * cd(delta) * na_diag(i);
        left = left_cache;
    };
    auto energy_at = [&](double t, const Dense& rho) {
        const double delta = delta_of_t(t);
        cd e = sparse_trace_product(parts.rest.sparse(), rho);
        for (int i = 0; i < dim; ++i) e -= cd(delta) * na_diag(i) * rho(i, i);
        return e.real();
    };

    const double scale = spectral_scale(parts.at(delta_of_t(t0)).sparse());
    return run_rk4(rho0, left_at, energy_at, dissipators, t0, t1, dt, opt, scale, delta_of_t);
}

DensityMatrix expm_oracle(const DensityMatrix& rho0, const OperatorMatrix& H,
                          const std::vector<Dissipator>& dissipators, double t) {
    const int dim = rho0.dim();
    if (dim > 200) throw std::invalid_argument("expm_oracle: dimension above 200");
    if (H.dim() != dim) throw std::invalid_argument("expm_oracle: dimension mismatch");
    if (t < 0.0) throw std::invalid_argument("expm_oracle: t must be >= 0");

    const Dense h = H.dense();
    const Dense id = Dense::Identity(dim, dim);
    // column-stacking convention: vec(A X B) = (B^T \otimes A) vec(X)
    Dense L = -kI * (Eigen::kroneckerProduct(id, h) - Eigen::kroneckerProduct(h.transpose(), id));
    for (const Dissipator& d : dissipators) {
        if (d.rate == 0.0) continue;
        const Dense x = d.jump_op.dense();
        const Dense xdx = x.adjoint() * x;
        L += cd(d.rate) *
             (Eigen::kroneckerProduct(x.conjugate(), x) -
              0.5 * (Eigen::kroneckerProduct(id, xdx) + Eigen::kroneckerProduct(xdx.transpose(), id)))
                 .eval();
    }
    Dense prop = (L * cd(t)).exp();
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.dense().data(), dim * dim);
    Eigen::VectorXcd out = prop * v;
    Dense rho = Eigen::Map<Dense>(out.data(), dim, dim);
    // clean the roundoff asymmetry of the dense exponential
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();
    return DensityMatrix(OperatorMatrix(rho));
}

}  // namespace omhe
