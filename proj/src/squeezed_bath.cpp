#include "omhe/squeezed_bath.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace omhe {

namespace {

using DenseReal = Eigen::MatrixXd;

// Project onto the Hermitian part once per step.  In exact arithmetic the
// rhs preserves Hermiticity, but on the anti-Hermitian error sector the
// damping terms act with reversed sign, so roundoff seeded there grows
// exponentially if left alone.
template <class Mat>
void hermitize_state(Mat& rho) {
    const Eigen::Index dim = rho.rows();
    for (Eigen::Index i = 0; i < dim; ++i) {
        rho(i, i) = 0.5 * (rho(i, i) + Eigen::numext::conj(rho(i, i)));
        for (Eigen::Index j = i + 1; j < dim; ++j) {
            const auto m = 0.5 * (rho(i, j) + Eigen::numext::conj(rho(j, i)));
            rho(i, j) = m;
            rho(j, i) = Eigen::numext::conj(m);
        }
    }
}

// The rotating-frame generator has real coefficients (B is real and Mbar has
// been rotated onto the real axis), so a real initial state stays real and
// the whole evolution can run in real arithmetic at a quarter of the flops.
// The same code also instantiates for complex states.
template <class Mat>
Mat run_effective_loop(const Mat& B, const Mat& left, double c_down, double c_up, double c_sq,
                       Mat rho, long n_steps, double h, long stride, EffectiveTrajectory& traj) {
    const Eigen::Index dim = rho.rows();
    const Mat Bd = B.adjoint();
    const Mat nop = Bd * B;
    const Mat B2 = B * B;
    const Mat x2 =
        0.5 * (B2 + Mat(B2.adjoint()) + 2.0 * nop + Mat(Mat::Identity(dim, dim)));

    Mat k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim), brb(dim, dim);

    auto rhs = [&](const Mat& r, Mat& out) {
        out.noalias() = left * r;
        out += Mat(out.adjoint());
        out.noalias() += c_down * (B * r * Bd);
        out.noalias() += c_up * (Bd * r * B);
        brb.noalias() = B * r * B;
        out += c_sq * brb;
        out += Mat(c_sq * brb.adjoint());
    };

    auto sample = [&](double now) {
        traj.times.push_back(now);
        const double pop = Eigen::numext::real((nop * rho).trace());
        traj.population.push_back(pop);
        const double ex2 = Eigen::numext::real((x2 * rho).trace());
        const auto eb = (B * rho).trace();
        const double ex = std::sqrt(2.0) * Eigen::numext::real(eb);
        const double ey = std::sqrt(2.0) * Eigen::numext::imag(eb);
        traj.var_X.push_back(ex2 - ex * ex);
        // <Y^2> = 2<n> + 1 - <X^2>  (X^2 + Y^2 = 2 B^dag B + 1)
        traj.var_Y.push_back(2.0 * pop + 1.0 - ex2 - ey * ey);
        traj.purity.push_back(rho.squaredNorm());
        const double drift = std::abs(rho.trace() - typename Mat::Scalar(1.0));
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        if (!std::isfinite(drift) || drift > 1e-6)
            throw std::runtime_error("evolve_effective_B: trace drift " + std::to_string(drift));
    };

    sample(0.0);
    for (long s = 0; s < n_steps; ++s) {
        rhs(rho, k1);
        stage = rho + (0.5 * h) * k1;
        rhs(stage, k2);
        stage = rho + (0.5 * h) * k2;
        rhs(stage, k3);
        stage = rho + h * k3;
        rhs(stage, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        hermitize_state(rho);
        if ((s + 1) % stride == 0 || s + 1 == n_steps) sample(double(s + 1) * h);
    }
    return rho;
}

}  // namespace

EffectiveBath effective_bath_exact(const BogoliubovMatrices& bog, double kappa, double gamma,
                                   double nbar_a, double nbar_b) {
    if (kappa < 0.0 || gamma < 0.0)
        throw std::invalid_argument("effective_bath_exact: rates must be >= 0");
    if (nbar_a < 0.0 || nbar_b < 0.0)
        throw std::invalid_argument("effective_bath_exact: occupations must be >= 0");

    const cd u12 = bog.U(0, 1), u22 = bog.U(1, 1);
    const cd v12 = bog.V(0, 1), v22 = bog.V(1, 1);

    const double gamma_B = kappa * (std::norm(u12) - std::norm(v12)) +
                           gamma * (std::norm(u22) - std::norm(v22));
    if (!(gamma_B > 0.0))
        throw std::domain_error("effective_bath_exact: effective decay rate is not positive");

    EffectiveBath bath;
    bath.Gamma_B = gamma_B;
    bath.Nbar_B = (kappa * (nbar_a + 1.0) * std::norm(v12) + kappa * nbar_a * std::norm(u12) +
                   gamma * (nbar_b + 1.0) * std::norm(v22) + gamma * nbar_b * std::norm(u22)) /
                  gamma_B;
    bath.Mbar_B =
        (kappa * (2.0 * nbar_a + 1.0) * v12 * u12 + gamma * (2.0 * nbar_b + 1.0) * v22 * u22) /
        gamma_B;

    // rotate B by theta so that Mbar e^{2 i theta} lands on the negative
    // real axis
    bath.Mbar_real = -std::abs(bath.Mbar_B);
    bath.rotation_angle =
        bath.Mbar_real == 0.0 ? 0.0 : 0.5 * (M_PI - std::arg(bath.Mbar_B));
    return bath;
}

QuadratureStats steady_variances(const EffectiveBath& bath) {
    QuadratureStats s;
    s.var_X = bath.Nbar_B - bath.Mbar_real + 0.5;
    s.var_Y = bath.Nbar_B + bath.Mbar_real + 0.5;
    return s;
}

SqueezingDecomposition squeezing_decomposition(const EffectiveBath& bath) {
    const double n = bath.Nbar_B;
    const double m = bath.Mbar_real;
    if (m * m > n * (n + 1.0) + 1e-10)
        throw std::domain_error(
            "squeezing_decomposition: |Mbar|^2 exceeds Nbar (Nbar + 1), not a physical "
            "squeezed thermal state");

    // (2n+1)^2 - 4m^2 = (2 N_th + 1)^2   and   tanh 2r = -2m/(2n+1)
    const double core = std::sqrt(std::max(0.0, (2.0 * n + 1.0) * (2.0 * n + 1.0) - 4.0 * m * m));
    SqueezingDecomposition d;
    d.N_th = 0.5 * (core - 1.0);
    d.r = 0.5 * std::atanh(-2.0 * m / (2.0 * n + 1.0));
    return d;
}

EffectiveTrajectory evolve_effective_B(const EffectiveBath& bath, double omega_B,
                                       const DensityMatrix& rho_B0, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_effective_B: dt must be > 0");
    if (t < 0.0) throw std::invalid_argument("evolve_effective_B: t must be >= 0");

    const int dim = rho_B0.dim();
    const double gm = bath.Gamma_B;
    const double n = bath.Nbar_B;
    const double m = bath.Mbar_real;

    EffectiveTrajectory traj;
    if (dim - 1 < 8.0 * n + 10.0)
        traj.warnings.push_back("cutoff " + std::to_string(dim - 1) +
                                " is below the 8 Nbar + 10 guideline for Nbar = " +
                                std::to_string(n));

    const long n_steps = t == 0.0 ? 0 : std::max(1L, std::lround(t / dt));
    const double h = n_steps == 0 ? 0.0 : t / double(n_steps);
    const long stride = std::max(1L, n_steps / 2000);

    // rhs(rho) = left rho + rho left^dag + sum of sandwich pairs, with
    //   left = -[Gamma (N+1) B^dag B + Gamma N B B^dag + Gamma M (B^2 + B^dag^2)]/2
    const double c_down = gm * (n + 1.0), c_up = gm * n, c_sq = gm * m;
    const Dense rho0 = rho_B0.dense();

    Dense rho;
    if (rho0.imag().cwiseAbs().maxCoeff() == 0.0) {
        const DenseReal B = annihilation_op(FockCutoff{dim - 1}).dense().real();
        const DenseReal B2 = B * B;
        const DenseReal left =
            -0.5 * (gm * (n + 1.0) * (B.transpose() * B) + gm * n * (B * B.transpose()) +
                    gm * m * (B2 + DenseReal(B2.transpose())));
        rho = run_effective_loop<DenseReal>(B, left, c_down, c_up, c_sq, rho0.real(), n_steps,
                                            h, stride, traj)
                  .cast<cd>();
    } else {
        const Dense B = annihilation_op(FockCutoff{dim - 1}).dense();
        const Dense B2 = B * B;
        const Dense left = -0.5 * (gm * (n + 1.0) * (B.adjoint() * B) + gm * n * (B * B.adjoint()) +
                                   gm * m * (B2 + Dense(B2.adjoint())));
        rho = run_effective_loop<Dense>(B, left, c_down, c_up, c_sq, rho0, n_steps, h, stride,
                                        traj);
    }

    // back to the lab frame: rho_jk picks up e^{-i omega_B (j - k) t}
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            rho(j, k) *= std::exp(cd(0.0, -omega_B * double(j - k) * t));
    traj.final_state = std::move(rho);
    return traj;
}

}  // namespace omhe
