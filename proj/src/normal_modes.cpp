#include "omhe/normal_modes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace omhe {

namespace {

// Dynamical matrix K = Sigma_z M of the quadratic form, acting on
// (a, b, a^dag, b^dag).
Eigen::Matrix4d dynamical_matrix(double delta, double g) {
    Eigen::Matrix4d K;
    // clang-format off
    K << -delta,   g,    0.0,   g,
            g,    1.0,   g,    0.0,
           0.0,   -g,   delta, -g,
           -g,    0.0,  -g,   -1.0;
    // clang-format on
    return K;
}

double symplectic_norm(const Eigen::Vector4cd& w) {
    return std::norm(w(0)) + std::norm(w(1)) - std::norm(w(2)) - std::norm(w(3));
}

void check_stable_or_throw(double delta, double g) {
    if (!stability_check(delta, g))
        throw std::domain_error("polariton modes undefined: stability requires delta < -4 g^2 "
                                "(delta = " + std::to_string(delta) + ", g = " + std::to_string(g) + ")");
}

}  // namespace

// ---- Spectrum -------------------------------------------------------------

bool stability_check(double delta, double g) { return delta < -4.0 * g * g; }

PolaritonSpectrum polariton_frequencies(double delta, double g) {
    check_stable_or_throw(delta, g);
    const double d2 = delta * delta;
    const double rad = (d2 - 1.0) * (d2 - 1.0) - 16.0 * g * g * delta;
    const double root = std::sqrt(rad);
    PolaritonSpectrum s;
    s.omega_A = std::sqrt(0.5 * (d2 + 1.0 + root));
    s.omega_B = std::sqrt(0.5 * (d2 + 1.0 - root));
    return s;
}

double avoided_crossing_gap(double g) {
    if (!(g >= 0.0 && g < 0.5))
        throw std::domain_error("avoided_crossing_gap: need 0 <= g < 1/2");
    return std::sqrt(1.0 + 2.0 * g) - std::sqrt(1.0 - 2.0 * g);
}

double spectrum_offset(double delta, double g) {
    const PolaritonSpectrum s = polariton_frequencies(delta, g);
    return 0.5 * (s.omega_A + s.omega_B + delta - 1.0);
}

// ---- Bogoliubov transformation ---------------------------------------------

double BogoliubovMatrices::constraint_residual() const {
    const Eigen::Matrix2cd c1 = U.adjoint() * U - V.adjoint() * V - Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd c2 = U.transpose() * V - V.transpose() * U;
    return std::max(c1.cwiseAbs().maxCoeff(), c2.cwiseAbs().maxCoeff());
}

double BogoliubovMatrices::roundtrip_residual() const {
    Eigen::Matrix4cd fwd, inv;
    fwd << U.adjoint(), -V.adjoint(), -V.transpose(), U.transpose();
    inv << U, V.conjugate(), V, U.conjugate();
    const Eigen::Matrix4cd r1 = fwd * inv - Eigen::Matrix4cd::Identity();
    const Eigen::Matrix4cd r2 = inv * fwd - Eigen::Matrix4cd::Identity();
    return std::max(r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff());
}

BogoliubovMatrices bogoliubov_numeric(double delta, double g) {
    check_stable_or_throw(delta, g);

    const Eigen::Matrix4d K = dynamical_matrix(delta, g);
    Eigen::EigenSolver<Eigen::Matrix4d> es(K);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("bogoliubov_numeric: eigensolver failed");

    // collect the two positive-frequency eigenvectors
    struct ModeVec {
        double omega;
        Eigen::Vector4cd w;
    };
    std::vector<ModeVec> pos;
    for (int i = 0; i < 4; ++i) {
        const cd ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > 1e-9)
            throw std::runtime_error("bogoliubov_numeric: complex eigenvalue in stable region");
        if (ev.real() > 0.0) pos.push_back({ev.real(), es.eigenvectors().col(i)});
    }
    if (pos.size() != 2)
        throw std::runtime_error("bogoliubov_numeric: expected two positive eigenfrequencies");
    // branch A = upper
    if (pos[0].omega < pos[1].omega) std::swap(pos[0], pos[1]);

    BogoliubovMatrices out;
    out.delta = delta;
    out.g = g;
    out.spectrum.omega_A = pos[0].omega;
    out.spectrum.omega_B = pos[1].omega;

    for (int col = 0; col < 2; ++col) {
        Eigen::Vector4cd w = pos[col].w;
        const double s = symplectic_norm(w);
        if (!(s > 0.0))
            throw std::runtime_error("bogoliubov_numeric: non-positive symplectic norm");
        w /= std::sqrt(s);
        // gauge: U diagonal entry real >= 0, falling back to the largest
        // U entry when the diagonal one vanishes
        int ref = col;  // (a,A) or (b,B)
        if (std::abs(w(ref)) < 1e-12) ref = std::abs(w(0)) >= std::abs(w(1)) ? 0 : 1;
        const cd phase = w(ref) / std::abs(w(ref));
        w /= phase;
        out.U(0, col) = w(0);
        out.U(1, col) = w(1);
        out.V(0, col) = w(2);
        out.V(1, col) = w(3);
    }

    if (out.constraint_residual() > 1e-8 || out.roundtrip_residual() > 1e-8)
        throw std::runtime_error("bogoliubov_numeric: symplectic constraint residual above 1e-8");
    return out;
}

std::vector<BogoliubovMatrices> bogoliubov_sweep(const std::vector<double>& deltas, double g) {
    if (deltas.empty()) throw std::invalid_argument("bogoliubov_sweep: empty grid");
    if (g < 1e-6) {
        for (double d : deltas)
            if (std::abs(d + 1.0) < 0.1)
                throw std::invalid_argument(
                    "bogoliubov_sweep: refusing to track branches through the delta = -1 "
                    "crossing with g < 1e-6 (gap closes)");
    }

    std::vector<BogoliubovMatrices> out;
    out.reserve(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        BogoliubovMatrices bog = bogoliubov_numeric(deltas[i], g);
        if (i > 0) {
            // overlap of column vectors (U;V) with the previous point; labels
            // follow the larger overlap
            const BogoliubovMatrices& prev = out.back();
            auto colvec = [](const BogoliubovMatrices& b, int c) {
                Eigen::Vector4cd w;
                w << b.U(0, c), b.U(1, c), b.V(0, c), b.V(1, c);
                return w;
            };
            const double keep = std::abs(colvec(prev, 0).dot(colvec(bog, 0))) +
                                std::abs(colvec(prev, 1).dot(colvec(bog, 1)));
            const double swap = std::abs(colvec(prev, 0).dot(colvec(bog, 1))) +
                                std::abs(colvec(prev, 1).dot(colvec(bog, 0)));
            if (swap > keep) {
                // would indicate a genuine crossing; with g >= 1e-6 the gap is
                // open, so frequency order already matches continuation
                std::swap(bog.spectrum.omega_A, bog.spectrum.omega_B);
                bog.U.col(0).swap(bog.U.col(1));
                bog.V.col(0).swap(bog.V.col(1));
            }
        }
        out.push_back(std::move(bog));
    }
    return out;
}

// ---- Polariton operators ----------------------------------------------------

OperatorMatrix polariton_annihilation(const BogoliubovMatrices& bog, FockCutoff optical,
                                      FockCutoff mechanical, Branch branch) {
    const int col = branch == Branch::A ? 0 : 1;
    const OperatorMatrix a = lift(annihilation_op(optical), mechanical, Mode::Optical);
    const OperatorMatrix b = lift(annihilation_op(mechanical), optical, Mode::Mechanical);
    const OperatorMatrix ad = lift(creation_op(optical), mechanical, Mode::Optical);
    const OperatorMatrix bd = lift(creation_op(mechanical), optical, Mode::Mechanical);
    return std::conj(bog.U(0, col)) * a + std::conj(bog.U(1, col)) * b -
           std::conj(bog.V(0, col)) * ad - std::conj(bog.V(1, col)) * bd;
}

OperatorMatrix polariton_number_operator(const BogoliubovMatrices& bog, FockCutoff optical,
                                         FockCutoff mechanical, Branch branch) {
    const OperatorMatrix A = polariton_annihilation(bog, optical, mechanical, branch);
    return A.adjoint() * A;
}

double polariton_population_thermal(const BogoliubovMatrices& bog, double nbar_a, double nbar_b,
                                    Branch branch) {
    const int col = branch == Branch::A ? 0 : 1;
    const double nu[2] = {nbar_a, nbar_b};
    double out = 0.0;
    for (int j = 0; j < 2; ++j)
        out += std::norm(bog.U(j, col)) * nu[j] + std::norm(bog.V(j, col)) * (nu[j] + 1.0);
    return out;
}

double approx_population_B(double delta, double g, double nbar_a, double nbar_b, Side side) {
    check_stable_or_throw(delta, g);
    const double d2m1 = delta * delta - 1.0;
    if (std::abs(d2m1) < 1e-12)
        throw std::domain_error("approx_population_B: expansion singular at delta = -1");
    const double like = (1.0 + 4.0 * delta * g * g / (d2m1 * d2m1));
    const double unlike = 2.0 * (1.0 + delta * delta) * g * g / (d2m1 * d2m1);
    const double vac = (g / (1.0 - delta)) * (g / (1.0 - delta));
    // B is the lower branch: phonon-like for delta < -1, photon-like above
    if (side == Side::PhononLike) return like * nbar_b + unlike * nbar_a + vac;
    return like * nbar_a + unlike * nbar_b + vac;
}

}  // namespace omhe
