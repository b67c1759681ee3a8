#include <cmath>

#include "doctest.h"
#include "omhe/squeezed_bath.hpp"

using namespace omhe;

namespace {

// exact effective-bath values, cross-checked against an independent
// symplectic solve
namespace frozen {
// delta=-3, g=0.05, kappa=0.03, gamma=0.001, nbar_a=0, nbar_b=10
constexpr double gamma_B_ph = 0.0010135746636092207;
constexpr double nbar_B_ph = 9.8661070154047277;
constexpr double mbar_B_ph = 0.028700264849675836;
// delta=-0.4, g=0.2, kappa=0.03, gamma=0.001, nbar_a=0, nbar_b=2
constexpr double gamma_B_pt = 0.027920814075420856;
constexpr double nbar_B_pt = 0.031423248269291458;
constexpr double mbar_B_pt = 0.15610004727646884;
// steady occupation vs kappa/gamma in {1,3,10,30} at (-3, 0.05, nbar_b=10)
constexpr double nbar_vs_ratio[4] = {9.9954941992022981, 9.9864582742608139,
                                     9.9549652117781484, 9.8661070154047277};
}  // namespace frozen

EffectiveBath bath_at(double delta, double g, double kappa, double gamma, double nbar_a,
                      double nbar_b) {
    return effective_bath_exact(bogoliubov_numeric(delta, g), kappa, gamma, nbar_a, nbar_b);
}

// second-order forms for the phonon-like (delta < -1) and photon-like
// (-1 < delta < 0) sides, nbar_a = 0
double nbar_second_order_phonon(double d, double g, double k, double gm, double nb) {
    const double den = (d * d - 1.0) * (d * d - 1.0);
    return (1.0 + 4.0 * d * g * g * k / (gm * den)) * nb + (k / gm) * std::pow(g / (1.0 - d), 2);
}
double gamma_second_order_phonon(double d, double g, double k, double gm) {
    return gm + (gm - k) * 4.0 * g * g * d / std::pow(d * d - 1.0, 2);
}
double nbar_second_order_photon(double d, double g, double k, double gm, double nb) {
    const double den = (d * d - 1.0) * (d * d - 1.0);
    return 2.0 * gm * (1.0 + d * d) * g * g * nb / (k * den) +
           (gm / k) * std::pow(g / (1.0 - d), 2);
}
double gamma_second_order_photon(double d, double g, double k, double gm) {
    return k - (gm - k) * 4.0 * g * g * d / std::pow(d * d - 1.0, 2);
}

}  // namespace

TEST_CASE("decoupled limit reduces to the bare mechanical reservoir") {
    EffectiveBath b = bath_at(-3.0, 0.0, 0.03, 0.001, 0.0, 10.0);
    CHECK(b.Gamma_B == doctest::Approx(0.001).epsilon(1e-12));
    CHECK(b.Nbar_B == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::abs(b.Mbar_B) < 1e-14);
    CHECK(b.Mbar_real == 0.0);
    CHECK(b.rotation_angle == 0.0);
}

TEST_CASE("effective bath on the phonon-like side") {
    EffectiveBath b = bath_at(-3.0, 0.05, 0.03, 0.001, 0.0, 10.0);
    CHECK(b.Gamma_B == doctest::Approx(frozen::gamma_B_ph).epsilon(1e-12));
    CHECK(b.Nbar_B == doctest::Approx(frozen::nbar_B_ph).epsilon(1e-12));
    CHECK(b.Mbar_B.real() == doctest::Approx(frozen::mbar_B_ph).epsilon(1e-12));
    CHECK(std::abs(b.Mbar_B.imag()) < 1e-14);
    // the raw correlation is positive, so the gauge rotates by pi/2
    CHECK(b.Mbar_real == doctest::Approx(-frozen::mbar_B_ph).epsilon(1e-12));
    CHECK(b.rotation_angle == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("effective bath on the photon-like side") {
    EffectiveBath b = bath_at(-0.4, 0.2, 0.03, 0.001, 0.0, 2.0);
    CHECK(b.Gamma_B == doctest::Approx(frozen::gamma_B_pt).epsilon(1e-12));
    CHECK(b.Nbar_B == doctest::Approx(frozen::nbar_B_pt).epsilon(1e-12));
    CHECK(b.Mbar_B.real() == doctest::Approx(frozen::mbar_B_pt).epsilon(1e-12));
    CHECK(b.Mbar_real * b.Mbar_real <= b.Nbar_B * (b.Nbar_B + 1.0) + 1e-10);
}

TEST_CASE("second-order forms converge at fourth order in g") {
    // phonon-like side
    auto err_ph = [](double g) {
        EffectiveBath b = bath_at(-3.0, g, 0.03, 0.001, 0.0, 10.0);
        return std::pair{std::abs(b.Nbar_B - nbar_second_order_phonon(-3.0, g, 0.03, 0.001, 10.0)),
                         std::abs(b.Gamma_B - gamma_second_order_phonon(-3.0, g, 0.03, 0.001))};
    };
    auto [n1, g1] = err_ph(0.05);
    auto [n2, g2] = err_ph(0.025);
    CHECK(n1 < 3e-3);
    CHECK(g1 < 5e-8);
    CHECK(n1 / n2 == doctest::Approx(16.0).epsilon(0.4));
    CHECK(g1 / g2 == doctest::Approx(16.0).epsilon(0.4));

    // photon-like side
    auto err_pt = [](double g) {
        EffectiveBath b = bath_at(-0.4, g, 0.03, 0.001, 0.0, 2.0);
        return std::pair{std::abs(b.Nbar_B - nbar_second_order_photon(-0.4, g, 0.03, 0.001, 2.0)),
                         std::abs(b.Gamma_B - gamma_second_order_photon(-0.4, g, 0.03, 0.001))};
    };
    auto [n3, g3] = err_pt(0.05);
    auto [n4, g4] = err_pt(0.025);
    CHECK(n3 < 1.5e-4);
    CHECK(g3 < 5e-6);
    CHECK(n3 / n4 == doctest::Approx(16.0).epsilon(0.4));
    CHECK(g3 / g4 == doctest::Approx(16.0).epsilon(0.4));
}

TEST_CASE("decay-rate limits on both sides of the crossing") {
    CHECK(std::abs(bath_at(-3.0, 1e-6, 0.03, 0.001, 0.0, 10.0).Gamma_B - 0.001) < 1e-8);
    CHECK(std::abs(bath_at(-0.4, 1e-6, 0.03, 0.001, 0.0, 2.0).Gamma_B - 0.03) < 1e-8);
    // occupations follow the reservoir the branch attaches to
    CHECK(std::abs(bath_at(-3.0, 1e-6, 0.03, 0.001, 0.0, 10.0).Nbar_B - 10.0) < 1e-8);
    CHECK(std::abs(bath_at(-0.4, 1e-6, 0.03, 0.001, 0.5, 2.0).Nbar_B - 0.5) < 1e-8);
}

TEST_CASE("equal decay rates reproduce the thermal polariton population") {
    BogoliubovMatrices bog = bogoliubov_numeric(-3.0, 0.05);
    EffectiveBath b = effective_bath_exact(bog, 0.001, 0.001, 0.0, 10.0);
    CHECK(b.Nbar_B ==
          doctest::Approx(polariton_population_thermal(bog, 0.0, 10.0, Branch::B)).epsilon(1e-12));
}

TEST_CASE("steady occupation decreases with kappa/gamma here") {
    // the second-order occupation has slope 4*delta*g^2*nbar_b/(delta^2-1)^2
    // + (g/(1-delta))^2 per unit kappa/gamma, negative at these parameters,
    // so a larger optical decay drags the polariton below its thermal value
    const double ratios[4] = {1.0, 3.0, 10.0, 30.0};
    double prev = 1e300;
    for (int i = 0; i < 4; ++i) {
        EffectiveBath b = bath_at(-3.0, 0.05, 0.001 * ratios[i], 0.001, 0.0, 10.0);
        CHECK(b.Nbar_B == doctest::Approx(frozen::nbar_vs_ratio[i]).epsilon(1e-12));
        CHECK(b.Nbar_B < prev);
        prev = b.Nbar_B;
    }
}

TEST_CASE("steady variances") {
    EffectiveBath vac;
    QuadratureStats s = steady_variances(vac);
    CHECK(s.var_X == doctest::Approx(0.5));
    CHECK(s.var_Y == doctest::Approx(0.5));

    EffectiveBath th;
    th.Nbar_B = 1.0;
    s = steady_variances(th);
    CHECK(s.var_X == doctest::Approx(1.5));
    CHECK(s.var_Y == doctest::Approx(1.5));

    EffectiveBath b = bath_at(-3.0, 0.1, 0.03, 0.001, 0.0, 10.0);
    s = steady_variances(b);
    CHECK(s.var_X * s.var_Y >= 0.25);
    CHECK((s.var_X + s.var_Y - 1.0) / 2.0 == doctest::Approx(b.Nbar_B).epsilon(1e-12));
    CHECK(s.var_X > s.var_Y);  // Mbar_real <= 0 anti-squeezes X
}

TEST_CASE("uncertainty product holds over the stable grid") {
    for (double delta : {-4.0, -3.0, -2.0, -1.5, -1.0, -0.7, -0.4, -0.2}) {
        for (double g : {0.01, 0.05, 0.1, 0.2}) {
            if (!stability_check(delta, g)) continue;
            EffectiveBath b = bath_at(delta, g, 0.03, 0.001, 0.1, 5.0);
            QuadratureStats s = steady_variances(b);
            CHECK(s.var_X * s.var_Y >= 0.25 - 1e-10);
            CHECK(std::norm(b.Mbar_B) <= b.Nbar_B * (b.Nbar_B + 1.0) + 1e-10);
        }
    }
}

TEST_CASE("squeezing decomposition") {
    EffectiveBath plain;
    plain.Nbar_B = 3.0;
    SqueezingDecomposition d = squeezing_decomposition(plain);
    CHECK(d.N_th == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(d.r == 0.0);

    // forward map from (N_th=1, r=0.3) and back
    const double nth = 1.0, r = 0.3;
    EffectiveBath fwd;
    fwd.Nbar_B = nth + (2.0 * nth + 1.0) * std::sinh(r) * std::sinh(r);
    fwd.Mbar_real = -std::cosh(r) * std::sinh(r) * (2.0 * nth + 1.0);
    d = squeezing_decomposition(fwd);
    CHECK(d.N_th == doctest::Approx(nth).epsilon(1e-10));
    CHECK(d.r == doctest::Approx(r).epsilon(1e-10));

    // the worked example: N=2 with correlation magnitude 3/2
    EffectiveBath ex;
    ex.Nbar_B = 2.0;
    ex.Mbar_B = cd(1.5, 0.0);
    ex.Mbar_real = -1.5;
    d = squeezing_decomposition(ex);
    CHECK(d.N_th == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(d.r == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));

    // maximum squeezing collapses the thermal core
    EffectiveBath max;
    max.Nbar_B = 2.0;
    max.Mbar_real = -std::sqrt(2.0 * 3.0);
    d = squeezing_decomposition(max);
    CHECK(d.N_th == doctest::Approx(0.0).epsilon(1e-7));

    EffectiveBath bad;
    bad.Nbar_B = 1.0;
    bad.Mbar_real = -1.5;  // 2.25 > 1*2
    CHECK_THROWS_AS(squeezing_decomposition(bad), std::domain_error);
}

TEST_CASE("effective evolution reaches the thermal steady state for M = 0") {
    EffectiveBath b;
    b.Gamma_B = 1.0;
    b.Nbar_B = 2.0;
    const FockCutoff c{26};
    DensityMatrix rho0 = thermal_state(0.0, c).rho;

    EffectiveTrajectory traj = evolve_effective_B(b, 0.9, rho0, 24.0, 5e-3);

    // the truncated generator's exact fixed point is the renormalised
    // geometric state, whose mean sits slightly below Nbar
    const double mean_trunc =
        expectation(thermal_state(2.0, c).rho, number_op(c)).real();
    CHECK(traj.population.back() == doctest::Approx(mean_trunc).epsilon(1e-9));
    CHECK(traj.population.back() == doctest::Approx(2.0).epsilon(5e-4));
    CHECK(traj.var_X.back() == doctest::Approx(mean_trunc + 0.5).epsilon(1e-9));
    CHECK(traj.var_Y.back() == doctest::Approx(mean_trunc + 0.5).epsilon(1e-9));
    CHECK(traj.max_trace_drift < 1e-10);
    CHECK(traj.warnings.empty());
}

TEST_CASE("effective evolution matches the closed-form squeezed variances") {
    EffectiveBath b;
    b.Gamma_B = 1.0;
    b.Nbar_B = 2.0;
    b.Mbar_B = cd(1.5, 0.0);
    b.Mbar_real = -1.5;
    // strong squeezing populates high Fock states, so the 8 Nbar + 10
    // guideline is nowhere near enough for 1e-4 accuracy here
    DensityMatrix rho0 = thermal_state(2.0, FockCutoff{59}).rho;

    EffectiveTrajectory traj = evolve_effective_B(b, 0.9, rho0, 14.0, 2e-3);
    QuadratureStats s = steady_variances(b);
    CHECK(std::abs(traj.var_X.back() - s.var_X) < 1e-4);
    CHECK(std::abs(traj.var_Y.back() - s.var_Y) < 1e-4);
    CHECK(std::abs(traj.population.back() - b.Nbar_B) < 1e-4);

    // squeezed steady state is not thermal: number distribution deviates
    // from the geometric law far above the integrator noise floor
    auto chi2_vs_geometric = [](const Dense& rho, double nbar) {
        const int dim = static_cast<int>(rho.rows());
        const double ratio = nbar / (nbar + 1.0);
        std::vector<double> q(dim);
        double norm = 0.0;
        for (int n = 0; n < dim; ++n) {
            q[n] = std::pow(ratio, n);
            norm += q[n];
        }
        double chi2 = 0.0;
        for (int n = 0; n < dim; ++n) {
            q[n] /= norm;
            const double p = rho(n, n).real();
            if (q[n] > 1e-12) chi2 += (p - q[n]) * (p - q[n]) / q[n];
        }
        return chi2;
    };

    EffectiveBath th;
    th.Gamma_B = 1.0;
    th.Nbar_B = 2.0;
    EffectiveTrajectory thermal = evolve_effective_B(th, 0.9, rho0, 14.0, 2e-3);

    const double floor = chi2_vs_geometric(thermal.final_state, 2.0);
    const double dev = chi2_vs_geometric(traj.final_state, traj.population.back());
    CHECK(floor < 1e-8);
    CHECK(dev > 10.0 * std::max(floor, 1e-12));
}

TEST_CASE("transient coherence decays and the lab frame picks up the phase") {
    EffectiveBath b;
    b.Gamma_B = 0.5;
    b.Nbar_B = 0.2;
    const int dim = 14;
    Dense psi = Dense::Zero(dim, 1);
    psi(0, 0) = 1.0 / std::sqrt(2.0);
    psi(1, 0) = 1.0 / std::sqrt(2.0);
    DensityMatrix rho0{OperatorMatrix(Dense(psi * psi.adjoint()))};

    EffectiveTrajectory a = evolve_effective_B(b, 0.0, rho0, 2.0, 1e-3);
    EffectiveTrajectory c = evolve_effective_B(b, 1.7, rho0, 2.0, 1e-3);

    // populations are frame-independent
    CHECK(a.population.back() == doctest::Approx(c.population.back()).epsilon(1e-12));
    // rho_{01} differs exactly by e^{+i omega t}
    const cd expect = a.final_state(0, 1) * std::exp(cd(0.0, 1.7 * 2.0));
    CHECK(std::abs(c.final_state(0, 1) - expect) < 1e-12);

    // coherence damps toward <X> = <Y> = 0, so late-time var_X uses a
    // vanishing mean
    CHECK(std::abs(a.final_state(0, 1)) < std::abs(rho0.dense()(0, 1)));
}

TEST_CASE("cutoff guideline warning and argument validation") {
    EffectiveBath b;
    b.Gamma_B = 1.0;
    b.Nbar_B = 2.0;
    DensityMatrix small = thermal_state(0.0, FockCutoff{8}).rho;
    EffectiveTrajectory traj = evolve_effective_B(b, 0.0, small, 0.1, 1e-3);
    REQUIRE(traj.warnings.size() == 1);

    CHECK_THROWS_AS(evolve_effective_B(b, 0.0, small, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve_effective_B(b, 0.0, small, -1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(effective_bath_exact(bogoliubov_numeric(-3.0, 0.05), -0.1, 0.001, 0.0, 1.0),
                    std::invalid_argument);

    // a transformation with more anomalous than normal weight has no
    // positive effective decay rate
    BogoliubovMatrices fake = bogoliubov_numeric(-3.0, 0.05);
    fake.U(1, 1) = 0.1;
    fake.V(1, 1) = 2.0;
    fake.U(0, 1) = 0.0;
    fake.V(0, 1) = 0.0;
    CHECK_THROWS_AS(effective_bath_exact(fake, 0.0, 0.001, 0.0, 1.0), std::domain_error);
}
