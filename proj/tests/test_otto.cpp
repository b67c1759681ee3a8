#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "omhe/dynamics.hpp"
#include "omhe/fock.hpp"
#include "omhe/model.hpp"
#include "omhe/normal_modes.hpp"
#include "omhe/otto.hpp"

using namespace omhe;

// Reference values computed independently with numpy: node energies from the
// second-order closed forms, work/efficiency from the exact symplectic
// spectra and thermal polariton populations.
namespace frozen {
// delta_i=-3, delta_f=-0.4, g=0.2, nbar_b=2
constexpr double E_g02[4] = {1.9254500000000001, 0.5994946550048591, 0.080164129143721036,
                             0.27251831065759652};
// delta_i=-3, delta_f=-0.4, g=0.05, nbar_b=10
constexpr double E_g005[4] = {9.9765712890625018, 3.9381880504433924, 0.032390535579311111,
                              0.083162583926799941};
constexpr double e1_err_g004 = 6.80103e-06;

// work_efficiency_analytic at (delta_i=-3, delta_f=-0.4, nbar_a=0, nbar_b=10)
constexpr double WA_tiny_g = 19.999999422701293, WB_tiny_g = -5.9999999518801106;
constexpr double etaA_tiny_g = 0.66666666376984129, etaB_tiny_g = 0.60000002080952453;
constexpr double WA_g005 = 19.857883397319313, WB_g005 = -5.9879720773931853;
constexpr double etaA_g005 = 0.66594795112616045, etaB_g005 = 0.60522291324438837;
// same at delta_i=-1.6 where the branch works cancel
constexpr double WA_cancel = 5.9999997235438665, WB_cancel = -5.9999996757235676;

// second_order_performance at delta_f=-0.4, nbar_b=10
constexpr double g2_opt = 0.088095238095238101;
constexpr double eta_P = 0.77619047619047621;
constexpr double ca_bound = 0.86198688813152913;
constexpr double W_g02 = -6.2287999999999997;
constexpr double W_opt = -6.3259523809523799;
}  // namespace frozen

TEST_CASE("node_energies_match_frozen_second_order_values") {
    NodeEnergies a = analytic_node_energies(-3.0, -0.4, 0.2, 2.0);
    CHECK(a.E1 == doctest::Approx(frozen::E_g02[0]).epsilon(1e-13));
    CHECK(a.E2 == doctest::Approx(frozen::E_g02[1]).epsilon(1e-13));
    CHECK(a.E3 == doctest::Approx(frozen::E_g02[2]).epsilon(1e-13));
    CHECK(a.E4 == doctest::Approx(frozen::E_g02[3]).epsilon(1e-13));
    CHECK(a.warnings.empty());

    NodeEnergies b = analytic_node_energies(-3.0, -0.4, 0.05, 10.0);
    CHECK(b.E1 == doctest::Approx(frozen::E_g005[0]).epsilon(1e-13));
    CHECK(b.E2 == doctest::Approx(frozen::E_g005[1]).epsilon(1e-13));
    CHECK(b.E3 == doctest::Approx(frozen::E_g005[2]).epsilon(1e-13));
    CHECK(b.E4 == doctest::Approx(frozen::E_g005[3]).epsilon(1e-13));
}

TEST_CASE("node_energies_reduce_to_bare_cycle_at_zero_coupling") {
    NodeEnergies a = analytic_node_energies(-2.5, -0.3, 0.0, 4.0);
    CHECK(a.E1 == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(a.E2 == doctest::Approx(0.3 * 4.0).epsilon(1e-15));
    CHECK(a.E3 == 0.0);
    CHECK(a.E4 == 0.0);
}

TEST_CASE("node_energies_flag_validity_regime") {
    CHECK(!analytic_node_energies(-0.5, -0.4, 0.1, 2.0).warnings.empty());
    CHECK(!analytic_node_energies(-3.0, -1.5, 0.1, 2.0).warnings.empty());
    // strong transfer coefficient at delta_f close to resonance
    CHECK(!analytic_node_energies(-3.0, -0.9, 0.3, 2.0).warnings.empty());
}

TEST_CASE("node_energy_error_scales_as_fourth_power_of_coupling") {
    // the node formulas track the transferable population, i.e. <N_B> minus
    // the residual branch offset (g/(delta-1))^2
    auto e1_err = [](double g) {
        NodeEnergies ne = analytic_node_energies(-3.0, -0.4, g, 10.0);
        BogoliubovMatrices bog = bogoliubov_numeric(-3.0, g);
        const double offset = (g / (-3.0 - 1.0)) * (g / (-3.0 - 1.0));
        const double exact =
            bog.spectrum.omega_B *
            (polariton_population_thermal(bog, 0.0, 10.0, Branch::B) - offset);
        return std::abs(ne.E1 - exact);
    };
    const double err4 = e1_err(0.04), err2 = e1_err(0.02), err1 = e1_err(0.01);
    CHECK(std::abs(err4 - frozen::e1_err_g004) < 1e-10);
    CHECK(err4 / err2 == doctest::Approx(16.0).epsilon(0.01));
    CHECK(err2 / err1 == doctest::Approx(16.0).epsilon(0.01));
}

TEST_CASE("work_efficiency_matches_frozen_spectra_route") {
    WorkEfficiency tiny = work_efficiency_analytic(-3.0, -0.4, 1e-4, 0.0, 10.0);
    CHECK(tiny.W_tot_A == doctest::Approx(frozen::WA_tiny_g).epsilon(1e-10));
    CHECK(tiny.W_tot_B == doctest::Approx(frozen::WB_tiny_g).epsilon(1e-10));
    CHECK(tiny.eta_A == doctest::Approx(frozen::etaA_tiny_g).epsilon(1e-10));
    CHECK(tiny.eta_B == doctest::Approx(frozen::etaB_tiny_g).epsilon(1e-10));
    // decoupled limit: W_A + W_B = (nbar_b - nbar_a)(-delta_i - 2 - delta_f)
    CHECK(tiny.W_tot_A + tiny.W_tot_B == doctest::Approx(14.0).epsilon(1e-7));

    WorkEfficiency mid = work_efficiency_analytic(-3.0, -0.4, 0.05, 0.0, 10.0);
    CHECK(mid.W_tot_A == doctest::Approx(frozen::WA_g005).epsilon(1e-10));
    CHECK(mid.W_tot_B == doctest::Approx(frozen::WB_g005).epsilon(1e-10));
    CHECK(mid.eta_A == doctest::Approx(frozen::etaA_g005).epsilon(1e-10));
    CHECK(mid.eta_B == doctest::Approx(frozen::etaB_g005).epsilon(1e-10));
}

TEST_CASE("branch_works_cancel_when_detunings_sum_to_minus_two") {
    WorkEfficiency we = work_efficiency_analytic(-1.6, -0.4, 1e-4, 0.0, 10.0);
    CHECK(we.W_tot_A == doctest::Approx(frozen::WA_cancel).epsilon(1e-10));
    CHECK(we.W_tot_B == doctest::Approx(frozen::WB_cancel).epsilon(1e-10));
    CHECK(std::abs(we.W_tot_A + we.W_tot_B) < 1e-3 * std::abs(we.W_tot_B));
}

TEST_CASE("second_order_performance_frozen_values") {
    SecondOrderPerformance perf = second_order_performance(-0.4, 0.2, 10.0);
    CHECK(perf.eta == doctest::Approx(0.68).epsilon(1e-14));
    CHECK(perf.W_tot == doctest::Approx(frozen::W_g02).epsilon(1e-14));
    CHECK(perf.g2_opt == doctest::Approx(frozen::g2_opt).epsilon(1e-14));
    CHECK(perf.eta_P == doctest::Approx(frozen::eta_P).epsilon(1e-14));
    CHECK(perf.ca_bound == doctest::Approx(frozen::ca_bound).epsilon(1e-14));

    SecondOrderPerformance at_opt = second_order_performance(-0.4, std::sqrt(frozen::g2_opt), 10.0);
    CHECK(at_opt.W_tot == doctest::Approx(frozen::W_opt).epsilon(1e-13));

    CHECK_THROWS_AS(second_order_performance(0.4, 0.1, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(second_order_performance(-0.4, 0.1, -1.0), std::invalid_argument);
}

TEST_CASE("work_optimum_matches_direct_scan_and_curzon_ahlborn_ordering") {
    double best_g = 0.0, best_W = 0.0;
    for (double g = 0.25; g <= 0.35; g += 1e-5) {
        const double W = second_order_performance(-0.4, g, 10.0).W_tot;
        if (W < best_W) {
            best_W = W;
            best_g = g;
        }
    }
    CHECK(std::abs(best_g * best_g - frozen::g2_opt) < 1e-5);

    for (double delta_f : {-0.1, -0.3, -0.5, -0.7, -0.9})
        for (double nbar_b : {0.8, 2.0, 10.0, 50.0}) {
            SecondOrderPerformance perf = second_order_performance(delta_f, 0.1, nbar_b);
            CHECK(perf.eta_P < perf.ca_bound);
        }

    // the bound saturates exactly where (-delta_f)(2 nbar_b + 1) = 1
    SecondOrderPerformance sat = second_order_performance(-0.5, 0.1, 0.5);
    CHECK(sat.eta_P == doctest::Approx(sat.ca_bound).epsilon(1e-15));
}

namespace {

CycleConfig reference_config() {
    CycleConfig cfg;
    cfg.delta_i = -3.0;
    cfg.delta_f = -0.4;
    cfg.tau = {25.0, 50.0, 25.0, 1e4};
    cfg.params.g = 0.2;
    cfg.params.kappa = 0.03;
    cfg.params.gamma = 1e-3;
    cfg.params.nbar_a = 0.0;
    cfg.params.nbar_b = 2.0;
    return cfg;
}

const TimescaleCheck* find_check(const TimescaleReport& rep, const std::string& relation) {
    for (const TimescaleCheck& c : rep.checks)
        if (c.relation == relation) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("timescale_hierarchy_accepts_reference_parameters_with_margin_warnings") {
    TimescaleReport rep = validate_timescales(reference_config());
    CHECK(rep.ok());
    CHECK(rep.checks.size() == 8);
    CHECK(rep.warnings.size() == 3);

    const TimescaleCheck* slow_bath = find_check(rep, "1/tau2 < kappa");
    REQUIRE(slow_bath != nullptr);
    CHECK(slow_bath->level == CheckLevel::Warn);
    CHECK(slow_bath->ratio == doctest::Approx(1.5).epsilon(1e-12));

    const TimescaleCheck* ramp = find_check(rep, "kappa < 1/tau1");
    REQUIRE(ramp != nullptr);
    CHECK(ramp->level == CheckLevel::Warn);
    CHECK(ramp->ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    // ratio exactly 5 sits on the strong-separation edge and must pass
    const TimescaleCheck* speed = find_check(rep, "1/tau1 << g");
    REQUIRE(speed != nullptr);
    CHECK(speed->level == CheckLevel::Pass);
}

TEST_CASE("timescale_hierarchy_rejects_broken_orderings") {
    CycleConfig cfg = reference_config();
    cfg.tau[1] = 1.0 / cfg.params.gamma;  // bath no longer slow against stroke 2
    CHECK(!validate_timescales(cfg).ok());

    cfg = reference_config();
    cfg.params.g = 1.0;  // coupling at the mechanical frequency
    CHECK(!validate_timescales(cfg).ok());

    cfg = reference_config();
    cfg.tau[0] = 1e4;  // ramp slower than the optical decay
    CHECK(!validate_timescales(cfg).ok());

    cfg = reference_config();
    cfg.tau[3] = 0.0;
    CHECK_THROWS_AS(validate_timescales(cfg), std::invalid_argument);
    cfg.tau[3] = -5.0;
    CHECK_THROWS_AS(validate_timescales(cfg), std::invalid_argument);
}

TEST_CASE("closed_system_hierarchy_checks_only_ramp_speed") {
    CycleConfig cfg;
    cfg.delta_i = -3.0;
    cfg.delta_f = -1.5;
    cfg.tau = {60.0, 10.0, 60.0, 10.0};
    cfg.params.g = 0.1;
    cfg.params.kappa = 0.0;
    cfg.params.gamma = 0.0;
    TimescaleReport rep = validate_timescales(cfg);
    CHECK(rep.ok());
    CHECK(rep.checks.size() == 3);
    CHECK(rep.warnings.empty());
}

TEST_CASE("unitary_cycle_conserves_energy_on_holds") {
    CycleConfig cfg;
    cfg.delta_i = -3.0;
    cfg.delta_f = -1.5;
    cfg.tau = {60.0, 10.0, 60.0, 10.0};
    cfg.params.g = 0.1;
    cfg.params.kappa = 0.0;
    cfg.params.gamma = 0.0;
    cfg.params.nbar_a = 0.0;
    cfg.params.nbar_b = 2.0;
    cfg.optical = FockCutoff{6};
    cfg.mechanical = FockCutoff{6};
    cfg.dt.ramp = 1e-3;
    cfg.dt.hold = 1e-3;

    CycleRecord rec = run_cycle(cfg);
    CHECK(std::abs(rec.Q2) < 1e-12);
    CHECK(std::abs(rec.Q4) < 1e-12);
    CHECK(std::abs(rec.Q1) < 1e-9);
    CHECK(std::abs(rec.Q3) < 1e-9);
    // the residual is the non-adiabatic ringing of the finite-speed ramps
    CHECK(std::abs(rec.W1 + rec.W3) < 5e-3);
    for (int s = 0; s < 4; ++s) {
        const BareLedger& bl = rec.bare_ledger[s];
        CHECK(std::abs(bl.Q_a + bl.W_a + bl.Q_b + bl.correlation_term -
                       rec.strokes[s].delta_U) < 1e-12);
    }
    // same integral from 400 snapshots instead of every integrator step
    CHECK(std::abs(rec.bare_ledger[0].W_a - rec.W1) < 1e-5);
    CHECK(rec.trajectories[0].deltas.front() == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(rec.trajectories[0].deltas.back() == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(rec.trajectories[0].N_B.size() == rec.trajectories[0].times.size());

    // stroke 1 in isolation through the generic quadrature
    SystemParams p = cfg.params;
    p.delta = cfg.delta_i;
    const HamiltonianParts parts = build_hamiltonian_parts(p, cfg.optical, cfg.mechanical);
    auto H_of_t = [&](double t) {
        const double delta = -3.0 + (1.5) * (t / 60.0);
        return parts.at(delta);
    };
    HeatWork hw = heat_work_integrals(rec.trajectories[0], H_of_t);
    CHECK(std::abs(hw.W - rec.W1) < 1e-5);
    CHECK(std::abs(hw.Q - rec.Q1) < 1e-4);
}

TEST_CASE("dissipative_cycle_ledger_is_consistent") {
    CycleConfig cfg;
    cfg.delta_i = -3.0;
    cfg.delta_f = -0.5;
    // stroke 2 needs several polariton decay times or stroke 3 pushes the
    // leftover photons back uphill and eats the extracted work
    cfg.tau = {10.0, 60.0, 10.0, 600.0};
    cfg.params.g = 0.3;
    cfg.params.kappa = 0.08;
    cfg.params.gamma = 0.005;
    cfg.params.nbar_a = 0.0;
    cfg.params.nbar_b = 2.0;
    cfg.optical = FockCutoff{8};
    cfg.mechanical = FockCutoff{8};
    cfg.dt.ramp = 2e-3;
    cfg.dt.hold = 2e-2;

    CycleRecord rec = run_cycle(cfg);
    CHECK(rec.W_tot < 0.0);
    CHECK(rec.Q4 > 0.0);
    CHECK(rec.eta > 0.0);
    // ramp losses and incomplete thermalization keep the measured efficiency
    // below the lossless frequency-ratio value
    CHECK(rec.eta < work_efficiency_analytic(-3.0, -0.5, 0.3, 0.0, 2.0).eta_B);
    CHECK(rec.final_NB_gap < 1.0);
    for (int s = 0; s < 4; ++s) {
        const BareLedger& bl = rec.bare_ledger[s];
        const double gap =
            bl.Q_a + bl.W_a + bl.Q_b + bl.correlation_term - rec.strokes[s].delta_U;
        CHECK(std::abs(gap) < 1e-9 * std::max(1.0, std::abs(rec.strokes[s].delta_U)));
    }
    const BareLedger& s1 = rec.bare_ledger[0];
    CHECK(s1.Q_a > 0.0);
    CHECK(s1.Q_b < 0.0);

    // the cycle starts in the bare thermal product, so U(0) is the phonon
    // energy alone
    CHECK(rec.node_energies[0] ==
          doctest::Approx(rec.trajectories[0].n_b.front()).epsilon(1e-12));
    CHECK(rec.trajectories[0].n_a.front() == doctest::Approx(0.0).epsilon(1e-14));

    for (int s = 0; s < 4; ++s) {
        CHECK(rec.trajectories[s].max_trace_drift < 1e-6);
        CHECK(rec.trajectories[s].snapshot_deltas.size() ==
              rec.trajectories[s].snapshot_times.size());
    }

    SystemParams p = cfg.params;
    p.delta = cfg.delta_i;
    const HamiltonianParts parts = build_hamiltonian_parts(p, cfg.optical, cfg.mechanical);
    auto H_of_t = [&](double t) {
        const double delta = -3.0 + (2.5) * (t / 10.0);
        return parts.at(delta);
    };
    HeatWork hw = heat_work_integrals(rec.trajectories[0], H_of_t);
    const double dU1 = rec.strokes[0].delta_U;
    CHECK(std::abs(hw.W - rec.W1) < 0.02 * std::abs(rec.W1));
    CHECK(std::abs(hw.Q + hw.W - dU1) < 0.01 * std::max(1.0, std::abs(dU1)));
}

TEST_CASE("branch_populations_from_moments_agree_with_closed_forms") {
    const FockCutoff oc{10}, mc{10};
    DensityMatrix vac(tensor_product(thermal_state(0.0, oc).rho.op(),
                                     thermal_state(0.0, mc).rho.op()));
    BogoliubovMatrices bog = bogoliubov_numeric(-2.0, 0.15);
    std::array<double, 2> pops = branch_populations(vac, oc, mc, -2.0, 0.15);
    CHECK(pops[0] ==
          doctest::Approx(polariton_population_thermal(bog, 0.0, 0.0, Branch::A)).epsilon(1e-12));
    CHECK(pops[1] ==
          doctest::Approx(polariton_population_thermal(bog, 0.0, 0.0, Branch::B)).epsilon(1e-12));

    const FockCutoff oc2{14}, mc2{14};
    DensityMatrix th(tensor_product(thermal_state(0.3, oc2).rho.op(),
                                    thermal_state(1.2, mc2).rho.op()));
    std::array<double, 2> tp = branch_populations(th, oc2, mc2, -2.0, 0.15);
    CHECK(tp[0] ==
          doctest::Approx(polariton_population_thermal(bog, 0.3, 1.2, Branch::A)).epsilon(2e-3));
    CHECK(tp[1] ==
          doctest::Approx(polariton_population_thermal(bog, 0.3, 1.2, Branch::B)).epsilon(2e-3));

    OperatorMatrix NB = polariton_number_operator(bog, oc2, mc2, Branch::B);
    CHECK(tp[1] == doctest::Approx(expectation(th, NB).real()).epsilon(2e-3));

    CHECK_THROWS_AS(branch_populations(vac, oc2, mc2, -2.0, 0.15), std::invalid_argument);
}

TEST_CASE("sweep_map_masks_unstable_cells_and_orders_the_surfaces") {
    std::vector<double> delta_f_axis, g_axis;
    for (int i = 0; i < 12; ++i) delta_f_axis.push_back(-1.2 + i * (1.15 / 11.0));
    for (int j = 0; j < 10; ++j) g_axis.push_back(0.05 + j * (0.45 / 9.0));

    SweepMap map = sweep_map(-3.0, delta_f_axis, g_axis, 0.0, 10.0);
    for (std::size_t i = 0; i < delta_f_axis.size(); ++i)
        for (std::size_t j = 0; j < g_axis.size(); ++j) {
            const std::size_t k = map.index(i, j);
            const bool expect = stability_check(delta_f_axis[i], g_axis[j]);
            CHECK(map.stable[k] == (expect ? 1 : 0));
            CHECK(std::isnan(map.efficiency[k]) == !expect);
            CHECK(std::isnan(map.abs_work[k]) == !expect);
        }

    // at fixed g the efficiency climbs as delta_f approaches the stability edge
    for (std::size_t j = 0; j < g_axis.size(); ++j) {
        double prev = -1.0;
        for (std::size_t i = 0; i < delta_f_axis.size(); ++i) {
            const std::size_t k = map.index(i, j);
            if (!map.stable[k]) continue;
            CHECK(map.efficiency[k] > prev);
            prev = map.efficiency[k];
        }
    }

    // |W| peaks in the small-g corner at the least-negative stable delta_f
    std::size_t best = 0;
    for (std::size_t k = 1; k < map.abs_work.size(); ++k)
        if (map.stable[k] && (!map.stable[best] || map.abs_work[k] > map.abs_work[best]))
            best = k;
    CHECK(best == map.index(delta_f_axis.size() - 1, 0));

    SweepMap threaded = sweep_map(-3.0, delta_f_axis, g_axis, 0.0, 10.0, 3);
    for (std::size_t k = 0; k < map.abs_work.size(); ++k) {
        CHECK(threaded.stable[k] == map.stable[k]);
        if (map.stable[k]) {
            CHECK(threaded.efficiency[k] == map.efficiency[k]);
            CHECK(threaded.abs_work[k] == map.abs_work[k]);
        } else {
            CHECK(std::isnan(threaded.efficiency[k]));
        }
    }

    CHECK_THROWS_AS(sweep_map(-3.0, {}, g_axis, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("run_cycle_rejects_bad_geometry_and_broken_hierarchy") {
    CycleConfig cfg = reference_config();
    cfg.optical = FockCutoff{4};
    cfg.mechanical = FockCutoff{4};

    CycleConfig bad = cfg;
    bad.delta_i = -0.4;
    bad.delta_f = -3.0;
    CHECK_THROWS_AS(run_cycle(bad), std::invalid_argument);

    bad = cfg;
    bad.delta_f = bad.delta_i;
    CHECK_THROWS_AS(run_cycle(bad), std::invalid_argument);

    bad = cfg;
    bad.delta_f = 0.1;
    CHECK_THROWS_AS(run_cycle(bad), std::invalid_argument);

    bad = cfg;
    bad.params.g = 0.5;
    bad.delta_f = -0.5;  // above the -4 g^2 = -1 boundary
    CHECK_THROWS_AS(run_cycle(bad), std::invalid_argument);

    bad = cfg;
    bad.tau[1] = 1.0 / bad.params.gamma;
    CHECK_THROWS_AS(run_cycle(bad), std::invalid_argument);

    bad = cfg;
    bad.tau[0] = -1.0;
    CHECK_THROWS_AS(run_cycle(bad), std::invalid_argument);
}

TEST_CASE("heat_work_quadrature_on_a_constant_hamiltonian") {
    SystemParams p;
    p.delta = -2.0;
    p.g = 0.1;
    p.kappa = 0.1;
    p.gamma = 0.01;
    p.nbar_a = 0.5;
    p.nbar_b = 1.0;
    const FockCutoff oc{3}, mc{3};
    const OperatorMatrix H = build_hamiltonian(p, oc, mc);
    DensityMatrix rho0(tensor_product(thermal_state(2.0, oc).rho.op(),
                                      thermal_state(0.2, mc).rho.op()));

    EvolveOptions opt;
    opt.snapshot_stride = 25;
    Trajectory traj = rk4_evolve(
        rho0, [&](double) { return H; }, thermal_dissipators(p, oc, mc), 0.0, 5.0, 1e-3, opt);

    HeatWork hw = heat_work_integrals(traj, [&](double) { return H; });
    const double dU = traj.energy.back() - traj.energy.front();
    CHECK(hw.W == 0.0);
    CHECK(std::abs(hw.Q - dU) < 1e-3);

    CHECK_THROWS_AS(heat_work_integrals(traj, {}), std::invalid_argument);
    Trajectory no_snaps = rk4_evolve(
        rho0, [&](double) { return H; }, thermal_dissipators(p, oc, mc), 0.0, 0.1, 1e-3, {});
    CHECK_THROWS_AS(heat_work_integrals(no_snaps, [&](double) { return H; }),
                    std::invalid_argument);

    // snapshots from the generic integrator carry no detunings
    CHECK_THROWS_AS(bare_decomposition(traj, p, oc, mc), std::invalid_argument);
    CHECK_THROWS_AS(bare_decomposition(traj, p, FockCutoff{5}, FockCutoff{5}),
                    std::invalid_argument);
}
