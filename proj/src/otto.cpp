#include "omhe/otto.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "omhe/fock.hpp"
#include "omhe/model.hpp"

namespace omhe {

namespace {

cd trace_product(const SpMat& a, const Dense& b) {
    cd acc(0.0, 0.0);
    for (int k = 0; k < a.outerSize(); ++k)
        for (SpMat::InnerIterator it(a, k); it; ++it) acc += it.value() * b(it.col(), it.row());
    return acc;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k)
        acc += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
    return acc;
}

// weights of the three-point Lagrange derivative at tx, exact for quadratics
std::array<double, 3> deriv3_weights(double ta, double tb, double tc, double tx) {
    return {(2.0 * tx - tb - tc) / ((ta - tb) * (ta - tc)),
            (2.0 * tx - ta - tc) / ((tb - ta) * (tb - tc)),
            (2.0 * tx - ta - tb) / ((tc - ta) * (tc - tb))};
}

std::vector<double> deriv3_series(const std::vector<double>& t, const std::vector<double>& f) {
    const std::size_t n = t.size();
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t c = std::min(std::max<std::size_t>(k, 1), n - 2);
        const auto w = deriv3_weights(t[c - 1], t[c], t[c + 1], t[k]);
        d[k] = w[0] * f[c - 1] + w[1] * f[c] + w[2] * f[c + 1];
    }
    return d;
}

struct Bilinears {
    const OperatorMatrix* n_a = nullptr;
    const OperatorMatrix* n_b = nullptr;
    const OperatorMatrix* adag_b = nullptr;
    const OperatorMatrix* aa = nullptr;
    const OperatorMatrix* bb = nullptr;
    const OperatorMatrix* ab = nullptr;
};

// <N> = sum_jk [U_j U*_k T_jk + V_j V*_k T_kj - U_j V*_k conj(S_jk)
//               - V_j U*_k S_jk] + sum_j |V_j|^2
// with T_jk = <a_j^dag a_k>, S_jk = <a_j a_k>; the commutators are done
// analytically, so the result is free of truncation-surface artifacts.
double branch_from_moments(const Eigen::Matrix2cd& T, const Eigen::Matrix2cd& S,
                           const BogoliubovMatrices& bog, Branch branch) {
    const int c = branch == Branch::A ? 0 : 1;
    cd acc(0.0, 0.0);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            const cd u_j = bog.U(j, c), u_k = bog.U(k, c);
            const cd v_j = bog.V(j, c), v_k = bog.V(k, c);
            acc += u_j * std::conj(u_k) * T(j, k) + v_j * std::conj(v_k) * T(k, j);
            acc -= u_j * std::conj(v_k) * std::conj(S(j, k)) + v_j * std::conj(u_k) * S(j, k);
        }
        acc += std::norm(bog.V(j, c));
    }
    return acc.real();
}

void push_branch_populations(const Dense& rho, const Bilinears& ops,
                             const BogoliubovMatrices& bog, Trajectory& traj) {
    Eigen::Matrix2cd T, S;
    T(0, 0) = trace_product(ops.n_a->sparse(), rho);
    T(1, 1) = trace_product(ops.n_b->sparse(), rho);
    T(0, 1) = trace_product(ops.adag_b->sparse(), rho);
    T(1, 0) = std::conj(T(0, 1));
    S(0, 0) = trace_product(ops.aa->sparse(), rho);
    S(1, 1) = trace_product(ops.bb->sparse(), rho);
    S(0, 1) = trace_product(ops.ab->sparse(), rho);
    S(1, 0) = S(0, 1);
    traj.N_A.push_back(branch_from_moments(T, S, bog, Branch::A));
    traj.N_B.push_back(branch_from_moments(T, S, bog, Branch::B));
}

}  // namespace

// ---- Timescale hierarchy ----------------------------------------------------

TimescaleReport validate_timescales(const CycleConfig& cfg) {
    for (double tau : cfg.tau)
        if (!(tau > 0.0))
            throw std::invalid_argument("validate_timescales: stroke durations must be positive");

    const SystemParams& p = cfg.params;
    TimescaleReport rep;

    enum class Strength { Strict, Strong };
    auto add = [&rep](const char* relation, double lhs, double rhs, Strength s) {
        TimescaleCheck c;
        c.relation = relation;
        c.lhs = lhs;
        c.rhs = rhs;
        c.ratio = lhs > 0.0 ? rhs / lhs : std::numeric_limits<double>::infinity();
        // thresholds get 1e-9 relative slack so a ratio that is 2 or 5 up
        // to roundoff does not flip the verdict
        const double warn_edge = 2.0 * (1.0 - 1e-9);
        const double pass_edge = 5.0 * (1.0 - 1e-9);
        if (s == Strength::Strict)
            c.level = c.ratio <= 1.0      ? CheckLevel::Fail
                      : c.ratio < warn_edge ? CheckLevel::Warn
                                            : CheckLevel::Pass;
        else
            c.level = c.ratio < warn_edge   ? CheckLevel::Fail
                      : c.ratio < pass_edge ? CheckLevel::Warn
                                            : CheckLevel::Pass;
        if (c.level != CheckLevel::Pass) {
            std::ostringstream os;
            os.precision(3);
            os << relation << (c.level == CheckLevel::Fail ? " violated" : " holds only marginally")
               << " (ratio " << c.ratio << ")";
            (c.level == CheckLevel::Fail ? rep.failures : rep.warnings).push_back(os.str());
        }
        rep.checks.push_back(std::move(c));
    };

    const double r1 = 1.0 / cfg.tau[0], r2 = 1.0 / cfg.tau[1];
    const double r3 = 1.0 / cfg.tau[2], r4 = 1.0 / cfg.tau[3];
    const bool closed = p.kappa == 0.0 && p.gamma == 0.0;
    if (!closed) {
        add("1/tau4 < gamma", r4, p.gamma, Strength::Strict);
        add("gamma << 1/tau2", p.gamma, r2, Strength::Strong);
        add("1/tau2 < kappa", r2, p.kappa, Strength::Strict);
        add("kappa < 1/tau1", p.kappa, r1, Strength::Strict);
        add("kappa < 1/tau3", p.kappa, r3, Strength::Strict);
    }
    add("1/tau1 << g", r1, p.g, Strength::Strong);
    add("1/tau3 << g", r3, p.g, Strength::Strong);
    add("g << omega_m", p.g, 1.0, Strength::Strong);
    return rep;
}

// ---- Analytic cycle ----------------------------------------------------------

NodeEnergies analytic_node_energies(double delta_i, double delta_f, double g, double nbar_b) {
    NodeEnergies ne;
    if (!(delta_i < -1.0))
        ne.warnings.push_back("delta_i outside the validity regime delta_i < -1");
    if (!(delta_f > -1.0 && delta_f < 0.0))
        ne.warnings.push_back("delta_f outside the validity regime -1 < delta_f < 0");

    const double g2 = g * g;
    const double di2 = delta_i * delta_i, df2 = delta_f * delta_f;
    const double omega_i = 1.0 + 2.0 * delta_i * g2 / (di2 - 1.0);
    const double omega_f = -delta_f + 2.0 * g2 / (df2 - 1.0);
    // residual phonon weight of the branch on the far side of the crossing
    const double off_i = (g / (delta_i - 1.0)) * (g / (delta_i - 1.0));
    const double off_f = (g / (delta_f - 1.0)) * (g / (delta_f - 1.0));
    const double pop_corr_i = 4.0 * delta_i * g2 / ((di2 - 1.0) * (di2 - 1.0));
    const double pop_coeff_f = 2.0 * (1.0 + df2) * g2 / ((df2 - 1.0) * (df2 - 1.0));
    const double pop_i = (1.0 + pop_corr_i) * nbar_b;
    const double pop_f = pop_coeff_f * nbar_b;

    if (std::abs(pop_corr_i) > 0.3)
        ne.warnings.push_back("second-order population correction at delta_i exceeds 30%");
    if (pop_coeff_f > 0.3)
        ne.warnings.push_back(
            "second-order population transfer at delta_f exceeds 0.3 quanta per bath quantum");

    ne.E1 = omega_i * pop_i;
    ne.E2 = omega_f * (pop_i + off_i - off_f);
    ne.E3 = omega_f * pop_f;
    ne.E4 = omega_i * (pop_f + off_f - off_i);
    return ne;
}

WorkEfficiency work_efficiency_analytic(double delta_i, double delta_f, double g, double nbar_a,
                                        double nbar_b) {
    const BogoliubovMatrices bog_i = bogoliubov_numeric(delta_i, g);
    const BogoliubovMatrices bog_f = bogoliubov_numeric(delta_f, g);

    WorkEfficiency we;
    const double NA_i = polariton_population_thermal(bog_i, nbar_a, nbar_b, Branch::A);
    const double NA_f = polariton_population_thermal(bog_f, nbar_a, nbar_b, Branch::A);
    const double NB_i = polariton_population_thermal(bog_i, nbar_a, nbar_b, Branch::B);
    const double NB_f = polariton_population_thermal(bog_f, nbar_a, nbar_b, Branch::B);
    we.W_tot_A = (bog_i.spectrum.omega_A - bog_f.spectrum.omega_A) * (NA_f - NA_i);
    we.W_tot_B = (bog_i.spectrum.omega_B - bog_f.spectrum.omega_B) * (NB_f - NB_i);
    we.eta_A = 1.0 - bog_f.spectrum.omega_A / bog_i.spectrum.omega_A;
    we.eta_B = 1.0 - bog_f.spectrum.omega_B / bog_i.spectrum.omega_B;
    return we;
}

SecondOrderPerformance second_order_performance(double delta_f, double g, double nbar_b) {
    if (!(delta_f < 0.0))
        throw std::invalid_argument("second_order_performance: delta_f must be negative");
    if (!(nbar_b >= 0.0))
        throw std::invalid_argument("second_order_performance: nbar_b must be non-negative");

    const double g2 = g * g;
    SecondOrderPerformance perf;
    perf.eta = 1.0 + delta_f + 2.0 * g2;
    perf.W_tot = (-delta_f - 2.0 * g2 - 1.0) * ((1.0 - 2.0 * g2) * nbar_b - g2);
    perf.g2_opt = -delta_f / 4.0 - 1.0 / (4.0 * (2.0 * nbar_b + 1.0));
    perf.eta_P = 1.0 - (-delta_f / 2.0 + 1.0 / (4.0 * nbar_b + 2.0));
    perf.ca_bound = 1.0 - std::sqrt(-delta_f / (2.0 * nbar_b + 1.0));
    return perf;
}

// ---- Quadrature on stored snapshots -------------------------------------------

HeatWork heat_work_integrals(const Trajectory& traj,
                             const std::function<OperatorMatrix(double)>& H_of_t) {
    if (!H_of_t) throw std::invalid_argument("heat_work_integrals: H_of_t is empty");
    const std::size_t n = traj.snapshots.size();
    if (n < 3) throw std::invalid_argument("heat_work_integrals: need at least 3 snapshots");

    const std::vector<double>& t = traj.snapshot_times;
    std::vector<double> q(n), w(n);
    Dense drho(traj.snapshots[0].rows(), traj.snapshots[0].cols());
    for (std::size_t k = 0; k < n; ++k) {
        const OperatorMatrix H_k = H_of_t(t[k]);

        const std::size_t c = std::min(std::max<std::size_t>(k, 1), n - 2);
        const auto wt = deriv3_weights(t[c - 1], t[c], t[c + 1], t[k]);
        drho = wt[0] * traj.snapshots[c - 1] + wt[1] * traj.snapshots[c] +
               wt[2] * traj.snapshots[c + 1];
        q[k] = trace_product(H_k.sparse(), drho).real();

        // short difference, one-sided at the window ends; exact for the
        // piecewise-linear schedules this is used with
        const double h = 1e-6 * std::max(1.0, std::abs(t[k]));
        OperatorMatrix dH = k == 0         ? (H_of_t(t[k] + h) - H_k) * cd(1.0 / h)
                            : k == n - 1   ? (H_k - H_of_t(t[k] - h)) * cd(1.0 / h)
                                           : (H_of_t(t[k] + h) - H_of_t(t[k] - h)) * cd(0.5 / h);
        w[k] = trace_product(dH.sparse(), traj.snapshots[k]).real();
    }

    HeatWork out;
    out.Q = trapezoid(t, q);
    out.W = trapezoid(t, w);
    return out;
}

BareLedger bare_decomposition(const Trajectory& traj, const SystemParams& params,
                              FockCutoff optical, FockCutoff mechanical) {
    const std::size_t n = traj.snapshots.size();
    if (n < 3) throw std::invalid_argument("bare_decomposition: need at least 3 snapshots");
    if (traj.snapshot_deltas.size() != n)
        throw std::invalid_argument(
            "bare_decomposition: snapshots carry no detunings; evolve through evolve_detuned "
            "with snapshot_stride > 0");

    const OperatorMatrix num_a = lift(number_op(optical), mechanical, Mode::Optical);
    if (num_a.dim() != traj.snapshots[0].rows())
        throw std::invalid_argument("bare_decomposition: cutoffs do not match the snapshots");
    const OperatorMatrix num_b = lift(number_op(mechanical), optical, Mode::Mechanical);
    const OperatorMatrix a_full = lift(annihilation_op(optical), mechanical, Mode::Optical);
    const OperatorMatrix b_full = lift(annihilation_op(mechanical), optical, Mode::Mechanical);
    const OperatorMatrix V =
        ((a_full + a_full.adjoint()) * (b_full + b_full.adjoint())) * cd(params.g);

    std::vector<double> na(n), nb(n), v(n);
    for (std::size_t k = 0; k < n; ++k) {
        na[k] = trace_product(num_a.sparse(), traj.snapshots[k]).real();
        nb[k] = trace_product(num_b.sparse(), traj.snapshots[k]).real();
        v[k] = trace_product(V.sparse(), traj.snapshots[k]).real();
    }
    const std::vector<double>& t = traj.snapshot_times;
    const std::vector<double>& d = traj.snapshot_deltas;

    // d(delta)/dt from the stored schedule; exact for linear ramps and holds
    const std::vector<double> rate = deriv3_series(t, d);
    std::vector<double> w_integrand(n);
    for (std::size_t k = 0; k < n; ++k) w_integrand[k] = -rate[k] * na[k];

    BareLedger out;
    out.W_a = trapezoid(t, w_integrand);
    // integration by parts puts the whole quadrature burden on W_a:
    // Q_a = int (-delta) d<n_a> = [-delta <n_a>] - W_a
    out.Q_a = (-d.back() * na.back()) - (-d.front() * na.front()) - out.W_a;
    // H_b and V carry no explicit time dependence, so their heat integrals
    // telescope to endpoint differences
    out.Q_b = nb.back() - nb.front();
    out.correlation_term = v.back() - v.front();
    return out;
}

std::array<double, 2> branch_populations(const DensityMatrix& rho, FockCutoff optical,
                                         FockCutoff mechanical, double delta, double g) {
    const OperatorMatrix num_a = lift(number_op(optical), mechanical, Mode::Optical);
    if (num_a.dim() != rho.dim())
        throw std::invalid_argument("branch_populations: cutoffs do not match the state");
    const OperatorMatrix num_b = lift(number_op(mechanical), optical, Mode::Mechanical);
    const OperatorMatrix a_full = lift(annihilation_op(optical), mechanical, Mode::Optical);
    const OperatorMatrix b_full = lift(annihilation_op(mechanical), optical, Mode::Mechanical);
    const OperatorMatrix adag_b = a_full.adjoint() * b_full;
    const OperatorMatrix aa = a_full * a_full;
    const OperatorMatrix bb = b_full * b_full;
    const OperatorMatrix ab = a_full * b_full;
    const Bilinears ops{&num_a, &num_b, &adag_b, &aa, &bb, &ab};

    const BogoliubovMatrices bog = bogoliubov_numeric(delta, g);
    Trajectory scratch;
    push_branch_populations(rho.dense(), ops, bog, scratch);
    return {scratch.N_A.back(), scratch.N_B.back()};
}

// ---- Parameter sweeps ----------------------------------------------------------

SweepMap sweep_map(double delta_i, const std::vector<double>& delta_f_axis,
                   const std::vector<double>& g_axis, double nbar_a, double nbar_b, int threads) {
    if (delta_f_axis.empty() || g_axis.empty())
        throw std::invalid_argument("sweep_map: axes must be non-empty");

    SweepMap map;
    map.delta_f_axis = delta_f_axis;
    map.g_axis = g_axis;
    const std::size_t cells = delta_f_axis.size() * g_axis.size();
    map.efficiency.assign(cells, std::numeric_limits<double>::quiet_NaN());
    map.abs_work.assign(cells, std::numeric_limits<double>::quiet_NaN());
    map.stable.assign(cells, 0);

    auto fill_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < g_axis.size(); ++j) {
            const double g = g_axis[j];
            if (!stability_check(delta_f_axis[i], g) || !stability_check(delta_i, g)) continue;
            const std::size_t k = map.index(i, j);
            try {
                const WorkEfficiency we =
                    work_efficiency_analytic(delta_i, delta_f_axis[i], g, nbar_a, nbar_b);
                map.efficiency[k] = we.eta_B;
                map.abs_work[k] = std::abs(we.W_tot_B);
                map.stable[k] = 1;
            } catch (const std::domain_error&) {
                // numerically marginal cell right at the stability edge; keep masked
            }
        }
    };

    const int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        for (std::size_t i = 0; i < delta_f_axis.size(); ++i) fill_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < delta_f_axis.size();
                     i = next.fetch_add(1))
                    fill_row(i);
            });
        for (std::thread& th : pool) th.join();
    }
    return map;
}

// ---- Cycle driver ---------------------------------------------------------------

CycleRecord run_cycle(const CycleConfig& cfg) {
    SystemParams p = cfg.params;
    p.delta = cfg.delta_i;
    p.validate();
    const double g = p.g;

    if (!(cfg.delta_i < cfg.delta_f && cfg.delta_f < 0.0))
        throw std::invalid_argument("run_cycle: need delta_i < delta_f < 0");
    if (!stability_check(cfg.delta_i, g) || !stability_check(cfg.delta_f, g))
        throw std::invalid_argument("run_cycle: cycle endpoints leave the stable region");
    // the stable set is the half-line delta < -4 g^2 and the schedule is
    // monotone between the endpoints, so the whole path is stable

    CycleRecord rec;
    rec.timescales = validate_timescales(cfg);
    if (!rec.timescales.ok()) {
        std::string msg = "run_cycle: timescale hierarchy failed:";
        for (const std::string& f : rec.timescales.failures) msg += " [" + f + "]";
        throw std::invalid_argument(msg);
    }

    const FockCutoff oc = cfg.optical, mc = cfg.mechanical;
    const HamiltonianParts parts = build_hamiltonian_parts(p, oc, mc);
    const std::vector<Dissipator> dissipators = thermal_dissipators(p, oc, mc);

    const OperatorMatrix num_a = lift(number_op(oc), mc, Mode::Optical);
    const OperatorMatrix num_b = lift(number_op(mc), oc, Mode::Mechanical);
    const OperatorMatrix coupling = parts.rest - num_b;
    const OperatorMatrix a_full = lift(annihilation_op(oc), mc, Mode::Optical);
    const OperatorMatrix b_full = lift(annihilation_op(mc), oc, Mode::Mechanical);
    const OperatorMatrix adag_b = a_full.adjoint() * b_full;
    const OperatorMatrix aa = a_full * a_full;
    const OperatorMatrix bb = b_full * b_full;
    const OperatorMatrix ab = a_full * b_full;
    const Bilinears ops{&num_a, &num_b, &adag_b, &aa, &bb, &ab};

    DensityMatrix state(tensor_product(thermal_state(p.nbar_a, oc).rho.op(),
                                       thermal_state(p.nbar_b, mc).rho.op()));

    struct Stroke {
        double d0, d1, tau, dt;
    };
    const std::array<Stroke, 4> plan{{{cfg.delta_i, cfg.delta_f, cfg.tau[0], cfg.dt.ramp},
                                      {cfg.delta_f, cfg.delta_f, cfg.tau[1], cfg.dt.hold},
                                      {cfg.delta_f, cfg.delta_i, cfg.tau[2], cfg.dt.ramp},
                                      {cfg.delta_i, cfg.delta_i, cfg.tau[3], cfg.dt.hold}}};

    double clock = 0.0;
    for (int s = 0; s < 4; ++s) {
        const Stroke st = plan[s];
        const bool ramp = st.d0 != st.d1;
        auto delta_of = [st, ramp](double t) {
            return ramp ? st.d0 + (st.d1 - st.d0) * (t / st.tau) : st.d0;
        };

        EvolveOptions opt;
        opt.sample_stride = 1;
        opt.number_a = &num_a;
        opt.number_b = &num_b;
        opt.coupling_op = &coupling;
        // snapshots dense enough for the quadrature routines; on holds one
        // optical decay time is plenty
        const double snap_dt = ramp ? st.tau / 400.0
                                    : std::min(p.kappa > 0.0 ? 0.5 / p.kappa : st.tau,
                                               st.tau / 8.0);
        opt.snapshot_stride = std::max(1, static_cast<int>(std::lround(snap_dt / st.dt)));
        if (ramp) {
            opt.extra_sampler = [ops, delta_of, g](double t, const Dense& rho, Trajectory& out) {
                push_branch_populations(rho, ops, bogoliubov_numeric(delta_of(t), g), out);
            };
        } else {
            const BogoliubovMatrices bog = bogoliubov_numeric(st.d0, g);
            opt.extra_sampler = [ops, bog](double, const Dense& rho, Trajectory& out) {
                push_branch_populations(rho, ops, bog, out);
            };
        }

        Trajectory tr = evolve_detuned(state, parts, delta_of, dissipators, 0.0, st.tau, st.dt, opt);

        StrokeLedger& ledger = rec.strokes[s];
        ledger.delta_U = tr.energy.back() - tr.energy.front();
        if (ramp) {
            const double rate = (st.d1 - st.d0) / st.tau;
            ledger.work = -rate * trapezoid(tr.times, tr.n_a);
            ledger.heat = ledger.delta_U - ledger.work;
        } else {
            ledger.work = 0.0;
            ledger.heat = ledger.delta_U;
        }
        rec.bare_ledger[s] = bare_decomposition(tr, p, oc, mc);

        // integrator output is trace-normalized, so this only re-checks it
        state = DensityMatrix(OperatorMatrix(tr.final_state));

        for (double& t : tr.times) t += clock;
        for (double& t : tr.snapshot_times) t += clock;
        clock += st.tau;
        rec.trajectories[s] = std::move(tr);
    }

    rec.node_energies = {rec.trajectories[0].energy.front(), rec.trajectories[0].energy.back(),
                         rec.trajectories[1].energy.back(), rec.trajectories[2].energy.back()};
    const NodeEnergies analytic = analytic_node_energies(cfg.delta_i, cfg.delta_f, g, p.nbar_b);
    rec.analytic_nodes = {analytic.E1, analytic.E2, analytic.E3, analytic.E4};

    rec.W1 = rec.strokes[0].work;
    rec.Q1 = rec.strokes[0].heat;
    rec.Q2 = rec.strokes[1].heat;
    rec.W3 = rec.strokes[2].work;
    rec.Q3 = rec.strokes[2].heat;
    rec.Q4 = rec.strokes[3].heat;
    rec.W_tot = rec.W1 + rec.W3;
    rec.eta = rec.Q4 != 0.0 ? -rec.W_tot / rec.Q4 : std::numeric_limits<double>::quiet_NaN();
    rec.closure = rec.W1 + rec.W3 + rec.Q2 + rec.Q4;

    const BogoliubovMatrices bog_i = bogoliubov_numeric(cfg.delta_i, g);
    rec.final_NB_gap = std::abs(rec.trajectories[3].N_B.back() -
                                polariton_population_thermal(bog_i, p.nbar_a, p.nbar_b, Branch::B));
    return rec;
}

}  // namespace omhe
