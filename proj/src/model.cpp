#include "omhe/model.hpp"

#include <cmath>

namespace omhe {

// ---- Parameters ----------------------------------------------------------

void SystemParams::validate() const {
    if (!(omega_m > 0.0)) throw std::invalid_argument("SystemParams: omega_m must be > 0");
    if (!(g >= 0.0)) throw std::invalid_argument("SystemParams: g must be >= 0");
    if (!(kappa >= 0.0)) throw std::invalid_argument("SystemParams: kappa must be >= 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("SystemParams: gamma must be >= 0");
    if (!(nbar_a >= 0.0) || !(nbar_b >= 0.0))
        throw std::invalid_argument("SystemParams: reservoir occupations must be >= 0");
    if (!std::isfinite(delta)) throw std::invalid_argument("SystemParams: delta must be finite");
}

// ---- Hamiltonian ----------------------------------------------------------

HamiltonianParts build_hamiltonian_parts(const SystemParams& p, FockCutoff optical,
                                         FockCutoff mechanical) {
    p.validate();
    const OperatorMatrix na = lift(number_op(optical), mechanical, Mode::Optical);
    const OperatorMatrix nb = lift(number_op(mechanical), optical, Mode::Mechanical);
    const OperatorMatrix xa = annihilation_op(optical) + creation_op(optical);
    const OperatorMatrix xb = annihilation_op(mechanical) + creation_op(mechanical);
    const OperatorMatrix coupling = tensor_product(xa, xb);
    return HamiltonianParts{na, nb + cd(p.g) * coupling};
}

OperatorMatrix build_hamiltonian(const SystemParams& p, FockCutoff optical,
                                 FockCutoff mechanical) {
    return build_hamiltonian_parts(p, optical, mechanical).at(p.delta);
}

// ---- Mean field -----------------------------------------------------------

MeanFieldState mean_field(double alpha_in, const SystemParams& p) {
    if (!p.pump) throw std::invalid_argument("mean_field: SystemParams.pump not set");
    const PumpParams& pp = *p.pump;
    if (!(p.omega_m > 0.0)) throw std::invalid_argument("mean_field: omega_m must be > 0");
    if (!(pp.mass > 0.0)) throw std::invalid_argument("mean_field: pump mass must be > 0");

    constexpr double hbar = 1.054571817e-34;
    constexpr double tol = 1e-12;
    constexpr int max_iter = 1000;
    constexpr double relax = 0.5;

    const double delta0 = pp.omega_p - pp.omega_c;
    double delta_p = delta0;
    double alpha = 0.0, beta = 0.0;
    int it = 0;
    double resid = 0.0;
    for (; it < max_iter; ++it) {
        if (delta_p == 0.0)
            throw std::runtime_error("mean_field: detuning passed through zero, no fixed point");
        const double alpha_new = std::abs(alpha_in / delta_p);
        const double beta_new = -pp.g0 * alpha_new * alpha_new / p.omega_m;
        const double delta_new = delta0 - 2.0 * pp.g0 * beta_new;
        resid = std::abs(delta_new - delta_p);
        delta_p = relax * delta_p + (1.0 - relax) * delta_new;
        alpha = alpha_new;
        beta = beta_new;
        const double scale = std::max(std::abs(delta_p), 1.0);
        if (resid <= tol * scale) break;
    }
    if (it == max_iter)
        throw std::runtime_error("mean_field: fixed point did not converge in 1000 iterations");

    MeanFieldState out;
    out.alpha = alpha;
    out.beta = beta;
    out.delta_p = delta_p;
    out.x_zpt = std::sqrt(hbar / (2.0 * pp.mass * p.omega_m));
    out.iterations = it + 1;
    out.residual = resid;
    return out;
}

// ---- Detuning schedule -----------------------------------------------------

DetuningSchedule::DetuningSchedule(std::vector<ScheduleSegment> segments)
    : segs_(std::move(segments)) {
    if (segs_.empty()) throw std::invalid_argument("DetuningSchedule: no segments");
    double t = 0.0;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        if (!(segs_[i].duration > 0.0))
            throw std::invalid_argument("DetuningSchedule: segment durations must be > 0");
        if (i > 0 && segs_[i].delta_start != segs_[i - 1].delta_end)
            throw std::invalid_argument("DetuningSchedule: delta discontinuous at segment join");
        t += segs_[i].duration;
        t_end_.push_back(t);
    }
    total_ = t;
}

double DetuningSchedule::delta(double t) const {
    if (t < 0.0 || t > total_)
        throw std::domain_error("DetuningSchedule: t outside [0, total_duration]");
    double t0 = 0.0;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        if (t <= t_end_[i] || i + 1 == segs_.size()) {
            const double frac = (t - t0) / segs_[i].duration;
            return segs_[i].delta_start + frac * (segs_[i].delta_end - segs_[i].delta_start);
        }
        t0 = t_end_[i];
    }
    return segs_.back().delta_end;  // unreachable
}

double DetuningSchedule::rate(double t) const {
    if (t < 0.0 || t > total_)
        throw std::domain_error("DetuningSchedule: t outside [0, total_duration]");
    double t0 = 0.0;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        // right-continuous: a join time belongs to the later segment
        if (t < t_end_[i] || i + 1 == segs_.size())
            return (segs_[i].delta_end - segs_[i].delta_start) / segs_[i].duration;
        t0 = t_end_[i];
    }
    (void)t0;
    return 0.0;  // unreachable
}

}  // namespace omhe
