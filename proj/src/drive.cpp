#include "cswap/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cswap/metrics.hpp"

namespace cswap {

double DrivePulse::envelope_at(double t) const {
    if (!envelope) return 1.0;
    if (duration <= 0.0) return envelope(0.0);
    return envelope(std::clamp(t / duration, 0.0, 1.0));
}

std::vector<HamiltonianTerm> drive_hamiltonian(const DrivePulse& pulse, const SiteDims& dims,
                                               const std::vector<int>& control_sites) {
    if (pulse.amplitude == 0.0) return {};
    cmat up = cmat::Zero(dims.total(), dims.total());
    for (int s : control_sites) {
        if (s < 0 || s >= dims.size()) throw DimensionError("drive site out of range");
        // (σ⁻)† on a qubit, b† on a qutrit.
        up += embed_site_operator(lowering(dims[s]).adjoint(), s, dims).matrix();
    }
    cmat down = up.adjoint();
    // cos φ Y + sin φ X = iσ⁺e^{−iφ} − iσ⁻e^{iφ}, φ = δt + θ.
    const double a = 0.5 * angular(pulse.amplitude);
    const double d = angular(pulse.delta());
    const double theta = pulse.phase;
    DrivePulse p = pulse;
    auto c_up = [p, a, d, theta](double t) {
        double phi = d * t + theta;
        return cplx(0.0, 1.0) * a * p.envelope_at(t) * std::exp(cplx(0.0, -phi));
    };
    auto c_down = [c_up](double t) { return std::conj(c_up(t)); };
    double bound = std::abs(a);
    if (pulse.envelope) {
        double m = 0.0;
        for (int k = 0; k <= 1000; ++k) m = std::max(m, std::abs(pulse.envelope(k / 1000.0)));
        bound *= m;
    }
    return {{c_up, up, bound}, {c_down, down, bound}};
}

double bare_resonant_delta(const SpinModelParams& p) {
    if (p.n_sites != 4) throw std::invalid_argument("resonant_delta: four-site gate chain expected");
    // Empty targets shift |00>_C by the two J₁ᶻ bonds.
    return p.detuning[1] - 2.0 * p.jz[1] + 2.0 * p.jx[1] - p.jz[0] - p.jz[2];
}

double resonant_delta(const SpinModelParams& p) {
    if (p.n_sites != 4) throw std::invalid_argument("resonant_delta: four-site gate chain expected");
    Operator h = build_interaction_hamiltonian(p);
    const SiteDims& dims = h.dims();
    cvec vac = basis_state(dims, {0, 0, 0, 0});
    cvec plus = (basis_state(dims, {0, 1, 0, 0}) + basis_state(dims, {0, 0, 1, 0})) / std::sqrt(2.0);
    // |0000> is exact; |0,1⁺,0> is dressed by the target hopping, so take the eigenvector
    // with the largest overlap.
    EigenSystem es = eig_hermitian(h);
    Eigen::Index best = 0;
    double ov = -1.0;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        double o = std::norm(plus.dot(es.vectors.col(k)));
        if (o > ov) ov = o, best = k;
    }
    double e0 = std::real(vac.dot(h.matrix() * vac));
    return (es.values(best) - e0) / two_pi;
}

double resonance_frequency(double omega2, double j2x, double j2z) { return std::abs(omega2 - 2.0 * j2z + 2.0 * j2x); }

double rabi_angular_frequency(double amplitude) { return std::sqrt(2.0) * angular(std::abs(amplitude)); }

double pi_pulse_duration(double amplitude) {
    if (amplitude == 0.0) throw std::invalid_argument("pi pulse needs a nonzero amplitude");
    return std::numbers::pi / rabi_angular_frequency(amplitude);
}

RabiResult rabi_prepare(const SpinModelParams& model, const DrivePulse& pulse, const cvec& initial_control,
                        const cvec& target_control, const NoiseModel& noise, int n_samples,
                        const IntegratorOptions& opts) {
    if (model.n_sites != 4) throw std::invalid_argument("rabi_prepare: four-site gate chain expected");
    if (initial_control.size() != 4 || target_control.size() != 4)
        throw DimensionError("control states must have four components");
    if (!(pulse.duration > 0.0)) throw std::invalid_argument("pulse duration must be positive");
    if (n_samples < 1) throw std::invalid_argument("need at least one sample");

    TimeDependentHamiltonian h(build_interaction_hamiltonian(model));
    const SiteDims& dims = h.dims();
    h.terms = drive_hamiltonian(pulse, dims);

    cvec t0 = cvec::Zero(2);
    t0(0) = 1.0;
    cvec psi = kron(kron(t0, initial_control.normalized()), t0);
    cmat rho0 = psi * psi.adjoint();

    Propagation prop;
    prop.hamiltonian = h;
    prop.noise = noise;
    prop.t_final = pulse.duration;
    prop.options = opts;
    prop.sample_times = linspace(pulse.duration / n_samples, pulse.duration, n_samples);

    std::vector<cmat> rhos = propagate(rho0, prop);
    cvec tgt = target_control.normalized();
    cvec singlet = control_state_vector(ControlState::closed_1minus);
    RabiResult r;
    r.times = prop.sample_times;
    for (const cmat& rho : rhos) {
        cmat rc = partial_trace(rho, dims, {1, 2});
        r.probabilities.push_back(std::real((tgt.adjoint() * rc * tgt)(0, 0)));
        r.singlet_population.push_back(std::real((singlet.adjoint() * rc * singlet)(0, 0)));
        r.control_states.push_back(rc);
    }
    r.control_state = partial_trace(rhos.back(), dims, {1, 2});
    r.probability = r.probabilities.back();
    return r;
}

DrivePulse resonant_pulse(const SpinModelParams& model, double amplitude, double fraction, double phase) {
    if (!(fraction > 0.0)) throw std::invalid_argument("pulse fraction must be positive");
    DrivePulse p;
    p.amplitude = amplitude;
    p.omega1 = model.omega.empty() ? 0.0 : model.omega[0];
    p.omega = p.omega1 + resonant_delta(model);
    p.phase = phase;
    p.duration = fraction * pi_pulse_duration(amplitude);
    return p;
}

Eigen::Matrix4cd to_drive_frame(const Eigen::Matrix4cd& rho_c, const DrivePulse& pulse, double t) {
    const cplx ph = std::exp(cplx(0.0, angular(pulse.delta()) * t));
    Eigen::Vector4cd r(1.0, ph, ph, ph * ph);
    return r.asDiagonal() * rho_c * r.conjugate().asDiagonal();
}

cvec half_pulse_target() {
    cvec v = control_state_vector(ControlState::closed_1plus);
    v(0) = cplx(0.0, 1.0);
    return v.normalized();
}

cplx superposition_phase(double j2x, double j2z, double omega2, double t) {
    return std::exp(cplx(0.0, -angular(omega2 - 2.0 * j2z + 2.0 * j2x) * t));
}

LeakageReport leakage_avoidance_check(const DrivePulse& pulse, const ControlLevels& lv) {
    LeakageReport r;
    r.e00 = -lv.omega2 + lv.j2z;
    r.e1plus = -lv.j2z + 2.0 * lv.j2x;
    r.e11 = lv.omega2 + lv.j2z;
    r.transition_open = r.e1plus - r.e00;
    r.transition_leak = r.e11 - r.e1plus;
    r.detuning_open = std::abs(pulse.omega - std::abs(r.transition_open));
    r.detuning_leak = std::abs(pulse.omega - std::abs(r.transition_leak));
    r.leak_flag = r.detuning_leak < 5.0 * std::abs(pulse.amplitude);
    r.weak_drive = std::abs(pulse.amplitude) <= std::abs(lv.j2z) / 20.0;
    return r;
}

} // namespace cswap
