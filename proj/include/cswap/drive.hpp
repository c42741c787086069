#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cswap/dynamics.hpp"
#include "cswap/spin_model.hpp"

namespace cswap {

// Microwave drive on the two control qubits. Frequencies in 2π·MHz, times in µs.
// I(t) = s(t) cos θ, Q(t) = s(t) sin θ with envelope s on [0, 1].
struct DrivePulse {
    double amplitude = 0.0;   // A
    double omega = 0.0;       // drive frequency ω
    double omega1 = 0.0;      // Ω₁ of the rotating frame
    double phase = 0.0;       // θ
    double duration = 0.0;
    std::function<double(double)> envelope;   // of t / duration; empty = rectangular

    double delta() const { return omega - omega1; }
    double envelope_at(double t) const;
};

// Coefficient-operator pairs for (A/2)[(I cos δt − Q sin δt) Y + (I sin δt + Q cos δt) X]
// with Y = σʸ₂+σʸ₃, X = σˣ₂+σˣ₃, written as c(t) Σσ⁺ + c*(t) Σσ⁻.
std::vector<HamiltonianTerm> drive_hamiltonian(const DrivePulse& pulse, const SiteDims& dims,
                                               const std::vector<int>& control_sites = {1, 2});

// Interaction-frame detuning δ resonant with |0,00,0> → |0,1⁺,0>: Δ − 2J₂ᶻ + 2J₂ˣ − 2J₁ᶻ.
// The J₁ᶻ term vanishes when the targets are decoupled.
double bare_resonant_delta(const SpinModelParams& p);
// Same transition between the dressed eigenstates of the undriven chain.
double resonant_delta(const SpinModelParams& p);
// Lab-frame resonance |Ω₂ − 2J₂ᶻ + 2J₂ˣ|.
double resonance_frequency(double omega2, double j2x, double j2z);

// The collective drive couples |00>_C and |1⁺>_C with strength √2·A/2, so a full
// population transfer takes π/(√2·A) rather than π/A.
double rabi_angular_frequency(double amplitude);   // rad/µs
double pi_pulse_duration(double amplitude);         // µs

struct RabiResult {
    Eigen::Matrix4cd control_state;   // reduced density matrix of the control pair
    double probability = 0.0;         // ⟨target|ρ_C|target⟩
    std::vector<double> times;
    std::vector<double> probabilities;   // at each sample
    std::vector<double> singlet_population;
    std::vector<Eigen::Matrix4cd> control_states;
};

// Full four-site evolution with the drive; targets start in |00>.
RabiResult rabi_prepare(const SpinModelParams& model, const DrivePulse& pulse, const cvec& initial_control,
                        const cvec& target_control, const NoiseModel& noise = {}, int n_samples = 1,
                        const IntegratorOptions& opts = {});

// Rectangular pulse on the dressed resonance; fraction 1 is a π-pulse, 0.5 a half pulse.
DrivePulse resonant_pulse(const SpinModelParams& model, double amplitude, double fraction = 1.0, double phase = 0.0);

// Control-register state in the frame co-rotating with the drive: each control excitation
// picks up e^{iδt}. In this frame a half pulse with θ = −π/2 from |1⁺> gives
// (|1⁺> + i|0>)/√2.
Eigen::Matrix4cd to_drive_frame(const Eigen::Matrix4cd& rho_c, const DrivePulse& pulse, double t);
cvec half_pulse_target();

// e^{−i(Ω₂ − 2J₂ᶻ + 2J₂ˣ)·2π·t}.
cplx superposition_phase(double j2x, double j2z, double omega2, double t);

struct LeakageReport {
    double e00 = 0, e1plus = 0, e11 = 0;       // level energies, 2π·MHz
    double transition_open = 0;                // |00> → |1⁺>
    double transition_leak = 0;                // |1⁺> → |11>
    double detuning_open = 0;                  // |ω − transition|
    double detuning_leak = 0;
    bool leak_flag = false;                    // detuning_leak < 5·A
    bool weak_drive = true;                    // A ≤ J₂ᶻ / 20
};

struct ControlLevels {
    double omega2, j2x, j2z;
};
LeakageReport leakage_avoidance_check(const DrivePulse& pulse, const ControlLevels& levels);

} // namespace cswap
