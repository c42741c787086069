#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cswap/hamiltonian.hpp"
#include "cswap/hilbert.hpp"

namespace cswap {

enum class DeltaBranch { plus, minus };
enum class ControlState { open_0, closed_1plus, closed_1minus, closed_11, custom };

std::string to_string(DeltaBranch b);
std::string to_string(ControlState c);
DeltaBranch parse_branch(const std::string& s);
ControlState parse_control(const std::string& s);

// Chain parameters in 2π·MHz. detuning[j] = Ω_j − Ω_1 (so detuning[0] is normally 0);
// jx[j], jz[j] couple sites j and j+1.
struct SpinModelParams {
    int n_sites = 4;
    std::vector<double> detuning;
    std::vector<double> jx;
    std::vector<double> jz;
    std::vector<double> omega;   // optional lab-frame frequencies, informational only

    void validate() const;
    bool is_symmetric(double tol = 1e-12) const;
};

// Δ± = 2(J₂ᶻ ± J₂ˣ).
double gate_detuning(double j2x, double j2z, DeltaBranch branch);

// Symmetric N=4 gate chain. target_offset is an extra detuning on both targets.
SpinModelParams gate_params(double j1x, double j1z, double j2x, double j2z, double delta,
                            double target_offset = 0.0);
SpinModelParams gate_params(double j1x, double j1z, double j2x, double j2z, DeltaBranch branch);

struct GateConfig {
    DeltaBranch branch = DeltaBranch::plus;
    ControlState control = ControlState::open_0;
    cvec custom;   // used when control == custom
};

// Control-register state over n_controls qubits. Closed states need n_controls = 2.
cvec control_state_vector(ControlState c, int n_controls = 2, const cvec& custom = {});

// Soft requirements of the gate regime; returns human-readable warnings.
std::vector<std::string> check_gate_regime(const SpinModelParams& p, double ratio_threshold = 5.0,
                                           double rel_tol = 1e-2);

Operator build_interaction_hamiltonian(const SpinModelParams& p, bool gate_mode = true);

// Single-excitation block in basis {|10..0>, |010..0>, ...}, 2π·MHz.
Eigen::MatrixXd single_excitation_block(const SpinModelParams& p);

struct SingleExcitationSpectrum {
    std::array<double, 4> energies;              // E₁..E₄ labelled by the closed forms
    std::array<Eigen::Vector4d, 4> vectors;      // normalized, real
};

SingleExcitationSpectrum analytic_single_excitation_spectrum(const SpinModelParams& p);

struct ClosedStateCheck {
    double theta;
    double b_value;            // 2π·MHz
    double residual_single;    // ‖(H−b)ψ₁‖, 2π·MHz
    double residual_double;    // ‖(H−b)ψ₂‖, 2π·MHz
};

// Rows for θ = +π/4 and θ = −π/4.
std::array<ClosedStateCheck, 2> closed_state_eigencheck(const SpinModelParams& p);

// t_g = π/|2J₁| in µs, J₁ taken as J₁ˣ.
double analytic_gate_time(const SpinModelParams& p);
double analytic_gate_time(double j1);

struct TransferConditions {
    bool degenerate = false;
    double t_f = 0.0;                       // µs
    std::array<double, 4> level_residuals;  // distance of E_k t_f/π to the required parity
    std::array<double, 2> spacing_residuals;// resonant triple spacings vs odd multiples of π
    double superposition_residual = 0.0;    // ||E_r − E₀| t_f − 2π|, rad
};

TransferConditions perfect_transfer_conditions(const SpinModelParams& p);

// Five-site chain variant.
enum class N5Branch { e0, eplus, eminus };
N5Branch parse_n5_branch(const std::string& s);

double n5_detuning(double j1z, double j2x, double j2z, double delta3, N5Branch branch);
SpinModelParams build_n5_model(double j1x, double j1z, double j2x, double j2z, double delta3,
                               N5Branch branch);

// Closed forms for the J₁ˣ → 0 single-excitation block, ascending order.
std::array<double, 5> n5_single_excitation_energies(const SpinModelParams& p);

// N=4 Hamiltonian plus σσ(XX+YY) couplings on (1,3),(2,4) at j_nn and (1,4) at j_nnn.
Operator add_crosstalk(const SpinModelParams& p, double j_nn, double j_nnn);

// Controls truncated to three levels; dims [2,3,3,2].
struct QutritModelParams {
    double delta = 0.0;
    double j1x = 0.0, j1z = 0.0;
    double j2x = 0.0, j2z = 0.0, j2y = 0.0;
    double k23x = 0.0, m23x = 0.0;
    std::optional<double> r23x, p23x;   // derived from K, M, J₂ʸ when absent
    double omega2 = 0.0, omega2p = 0.0; // 0→1 and 1→2 frequencies of the control sites

    double r() const { return r23x.value_or(j2y + k23x + 4.0 * m23x); }
    double p() const { return p23x.value_or(j2y + k23x + 2.0 * m23x); }
    void validate() const;
};

TimeDependentHamiltonian build_qutrit_hamiltonian(const QutritModelParams& p);

// Embeds a qubit-space state on [2,3,3,2]; levels |2> stay empty.
cmat embed_qubit_operator_in_qutrit(const cmat& m);

} // namespace cswap
