#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "cswap/dynamics.hpp"
#include "cswap/spin_model.hpp"

namespace cswap {

enum class GateKind { open_plus, open_minus, closed };

struct TargetGate {
    GateKind kind;
    Eigen::Matrix4cd matrix;
};

TargetGate target_gate(GateKind kind);
GateKind target_kind(const GateConfig& cfg);

// (σˣ₁)ᵏ(σᶻ₁)ˡ(σˣ_N)ᵐ(σᶻ_N)ⁿ in lexicographic (k,l,m,n) order, as 4x4 matrices.
std::array<cmat, 16> pauli_basis_2q();

// F̄ from the images E(U_j) of the 16 basis operators.
double average_fidelity_from_images(const cmat& target, const std::array<cmat, 16>& images);
double average_fidelity_of_channel(const cmat& target, const std::function<cmat(const cmat&)>& channel);

struct InvariantStats {
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
    int states_checked = 0;
};

struct FidelityTrace {
    std::vector<double> times;
    std::vector<double> fbar;
    double peak_time = 0.0;    // refined
    double peak_value = 0.0;   // max over samples
    std::size_t peak_index = 0;
    bool at_boundary = false;
    InvariantStats invariants;
};

struct FidelityOptions {
    int threads = 1;
    IntegratorOptions integrator;
    bool check_invariants = true;
    bool force_lindblad = false;   // use the density-matrix path even when noise is zero
};

// Gate register layout: which sites are targets (first, last) and which are controls.
struct GateLayout {
    std::vector<int> targets;
    std::vector<int> controls;
    static GateLayout chain(int n_sites);
};

// Control-register vector lifted to the control-site dimensions of `dims`.
cvec lift_control_state(const cvec& qubit_state, const SiteDims& dims, const GateLayout& layout);

FidelityTrace average_fidelity(const TimeDependentHamiltonian& h, const GateLayout& layout, const cvec& control_state,
                               const cmat& target, const NoiseModel& noise, const std::vector<double>& times,
                               const FidelityOptions& opts = {});

FidelityTrace average_fidelity(const SpinModelParams& model, const GateConfig& cfg, const NoiseModel& noise,
                               const std::vector<double>& times, const FidelityOptions& opts = {});

// Argmax location with 3-point parabolic refinement.
void locate_peak(FidelityTrace& tr);

struct GateTime {
    double time = 0.0;
    double value = 0.0;
    bool at_boundary = false;
};
GateTime numerical_gate_time(const FidelityTrace& tr);

struct EntanglementPower {
    double mean = 0.0;
    double standard_error = 0.0;
    long samples = 0;
};
EntanglementPower entanglement_power(const Eigen::Matrix4cd& u, long n_samples, std::uint64_t seed = 1);

// Uniform sample grid helper: n points on [a, b].
std::vector<double> linspace(double a, double b, int n);

} // namespace cswap
