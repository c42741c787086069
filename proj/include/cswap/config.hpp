#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cswap/circuit_map.hpp"
#include "cswap/search.hpp"
#include "cswap/spin_model.hpp"

namespace cswap {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    fidelity_trace, scan_j2, scan_j1, scan_delta, qutrit_compare,
    crosstalk_scan, n5_trace, drive_demo, circuit_map, search
};
enum class ModelSource { explicit_params, circuit, table_row };

std::string to_string(ExperimentKind k);
std::string to_string(ModelSource s);
ExperimentKind parse_kind(const std::string& s);
ModelSource parse_source(const std::string& s);

inline constexpr int config_format_version = 1;

bool operator==(const CircuitParams& a, const CircuitParams& b);
bool operator==(const CostSpec& a, const CostSpec& b);

// Every field has a fixed default; kind-dependent grid defaults are filled by resolve().
// Frequencies are 2π·MHz numbers, γ is 1/µs.
struct ExperimentConfig {
    // [experiment]
    ExperimentKind kind = ExperimentKind::fidelity_trace;
    std::uint64_t seed = 1;
    int threads = 1;

    // [model]
    ModelSource source = ModelSource::table_row;
    int row = 6;
    double j1x = 30.0, j1z = 30.0, j2x = 750.0, j2z = 750.0;
    bool delta_from_branch = true;   // delta = Δ± of the branch
    double delta = 0.0;
    DeltaBranch branch = DeltaBranch::plus;
    ControlState control = ControlState::open_0;
    double target_offset = 0.0;
    double omega2 = 0.0;             // lab Ω₂ for explicit models, 0 = unknown
    CircuitParams circuit = table_row(6).circuit;

    // [noise]
    double gamma = 0.01;
    bool dephasing = true;
    bool loss = true;

    // [grid]; x is the scanned quantity (J₂, J₁, J₂ˣ or J_c/J₁)
    double t_max = 1.2;              // in units of t_g
    int n_times = 241;
    double x_min = 0.0, x_max = 0.0;
    int n_points = 0;

    // [n5]
    double delta3 = 0.0;
    N5Branch n5_branch = N5Branch::e0;

    // [drive]
    double amplitude_ratio = 50.0;   // A = J₂ᶻ / ratio
    double drive_phase = 0.0;
    double pulse_fraction = 1.0;
    double drive_span = 2.0;         // trace length in π-pulses
    int drive_samples = 101;

    // [search]
    int n_restarts = 64;
    int max_evaluations = 2000;
    CostSpec cost;

    bool operator==(const ExperimentConfig&) const = default;

    // Fills kind-specific defaults and checks ranges; throws ConfigError.
    void resolve();
};

// With resolve = false the caller applies overrides and calls resolve() itself.
ExperimentConfig parse_config(const std::string& text, bool resolve = true);
ExperimentConfig load_config(const std::string& path, bool resolve = true);
std::string emit_config(const ExperimentConfig& cfg);

// Spin parameters for the model section (table row, circuit or explicit).
SpinModelParams resolve_model(const ExperimentConfig& cfg);
NoiseModel resolve_noise(const ExperimentConfig& cfg);

} // namespace cswap
