#pragma once

#include "cswap/config.hpp"
#include "cswap/metrics.hpp"
#include "cswap/output.hpp"

namespace cswap {

// Open peak and closed fidelities of one gate-mode model on [0, t_max·t_g].
struct GatePoint {
    double t_g = 0.0;
    double t_num = 0.0;             // refined open-config peak time
    double f_open = 0.0;            // open peak
    double f_closed_plus = 0.0;     // at the sample of the open peak
    double f_closed_minus = 0.0;
    double min_closed_plus = 0.0;   // min over [0, t_g]
    double min_closed_minus = 0.0;
    bool at_boundary = false;
    InvariantStats invariants;
};

GatePoint evaluate_gate_point(const TimeDependentHamiltonian& h, DeltaBranch branch, const NoiseModel& noise,
                              double t_g, double t_max, int n_times, int threads);
GatePoint evaluate_gate_point(const SpinModelParams& m, DeltaBranch branch, const NoiseModel& noise, double t_max,
                              int n_times, int threads);

// Qutrit coefficients of a published row; Ω₂′ = Ω₂(1 − |𝒜ʳ₂|), J₂ʸ = J₂ˣ − (K + M)/2.
QutritModelParams qutrit_params_from_row(const TableRow& row);

// Model parameters of scan point x for the scan kinds.
SpinModelParams scan_model(const ExperimentConfig& cfg, double x);

RunRecord run_fidelity_trace(const ExperimentConfig& cfg);
RunRecord run_scan(const ExperimentConfig& cfg);   // scan_j2, scan_j1, scan_delta
RunRecord run_qutrit_compare(const ExperimentConfig& cfg);
RunRecord run_crosstalk_scan(const ExperimentConfig& cfg);
RunRecord run_n5_trace(const ExperimentConfig& cfg);
RunRecord run_drive_demo(const ExperimentConfig& cfg);
RunRecord run_circuit_map(const ExperimentConfig& cfg);
RunRecord run_search(const ExperimentConfig& cfg);

RunRecord run_experiment(const ExperimentConfig& cfg);

} // namespace cswap
