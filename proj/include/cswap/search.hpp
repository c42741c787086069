#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cswap/circuit_map.hpp"
#include "cswap/dynamics.hpp"
#include "cswap/spin_model.hpp"

namespace cswap {

// Weights of the squared relative residuals.
struct CostSpec {
    double w_j1 = 1.0;        // (J₁ˣ − J₁ᶻ)/|J₁ˣ|
    double w_branch = 1.0;    // (Δ − Δ±)/|Δ±|
    double w_ratio = 1.0;     // shortfall of |J₂ᶻ/J₁ˣ| below ratio_min
    double w_anharm = 0.1;    // shortfall of |𝒜ʳ| below anharm_floor, both site types
    double w_bounds = 1.0;    // log-distance outside the box
    double ratio_min = 10.0;
    double anharm_floor = 1e-3;

    void validate() const;
};

enum CostTerm { cost_j1 = 0, cost_branch, cost_ratio, cost_anharm, cost_bounds, n_cost_terms };
const char* cost_term_name(int term);

// Box in circuit-parameter space, same field order as CircuitParams.
struct SearchBounds {
    std::array<double, 8> lower{}, upper{};

    // E: 50–700 2π·GHz, C: 20–1000 fF, L: 25–100 nH.
    static SearchBounds table_ranges();
    static SearchBounds point(const CircuitParams& p);
    void validate() const;
    bool contains(const CircuitParams& p) const;
};

struct SearchResult {
    CircuitParams circuit;
    SpinMapResult spin;
    double cost = 0.0;
    std::array<double, n_cost_terms> residuals{};   // unweighted, signed where meaningful
};

// Acceptance tolerances on the two gate identities.
bool is_accepted(const SearchResult& r, double tol = 1e-2);

SearchResult evaluate_cost(const CircuitParams& p, const CostSpec& cost, DeltaBranch branch,
                           const SearchBounds& bounds, const UnitCalibration& cal = frozen_calibration());

struct SearchOptions {
    int n_restarts = 64;
    int max_evaluations = 2000;
    int threads = 1;
    std::uint64_t seed = 1;
    UnitCalibration calibration = frozen_calibration();
};

struct SearchOutcome {
    std::vector<SearchResult> results;   // accepted, distinct, sorted by cost
    int restarts = 0;
    int converged = 0;
    double best_cost = 0.0;              // over all restarts, accepted or not
    std::string diagnostics;
};

SearchOutcome search(const CostSpec& cost, const SearchBounds& bounds, DeltaBranch branch,
                     const SearchOptions& opts = {});

// Local descent from a given circuit, no random restarts.
SearchResult refine(const CircuitParams& start, const CostSpec& cost, const SearchBounds& bounds, DeltaBranch branch,
                    int max_evaluations, const UnitCalibration& cal = frozen_calibration());

struct SolutionReport {
    double gate_time = 0.0;          // π/|2J₁|, µs
    double open_peak = 0.0;
    double open_peak_time = 0.0;
    double closed_min_plus = 0.0;    // min over [0, t_g]
    double closed_min_minus = 0.0;
};

// Spin model of a search result in gate form.
SpinModelParams solution_model(const SearchResult& r);

SolutionReport validate_solution(const SearchResult& r, double gamma, int n_samples = 241, int threads = 1);

} // namespace cswap
