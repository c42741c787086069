#pragma once

#include <vector>

#include "cswap/hamiltonian.hpp"
#include "cswap/hilbert.hpp"

namespace cswap {

// Collapse channels σᶻ_j (dephasing) and σ⁻_j (loss) on the listed sites, each with its own
// rate in 1/µs. On three-level sites the dephasing operator is diag(1,−1,−3) and loss is the
// truncated annihilation operator.
struct NoiseModel {
    double dephasing_rate = 0.0;
    double loss_rate = 0.0;
    std::vector<int> sites;   // empty = every site

    static NoiseModel none() { return {}; }
    static NoiseModel uniform(double gamma) { return {gamma, gamma, {}}; }
    bool is_zero() const { return dephasing_rate == 0.0 && loss_rate == 0.0; }
    void validate(const SiteDims& dims) const;
};

struct CollapseOperator {
    double rate;
    cmat op;
};

std::vector<CollapseOperator> collapse_operators(const SiteDims& dims, const NoiseModel& noise);

struct IntegratorOptions {
    double atol = 1e-10;
    double rtol = 1e-8;
    double max_step_factor = 0.03;   // h ≤ factor / ‖H‖, under the 0.05 ceiling
    long max_steps = 200'000'000;
    double min_step = 1e-16;         // µs
};

struct Propagation {
    TimeDependentHamiltonian hamiltonian;
    NoiseModel noise;
    double t_final = 0.0;
    std::vector<double> sample_times;
    IntegratorOptions options;

    void validate() const;
};

class PropagationError : public NumericalError {
public:
    PropagationError(const std::string& what, double achieved) : NumericalError(what), achieved_time(achieved) {}
    double achieved_time;
};

// Lindblad evolution of any operator (state or not) through the same linear generator.
std::vector<cmat> propagate(const cmat& rho0, const Propagation& prop);

// Each basis element evolved independently; threads ≤ 1 runs serially. Output is
// indexed [basis element][sample].
std::vector<std::vector<cmat>> propagate_superoperator(const Propagation& prop, const std::vector<cmat>& basis,
                                                       int threads = 1);

// Time-ordered propagator U(t) at each sample; requires zero noise.
std::vector<cmat> propagate_unitary(const Propagation& prop);

// Largest step the integrator will take for this propagation.
double max_step(const Propagation& prop);

} // namespace cswap
