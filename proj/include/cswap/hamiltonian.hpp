#pragma once

#include <functional>
#include <numbers>
#include <vector>

#include "cswap/hilbert.hpp"

namespace cswap {

// Frequencies are given as "2π·MHz" numbers (the value f of ω = 2π·f). Matrices
// handed to the integrator are in rad/µs, so every builder multiplies by 2π once.
// Times are in µs. Decay rates are plain 1/µs and are never scaled.
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline double angular(double f) { return two_pi * f; }

// One coefficient-operator pair c(t)·O of a time-dependent Hamiltonian.
struct HamiltonianTerm {
    std::function<cplx(double)> coefficient;
    cmat op;
    double bound = 1.0;   // sup |c(t)|, used for the step-size cap
};

// H(t) = static_part + Σ_k c_k(t) O_k, in rad/µs.
struct TimeDependentHamiltonian {
    Operator static_part;
    std::vector<HamiltonianTerm> terms;

    TimeDependentHamiltonian() = default;
    explicit TimeDependentHamiltonian(Operator h) : static_part(std::move(h)) {}

    const SiteDims& dims() const { return static_part.dims(); }
    cmat at(double t) const {
        cmat h = static_part.matrix();
        for (const auto& term : terms) h += term.coefficient(t) * term.op;
        return h;
    }
    // Upper bound on the spectral norm over all t.
    double norm_bound() const;
};

} // namespace cswap
