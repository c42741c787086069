#include "doctest.h"
#include "oracles.hpp"

#include "cswap/dynamics.hpp"
#include "cswap/metrics.hpp"
#include "cswap/spin_model.hpp"

using namespace cswap;

namespace {

Propagation single_qubit(double omega, NoiseModel noise, std::vector<double> times) {
    Propagation p;
    p.hamiltonian = TimeDependentHamiltonian(Operator(SiteDims{2}, -0.5 * angular(omega) * sigma_z()));
    p.noise = noise;
    p.t_final = times.back();
    p.sample_times = std::move(times);
    return p;
}

Propagation gate_propagation(const NoiseModel& noise, double t_final, int n) {
    Propagation p;
    p.hamiltonian = TimeDependentHamiltonian(build_interaction_hamiltonian(gate_params(30, 30, 750, 750, DeltaBranch::plus)));
    p.noise = noise;
    p.t_final = t_final;
    p.sample_times = linspace(t_final / n, t_final, n);
    return p;
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("amplitude damping follows exp(-gamma t)") {
    const double gamma = 0.01;
    std::vector<double> times = linspace(1.0, 100.0, 100);
    Propagation p = single_qubit(1.0, {0.0, gamma, {}}, times);
    cmat rho0 = ket_bra(2, 1, 1);
    auto out = propagate(rho0, p);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
        worst = std::max(worst, std::abs(out[k](1, 1).real() - std::exp(-gamma * times[k])));
    CHECK(worst <= 1e-6);
}

TEST_CASE("gamma zero matches the matrix exponential") {
    const double tf = 0.02;
    Propagation p = gate_propagation(NoiseModel::none(), tf, 4);
    std::mt19937_64 rng(41);
    cmat rho0 = oracle::random_density(16, rng);
    auto out = propagate(rho0, p);
    const cmat& h = p.hamiltonian.static_part.matrix();
    for (std::size_t k = 0; k < out.size(); ++k) {
        cmat u = oracle::expm(cmat(cplx(0, -1) * h * p.sample_times[k]));
        CHECK((out[k] - u * rho0 * u.adjoint()).norm() <= 1e-8);
    }
    auto us = propagate_unitary(p);
    cmat u = oracle::expm(cmat(cplx(0, -1) * h * tf));
    CHECK((us.back() - u).norm() <= 1e-8);
}

TEST_CASE("zero Hamiltonian and zero noise is the identity map") {
    Propagation p;
    p.hamiltonian = TimeDependentHamiltonian(Operator::zero(SiteDims{2, 3}));
    p.t_final = 1.0;
    p.sample_times = {0.0, 0.5, 1.0};
    std::mt19937_64 rng(43);
    cmat a = oracle::random_matrix(6, rng);
    for (const auto& r : propagate(a, p)) CHECK((r - a).norm() <= 1e-14);
}

TEST_CASE("collapse operators") {
    auto ops = collapse_operators(SiteDims{2, 2, 2, 2}, NoiseModel::uniform(0.01));
    CHECK(ops.size() == 8);
    auto q = collapse_operators(SiteDims{2, 3, 3, 2}, NoiseModel::uniform(0.01));
    CHECK(q.size() == 8);
    CHECK(collapse_operators(SiteDims{2, 2}, {0.0, 0.01, {}}).size() == 2);
    CHECK_THROWS(collapse_operators(SiteDims{2}, {-1.0, 0.0, {}}));
}

TEST_CASE("singleton superoperator equals propagate") {
    Propagation p = gate_propagation(NoiseModel::uniform(0.5), 0.01, 3);
    std::mt19937_64 rng(47);
    cmat rho0 = oracle::random_density(16, rng);
    auto a = propagate(rho0, p);
    auto b = propagate_superoperator(p, {rho0});
    for (std::size_t k = 0; k < a.size(); ++k) CHECK((a[k] - b[0][k]).norm() == 0.0);
}

TEST_CASE("evolution is linear") {
    Propagation p = gate_propagation(NoiseModel::uniform(0.5), 0.01, 2);
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 3; ++trial) {
        cmat r1 = oracle::random_matrix(16, rng), r2 = oracle::random_matrix(16, rng);
        cplx a(0.7, 0.1), b(-0.2, 1.3);
        auto out = propagate_superoperator(p, {r1, r2, cmat(a * r1 + b * r2)}, 2);
        for (std::size_t k = 0; k < out[0].size(); ++k)
            CHECK((out[2][k] - a * out[0][k] - b * out[1][k]).norm() <= 1e-8 * (r1.norm() + r2.norm()));
    }
}

TEST_CASE("maximally mixed state is a dephasing fixed point") {
    Propagation p = gate_propagation({1.0, 0.0, {}}, 0.01, 2);
    cmat mixed = cmat::Identity(16, 16) / 16.0;
    for (const auto& r : propagate(mixed, p)) CHECK((r - mixed).norm() <= 1e-12);
}

TEST_CASE("physical invariants at every sample") {
    Propagation p = gate_propagation(NoiseModel::uniform(2.0), 0.02, 20);
    std::mt19937_64 rng(59);
    cmat rho0 = oracle::random_density(16, rng);
    for (const auto& r : propagate(rho0, p)) {
        CHECK(std::abs(r.trace() - cplx(1.0)) <= 1e-8);
        CHECK((r - r.adjoint()).norm() <= 1e-8);
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (r + r.adjoint()));
        CHECK(es.eigenvalues().minCoeff() >= -1e-7);
    }
}

TEST_CASE("tightening the tolerance changes the result by less than the tolerance") {
    Propagation p = gate_propagation(NoiseModel::uniform(0.5), 0.01, 1);
    std::mt19937_64 rng(61);
    cmat rho0 = oracle::random_density(16, rng);
    cmat a = propagate(rho0, p).back();
    p.options.atol /= 2;
    p.options.rtol /= 2;
    cmat b = propagate(rho0, p).back();
    CHECK((a - b).norm() < 1e-8);
}

TEST_CASE("excitation sectors are conserved without noise") {
    Propagation p = gate_propagation(NoiseModel::none(), 0.01, 5);
    std::mt19937_64 rng(67);
    cmat rho0 = oracle::random_density(16, rng);
    SiteDims d{2, 2, 2, 2};
    auto sector_pop = [&](const cmat& r, int n) {
        double s = 0.0;
        for (int k = 0; k < 16; ++k) {
            int e = 0;
            for (int i = 0; i < 4; ++i) e += d.digit(k, i);
            if (e == n) s += r(k, k).real();
        }
        return s;
    };
    auto out = propagate(rho0, p);
    for (int n = 0; n <= 4; ++n)
        for (const auto& r : out) CHECK(std::abs(sector_pop(r, n) - sector_pop(rho0, n)) <= 1e-9);
}

TEST_CASE("time-dependent terms follow the rotating-frame oracle") {
    // H(t) = (a/2)(e^{iwt}σ⁺ + e^{-iwt}σ⁻) against a midpoint product of short steps.
    const double a = angular(5.0), w = angular(3.0), tf = 0.2;
    Propagation p;
    p.hamiltonian = TimeDependentHamiltonian(Operator::zero(SiteDims{2}));
    p.hamiltonian.terms.push_back({[w](double t) { return std::exp(cplx(0, w * t)); }, 0.5 * a * sigma_plus(), 1.0});
    p.hamiltonian.terms.push_back({[w](double t) { return std::exp(cplx(0, -w * t)); }, 0.5 * a * sigma_minus(), 1.0});
    p.t_final = tf;
    p.sample_times = {tf};
    cmat u = propagate_unitary(p).back();
    cmat ref = cmat::Identity(2, 2);
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        double t = (k + 0.5) * tf / n;
        ref = oracle::expm(cmat(cplx(0, -tf / n) * p.hamiltonian.at(t))) * ref;
    }
    CHECK((u - ref).norm() <= 1e-6);
}

TEST_CASE("propagation errors") {
    Propagation p = gate_propagation(NoiseModel::none(), 0.01, 2);
    CHECK_THROWS_AS(propagate(cmat::Identity(4, 4), p), DimensionError);
    p.sample_times = {0.005, 0.002};
    CHECK_THROWS_AS(propagate(cmat::Identity(16, 16) / 16.0, p), std::invalid_argument);
    p.sample_times = {0.02};
    CHECK_THROWS_AS(propagate(cmat::Identity(16, 16) / 16.0, p), std::invalid_argument);
    Propagation q = gate_propagation(NoiseModel::uniform(0.01), 0.01, 2);
    CHECK_THROWS_AS(propagate_unitary(q), std::invalid_argument);
}

TEST_CASE("step underflow reports the achieved time") {
    Propagation p = gate_propagation(NoiseModel::none(), 0.01, 2);
    p.options.max_steps = 10;
    try {
        propagate(cmat::Identity(16, 16) / 16.0, p);
        FAIL("expected a propagation error");
    } catch (const PropagationError& e) {
        CHECK(e.achieved_time > 0.0);
        CHECK(e.achieved_time < 0.01);
    }
}

}
