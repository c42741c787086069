#include "doctest.h"
#include "oracles.hpp"

#include "cswap/metrics.hpp"

using namespace cswap;

namespace {

// Random CPTP map on two qubits through a unitary dilation with a qubit environment.
std::vector<cmat> random_kraus(std::mt19937_64& rng) {
    cmat u = oracle::random_unitary(8, rng);
    std::vector<cmat> k;
    for (int e = 0; e < 2; ++e) {
        cmat m(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = u(2 * i + e, 2 * j);
        k.push_back(m);
    }
    return k;
}

cmat apply_kraus(const std::vector<cmat>& k, const cmat& x) {
    cmat r = cmat::Zero(4, 4);
    for (const auto& m : k) r += m * x * m.adjoint();
    return r;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("target gates") {
    cmat p = target_gate(GateKind::open_plus).matrix, m = target_gate(GateKind::open_minus).matrix;
    CHECK((p * p.adjoint() - cmat::Identity(4, 4)).norm() <= 1e-12);
    CHECK((m * m.adjoint() - cmat::Identity(4, 4)).norm() <= 1e-12);
    CHECK(p(0, 0) == cplx(1.0));
    CHECK(p(1, 2) == cplx(-1.0));
    CHECK(p(2, 1) == cplx(-1.0));
    CHECK(m(1, 2) == cplx(1.0));
    CHECK(p(3, 3) == cplx(0.0, 1.0));
    CHECK((target_gate(GateKind::closed).matrix - cmat::Identity(4, 4)).norm() == 0.0);
    CHECK(target_kind({DeltaBranch::minus, ControlState::open_0, {}}) == GateKind::open_minus);
    CHECK(target_kind({DeltaBranch::plus, ControlState::closed_1minus, {}}) == GateKind::closed);
}

TEST_CASE("two-qubit Pauli basis") {
    auto b = pauli_basis_2q();
    CHECK((b[0] - cmat::Identity(4, 4)).norm() == 0.0);
    CHECK((b[8] - oracle::kron(oracle::pauli('x'), oracle::pauli('i'))).norm() == 0.0);
    CHECK((b[1] - oracle::kron(oracle::pauli('i'), oracle::pauli('z'))).norm() == 0.0);
    for (int i = 0; i < 16; ++i) {
        CHECK((b[i] * b[i].adjoint() - cmat::Identity(4, 4)).norm() <= 1e-14);
        for (int j = 0; j < 16; ++j)
            CHECK(std::abs((b[i].adjoint() * b[j]).trace() - cplx(i == j ? 4.0 : 0.0)) <= 1e-14);
    }
}

TEST_CASE("perfect gate scores one") {
    for (GateKind k : {GateKind::open_plus, GateKind::open_minus, GateKind::closed}) {
        cmat u = target_gate(k).matrix;
        double f = average_fidelity_of_channel(u, [&](const cmat& x) { return cmat(u * x * u.adjoint()); });
        CHECK(f == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("identity channel against the open gate") {
    cmat u = target_gate(GateKind::open_plus).matrix;
    double f = average_fidelity_of_channel(u, [](const cmat& x) { return x; });
    CHECK(f == doctest::Approx(oracle::unitary_average_fidelity(u, cmat::Identity(4, 4))).epsilon(1e-14));
    CHECK(f == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("random channel: linear extension, tomography and the Kraus formula agree") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        auto k = random_kraus(rng);
        cmat v = oracle::random_unitary(4, rng);
        double linear = average_fidelity_of_channel(v, [&](const cmat& x) { return apply_kraus(k, x); });

        // Entanglement fidelity from the Kraus operators.
        double fe = 0.0;
        for (const auto& m : k) fe += std::norm((v.adjoint() * m).trace()) / 16.0;
        CHECK(linear == doctest::Approx((4.0 * fe + 1.0) / 5.0).epsilon(1e-10));

        // Tomography: images of 16 physical states, then linear inversion onto the Paulis.
        std::vector<cmat> states, images;
        const std::array<Eigen::Vector2cd, 4> kets = {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1),
                                                      Eigen::Vector2cd(1, 1) / std::sqrt(2.0),
                                                      Eigen::Vector2cd(1, cplx(0, 1)) / std::sqrt(2.0)};
        for (const auto& a : kets)
            for (const auto& b : kets) {
                Eigen::Vector4cd psi(a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1));
                cmat rho = psi * psi.adjoint();
                states.push_back(rho);
                images.push_back(apply_kraus(k, rho));
            }
        Eigen::MatrixXcd s(16, 16);
        for (int j = 0; j < 16; ++j) s.col(j) = Eigen::Map<const Eigen::VectorXcd>(states[j].data(), 16);
        auto basis = pauli_basis_2q();
        std::array<cmat, 16> pimg;
        for (int i = 0; i < 16; ++i) {
            Eigen::VectorXcd c = s.fullPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(basis[i].data(), 16));
            pimg[i] = cmat::Zero(4, 4);
            for (int j = 0; j < 16; ++j) pimg[i] += c(j) * images[j];
        }
        CHECK(average_fidelity_from_images(v, pimg) == doctest::Approx(linear).epsilon(1e-8));
        CHECK(linear >= 0.0);
        CHECK(linear <= 1.0 + 1e-9);
    }
}

TEST_CASE("full pipeline on a decoupled chain") {
    // No coupling to the targets and no target detuning: every config is the identity.
    SpinModelParams m = gate_params(0.0, 0.0, 750, 750, DeltaBranch::plus);
    auto times = linspace(0.0, 0.01, 5);
    for (ControlState c : {ControlState::closed_1plus, ControlState::closed_1minus}) {
        FidelityTrace tr = average_fidelity(m, {DeltaBranch::plus, c, {}}, NoiseModel::none(), times);
        for (double f : tr.fbar) CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
    FidelityTrace tr = average_fidelity(m, {DeltaBranch::plus, ControlState::open_0, {}}, NoiseModel::none(), times);
    for (double f : tr.fbar) CHECK(f == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("noisy pipeline keeps the fidelity in range and the states physical") {
    SpinModelParams m = gate_params(30, 30, 750, 750, DeltaBranch::plus);
    auto times = linspace(0.0, analytic_gate_time(m), 11);
    FidelityTrace tr = average_fidelity(m, {DeltaBranch::plus, ControlState::open_0, {}}, NoiseModel::uniform(1.0), times);
    for (double f : tr.fbar) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-9);
    }
    CHECK(tr.invariants.states_checked > 0);
    CHECK(tr.invariants.max_trace_error <= 1e-8);
    CHECK(tr.invariants.min_eigenvalue >= -1e-7);
}

TEST_CASE("peak location on synthetic traces") {
    const double tg = 1.0;
    FidelityTrace tr;
    tr.times = linspace(0.8 * tg, 1.05 * tg, 101);
    for (double t : tr.times) tr.fbar.push_back(1.0 - std::pow(t - tg, 2));
    locate_peak(tr);
    GateTime g = numerical_gate_time(tr);
    CHECK(std::abs(g.time - tg) <= tr.times[1] - tr.times[0]);
    CHECK_FALSE(g.at_boundary);

    FidelityTrace mono;
    mono.times = linspace(0.8, 1.05, 101);
    for (double t : mono.times) mono.fbar.push_back(t);
    locate_peak(mono);
    CHECK(numerical_gate_time(mono).at_boundary);
}

TEST_CASE("entanglement power of identity, swap and the open gate") {
    Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity(), sw = Eigen::Matrix4cd::Zero();
    sw(0, 0) = sw(3, 3) = sw(1, 2) = sw(2, 1) = 1.0;
    CHECK(entanglement_power(id, 2000).mean <= 1e-14);
    CHECK(entanglement_power(sw, 2000).mean <= 1e-14);
    Eigen::Matrix4cd u = target_gate(GateKind::open_plus).matrix;
    CHECK(oracle::entanglement_power_exact(u) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    EntanglementPower ep = entanglement_power(u, 20000, 3);
    CHECK(std::abs(ep.mean - 1.0 / 9.0) <= 3 * ep.standard_error);
    CHECK(entanglement_power(u, 500, 9).mean == entanglement_power(u, 500, 9).mean);
    CHECK_THROWS(entanglement_power(2.0 * id, 10));
}

TEST_CASE("entanglement power is invariant under local unitaries") {
    std::mt19937_64 rng(73);
    Eigen::Matrix4cd u = target_gate(GateKind::open_plus).matrix;
    cmat a = oracle::kron(oracle::random_unitary(2, rng), oracle::random_unitary(2, rng));
    cmat b = oracle::kron(oracle::random_unitary(2, rng), oracle::random_unitary(2, rng));
    Eigen::Matrix4cd v = a * u * b;
    EntanglementPower e0 = entanglement_power(u, 20000, 5), e1 = entanglement_power(v, 20000, 7);
    CHECK(std::abs(e0.mean - e1.mean) <= 3 * std::hypot(e0.standard_error, e1.standard_error));
    CHECK(oracle::entanglement_power_exact(v) == doctest::Approx(1.0 / 9.0).epsilon(1e-10));
}

TEST_CASE("linspace") {
    auto v = linspace(0.0, 1.0, 5);
    CHECK(v.size() == 5);
    CHECK(v[2] == 0.5);
    CHECK_THROWS(linspace(0, 1, 0));
}

}
