#include "doctest.h"
#include "oracles.hpp"

#include <numbers>

#include "cswap/config.hpp"
#include "cswap/drive.hpp"

using namespace cswap;

namespace {

SpinModelParams row6() { return resolve_model(ExperimentConfig{}); }

// Row 6 control pair with the targets cut off.
SpinModelParams row6_decoupled() {
    const TableRow& r = table_row(6);
    return gate_params(0.0, 0.0, r.j2x, r.j2z, r.delta);
}

cmat total(const std::vector<HamiltonianTerm>& terms, double t) {
    cmat h = cmat::Zero(terms.front().op.rows(), terms.front().op.cols());
    for (const auto& term : terms) h += term.coefficient(t) * term.op;
    return h;
}

} // namespace

TEST_SUITE("drive") {

TEST_CASE("zero amplitude gives no drive terms") {
    DrivePulse p;
    p.omega = 100.0;
    CHECK(drive_hamiltonian(p, SiteDims{2, 2, 2, 2}).empty());
}

TEST_CASE("resonant zero-phase drive is a static Y rotation") {
    DrivePulse p;
    p.amplitude = 15.0;
    p.omega = p.omega1 = 4000.0;
    auto terms = drive_hamiltonian(p, SiteDims{2, 2, 2, 2});
    cmat i2 = cmat::Identity(2, 2), y = oracle::pauli('y');
    cmat want = 0.5 * angular(15.0) * (oracle::kron_all({i2, y, i2, i2}) + oracle::kron_all({i2, i2, y, i2}));
    for (double t : {0.0, 0.013, 0.5}) CHECK((total(terms, t) - want).norm() <= 1e-10);
}

TEST_CASE("drive Hamiltonian is Hermitian at random times") {
    DrivePulse p;
    p.amplitude = 12.0;
    p.omega = 5300.0;
    p.omega1 = 5100.0;
    p.phase = 0.7;
    p.duration = 0.1;
    p.envelope = [](double s) { return std::sin(std::numbers::pi * s); };
    auto terms = drive_hamiltonian(p, SiteDims{2, 2, 2, 2});
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(0.0, 0.1);
    for (int k = 0; k < 100; ++k) {
        cmat h = total(terms, u(rng));
        CHECK((h - h.adjoint()).norm() <= 1e-12);
    }
}

TEST_CASE("singlet population is untouched by the drive") {
    SpinModelParams m = row6_decoupled();
    const double amp = m.jz[1] / 50;
    DrivePulse p = resonant_pulse(m, amp, 2.0, 0.4);
    cvec start = (control_state_vector(ControlState::closed_1plus) + control_state_vector(ControlState::closed_1minus) +
                  control_state_vector(ControlState::open_0)) /
                 std::sqrt(3.0);
    RabiResult r = rabi_prepare(m, p, start, control_state_vector(ControlState::open_0), NoiseModel::none(), 60);
    double worst = 0.0;
    for (double s : r.singlet_population) worst = std::max(worst, std::abs(s - 1.0 / 3.0));
    CHECK(worst <= 1e-8);
    // The triplet part does move.
    double lo = 1.0, hi = 0.0;
    for (double q : r.probabilities) lo = std::min(lo, q), hi = std::max(hi, q);
    CHECK(hi - lo > 0.3);
}

TEST_CASE("pi pulse on row 6 opens the gate") {
    SpinModelParams m = row6();
    const double amp = std::abs(m.jz[1]) / 50;
    DrivePulse p = resonant_pulse(m, amp);
    CHECK(p.duration == doctest::Approx(std::numbers::pi / (std::sqrt(2.0) * 2 * std::numbers::pi * amp)));
    RabiResult r = rabi_prepare(m, p, control_state_vector(ControlState::closed_1plus),
                                control_state_vector(ControlState::open_0));
    CHECK(r.probability >= 0.99);
}

TEST_CASE("half pulse gives the equal superposition with a quarter phase") {
    SpinModelParams m = row6();
    DrivePulse p = resonant_pulse(m, std::abs(m.jz[1]) / 50, 0.5, -std::numbers::pi / 2);
    RabiResult r = rabi_prepare(m, p, control_state_vector(ControlState::closed_1plus),
                                control_state_vector(ControlState::open_0));
    cvec want = half_pulse_target();
    CHECK(std::abs(want(0)) == doctest::Approx(1 / std::sqrt(2.0)));
    double f = std::real((want.adjoint() * to_drive_frame(r.control_state, p, p.duration) * want)(0, 0));
    CHECK(f >= 0.98);
}

TEST_CASE("off-resonant drive barely transfers") {
    SpinModelParams m = row6();
    const double amp = std::abs(m.jz[1]) / 50;
    DrivePulse p = resonant_pulse(m, amp, 2.0);
    p.omega += 10 * amp;
    RabiResult r = rabi_prepare(m, p, control_state_vector(ControlState::closed_1plus),
                                control_state_vector(ControlState::open_0), NoiseModel::none(), 80);
    for (double q : r.probabilities) CHECK(q <= 0.05);
}

TEST_CASE("collective Rabi frequency is sqrt 2 times A") {
    SpinModelParams m = row6_decoupled();
    const double amp = 10.0;
    DrivePulse p = resonant_pulse(m, amp, 1.6);
    RabiResult r = rabi_prepare(m, p, control_state_vector(ControlState::closed_1plus),
                                control_state_vector(ControlState::open_0), NoiseModel::none(), 400);
    std::size_t k = std::max_element(r.probabilities.begin(), r.probabilities.end()) - r.probabilities.begin();
    // First full transfer at π/Ω_R.
    const double rabi = std::numbers::pi / r.times[k];
    CHECK(std::abs(rabi / (2 * std::numbers::pi * std::sqrt(2.0) * amp) - 1.0) <= 0.05);
    CHECK(rabi_angular_frequency(amp) == doctest::Approx(2 * std::numbers::pi * std::sqrt(2.0) * amp));
    CHECK_THROWS(pi_pulse_duration(0.0));
}

TEST_CASE("superposition phase") {
    CHECK(std::abs(superposition_phase(750, 750, 5000, 0.0) - cplx(1.0)) <= 1e-15);
    // (Ω₂ − 2J₂ᶻ + 2J₂ˣ)·t = 1/2 turns.
    CHECK(std::abs(superposition_phase(100, 300, 1400, 0.5e-3) - cplx(-1.0)) <= 1e-12);
    const TableRow& r = table_row(6);
    const double t = 1e-3;
    const double turns = (1000 * r.omega2 - 2 * r.j2z + 2 * r.j2x) * t;
    const double ang = -2 * std::numbers::pi * turns;
    cplx want(std::cos(ang), std::sin(ang));
    CHECK(std::abs(superposition_phase(r.j2x, r.j2z, 1000 * r.omega2, t) - want) <= 1e-12);
    CHECK(std::abs(std::abs(superposition_phase(r.j2x, r.j2z, 1000 * r.omega2, 0.37)) - 1.0) <= 1e-14);
}

TEST_CASE("leakage check on row 6 and on an isotropic control pair") {
    const TableRow& r = table_row(6);
    const double w2 = 1000 * r.omega2;
    DrivePulse p;
    p.amplitude = r.j2z / 50;
    p.omega = resonance_frequency(w2, r.j2x, r.j2z);
    LeakageReport lk = leakage_avoidance_check(p, {w2, r.j2x, r.j2z});
    CHECK(lk.detuning_open <= 1e-9);
    CHECK_FALSE(lk.leak_flag);
    CHECK(lk.weak_drive);
    CHECK(lk.transition_leak - lk.transition_open == doctest::Approx(4 * (r.j2z - r.j2x)));

    // J₂ˣ = J₂ᶻ puts |1⁺> → |11> on top of the open transition.
    p.omega = resonance_frequency(w2, 750, 750);
    LeakageReport iso = leakage_avoidance_check(p, {w2, 750, 750});
    CHECK(iso.leak_flag);
    p.amplitude = 100.0;
    CHECK_FALSE(leakage_avoidance_check(p, {w2, 750, 750}).weak_drive);
}

TEST_CASE("the flagged collision really populates |11>") {
    SpinModelParams iso = gate_params(0.0, 0.0, 750, 750, DeltaBranch::plus);
    SpinModelParams ok = row6_decoupled();
    auto p11 = [](const SpinModelParams& m) {
        DrivePulse p = resonant_pulse(m, 15.0);
        RabiResult r = rabi_prepare(m, p, control_state_vector(ControlState::closed_1plus),
                                    control_state_vector(ControlState::closed_11), NoiseModel::none(), 50);
        return *std::max_element(r.probabilities.begin(), r.probabilities.end());
    };
    CHECK(p11(iso) > 0.1);
    CHECK(p11(ok) < 1e-3);
}

}
