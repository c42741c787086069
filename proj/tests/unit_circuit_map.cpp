#include "doctest.h"
#include "oracles.hpp"

#include "cswap/circuit_map.hpp"
#include "cswap/spin_model.hpp"

using namespace cswap;

TEST_SUITE("circuit_map") {

TEST_CASE("nodal capacitance matrix") {
    ChainCapacitances c{{10, 20, 30}, {1, 2}};
    Eigen::MatrixXd k = capacitance_matrix(c);
    Eigen::Matrix3d want;
    want << 11, -1, 0, -1, 23, -2, 0, -2, 32;
    CHECK((k - want).norm() == 0.0);
    Eigen::MatrixXd s = capacitance_matrix(c, CapacitanceConvention::shunt_diagonal);
    want << 10, 1, 0, 1, 20, 2, 0, 2, 30;
    CHECK((s - want).norm() == 0.0);
    CHECK_THROWS(capacitance_matrix({{1, 2}, {1, 2}}));
}

TEST_CASE("inverse times matrix is the identity") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> u(20, 1000);
    for (int n = 2; n <= 8; ++n) {
        ChainCapacitances c;
        for (int i = 0; i < n; ++i) c.shunt.push_back(u(rng));
        for (int i = 0; i + 1 < n; ++i) c.coupling.push_back(u(rng) / 10);
        Eigen::MatrixXd k = capacitance_matrix(c);
        CapacitanceInverse inv = inverse_capacitance(k);
        CHECK((inv.inverse * k - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-12);
        CHECK(inv.condition_number >= 1.0);
    }
}

TEST_CASE("uniform chains are singular when N+1 is a multiple of 3") {
    for (int n = 2; n <= 11; ++n) {
        Eigen::MatrixXd k = capacitance_matrix(uniform_chain(n, 1.0, 1.0), CapacitanceConvention::shunt_diagonal);
        if ((n + 1) % 3 == 0) CHECK_THROWS_AS(inverse_capacitance(k), SingularMatrixError);
        else CHECK_NOTHROW(inverse_capacitance(k));
    }
}

TEST_CASE("block-diagonal input gives a block-diagonal inverse") {
    CircuitParams p = table_row(6).circuit;
    Eigen::Matrix4d k = gate_capacitance_matrix(p);
    Eigen::Matrix4d inv = inverse_capacitance(k).inverse;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            bool in_block = (i == j) || (i >= 1 && i <= 2 && j >= 1 && j <= 2);
            if (!in_block) CHECK(std::abs(inv(i, j)) <= 1e-14);
        }
    const double c0 = p.c2 * p.c2 + 2 * p.c23 * p.c2;
    CHECK(inv(0, 0) == doctest::Approx(1 / p.c1).epsilon(1e-12));
    CHECK(inv(1, 1) == doctest::Approx((p.c2 + p.c23) / c0).epsilon(1e-12));
    CHECK(std::abs(inv(1, 2)) == doctest::Approx(p.c23 / c0).epsilon(1e-12));
}

TEST_CASE("published table satisfies the gate identities") {
    for (const TableRow& r : table_s1()) {
        DeltaBranch br = r.delta_plus() ? DeltaBranch::plus : DeltaBranch::minus;
        CHECK(std::abs(r.delta - gate_detuning(r.j2x, r.j2z, br)) <= 0.25);
        CHECK(std::abs(r.j1x - r.j1z) <= std::max(0.1, 0.01 * std::abs(r.j1x)));
    }
    CHECK(table_s1().size() == 16);
    CHECK_THROWS(table_row(0));
    CHECK_THROWS(table_row(17));
}

TEST_CASE("spin map invariants on every row") {
    for (const TableRow& r : table_s1()) {
        SpinMapResult s = circuit_to_spin(r.circuit);
        CHECK(s.j2x == doctest::Approx(s.j2x_tilde + s.j2y));
        CHECK(s.r23x - s.p23x == doctest::Approx(2 * s.m23x));
        CHECK(s.anh1 == doctest::Approx(-0.5 * s.e_j[0] * std::pow(s.t_coeffs[0], 4)));
        CHECK(s.anh_rel_2 == doctest::Approx(s.anh2 / s.omega2));
        CHECK(s.delta == doctest::Approx(1000 * (s.omega2 - s.omega1)));
        for (int i = 0; i < 4; ++i) CHECK(s.t_coeffs[i] > 0.0);
        CHECK((s.k_inverse * gate_capacitance_matrix(r.circuit) - Eigen::Matrix4d::Identity()).norm() <= 1e-12);
    }
}

TEST_CASE("circuit parameters must be positive") {
    CircuitParams p = table_row(6).circuit;
    p.c23 = 0.0;
    CHECK_THROWS(circuit_to_spin(p));
    p = table_row(6).circuit;
    p.e1 = -1.0;
    CHECK_THROWS(p.validate());
    auto a = table_row(6).circuit.as_array();
    CHECK(CircuitParams::from_array(a).as_array() == a);
}

TEST_CASE("drive amplitude") {
    CircuitParams p = table_row(6).circuit;
    const double w = 10.7;
    CHECK(drive_amplitude(p, 0.0, w) == 0.0);
    CHECK(drive_amplitude(p, 2e-3, w) == doctest::Approx(2 * drive_amplitude(p, 1e-3, w)).epsilon(1e-14));
    CHECK_THROWS(drive_amplitude(p, 1e-3, 0.0));

    // Same formula from a hand-built K and its inverse.
    UnitCalibration cal = frozen_calibration();
    Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
    k(0, 0) = k(3, 3) = p.c1;
    k(1, 1) = k(2, 2) = p.c2 + p.c23;
    k(1, 2) = k(2, 1) = -p.c23;
    Eigen::Matrix4d ki = k.inverse();
    const double ec2 = cal.capacitive * ki(1, 1);
    const double ej2 = p.e2 + p.e12 + p.e23;
    const double el2 = cal.inductive * 4 * std::numbers::pi * std::numbers::pi / p.l12;
    const double t2 = std::pow(2 * ec2 / (ej2 + el2), 0.25);
    const double want = -8 * 1e-3 * w * cal.capacitive * (ki(1, 1) + ki(2, 1)) / t2;
    CHECK(drive_amplitude(p, 1e-3, w) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("calibration cost is finite and the frozen constants are a refit minimum") {
    UnitCalibration cal = frozen_calibration();
    double c = calibration_cost({6, 11}, cal);
    CHECK(std::isfinite(c));
    for (double f : {0.9, 1.1}) {
        CHECK(calibration_cost({6, 11}, {cal.capacitive * f, cal.inductive}) >= c);
        CHECK(calibration_cost({6, 11}, {cal.capacitive, cal.inductive * f}) >= c - 1e-9);
    }
}

TEST_CASE("row comparison reports every column") {
    RowComparison c = compare_row(table_row(6));
    CHECK(c.columns.size() == 11);
    CHECK(c.published.size() == c.computed.size());
    for (double t : c.tolerance) CHECK(t > 0.0);
}

}
