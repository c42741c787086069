#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cswap {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CapacitanceConvention {
    nodal,            // diagonal = shunt + incident couplings, off-diagonal = −C_edge
    shunt_diagonal,   // diagonal = shunt only, off-diagonal = +C_edge
};

struct ChainCapacitances {
    std::vector<double> shunt;      // per node, fF
    std::vector<double> coupling;   // per edge (i, i+1), fF; 0 = absent
};

ChainCapacitances uniform_chain(int n, double shunt, double coupling);

Eigen::MatrixXd capacitance_matrix(const ChainCapacitances& c,
                                   CapacitanceConvention conv = CapacitanceConvention::nodal);

struct CapacitanceInverse {
    Eigen::MatrixXd inverse;
    double condition_number;
};

// Throws SingularMatrixError when |det| / max|K|^n < 1e−12 or cond > 1e12.
CapacitanceInverse inverse_capacitance(const Eigen::MatrixXd& k);

// Energies in 2π·GHz, capacitances in fF, inductance in nH. Mirror symmetry gives the
// remaining nodes: C₄=C₁, C₃=C₂, E₄=E₁, E₃=E₂, E₃,₄=E₁,₂, L₃,₄=L₁,₂.
struct CircuitParams {
    double e1 = 0, e2 = 0, e12 = 0, e23 = 0;
    double c1 = 0, c2 = 0, c23 = 0;
    double l12 = 0;

    void validate() const;
    std::array<double, 8> as_array() const { return {e1, e2, e12, e23, c1, c2, c23, l12}; }
    static CircuitParams from_array(const std::array<double, 8>& a);
    static const std::array<const char*, 8>& names();
};

// Overall prefactors of the charging energy (per 1/fF) and of the inductive energy.
struct UnitCalibration {
    double capacitive = 1.0;
    double inductive = 1.0;
};

// Constants fitted once against two reference rows and then frozen.
UnitCalibration frozen_calibration();

struct SpinMapResult {
    double omega1 = 0, omega2 = 0;                      // 2π·GHz
    double j1x = 0, j1z = 0, j2x = 0, j2y = 0, j2z = 0; // 2π·MHz
    double j2x_tilde = 0;
    double delta = 0;                                   // Ω₂ − Ω₁, 2π·MHz
    double anh1 = 0, anh2 = 0;                          // 2π·GHz
    double anh_rel_1 = 0, anh_rel_2 = 0;
    double k23x = 0, m23x = 0, r23x = 0, p23x = 0;      // 2π·MHz
    std::array<double, 4> t_coeffs{}, s_coeffs{}, e_c{}, e_j{}, e_l{};
    Eigen::Matrix4d k_inverse;
};

Eigen::Matrix4d gate_capacitance_matrix(const CircuitParams& p);

SpinMapResult circuit_to_spin(const CircuitParams& p, const UnitCalibration& cal = frozen_calibration());

// A = −8Ãω((K⁻¹)₂₂ + (K⁻¹)₃₂)/T₂, using the calibrated K⁻¹ scale.
double drive_amplitude(const CircuitParams& p, double a_tilde, double omega_drive,
                       const UnitCalibration& cal = frozen_calibration());

// Published row: circuit inputs and the spin columns derived from them.
struct TableRow {
    int index;
    CircuitParams circuit;
    double omega1, omega2;          // 2π·GHz
    double j1x, j1z, j2x, j2z, delta;
    double anh_rel_1, anh_rel_2;    // percent
    double k23x, m23x;
    bool delta_plus() const { return index <= 8; }
};

const std::vector<TableRow>& table_s1();
const TableRow& table_row(int index);   // 1-based

// Per-column comparison of a mapped row against the published values.
struct RowComparison {
    std::vector<std::string> columns;
    std::vector<double> published, computed, tolerance;
    bool all_within() const;
};

RowComparison compare_row(const TableRow& row, const UnitCalibration& cal = frozen_calibration());

// Least-squares fit of the two prefactors on the given rows (log-relative residuals).
UnitCalibration fit_calibration(const std::vector<int>& rows, const UnitCalibration& start = {});
double calibration_cost(const std::vector<int>& rows, const UnitCalibration& cal);

} // namespace cswap
