#include "cswap/spin_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cswap {

namespace {

constexpr double pi = std::numbers::pi;

cmat z3() {
    cmat z = cmat::Zero(3, 3);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    z(2, 2) = -3.0;
    return z;
}

cmat kb3(int m, int n) { return ket_bra(3, m, n); }
cmat kb2(int m, int n) { return ket_bra(2, m, n); }

double rel_diff(double a, double b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Distance of x to the nearest integer of the given parity.
double parity_distance(double x, bool odd) {
    double n = odd ? 2.0 * std::round((x - 1.0) / 2.0) + 1.0 : 2.0 * std::round(x / 2.0);
    return std::abs(x - n);
}

// Normalized eigenvector of [[a, c], [c, d]] for eigenvalue e.
Eigen::Vector2d block_vector(double a, double c, double d, double e) {
    Eigen::Vector2d u(c, e - a), w(e - d, c);
    Eigen::Vector2d v = u.norm() >= w.norm() ? u : w;
    if (v.norm() == 0.0) v = Eigen::Vector2d(1.0, 0.0);
    return v.normalized();
}

} // namespace

std::string to_string(DeltaBranch b) { return b == DeltaBranch::plus ? "plus" : "minus"; }

std::string to_string(ControlState c) {
    switch (c) {
    case ControlState::open_0: return "open_0";
    case ControlState::closed_1plus: return "closed_1plus";
    case ControlState::closed_1minus: return "closed_1minus";
    case ControlState::closed_11: return "closed_11";
    case ControlState::custom: return "custom";
    }
    return "?";
}

DeltaBranch parse_branch(const std::string& s) {
    if (s == "plus" || s == "+") return DeltaBranch::plus;
    if (s == "minus" || s == "-") return DeltaBranch::minus;
    throw std::invalid_argument("unknown detuning branch '" + s + "'");
}

ControlState parse_control(const std::string& s) {
    if (s == "open_0") return ControlState::open_0;
    if (s == "closed_1plus") return ControlState::closed_1plus;
    if (s == "closed_1minus") return ControlState::closed_1minus;
    if (s == "closed_11") return ControlState::closed_11;
    if (s == "custom") return ControlState::custom;
    throw std::invalid_argument("unknown control state '" + s + "'");
}

void SpinModelParams::validate() const {
    if (n_sites < 2) throw std::invalid_argument("SpinModelParams: n_sites must be >= 2");
    if (static_cast<int>(detuning.size()) != n_sites)
        throw std::invalid_argument("SpinModelParams: detuning needs n_sites entries");
    if (static_cast<int>(jx.size()) != n_sites - 1 || static_cast<int>(jz.size()) != n_sites - 1)
        throw std::invalid_argument("SpinModelParams: jx/jz need n_sites-1 entries");
    if (!omega.empty() && static_cast<int>(omega.size()) != n_sites)
        throw std::invalid_argument("SpinModelParams: omega needs n_sites entries when given");
}

bool SpinModelParams::is_symmetric(double tol) const {
    int n = n_sites;
    for (int j = 0; j < n; ++j)
        if (std::abs(detuning[j] - detuning[n - 1 - j]) > tol) return false;
    for (int j = 0; j < n - 1; ++j) {
        if (std::abs(jx[j] - jx[n - 2 - j]) > tol) return false;
        if (std::abs(jz[j] - jz[n - 2 - j]) > tol) return false;
    }
    return true;
}

double gate_detuning(double j2x, double j2z, DeltaBranch branch) {
    return branch == DeltaBranch::plus ? 2.0 * (j2z + j2x) : 2.0 * (j2z - j2x);
}

SpinModelParams gate_params(double j1x, double j1z, double j2x, double j2z, double delta,
                            double target_offset) {
    SpinModelParams p;
    p.n_sites = 4;
    p.detuning = {target_offset, delta, delta, target_offset};
    p.jx = {j1x, j2x, j1x};
    p.jz = {j1z, j2z, j1z};
    return p;
}

SpinModelParams gate_params(double j1x, double j1z, double j2x, double j2z, DeltaBranch branch) {
    return gate_params(j1x, j1z, j2x, j2z, gate_detuning(j2x, j2z, branch));
}

cvec control_state_vector(ControlState c, int n_controls, const cvec& custom) {
    int d = 1 << n_controls;
    cvec v = cvec::Zero(d);
    switch (c) {
    case ControlState::open_0:
        v(0) = 1.0;
        return v;
    case ControlState::custom:
        if (custom.size() != d) throw DimensionError("custom control state has wrong dimension");
        if (custom.norm() == 0.0) throw std::invalid_argument("custom control state is zero");
        return custom / custom.norm();
    default: break;
    }
    if (n_controls != 2) throw std::invalid_argument("closed control states are defined for two controls");
    const double s = std::numbers::sqrt2 / 2.0;
    // Index 1 = |01>, index 2 = |10>.
    if (c == ControlState::closed_1plus) v(2) = s, v(1) = s;
    else if (c == ControlState::closed_1minus) v(2) = s, v(1) = -s;
    else v(3) = 1.0;
    return v;
}

std::vector<std::string> check_gate_regime(const SpinModelParams& p, double ratio_threshold, double rel_tol) {
    p.validate();
    std::vector<std::string> w;
    if (!p.is_symmetric(1e-9)) w.push_back("chain is not spatially symmetric");
    if (p.n_sites < 4) return w;
    double j1 = std::max(std::abs(p.jx[0]), std::abs(p.jz[0]));
    double j2 = std::max(std::abs(p.jx[1]), std::abs(p.jz[1]));
    if (j1 > 0 && j2 / j1 < ratio_threshold)
        w.push_back("|J2/J1| = " + std::to_string(j2 / j1) + " below threshold " + std::to_string(ratio_threshold));
    if (rel_diff(p.jx[0], p.jz[0]) > rel_tol) w.push_back("J1x != J1z");
    return w;
}

Operator build_interaction_hamiltonian(const SpinModelParams& p, bool gate_mode) {
    p.validate();
    if (gate_mode) {
        if (p.n_sites != 4 && p.n_sites != 5)
            throw std::invalid_argument("gate mode needs 4 or 5 sites");
        if (!p.is_symmetric(1e-9)) throw std::invalid_argument("gate mode needs a spatially symmetric chain");
    }
    SiteDims dims(std::vector<int>(p.n_sites, 2));
    int D = dims.total();
    cmat h = cmat::Zero(D, D);
    // Diagonal part from z digits, hopping from single flips.
    for (int k = 0; k < D; ++k) {
        double e = 0.0;
        for (int j = 0; j < p.n_sites; ++j) {
            double zj = dims.digit(k, j) == 0 ? 1.0 : -1.0;
            e += -0.5 * p.detuning[j] * zj;
            if (j + 1 < p.n_sites) {
                double zk = dims.digit(k, j + 1) == 0 ? 1.0 : -1.0;
                e += p.jz[j] * zj * zk;
            }
        }
        h(k, k) = e;
        for (int j = 0; j + 1 < p.n_sites; ++j) {
            int a = dims.digit(k, j), b = dims.digit(k, j + 1);
            if (a != b) {
                int k2 = k + (b - a) * dims.stride(j) + (a - b) * dims.stride(j + 1);
                h(k2, k) += 2.0 * p.jx[j];
            }
        }
    }
    return Operator(dims, two_pi * h);
}

Eigen::MatrixXd single_excitation_block(const SpinModelParams& p) {
    Operator h = build_interaction_hamiltonian(p, false);
    const SiteDims& dims = h.dims();
    int n = p.n_sites;
    std::vector<int> idx;
    for (int s = 0; s < n; ++s) {
        std::vector<int> digits(n, 0);
        digits[s] = 1;
        int k = 0;
        for (int i = 0; i < n; ++i) k += digits[i] * dims.stride(i);
        idx.push_back(k);
    }
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = h.matrix()(idx[i], idx[j]).real() / two_pi;
    return b;
}

SingleExcitationSpectrum analytic_single_excitation_spectrum(const SpinModelParams& p) {
    p.validate();
    if (p.n_sites != 4) throw std::invalid_argument("closed-form spectrum needs N=4");
    const double J1 = p.jx[0], J2x = p.jx[1], J2z = p.jz[1], D = p.detuning[1];
    const double r13 = std::sqrt(4 * J1 * J1 + std::pow(0.5 * D - J2x - J2z, 2));
    const double r24 = std::sqrt(4 * J1 * J1 + std::pow(0.5 * D + J2x - J2z, 2));
    SingleExcitationSpectrum s;
    s.energies = {-J2x - 0.5 * D - r13, J2x - 0.5 * D - r24, -J2x - 0.5 * D + r13, J2x - 0.5 * D + r24};

    // E₁, E₃ live in the antisymmetric sector, E₂, E₄ in the symmetric one.
    const double a = -D + J2z, c = 2 * J1;
    const double d_anti = -J2z - 2 * J2x, d_sym = -J2z + 2 * J2x;
    for (int k = 0; k < 4; ++k) {
        bool sym = (k % 2 == 1);
        Eigen::Vector2d v = block_vector(a, c, sym ? d_sym : d_anti, s.energies[k]);
        double sg = sym ? 1.0 : -1.0;
        s.vectors[k] = Eigen::Vector4d(v(0), v(1), sg * v(1), sg * v(0)) / std::numbers::sqrt2;
    }
    return s;
}

std::array<ClosedStateCheck, 2> closed_state_eigencheck(const SpinModelParams& p) {
    p.validate();
    if (p.n_sites != 4) throw std::invalid_argument("closed-state check needs N=4");
    Operator h = build_interaction_hamiltonian(p, false);
    const SiteDims& dims = h.dims();
    const double J2x = p.jx[1], J2z = p.jz[1];
    std::array<ClosedStateCheck, 2> out;
    for (int i = 0; i < 2; ++i) {
        double theta = i == 0 ? pi / 4 : -pi / 4;
        double b = (i == 0 ? 2.0 : -2.0) * J2x - J2z;
        cvec psi1 = std::cos(theta) * basis_state(dims, {0, 1, 0, 0}) + std::sin(theta) * basis_state(dims, {0, 0, 1, 0});
        cvec psi2 = std::cos(theta) * basis_state(dims, {1, 1, 0, 0}) + std::sin(theta) * basis_state(dims, {1, 0, 1, 0});
        cmat hb = h.matrix() / two_pi;
        out[i] = {theta, b, (hb * psi1 - b * psi1).norm(), (hb * psi2 - b * psi2).norm()};
    }
    return out;
}

double analytic_gate_time(double j1) {
    if (j1 == 0.0) throw std::invalid_argument("gate time undefined for J1 = 0");
    return pi / std::abs(2.0 * angular(j1));
}

double analytic_gate_time(const SpinModelParams& p) {
    p.validate();
    return analytic_gate_time(p.jx.at(0));
}

TransferConditions perfect_transfer_conditions(const SpinModelParams& p) {
    p.validate();
    TransferConditions r;
    r.level_residuals.fill(0.0);
    r.spacing_residuals.fill(0.0);
    if (p.n_sites != 4) throw std::invalid_argument("transfer conditions need N=4");
    if (p.jx[0] == 0.0) {
        r.degenerate = true;
        return r;
    }
    const double J1x = p.jx[0], J1z = p.jz[0], J2x = p.jx[1], J2z = p.jz[1], D = p.detuning[1];
    r.t_f = analytic_gate_time(J1x);
    auto spec = analytic_single_excitation_spectrum(p);
    auto phase = [&](double e) { return angular(e) * r.t_f / pi; };  // in units of π

    for (int k = 0; k < 4; ++k) r.level_residuals[k] = parity_distance(phase(spec.energies[k]), k % 2 == 0);

    std::array<double, 4> sorted = spec.energies;
    std::sort(sorted.begin(), sorted.end());
    int lo = (sorted[2] - sorted[0] <= sorted[3] - sorted[1]) ? 0 : 1;
    r.spacing_residuals[0] = parity_distance(phase(sorted[lo + 1] - sorted[lo]), true);
    r.spacing_residuals[1] = parity_distance(phase(sorted[lo + 2] - sorted[lo + 1]), true);

    bool plus = std::abs(D - gate_detuning(J2x, J2z, DeltaBranch::plus)) <=
                std::abs(D - gate_detuning(J2x, J2z, DeltaBranch::minus));
    double e_res = plus ? spec.energies[0] : spec.energies[1];
    double e0 = -D + J2z + 2 * J1z;
    r.superposition_residual = std::abs(angular(std::abs(e_res - e0)) * r.t_f - 2 * pi);
    return r;
}

N5Branch parse_n5_branch(const std::string& s) {
    if (s == "e0") return N5Branch::e0;
    if (s == "eplus") return N5Branch::eplus;
    if (s == "eminus") return N5Branch::eminus;
    throw std::invalid_argument("unknown N=5 branch '" + s + "'");
}

double n5_detuning(double j1z, double j2x, double j2z, double delta3, N5Branch branch) {
    if (branch == N5Branch::e0) return 2.0 * j2z;
    // Target level −Δ − Δ₃/2 + 2J₂ᶻ meets a root of the symmetric control block.
    double den = delta3 + 2.0 * j1z - 4.0 * j2z;
    if (den == 0.0) throw std::invalid_argument("N=5 resonance denominator vanishes");
    bool upper = den < 0.0;
    if (upper != (branch == N5Branch::eplus))
        throw std::invalid_argument("N=5: Δ3 selects the other resonant branch");
    return 2.0 * j2z + 8.0 * j2x * j2x / den;
}

SpinModelParams build_n5_model(double j1x, double j1z, double j2x, double j2z, double delta3, N5Branch branch) {
    double d = n5_detuning(j1z, j2x, j2z, delta3, branch);
    SpinModelParams p;
    p.n_sites = 5;
    p.detuning = {0.0, d, delta3, d, 0.0};
    p.jx = {j1x, j2x, j2x, j1x};
    p.jz = {j1z, j2z, j2z, j1z};
    return p;
}

std::array<double, 5> n5_single_excitation_energies(const SpinModelParams& p) {
    p.validate();
    if (p.n_sites != 5) throw std::invalid_argument("needs N=5");
    const double J1z = p.jz[0], J2x = p.jx[1], J2z = p.jz[1], D = p.detuning[1], D3 = p.detuning[2];
    const double e_target = -D - 0.5 * D3 + 2 * J2z;
    const double a = -0.5 * D3;
    const double b = -D + 0.5 * D3 + 2 * J1z - 2 * J2z;
    const double r = std::sqrt(std::pow(0.5 * (a - b), 2) + 8 * J2x * J2x);
    std::array<double, 5> e = {e_target, e_target, a, 0.5 * (a + b) - r, 0.5 * (a + b) + r};
    std::sort(e.begin(), e.end());
    return e;
}

Operator add_crosstalk(const SpinModelParams& p, double j_nn, double j_nnn) {
    Operator h = build_interaction_hamiltonian(p, true);
    if (p.n_sites != 4) throw std::invalid_argument("cross talk model needs N=4");
    const SiteDims& dims = h.dims();
    auto xy = [&](int i, int j, double J) {
        return (embed_product({{i, sigma_x()}, {j, sigma_x()}}, dims) +
                embed_product({{i, sigma_y()}, {j, sigma_y()}}, dims)) * cplx(angular(J));
    };
    if (j_nn != 0.0) h += xy(0, 2, j_nn) + xy(1, 3, j_nn);
    if (j_nnn != 0.0) h += xy(0, 3, j_nnn);
    return h;
}

void QutritModelParams::validate() const {
    double scale = std::max({1.0, std::abs(j2y), std::abs(k23x), std::abs(m23x)});
    if (r23x && std::abs(*r23x - (j2y + k23x + 4.0 * m23x)) > 1e-9 * scale)
        throw std::invalid_argument("qutrit model: R must equal J2y + K + 4M");
    if (p23x && std::abs(*p23x - (j2y + k23x + 2.0 * m23x)) > 1e-9 * scale)
        throw std::invalid_argument("qutrit model: P must equal J2y + K + 2M");
}

TimeDependentHamiltonian build_qutrit_hamiltonian(const QutritModelParams& q) {
    q.validate();
    SiteDims dims{2, 3, 3, 2};
    auto E = [&](std::vector<std::pair<int, cmat>> f) { return embed_product(f, dims); };
    const cmat Z = z3(), sz = sigma_z();
    const cmat n01 = kb3(0, 0) - kb3(1, 1);

    Operator h = Operator::zero(dims);
    auto add = [&](const Operator& o, double c) { h += o * cplx(c); };

    add(E({{1, n01}}) + E({{2, n01}}), -0.5 * q.delta);
    add(E({{0, kb2(0, 1)}, {1, kb3(1, 0)}}) + E({{0, kb2(1, 0)}, {1, kb3(0, 1)}}), 2 * q.j1x);
    add(E({{0, sz}, {1, Z}}), q.j1z);
    add(E({{1, Z}, {2, Z}}), q.j2z);
    add(E({{1, kb3(2, 0)}, {2, kb3(0, 2)}}) + E({{1, kb3(0, 2)}, {2, kb3(2, 0)}}), 2 * q.j2z);
    add(E({{1, kb3(0, 1)}, {2, kb3(1, 0)}}) + E({{1, kb3(1, 0)}, {2, kb3(0, 1)}}), 2 * q.j2x);
    add(E({{1, kb3(2, 1)}, {2, kb3(1, 2)}}) + E({{1, kb3(1, 2)}, {2, kb3(2, 1)}}), 4 * q.r());
    add(E({{3, kb2(0, 1)}, {2, kb3(1, 0)}}) + E({{3, kb2(1, 0)}, {2, kb3(0, 1)}}), 2 * q.j1x);
    add(E({{3, sz}, {2, Z}}), q.j1z);

    TimeDependentHamiltonian H(h * cplx(two_pi));
    const double w = angular(q.omega2 - q.omega2p);
    const double amp = angular(2.0 * std::numbers::sqrt2 * q.p());
    if (amp != 0.0) {
        cmat up = (E({{1, kb3(2, 1)}, {2, kb3(0, 1)}}) + E({{1, kb3(0, 1)}, {2, kb3(2, 1)}})).matrix() * amp;
        H.terms.push_back({[w](double t) { return std::exp(cplx(0.0, w * t)); }, up, 1.0});
        H.terms.push_back({[w](double t) { return std::exp(cplx(0.0, -w * t)); }, cmat(up.adjoint()), 1.0});
    }
    return H;
}

cmat embed_qubit_operator_in_qutrit(const cmat& m) {
    if (m.rows() != 16 || m.cols() != 16) throw DimensionError("expected a 16x16 qubit operator");
    SiteDims qd{2, 2, 2, 2}, td{2, 3, 3, 2};
    std::vector<int> map(16);
    for (int k = 0; k < 16; ++k) {
        int idx = 0;
        for (int i = 0; i < 4; ++i) idx += qd.digit(k, i) * td.stride(i);
        map[k] = idx;
    }
    cmat r = cmat::Zero(36, 36);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) r(map[i], map[j]) = m(i, j);
    return r;
}

} // namespace cswap
