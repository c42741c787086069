#include "cswap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cswap {

TargetGate target_gate(GateKind kind) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    if (kind != GateKind::closed) {
        double s = kind == GateKind::open_plus ? -1.0 : 1.0;
        m.setZero();
        m(0, 0) = 1.0;
        m(1, 2) = s;
        m(2, 1) = s;
        m(3, 3) = cplx(0.0, 1.0);
    }
    return {kind, m};
}

GateKind target_kind(const GateConfig& cfg) {
    if (cfg.control != ControlState::open_0) return GateKind::closed;
    return cfg.branch == DeltaBranch::plus ? GateKind::open_plus : GateKind::open_minus;
}

std::array<cmat, 16> pauli_basis_2q() {
    const cmat id = cmat::Identity(2, 2), x = sigma_x(), z = sigma_z();
    std::array<cmat, 16> b;
    int idx = 0;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            for (int m = 0; m < 2; ++m)
                for (int n = 0; n < 2; ++n) {
                    cmat a = (k ? x : id) * (l ? z : id);
                    cmat c = (m ? x : id) * (n ? z : id);
                    b[idx++] = kron(a, c);
                }
    return b;
}

double average_fidelity_from_images(const cmat& target, const std::array<cmat, 16>& images) {
    if (target.rows() != 4 || target.cols() != 4) throw DimensionError("target gate must be 4x4");
    const auto basis = pauli_basis_2q();
    cplx s = 0.0;
    for (int j = 0; j < 16; ++j) s += (target * basis[j].adjoint() * target.adjoint() * images[j]).trace();
    return 0.2 + s.real() / 80.0;
}

double average_fidelity_of_channel(const cmat& target, const std::function<cmat(const cmat&)>& channel) {
    const auto basis = pauli_basis_2q();
    std::array<cmat, 16> img;
    for (int j = 0; j < 16; ++j) img[j] = channel(basis[j]);
    return average_fidelity_from_images(target, img);
}

GateLayout GateLayout::chain(int n_sites) {
    GateLayout g;
    g.targets = {0, n_sites - 1};
    for (int i = 1; i < n_sites - 1; ++i) g.controls.push_back(i);
    return g;
}

cvec lift_control_state(const cvec& q, const SiteDims& dims, const GateLayout& layout) {
    int nc = static_cast<int>(layout.controls.size());
    if (q.size() != (1 << nc)) throw DimensionError("control state must live on the qubit control space");
    int dc = 1;
    for (int s : layout.controls) dc *= dims[s];
    cvec v = cvec::Zero(dc);
    for (int k = 0; k < q.size(); ++k) {
        int idx = 0;
        for (int p = 0; p < nc; ++p) {
            int bit = (k >> (nc - 1 - p)) & 1;
            idx = idx * dims[layout.controls[p]] + bit;
        }
        v(idx) = q(k);
    }
    return v;
}

namespace {

// U on the targets tensored with P on the controls, in the full space.
cmat embed_gate_input(const cmat& u, const cmat& pc, const SiteDims& dims, const GateLayout& g) {
    const int D = dims.total();
    std::vector<int> ti(D), ci(D);
    for (int k = 0; k < D; ++k) {
        int t = 0, c = 0;
        for (int s : g.targets) t = t * 2 + dims.digit(k, s);
        for (int s : g.controls) c = c * dims[s] + dims.digit(k, s);
        ti[k] = t;
        ci[k] = c;
    }
    cmat x = cmat::Zero(D, D);
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) {
            cplx pv = pc(ci[a], ci[b]);
            if (pv != cplx(0)) x(a, b) = u(ti[a], ti[b]) * pv;
        }
    return x;
}

void check_state(const cmat& rho, InvariantStats& st) {
    st.max_trace_error = std::max(st.max_trace_error, std::abs(rho.trace() - cplx(1.0)));
    st.max_hermiticity_error = std::max(st.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    st.min_eigenvalue = std::min(st.min_eigenvalue, es.eigenvalues().minCoeff());
    ++st.states_checked;
}

} // namespace

FidelityTrace average_fidelity(const TimeDependentHamiltonian& h, const GateLayout& layout, const cvec& control_state,
                               const cmat& target, const NoiseModel& noise, const std::vector<double>& times,
                               const FidelityOptions& opts) {
    const SiteDims& dims = h.dims();
    for (int s : layout.targets)
        if (dims[s] != 2) throw DimensionError("target sites must be qubits");
    if (layout.targets.size() != 2) throw DimensionError("two target sites expected");
    if (times.empty()) throw std::invalid_argument("empty time grid");

    cvec c = control_state / control_state.norm();
    cmat pc = c * c.adjoint();
    const auto basis = pauli_basis_2q();
    std::vector<cmat> inputs;
    for (const auto& b : basis) inputs.push_back(embed_gate_input(b, pc, dims, layout));

    Propagation prop;
    prop.hamiltonian = h;
    prop.noise = noise;
    prop.t_final = times.back();
    prop.sample_times = times;
    prop.options = opts.integrator;

    std::vector<std::vector<cmat>> evolved(16, std::vector<cmat>(times.size()));
    if (noise.is_zero() && !opts.force_lindblad) {
        auto us = propagate_unitary(prop);
        for (std::size_t i = 0; i < times.size(); ++i)
            for (int j = 0; j < 16; ++j) evolved[j][i] = us[i] * inputs[j] * us[i].adjoint();
    } else {
        evolved = propagate_superoperator(prop, inputs, opts.threads);
    }

    std::array<bool, 16> hermitian;
    for (int j = 0; j < 16; ++j) hermitian[j] = (basis[j] - basis[j].adjoint()).norm() < 1e-12;

    std::vector<int> keep = layout.targets;
    std::sort(keep.begin(), keep.end());
    FidelityTrace tr;
    tr.times = times;
    tr.fbar.resize(times.size());
    tr.invariants.min_eigenvalue = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::array<cmat, 16> img;
        for (int j = 0; j < 16; ++j) img[j] = partial_trace(evolved[j][i], dims, keep);
        tr.fbar[i] = average_fidelity_from_images(target, img);
        if (opts.check_invariants) {
            // (I + P_j)/4 ⊗ P_C is a state whenever P_j is a Hermitian Pauli; basis
            // elements are either Hermitian or anti-Hermitian.
            check_state(evolved[0][i] / 4.0, tr.invariants);
            for (int j = 1; j < 16; ++j) {
                cplx ph = hermitian[j] ? cplx(1.0) : cplx(0.0, 1.0);
                check_state((evolved[0][i] + ph * evolved[j][i]) / 4.0, tr.invariants);
            }
        }
    }
    locate_peak(tr);
    return tr;
}

FidelityTrace average_fidelity(const SpinModelParams& model, const GateConfig& cfg, const NoiseModel& noise,
                               const std::vector<double>& times, const FidelityOptions& opts) {
    TimeDependentHamiltonian h(build_interaction_hamiltonian(model, true));
    GateLayout g = GateLayout::chain(model.n_sites);
    cvec c = control_state_vector(cfg.control, static_cast<int>(g.controls.size()), cfg.custom);
    return average_fidelity(h, g, c, target_gate(target_kind(cfg)).matrix, noise, times, opts);
}

void locate_peak(FidelityTrace& tr) {
    const auto& f = tr.fbar;
    const auto& t = tr.times;
    if (f.empty()) throw std::invalid_argument("empty trace");
    std::size_t i = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
    tr.peak_index = i;
    tr.peak_value = f[i];
    tr.peak_time = t[i];
    tr.at_boundary = (i == 0 || i + 1 == f.size());
    if (tr.at_boundary) return;
    // Parabola through the three samples around the maximum.
    double x0 = t[i - 1], x1 = t[i], x2 = t[i + 1];
    double y0 = f[i - 1], y1 = f[i], y2 = f[i + 1];
    double d0 = (y1 - y0) / (x1 - x0), d1 = (y2 - y1) / (x2 - x1);
    double a = (d1 - d0) / (x2 - x0);
    if (a < 0.0) {
        // Vertex of y = y0 + d0 (x − x0) + a (x − x0)(x − x1).
        double xm = 0.5 * (x0 + x1) - d0 / (2.0 * a);
        tr.peak_time = std::clamp(xm, x0, x2);
    }
}

GateTime numerical_gate_time(const FidelityTrace& tr) {
    FidelityTrace c = tr;
    locate_peak(c);
    return {c.peak_time, c.peak_value, c.at_boundary};
}

EntanglementPower entanglement_power(const Eigen::Matrix4cd& u, long n_samples, std::uint64_t seed) {
    if ((u * u.adjoint() - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("entanglement_power: input is not unitary");
    if (n_samples < 2) throw std::invalid_argument("entanglement_power: need at least two samples");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    auto haar = [&] {
        Eigen::Vector2cd v(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)));
        return Eigen::Vector2cd(v / v.norm());
    };
    double sum = 0.0, sum2 = 0.0;
    for (long s = 0; s < n_samples; ++s) {
        Eigen::Vector2cd a = haar(), b = haar();
        Eigen::Vector4cd psi(a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1));
        Eigen::Vector4cd phi = u * psi;
        Eigen::Matrix2cd m;
        m << phi(0), phi(1), phi(2), phi(3);
        Eigen::Matrix2cd rho = m * m.adjoint();
        double e = 1.0 - (rho * rho).trace().real();
        sum += e;
        sum2 += e * e;
    }
    double n = static_cast<double>(n_samples);
    double mean = sum / n;
    double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), n_samples};
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("linspace: n must be >= 1");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = b;
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

} // namespace cswap
