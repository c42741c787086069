#include "cswap/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/SVD>
#include <Eigen/Sparse>

namespace cswap {

namespace {

using spmat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplets = std::vector<Eigen::Triplet<cplx>>;

double spectral_norm(const cmat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<cmat> svd(m);
    return svd.singularValues()(0);
}

// Appends c·(B ⊗ A) for column-major vectorization: vec(A X Bᵀ).
void add_kron(Triplets& t, const cmat& b, const cmat& a, cplx c) {
    const Eigen::Index d = a.rows();
    for (Eigen::Index bi = 0; bi < b.rows(); ++bi)
        for (Eigen::Index bj = 0; bj < b.cols(); ++bj) {
            cplx bv = b(bi, bj);
            if (bv == cplx(0)) continue;
            for (Eigen::Index ai = 0; ai < d; ++ai)
                for (Eigen::Index aj = 0; aj < d; ++aj) {
                    cplx av = a(ai, aj);
                    if (av == cplx(0)) continue;
                    t.emplace_back(bi * d + ai, bj * d + aj, c * bv * av);
                }
        }
}

spmat to_sparse(const cmat& m) {
    spmat s = m.sparseView(cplx(0.0), 0.0);
    s.makeCompressed();
    return s;
}

// Dormand–Prince 5(4) with step clamping onto the sample grid.
template <class State, class Rhs, class Out>
void dopri5(Rhs&& f, State y, const std::vector<double>& samples, const IntegratorOptions& opt, double hmax,
            Out&& out) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = 0.0;
    std::size_t next = 0;
    while (next < samples.size() && samples[next] <= 0.0) out(next++, y);
    if (next == samples.size()) return;

    State k1 = f(t, y), k2, k3, k4, k5, k6, k7, yn, err;
    double h = std::min(hmax, samples[next]);
    long steps = 0;
    while (next < samples.size()) {
        if (++steps > opt.max_steps) throw PropagationError("integrator exceeded max_steps", t);
        double target = samples[next];
        bool hit = false;
        if (t + h >= target * (1.0 - 1e-14)) {
            h = target - t;
            hit = true;
        }
        if (h < opt.min_step) throw PropagationError("step size underflow", t);

        k2 = f(t + c2 * h, y + h * (a21 * k1));
        k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = f(t + h, yn);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const auto scale = (opt.atol + opt.rtol * y.cwiseAbs().cwiseMax(yn.cwiseAbs()).array()).eval();
        const double en = std::sqrt((err.cwiseAbs().array() / scale).square().mean());
        if (!std::isfinite(en)) throw PropagationError("non-finite state in integrator", t);

        if (en <= 1.0) {
            t = hit ? target : t + h;
            y.swap(yn);
            k1.swap(k7);
            if (hit) out(next++, y);
        }
        double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (en > 1.0) fac = std::min(fac, 1.0);
        h = std::min(hmax, h * fac);
    }
}

// Vectorized Lindblad generator: dvec(ρ)/dt = (L₀ + Σ c_k(t) L_k) vec(ρ).
struct Liouvillian {
    spmat l0;
    std::vector<spmat> lk;
    std::vector<std::function<cplx(double)>> ck;

    explicit Liouvillian(const Propagation& prop) {
        const cmat& h = prop.hamiltonian.static_part.matrix();
        const Eigen::Index d = h.rows();
        const cmat id = cmat::Identity(d, d);
        auto cops = collapse_operators(prop.hamiltonian.dims(), prop.noise);

        cmat heff = h;
        for (const auto& c : cops) heff -= cplx(0.0, 0.5 * c.rate) * (c.op.adjoint() * c.op);

        Triplets t;
        add_kron(t, id, heff, cplx(0.0, -1.0));
        add_kron(t, heff.conjugate(), id, cplx(0.0, 1.0));
        for (const auto& c : cops) add_kron(t, c.op.conjugate(), c.op, cplx(c.rate));
        l0.resize(d * d, d * d);
        l0.setFromTriplets(t.begin(), t.end());
        l0.makeCompressed();

        for (const auto& term : prop.hamiltonian.terms) {
            Triplets tk;
            add_kron(tk, id, term.op, cplx(0.0, -1.0));
            add_kron(tk, term.op.transpose(), id, cplx(0.0, 1.0));
            spmat s(d * d, d * d);
            s.setFromTriplets(tk.begin(), tk.end());
            s.makeCompressed();
            lk.push_back(std::move(s));
            ck.push_back(term.coefficient);
        }
    }

    cvec operator()(double t, const cvec& y) const {
        cvec r = l0 * y;
        for (std::size_t k = 0; k < lk.size(); ++k) r += ck[k](t) * (lk[k] * y);
        return r;
    }
};

std::vector<cmat> run_lindblad(const Liouvillian& L, const cmat& rho0, const Propagation& prop, double hmax) {
    const Eigen::Index d = rho0.rows();
    std::vector<cmat> out(prop.sample_times.size());
    cvec y = Eigen::Map<const cvec>(rho0.data(), d * d);
    dopri5(L, y, prop.sample_times, prop.options, hmax,
           [&](std::size_t i, const cvec& v) { out[i] = Eigen::Map<const cmat>(v.data(), d, d); });
    return out;
}

} // namespace

double TimeDependentHamiltonian::norm_bound() const {
    double n = spectral_norm(static_part.matrix());
    for (const auto& t : terms) n += std::abs(t.bound) * spectral_norm(t.op);
    return n;
}

void NoiseModel::validate(const SiteDims& dims) const {
    if (dephasing_rate < 0.0 || loss_rate < 0.0) throw std::invalid_argument("noise rates must be >= 0");
    for (int s : sites)
        if (s < 0 || s >= dims.size()) throw DimensionError("noise site index out of range");
}

std::vector<CollapseOperator> collapse_operators(const SiteDims& dims, const NoiseModel& noise) {
    noise.validate(dims);
    std::vector<int> sites = noise.sites;
    if (sites.empty())
        for (int i = 0; i < dims.size(); ++i) sites.push_back(i);
    std::vector<CollapseOperator> ops;
    for (int s : sites) {
        int d = dims[s];
        cmat z = cmat::Zero(d, d);
        for (int k = 0; k < d; ++k) z(k, k) = 1.0 - 2.0 * k;
        if (noise.dephasing_rate > 0.0) ops.push_back({noise.dephasing_rate, embed_site_operator(z, s, dims).matrix()});
        if (noise.loss_rate > 0.0) ops.push_back({noise.loss_rate, embed_site_operator(lowering(d), s, dims).matrix()});
    }
    return ops;
}

void Propagation::validate() const {
    if (t_final < 0.0) throw std::invalid_argument("t_final must be >= 0");
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < 0.0 || sample_times[i] > t_final * (1 + 1e-12))
            throw std::invalid_argument("sample time outside [0, t_final]");
        if (i > 0 && !(sample_times[i] > sample_times[i - 1]))
            throw std::invalid_argument("sample times must be strictly increasing");
    }
    noise.validate(hamiltonian.dims());
    for (const auto& t : hamiltonian.terms)
        if (t.op.rows() != hamiltonian.dims().total() || t.op.cols() != hamiltonian.dims().total())
            throw DimensionError("drive term dimension mismatch");
}

double max_step(const Propagation& prop) {
    double n = prop.hamiltonian.norm_bound();
    double g = std::max(prop.noise.dephasing_rate, prop.noise.loss_rate) * 9.0;
    double s = std::max(n, g);
    double hmax = s > 0.0 ? prop.options.max_step_factor / s : std::max(prop.t_final, 1e-300);
    return std::min(hmax, std::max(prop.t_final, 1e-300));
}

std::vector<cmat> propagate(const cmat& rho0, const Propagation& prop) {
    prop.validate();
    if (rho0.rows() != prop.hamiltonian.dims().total() || rho0.cols() != rho0.rows())
        throw DimensionError("initial operator does not match Hamiltonian dimension");
    Liouvillian L(prop);
    return run_lindblad(L, rho0, prop, max_step(prop));
}

std::vector<std::vector<cmat>> propagate_superoperator(const Propagation& prop, const std::vector<cmat>& basis,
                                                       int threads) {
    prop.validate();
    for (const auto& b : basis)
        if (b.rows() != prop.hamiltonian.dims().total() || b.cols() != b.rows())
            throw DimensionError("basis operator does not match Hamiltonian dimension");
    Liouvillian L(prop);
    const double hmax = max_step(prop);
    std::vector<std::vector<cmat>> out(basis.size());
    int nt = std::max(1, std::min<int>(threads, static_cast<int>(basis.size())));
    if (nt == 1) {
        for (std::size_t i = 0; i < basis.size(); ++i) out[i] = run_lindblad(L, basis[i], prop, hmax);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(nt);
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i; (i = next++) < basis.size();) out[i] = run_lindblad(L, basis[i], prop, hmax);
            } catch (...) {
                errors[w] = std::current_exception();
                next = basis.size();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<cmat> propagate_unitary(const Propagation& prop) {
    prop.validate();
    if (!prop.noise.is_zero()) throw std::invalid_argument("propagate_unitary needs zero noise");
    const Eigen::Index d = prop.hamiltonian.dims().total();
    spmat h0 = to_sparse(cplx(0.0, -1.0) * prop.hamiltonian.static_part.matrix());
    std::vector<spmat> hk;
    for (const auto& t : prop.hamiltonian.terms) hk.push_back(to_sparse(cplx(0.0, -1.0) * t.op));
    auto f = [&](double t, const cmat& u) -> cmat {
        cmat r = h0 * u;
        for (std::size_t k = 0; k < hk.size(); ++k) r += prop.hamiltonian.terms[k].coefficient(t) * (hk[k] * u);
        return r;
    };
    std::vector<cmat> out(prop.sample_times.size());
    dopri5(f, cmat(cmat::Identity(d, d)), prop.sample_times, prop.options, max_step(prop),
           [&](std::size_t i, const cmat& u) { out[i] = u; });
    return out;
}

} // namespace cswap
