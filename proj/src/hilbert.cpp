#include "cswap/hilbert.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace cswap {

SiteDims::SiteDims(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("SiteDims: need at least one site");
    total_ = 1;
    for (int d : dims_) {
        if (d != 2 && d != 3)
            throw DimensionError("SiteDims: local dimension must be 2 or 3, got " + std::to_string(d));
        total_ *= d;
    }
}

int SiteDims::stride(int i) const {
    int s = 1;
    for (int j = size() - 1; j > i; --j) s *= dims_[j];
    return s;
}

std::string SiteDims::str() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < size(); ++i) os << (i ? "," : "") << dims_[i];
    os << ']';
    return os.str();
}

Operator::Operator(SiteDims dims, cmat m) : dims_(std::move(dims)), m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != dims_.total())
        throw DimensionError("Operator: matrix " + std::to_string(m_.rows()) + "x" +
                             std::to_string(m_.cols()) + " does not match dims " + dims_.str());
}

Operator Operator::identity(const SiteDims& dims) {
    return Operator(dims, cmat::Identity(dims.total(), dims.total()));
}

Operator Operator::zero(const SiteDims& dims) {
    return Operator(dims, cmat::Zero(dims.total(), dims.total()));
}

bool Operator::is_hermitian(double tol) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

static void require_same(const SiteDims& a, const SiteDims& b) {
    if (!(a == b)) throw DimensionError("operator dims differ: " + a.str() + " vs " + b.str());
}

Operator Operator::operator+(const Operator& o) const {
    require_same(dims_, o.dims_);
    return Operator(dims_, m_ + o.m_);
}

Operator Operator::operator-(const Operator& o) const {
    require_same(dims_, o.dims_);
    return Operator(dims_, m_ - o.m_);
}

Operator Operator::operator*(const Operator& o) const {
    require_same(dims_, o.dims_);
    return Operator(dims_, m_ * o.m_);
}

Operator& Operator::operator+=(const Operator& o) {
    require_same(dims_, o.dims_);
    m_ += o.m_;
    return *this;
}

DensityMatrix::DensityMatrix(Operator op, double tol) : op_(std::move(op)) {
    if (!op_.is_hermitian(tol)) throw NumericalError("DensityMatrix: not Hermitian");
    const cmat& m = op_.matrix();
    if (std::abs(m.trace() - cplx(1.0)) > tol) throw NumericalError("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) throw NumericalError("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const SiteDims& dims, const cvec& psi) {
    cvec v = psi / psi.norm();
    return DensityMatrix(Operator(dims, v * v.adjoint()));
}

cmat sigma_x() {
    cmat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

cmat sigma_y() {
    cmat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

cmat sigma_z() {
    cmat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

cmat sigma_minus() { return ket_bra(2, 0, 1); }
cmat sigma_plus() { return ket_bra(2, 1, 0); }

cmat ket_bra(int d, int m, int n) {
    if (m < 0 || n < 0 || m >= d || n >= d) throw DimensionError("ket_bra: level out of range");
    cmat k = cmat::Zero(d, d);
    k(m, n) = 1.0;
    return k;
}

cmat lowering(int d) {
    cmat b = cmat::Zero(d, d);
    for (int k = 1; k < d; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
    return b;
}

cvec basis_state(const SiteDims& dims, const std::vector<int>& digits) {
    if (static_cast<int>(digits.size()) != dims.size()) throw DimensionError("basis_state: wrong digit count");
    int k = 0;
    for (int i = 0; i < dims.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= dims[i]) throw DimensionError("basis_state: digit out of range");
        k += digits[i] * dims.stride(i);
    }
    cvec v = cvec::Zero(dims.total());
    v(k) = 1.0;
    return v;
}

cmat kron(const cmat& a, const cmat& b) {
    cmat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

Operator embed_product(const std::vector<std::pair<int, cmat>>& factors, const SiteDims& dims) {
    std::vector<const cmat*> local(dims.size(), nullptr);
    for (const auto& [site, m] : factors) {
        if (site < 0 || site >= dims.size()) throw DimensionError("embed: site index out of range");
        if (m.rows() != dims[site] || m.cols() != dims[site])
            throw DimensionError("embed: local operator is " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + " but site " + std::to_string(site) +
                                 " has dimension " + std::to_string(dims[site]));
        if (local[site]) throw DimensionError("embed: site listed twice");
        local[site] = &m;
    }
    cmat r = cmat::Identity(1, 1);
    for (int i = 0; i < dims.size(); ++i)
        r = kron(r, local[i] ? *local[i] : cmat::Identity(dims[i], dims[i]));
    return Operator(dims, std::move(r));
}

Operator embed_site_operator(const cmat& local, int site, const SiteDims& dims) {
    return embed_product({{site, local}}, dims);
}

SiteDims sub_dims(const SiteDims& dims, const std::vector<int>& keep) {
    std::vector<int> d;
    for (int s : keep) d.push_back(dims[s]);
    return SiteDims(d);
}

cmat partial_trace(const cmat& m, const SiteDims& dims, std::vector<int> keep) {
    if (keep.empty()) throw DimensionError("partial_trace: empty keep set");
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw DimensionError("partial_trace: duplicate site");
    for (int s : keep)
        if (s < 0 || s >= dims.size()) throw DimensionError("partial_trace: invalid site index");
    if (m.rows() != dims.total() || m.cols() != dims.total())
        throw DimensionError("partial_trace: matrix does not match dims");

    std::vector<int> traced;
    for (int i = 0; i < dims.size(); ++i)
        if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);

    SiteDims kd = sub_dims(dims, keep);
    int dk = kd.total();
    int dt = 1;
    for (int s : traced) dt *= dims[s];

    // Flat index of (kept digits a, traced digits t).
    auto flat = [&](int a, int t) {
        int k = 0;
        for (int p = static_cast<int>(keep.size()) - 1; p >= 0; --p) {
            int d = dims[keep[p]];
            k += (a % d) * dims.stride(keep[p]);
            a /= d;
        }
        for (int p = static_cast<int>(traced.size()) - 1; p >= 0; --p) {
            int d = dims[traced[p]];
            k += (t % d) * dims.stride(traced[p]);
            t /= d;
        }
        return k;
    };

    cmat r = cmat::Zero(dk, dk);
    for (int a = 0; a < dk; ++a)
        for (int b = 0; b < dk; ++b) {
            cplx s = 0;
            for (int t = 0; t < dt; ++t) s += m(flat(a, t), flat(b, t));
            r(a, b) = s;
        }
    return r;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    std::vector<int> k = keep;
    std::sort(k.begin(), k.end());
    cmat r = partial_trace(rho.matrix(), rho.dims(), k);
    return DensityMatrix(Operator(sub_dims(rho.dims(), k), std::move(r)));
}

EigenSystem eig_hermitian(const cmat& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionError("eig_hermitian: not square");
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
        throw NumericalError("eig_hermitian: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

EigenSystem eig_hermitian(const Operator& op, double tol) { return eig_hermitian(op.matrix(), tol); }

double commutator_norm(const cmat& a, const cmat& b) { return (a * b - b * a).norm(); }

Operator excitation_number(const SiteDims& dims) {
    cmat n = cmat::Zero(dims.total(), dims.total());
    for (int k = 0; k < dims.total(); ++k) {
        int e = 0;
        for (int i = 0; i < dims.size(); ++i) e += dims.digit(k, i);
        n(k, k) = e;
    }
    return Operator(dims, std::move(n));
}

} // namespace cswap
