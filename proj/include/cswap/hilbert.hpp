#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cswap {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-site local dimensions. Site 0 is the slowest index (leftmost factor).
class SiteDims {
public:
    SiteDims() = default;
    explicit SiteDims(std::vector<int> dims);
    SiteDims(std::initializer_list<int> dims) : SiteDims(std::vector<int>(dims)) {}

    int size() const { return static_cast<int>(dims_.size()); }
    int operator[](int i) const { return dims_.at(i); }
    int total() const { return total_; }
    const std::vector<int>& values() const { return dims_; }

    // Stride of site i in the flat index.
    int stride(int i) const;
    // Local index of site i in flat basis index k.
    int digit(int k, int i) const { return (k / stride(i)) % dims_[i]; }

    bool operator==(const SiteDims& o) const { return dims_ == o.dims_; }
    std::string str() const;

private:
    std::vector<int> dims_;
    int total_ = 1;
};

// Dense operator tagged with its tensor structure.
class Operator {
public:
    Operator() = default;
    Operator(SiteDims dims, cmat m);

    static Operator identity(const SiteDims& dims);
    static Operator zero(const SiteDims& dims);

    const SiteDims& dims() const { return dims_; }
    const cmat& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    bool is_hermitian(double tol = 1e-9) const;
    Operator adjoint() const { return Operator(dims_, m_.adjoint()); }

    Operator operator+(const Operator& o) const;
    Operator operator-(const Operator& o) const;
    Operator operator*(const Operator& o) const;
    Operator operator*(cplx s) const { return Operator(dims_, m_ * s); }
    Operator& operator+=(const Operator& o);

private:
    SiteDims dims_;
    cmat m_;
};

// Operator that passed the Hermitian / unit-trace / positivity checks.
class DensityMatrix {
public:
    explicit DensityMatrix(Operator op, double tol = 1e-9);
    static DensityMatrix pure(const SiteDims& dims, const cvec& psi);

    const Operator& op() const { return op_; }
    const cmat& matrix() const { return op_.matrix(); }
    const SiteDims& dims() const { return op_.dims(); }

private:
    Operator op_;
};

// Local single-site matrices. Basis |0>, |1>, |2>; sigma_z = diag(1, -1).
cmat sigma_x();
cmat sigma_y();
cmat sigma_z();
cmat sigma_minus();   // |0><1|
cmat sigma_plus();    // |1><0|
cmat ket_bra(int d, int m, int n);
cmat lowering(int d); // truncated annihilation operator
cvec basis_state(const SiteDims& dims, const std::vector<int>& digits);

Operator embed_site_operator(const cmat& local, int site, const SiteDims& dims);
// Product of local operators on the listed sites, identity elsewhere.
Operator embed_product(const std::vector<std::pair<int, cmat>>& factors, const SiteDims& dims);
cmat kron(const cmat& a, const cmat& b);

cmat partial_trace(const cmat& m, const SiteDims& dims, std::vector<int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
SiteDims sub_dims(const SiteDims& dims, const std::vector<int>& keep);

struct EigenSystem {
    Eigen::VectorXd values;   // ascending
    cmat vectors;             // columns
};

EigenSystem eig_hermitian(const Operator& op, double tol = 1e-9);
EigenSystem eig_hermitian(const cmat& m, double tol = 1e-9);

double commutator_norm(const cmat& a, const cmat& b);
// Total excitation number, counting local level k as k excitations.
Operator excitation_number(const SiteDims& dims);

} // namespace cswap
