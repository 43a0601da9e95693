#include "rwc/operators.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace rwc {

namespace {

void require_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
}

void require_finite(const Matrix& a, const char* what) {
    if (!a.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

} // namespace

// ---- HermitianOperator ----

HermitianOperator::HermitianOperator(const Matrix& a, double tol) {
    require_square(a, "HermitianOperator");
    require_finite(a, "HermitianOperator");
    const double scale = a.norm();
    const double defect = (a - a.adjoint()).norm();
    if (defect > tol * std::max(scale, 1e-300) && defect > 0.0)
        throw ValidationError("HermitianOperator: Hermiticity defect " + std::to_string(defect) +
                              " exceeds tolerance");
    m_ = 0.5 * (a + a.adjoint());
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
    return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
    return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
    return HermitianOperator(m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
    return HermitianOperator(m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double x) const { return HermitianOperator(m_ * x); }

// ---- DensityMatrix ----

DensityMatrix::DensityMatrix(const Matrix& rho, double trace_tol, double herm_tol, double eig_tol) {
    require_square(rho, "DensityMatrix");
    require_finite(rho, "DensityMatrix");
    const double defect = (rho - rho.adjoint()).norm();
    if (defect > herm_tol) throw ValidationError("DensityMatrix: not Hermitian");
    Matrix h = 0.5 * (rho + rho.adjoint());
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
    if (min_eigenvalue(h) < -eig_tol) throw ValidationError("DensityMatrix: negative eigenvalue");
    m_ = std::move(h);
}

// ---- Superoperator ----

Superoperator::Superoperator(Matrix m) : m_(std::move(m)) {
    require_square(m_, "Superoperator");
    const auto n = m_.rows();
    dim_ = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (dim_ * dim_ != n) throw ValidationError("Superoperator: size is not a perfect square");
}

Superoperator Superoperator::zero(Eigen::Index dim) {
    return Superoperator(Matrix::Zero(dim * dim, dim * dim));
}

Superoperator Superoperator::identity(Eigen::Index dim) {
    return Superoperator(Matrix::Identity(dim * dim, dim * dim));
}

Superoperator Superoperator::left(const Matrix& a) {
    return Superoperator(kron(Matrix::Identity(a.rows(), a.rows()), a));
}

Superoperator Superoperator::right(const Matrix& b) {
    return Superoperator(kron(b.transpose(), Matrix::Identity(b.rows(), b.rows())));
}

Superoperator Superoperator::sandwich(const Matrix& a, const Matrix& b) {
    return Superoperator(kron(b.transpose(), a));
}

Superoperator Superoperator::commutator(const Matrix& h) {
    const Matrix id = Matrix::Identity(h.rows(), h.rows());
    return Superoperator(-I1 * (kron(id, h) - kron(h.transpose(), id)));
}

Matrix Superoperator::apply(const Matrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_)
        throw ValidationError("Superoperator::apply: dimension mismatch");
    return unvec(m_ * vec(x), dim_);
}

Superoperator Superoperator::operator+(const Superoperator& o) const { return Superoperator(m_ + o.m_); }
Superoperator Superoperator::operator-(const Superoperator& o) const { return Superoperator(m_ - o.m_); }
Superoperator Superoperator::operator*(const Superoperator& o) const { return Superoperator(m_ * o.m_); }
Superoperator Superoperator::operator*(cplx x) const { return Superoperator(m_ * x); }

Superoperator& Superoperator::operator+=(const Superoperator& o) {
    if (dim_ == 0) {
        *this = o;
    } else {
        m_ += o.m_;
    }
    return *this;
}

Superoperator Superoperator::exp() const { return Superoperator(matrix_exponential(m_)); }

// ---- free functions ----

Vector vec(const Matrix& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

Matrix unvec(const Vector& v, Eigen::Index dim) {
    if (v.size() != dim * dim) throw ValidationError("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

DensityMatrix gibbs_state(const Matrix& h, double beta) {
    require_square(h, "gibbs_state");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ValidationError("gibbs_state: beta must be finite and positive");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
    const RealVector& e = es.eigenvalues();
    RealVector w = (-beta * (e.array() - e.minCoeff())).exp();
    w /= w.sum();
    Matrix rho = es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return DensityMatrix(rho, 1e-13);
}

Matrix matrix_exponential(const Matrix& a) {
    require_square(a, "matrix_exponential");
    if (!a.allFinite()) throw ValidationError("matrix_exponential: NaN or Inf entries");
    Matrix r = a.exp();
    if (!r.allFinite()) throw NumericalError("matrix_exponential: overflow");
    return r;
}

Matrix partial_trace_second(const Matrix& rho, Eigen::Index d_a, Eigen::Index d_b) {
    if (d_a <= 0 || d_b <= 0 || rho.rows() != d_a * d_b || rho.cols() != d_a * d_b)
        throw ValidationError("partial_trace_second: dimension mismatch");
    Matrix out = Matrix::Zero(d_a, d_a);
    for (Eigen::Index i = 0; i < d_a; ++i)
        for (Eigen::Index j = 0; j < d_a; ++j)
            out(i, j) = rho.block(i * d_b, j * d_b, d_b, d_b).trace();
    return out;
}

Matrix choi_matrix(const Superoperator& w) {
    const Eigen::Index d = w.dim();
    Matrix c = Matrix::Zero(d * d, d * d);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index l = 0; l < d; ++l) {
            // W(|k><l|) is column k + l*d of the representation
            const Matrix wkl = unvec(w.matrix().col(k + l * d), d);
            for (Eigen::Index a = 0; a < d; ++a)
                for (Eigen::Index b = 0; b < d; ++b) c(a * d + k, b * d + l) = wkl(a, b);
        }
    }
    return c;
}

CptpReport is_cptp(const Superoperator& w, double tol) {
    CptpReport r;
    const Eigen::Index d = w.dim();
    r.min_choi_eig = min_eigenvalue(choi_matrix(w));
    double defect = 0.0;
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l < d; ++l) {
            const Matrix out = unvec(w.matrix().col(k + l * d), d);
            defect = std::max(defect, std::abs(out.trace() - (k == l ? 1.0 : 0.0)));
        }
    r.trace_defect = defect;
    r.passed = r.min_choi_eig >= -tol * static_cast<double>(d) && r.trace_defect <= tol;
    return r;
}

double hermiticity_defect(const Matrix& a) { return (a - a.adjoint()).norm(); }

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

RealVector hermitian_eigenvalues(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double min_eigenvalue(const Matrix& a) { return hermitian_eigenvalues(a).minCoeff(); }

double trace_distance(const Matrix& a, const Matrix& b) {
    return 0.5 * hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

double operator_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, -I1, I1, 0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

} // namespace rwc
