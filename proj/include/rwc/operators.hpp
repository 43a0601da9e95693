// operators.hpp - dense operators, density matrices and superoperators

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rwc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I1{0.0, 1.0};

// Bad input: shapes, signs, non-Hermitian data. Maps to CLI exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Quadrature or solver breakdown. Maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class HermitianOperator {
public:
    HermitianOperator() = default;
    // Symmetrizes when the Hermiticity defect is below 1e-12 relative, throws otherwise.
    explicit HermitianOperator(const Matrix& a, double tol = 1e-12);

    static HermitianOperator zero(Eigen::Index dim);
    static HermitianOperator identity(Eigen::Index dim);

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    operator const Matrix&() const { return m_; }

    HermitianOperator operator+(const HermitianOperator& o) const;
    HermitianOperator operator-(const HermitianOperator& o) const;
    HermitianOperator operator*(double x) const;

private:
    Matrix m_;
};

class DensityMatrix {
public:
    DensityMatrix() = default;
    // Checks unit trace, Hermiticity and positivity at the given tolerances.
    explicit DensityMatrix(const Matrix& rho, double trace_tol = 1e-12, double herm_tol = 1e-12,
                           double eig_tol = 1e-10);

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    operator const Matrix&() const { return m_; }

private:
    Matrix m_;
};

// Linear map on dim x dim operators, acting on column-major vec(X).
class Superoperator {
public:
    Superoperator() = default;
    explicit Superoperator(Matrix m);

    static Superoperator zero(Eigen::Index dim);
    static Superoperator identity(Eigen::Index dim);
    static Superoperator left(const Matrix& a);              // X -> A X
    static Superoperator right(const Matrix& b);             // X -> X B
    static Superoperator sandwich(const Matrix& a, const Matrix& b); // X -> A X B
    static Superoperator commutator(const Matrix& h);        // X -> -i[H, X]

    Eigen::Index dim() const { return dim_; }
    const Matrix& matrix() const { return m_; }

    Matrix apply(const Matrix& x) const;

    Superoperator operator+(const Superoperator& o) const;
    Superoperator operator-(const Superoperator& o) const;
    Superoperator operator*(const Superoperator& o) const; // composition
    Superoperator operator*(cplx x) const;
    Superoperator& operator+=(const Superoperator& o);

    Superoperator exp() const;
    double norm() const { return m_.norm(); }

private:
    Eigen::Index dim_{0};
    Matrix m_;
};

Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Eigen::Index dim);
Matrix kron(const Matrix& a, const Matrix& b);

DensityMatrix gibbs_state(const Matrix& h, double beta);

// Scaling and squaring with a degree-13 Pade approximant.
Matrix matrix_exponential(const Matrix& a);

Matrix partial_trace_second(const Matrix& rho, Eigen::Index d_a, Eigen::Index d_b);

Matrix choi_matrix(const Superoperator& w);

struct CptpReport {
    double min_choi_eig{0.0};
    double trace_defect{0.0};
    bool passed{false};
};
CptpReport is_cptp(const Superoperator& w, double tol);

// Helpers shared across modules.
double hermiticity_defect(const Matrix& a);
Matrix hermitian_part(const Matrix& a);
RealVector hermitian_eigenvalues(const Matrix& a);
double min_eigenvalue(const Matrix& a);   // of the Hermitian part
double trace_distance(const Matrix& a, const Matrix& b);
double operator_norm(const Matrix& a);    // spectral norm
Matrix commutator(const Matrix& a, const Matrix& b);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();

} // namespace rwc
