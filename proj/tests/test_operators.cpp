#include <doctest.h>

#include <random>

#include "rwc/operators.hpp"

using namespace rwc;

namespace {

Matrix random_hermitian(int d, std::mt19937& g) {
    std::normal_distribution<double> nd;
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cplx(nd(g), nd(g));
    return (a + a.adjoint()) / 2.0;
}

} // namespace

TEST_CASE("vec and superoperator factories follow the column-major convention") {
    std::mt19937 g(3);
    const Matrix A = random_hermitian(3, g), B = random_hermitian(3, g), X = random_hermitian(3, g);
    CHECK((Superoperator::sandwich(A, B).apply(X) - A * X * B).norm() < 1e-12);
    CHECK((Superoperator::left(A).apply(X) - A * X).norm() < 1e-12);
    CHECK((Superoperator::right(B).apply(X) - X * B).norm() < 1e-12);
    CHECK((Superoperator::commutator(A).apply(X) + I1 * (A * X - X * A)).norm() < 1e-12);
    CHECK((unvec(vec(X), 3) - X).norm() == 0.0);
    CHECK(vec(X)(1) == X(1, 0));
}

TEST_CASE("hermitian operator validation") {
    Matrix h = sigma_x();
    h(0, 1) += 1e-3;
    CHECK_THROWS_AS(HermitianOperator{h}, ValidationError);
    CHECK_NOTHROW(HermitianOperator{sigma_y()});
}

TEST_CASE("density matrix invariants") {
    Matrix r = Matrix::Zero(2, 2);
    r(0, 0) = 0.6;
    r(1, 1) = 0.4;
    CHECK_NOTHROW(DensityMatrix{r});
    r(1, 1) = 0.5;
    CHECK_THROWS_AS(DensityMatrix{r}, ValidationError);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    CHECK_THROWS_AS(DensityMatrix{neg}, ValidationError);
}

TEST_CASE("gibbs state of a qubit") {
    const double beta = 0.7;
    const DensityMatrix rho = gibbs_state(0.5 * sigma_z(), beta);
    const double p_up = std::exp(-0.5 * beta) / (std::exp(-0.5 * beta) + std::exp(0.5 * beta));
    CHECK(rho.matrix()(0, 0).real() == doctest::Approx(p_up).epsilon(1e-14));
    CHECK(std::abs(rho.matrix()(0, 1)) < 1e-15);
}

TEST_CASE("matrix exponential against the Pauli closed form") {
    const double a = 0.83;
    const Matrix e = matrix_exponential(-I1 * a * sigma_y());
    const Matrix ref = std::cos(a) * Matrix::Identity(2, 2) - I1 * std::sin(a) * sigma_y();
    CHECK((e - ref).norm() < 1e-14);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(matrix_exponential(bad), ValidationError);
}

TEST_CASE("partial trace of a product state") {
    std::mt19937 g(5);
    Matrix a = random_hermitian(2, g);
    a = a * a.adjoint();
    a /= a.trace();
    Matrix b = random_hermitian(3, g);
    b = b * b.adjoint();
    b /= b.trace();
    CHECK((partial_trace_second(kron(a, b), 2, 3) - a).norm() < 1e-14);
}

TEST_CASE("choi matrix of unitary and depolarizing maps") {
    const Matrix U = matrix_exponential(-I1 * 0.4 * sigma_x());
    const Superoperator unitary = Superoperator::sandwich(U, U.adjoint());
    const CptpReport r = is_cptp(unitary, 1e-12);
    CHECK(r.passed);
    // Transposition is positive but not completely positive.
    Matrix T = Matrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) T(b * 2 + a, a * 2 + b) = 1.0;
    const CptpReport rt = is_cptp(Superoperator(T), 1e-12);
    CHECK_FALSE(rt.passed);
    CHECK(rt.min_choi_eig == doctest::Approx(-1.0));
}

TEST_CASE("trace distance and norms") {
    Matrix r0 = Matrix::Zero(2, 2), r1 = Matrix::Zero(2, 2);
    r0(0, 0) = 1.0;
    r1(1, 1) = 1.0;
    CHECK(trace_distance(r0, r1) == doctest::Approx(1.0));
    CHECK(operator_norm(sigma_x() * 3.0) == doctest::Approx(3.0));
    CHECK((commutator(sigma_x(), sigma_y()) - 2.0 * I1 * sigma_z()).norm() < 1e-15);
}

TEST_CASE("superoperator exponential of a dephasing generator") {
    const Superoperator L =
        (Superoperator::sandwich(sigma_z(), sigma_z()) - Superoperator::identity(2)) * cplx(0.5);
    Matrix rho = Matrix::Constant(2, 2, 0.5);
    const Matrix out = (L * cplx(2.0)).exp().apply(rho);
    CHECK(out(0, 1).real() == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-13));
    CHECK(out(0, 0).real() == doctest::Approx(0.5));
}
