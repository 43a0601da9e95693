#include <doctest.h>

#include <cmath>

#include "rwc/generators.hpp"
#include "rwc/stationary.hpp"

using namespace rwc;

namespace {

Matrix ket_bra(int d, int a, int b) {
    Matrix m = Matrix::Zero(d, d);
    m(a, b) = 1.0;
    return m;
}

struct VSystem {
    Matrix H = Matrix::Zero(3, 3);
    std::vector<Matrix> S;
    BathModel bath;
    VSystem() {
        H.diagonal() << 0.0, 1.0, 1.3;
        S = {ket_bra(3, 0, 1) + ket_bra(3, 1, 0), ket_bra(3, 0, 2) + ket_bra(3, 2, 0)};
        Matrix c(2, 2);
        c << 1.0, 0.5, 0.5, 1.0;
        bath = BathModel(1.0, OhmicExponential{1.0, 10.0, 1.0}, c);
    }
};

} // namespace

TEST_CASE("Davies steady state has Boltzmann populations") {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0.0, 0.7, 1.9;
    const Matrix s = ket_bra(3, 0, 1) + ket_bra(3, 1, 2) + ket_bra(3, 0, 2) + ket_bra(3, 1, 0) + ket_bra(3, 2, 1) +
                     ket_bra(3, 2, 0);
    const BathModel bath(0.8, OhmicExponential{1.0, 5.0, 1.0}, Matrix::Identity(1, 1));
    const JumpOperatorSet j = jump_operators(h, {s});
    const SteadyStateReport r = steady_state_report(davies_generator(j, bath, GeneratorOptions{}), h, 0.8);
    CHECK(r.kernel_dim == 1);
    CHECK(r.population_distance < 1e-10);
    CHECK(r.coherence < 1e-10);
    CHECK(r.warnings.empty());
}

TEST_CASE("a purely Hamiltonian generator has a degenerate kernel") {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0.0, 1.0, 2.5;
    const SteadyState ss = steady_state(Superoperator::commutator(h));
    CHECK(ss.kernel_dim == 3);
    CHECK_FALSE(ss.warnings.empty());
    CHECK(std::abs(ss.rho.matrix().trace() - 1.0) < 1e-12);
}

TEST_CASE("delta H vanishes for a single Bohr pair") {
    const BathModel bath(1.0, OhmicExponential{1.0, 10.0, 1.0}, Matrix::Identity(1, 1));
    const JumpOperatorSet j = jump_operators(0.5 * sigma_z(), {sigma_x()});
    CHECK(redfield_delta_H(j, bath).matrix().norm() < 1e-14);
}

TEST_CASE("delta H is off-diagonal in the energy basis") {
    const VSystem v;
    const JumpOperatorSet j = jump_operators(v.H, v.S);
    const Matrix d = redfield_delta_H(j, v.bath).matrix();
    CHECK(d.norm() > 1e-3);
    CHECK(d.diagonal().norm() < 1e-14);
    CHECK((d - d.adjoint()).norm() < 1e-12);
}

TEST_CASE("Redfield generator annihilates the Gibbs state of H plus lambda^2 delta H to higher order") {
    const VSystem v;
    const JumpOperatorSet j = jump_operators(v.H, v.S);
    const Matrix dH = redfield_delta_H(j, v.bath).matrix();
    std::vector<double> with, without;
    for (double l : {0.1, 0.05}) {
        const Superoperator L = redfield_generator(j, v.bath, kInfiniteTime, Picture::schroedinger, l);
        with.push_back(L.apply(gibbs_state(v.H + l * l * dH, 1.0)).norm());
        without.push_back(L.apply(gibbs_state(v.H, 1.0)).norm());
    }
    CHECK(with[0] / with[1] >= 12.0);
    CHECK(without[0] / without[1] < 6.0);
}

TEST_CASE("coherence report") {
    const Matrix h = 0.5 * sigma_z() + 0.3 * sigma_x();
    const CoherenceReport g = coherence_report(gibbs_state(h, 2.0), h);
    CHECK(g.coherence < 1e-14);
    CHECK(g.populations.sum() == doctest::Approx(1.0));
    const CoherenceReport p = coherence_report(Matrix::Constant(2, 2, 0.5), 0.5 * sigma_z());
    CHECK(p.coherence == doctest::Approx(1.0));
}

TEST_CASE("Lamb-Stark term leaves the Davies steady state unchanged") {
    const VSystem v;
    const JumpOperatorSet j = jump_operators(v.H, v.S);
    GeneratorOptions a, b;
    a.renormalized = b.renormalized = false;
    a.lambda = b.lambda = 0.3;
    b.include_lamb_stark = true;
    const SteadyState sa = steady_state(davies_generator(j, v.bath, a));
    const SteadyState sb = steady_state(davies_generator(j, v.bath, b));
    CHECK(trace_distance(sa.rho, sb.rho) < 1e-10);
}

TEST_CASE("steady state of a rejected generator") {
    CHECK_THROWS(steady_state(Superoperator(Matrix::Identity(4, 4))));
}
