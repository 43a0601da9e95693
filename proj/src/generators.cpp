#include "rwc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rwc {

Superoperator kernel_dissipator(const std::vector<Matrix>& ops, const Matrix& k) {
    if (ops.empty()) throw ValidationError("kernel_dissipator: empty operator list");
    const auto m = static_cast<Eigen::Index>(ops.size());
    if (k.rows() != m || k.cols() != m) throw ValidationError("kernel_dissipator: kernel size mismatch");
    const Eigen::Index d = ops.front().rows();
    const Matrix id = Matrix::Identity(d, d);
    Matrix sup = Matrix::Zero(d * d, d * d);
    Matrix P = Matrix::Zero(d, d);
    for (Eigen::Index b = 0; b < m; ++b) {
        Matrix mix = Matrix::Zero(d, d);
        for (Eigen::Index a = 0; a < m; ++a)
            if (k(a, b) != 0.0) mix += k(a, b) * ops[a];
        if (mix.norm() == 0.0) continue;
        sup += kron(ops[b].conjugate(), mix);
        P += ops[b].adjoint() * mix;
    }
    sup -= 0.5 * (kron(id, P) + kron(P.transpose(), id));
    return Superoperator(std::move(sup));
}

CenteringResult centering_correction(const Matrix& H_S0, const std::vector<Matrix>& S, const RealVector& offsets,
                                     double lambda) {
    if (static_cast<Eigen::Index>(S.size()) != offsets.size())
        throw ValidationError("centering_correction: one expectation per coupling required");
    Matrix hc = Matrix::Zero(H_S0.rows(), H_S0.cols());
    for (std::size_t i = 0; i < S.size(); ++i) hc += offsets(static_cast<Eigen::Index>(i)) * S[i];
    HermitianOperator c(hc);
    return {c, HermitianOperator(H_S0 + lambda * c.matrix())};
}

HermitianOperator lamb_stark_hamiltonian(const JumpOperatorSet& jset, const BathModel& bath) {
    const Eigen::Index d = jset.dim();
    Matrix h = Matrix::Zero(d, d);
    if (bath.is_zero()) return HermitianOperator(h);
    const Matrix& c = bath.coupling_matrix();
    for (int k = 0; k < jset.n_bohr(); ++k) {
        const double s = bath.shift(jset.bohr[k]);
        for (int i = 0; i < jset.n_couplings(); ++i)
            for (int j = 0; j < jset.n_couplings(); ++j)
                if (c(i, j) != 0.0) h += c(i, j) * s * jset.ops[k][i].adjoint() * jset.ops[k][j];
    }
    return HermitianOperator(h, 1e-10);
}

Matrix davies_kernel(const JumpOperatorSet& jset, const BathModel& bath) {
    const int n = jset.n_couplings(), nb = jset.n_bohr();
    Matrix k = Matrix::Zero(nb * n, nb * n);
    const Matrix& c = bath.coupling_matrix();
    for (int q = 0; q < nb; ++q) {
        const double g = bath.rate(jset.bohr[q]);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) k(q * n + a, q * n + b) = c(b, a) * g;
    }
    return k;
}

Superoperator davies_generator(const JumpOperatorSet& jset, const BathModel& bath, const GeneratorOptions& in) {
    const GeneratorOptions opts = in.normalized();
    const double l2 = opts.lambda * opts.lambda;
    const Eigen::Index d = jset.dim();
    Matrix h = Matrix::Zero(d, d);
    if (opts.picture == Picture::schroedinger) h += jset.H;
    if (opts.include_lamb_stark) h += l2 * lamb_stark_hamiltonian(jset, bath).matrix();
    Superoperator L = Superoperator::commutator(h);
    if (jset.n_bohr() == 0 || bath.is_zero()) return L;
    return L + kernel_dissipator(jset.flat(), davies_kernel(jset, bath)) * l2;
}

std::vector<cplx> unit_Gammas(const JumpOperatorSet& jset, const BathModel& bath, double t) {
    std::vector<cplx> g(jset.bohr.size(), 0.0);
    if (bath.is_zero() || t == 0.0) return g;
    if (std::isinf(t)) {
        for (std::size_t k = 0; k < g.size(); ++k) g[k] = cplx(0.5 * bath.rate(jset.bohr[k]), bath.shift(jset.bohr[k]));
        return g;
    }
    double wmax = 0.0;
    for (double w : jset.bohr) wmax = std::max(wmax, std::abs(w));
    const TimeQuadrature q = build_time_quadrature(bath, t, wmax);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = half_line_moments(q, jset.bohr[k]).G;
    return g;
}

Matrix redfield_kernel(const JumpOperatorSet& jset, const BathModel& bath, double t, Picture picture) {
    const int n = jset.n_couplings(), nb = jset.n_bohr();
    Matrix k = Matrix::Zero(nb * n, nb * n);
    if (bath.is_zero()) return k;
    const std::vector<cplx> G = unit_Gammas(jset, bath, t);
    const Matrix& c = bath.coupling_matrix();
    const bool phase = picture == Picture::interaction && std::isfinite(t);
    for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q) {
            const cplx ph = phase ? std::exp(I1 * ((jset.bohr[q] - jset.bohr[p]) * t)) : cplx(1.0);
            const cplx v = ph * (G[p] + std::conj(G[q]));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) k(p * n + i, q * n + j) = c(j, i) * v;
        }
    return k;
}

Superoperator redfield_generator(const JumpOperatorSet& jset, const BathModel& bath, double t, Picture picture,
                                 double lambda) {
    if (t < 0.0) throw ValidationError("redfield_generator: t must be >= 0");
    const Eigen::Index d = jset.dim();
    Superoperator L = picture == Picture::schroedinger ? Superoperator::commutator(jset.H) : Superoperator::zero(d);
    if (jset.n_bohr() == 0 || bath.is_zero()) return L;
    return L + kernel_dissipator(jset.flat(), redfield_kernel(jset, bath, t, picture)) * (lambda * lambda);
}

RenormalizedSetup renormalize_simplified(const Matrix& H_S0, const std::vector<Matrix>& S, const BathModel& bath,
                                         GeneratorOptions opts, double tau_deg) {
    const CenteringResult cc = centering_correction(H_S0, S, bath.offsets(), opts.lambda);
    opts.renormalized = true;
    opts.include_lamb_stark = false;
    return {cc.H_S1, opts, jump_operators(cc.H_S1.matrix(), S, tau_deg)};
}

Matrix hamiltonian_part(const Superoperator& L) {
    const Eigen::Index d = L.dim();
    const Matrix C = choi_matrix(L);
    Matrix X = Matrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b)
            for (Eigen::Index c = 0; c < d; ++c) X(a, b) += C(a * d + b, c * d + c);
    const double sd = std::sqrt(static_cast<double>(d));
    X /= sd;
    const Matrix F = (X - X.trace() / static_cast<double>(d) * Matrix::Identity(d, d)) / sd;
    return (F.adjoint() - F) / (2.0 * I1);
}

} // namespace rwc

namespace rwc {

Matrix counterterm_hamiltonian(const JumpOperatorSet& jset, const BathModel& bath, double t) {
    const int n = jset.n_couplings(), nb = jset.n_bohr();
    Matrix h = Matrix::Zero(jset.dim(), jset.dim());
    if (bath.is_zero() || nb == 0) return h;
    const std::vector<cplx> G = unit_Gammas(jset, bath, t);
    const Matrix& c = bath.coupling_matrix();
    for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q) {
            const cplx v = (G[q] - std::conj(G[p])) / (2.0 * I1);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (c(i, j) != 0.0) h += c(i, j) * v * jset.ops[p][i].adjoint() * jset.ops[q][j];
        }
    return h;
}

Matrix to_interaction_picture(const Matrix& H, const Matrix& rho, double t) {
    const Matrix U = matrix_exponential(-I1 * t * H);
    return U.adjoint() * rho * U;
}

namespace {

void record(Trajectory& tr, double t, const Matrix& rho) {
    tr.times.push_back(t);
    tr.trace_defect.push_back(std::abs(rho.trace() - 1.0));
    tr.min_eigenvalue.push_back(min_eigenvalue(rho));
    tr.states.push_back(rho);
}

void check_times(const std::vector<double>& times, const char* who) {
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1]))
            throw ValidationError(std::string(who) + ": times must be non-negative and ascending");
}

} // namespace

Trajectory evolve_davies(const JumpOperatorSet& jset, const BathModel& bath, const DensityMatrix& rho0,
                         const std::vector<double>& times, const GeneratorOptions& opts) {
    if (rho0.dim() != jset.dim()) throw ValidationError("evolve_davies: state dimension mismatch");
    check_times(times, "evolve_davies");
    GeneratorOptions o = opts;
    o.picture = Picture::schroedinger;
    const Superoperator L = davies_generator(jset, bath, o);
    Trajectory tr;
    for (double t : times) {
        Matrix rho = (L * cplx(t)).exp().apply(rho0.matrix());
        if (opts.picture == Picture::interaction) rho = to_interaction_picture(jset.H, rho, t);
        record(tr, t, rho);
    }
    return tr;
}

Trajectory evolve_redfield(const JumpOperatorSet& jset, const BathModel& bath, const DensityMatrix& rho0,
                           const std::vector<double>& times, Picture picture, double lambda, bool renormalized) {
    if (rho0.dim() != jset.dim()) throw ValidationError("evolve_redfield: state dimension mismatch");
    check_times(times, "evolve_redfield");
    const double l2 = lambda * lambda;
    auto generator = [&](double t) {
        Superoperator L = redfield_generator(jset, bath, t, Picture::schroedinger, lambda);
        if (!renormalized) L += Superoperator::commutator(l2 * counterterm_hamiltonian(jset, bath, t));
        return L;
    };
    const Superoperator Linf = generator(kInfiniteTime);
    double tau = bath.correlation_time();
    if (!bath.zero_temperature()) tau = std::max(tau, bath.beta() / (2.0 * M_PI));
    const double t_sat = bath.is_zero() ? 0.0 : (bath.is_discrete() ? kInfiniteTime : 60.0 * tau);
    const double lnorm = std::max(operator_norm(Linf.matrix()), 1e-12);
    double h = std::min(0.05 / lnorm, 0.1 * tau);
    if (bath.is_discrete()) {
        double wmax = 0.0;
        for (double w : std::get<ModeSet>(bath.spectral()).omega) wmax = std::max(wmax, w);
        h = std::min(0.05 / lnorm, 0.05 / std::max(wmax, 1e-12));
    }
    auto gen = [&](double t) {
        return t >= t_sat ? Linf.matrix()
                          : generator(t).matrix();
    };
    const Eigen::Index d = jset.dim();
    Vector x = vec(rho0.matrix());
    double now = 0.0;
    Trajectory tr;
    for (double t : times) {
        while (now < t && now < t_sat) {
            const double step = std::min({h, t - now, t_sat - now});
            const Matrix L0 = gen(now), Lh = gen(now + 0.5 * step), L1 = gen(now + step);
            const Vector k1 = L0 * x;
            const Vector k2 = Lh * (x + 0.5 * step * k1);
            const Vector k3 = Lh * (x + 0.5 * step * k2);
            const Vector k4 = L1 * (x + step * k3);
            x += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            now += step;
        }
        if (now < t) {
            x = (Linf * cplx(t - now)).exp().matrix() * x;
            now = t;
        }
        Matrix rho = unvec(x, d);
        if (picture == Picture::interaction) rho = to_interaction_picture(jset.H, rho, t);
        record(tr, t, rho);
    }
    return tr;
}

} // namespace rwc
