#include "rwc/cumulant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rwc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (e^{ixt} - 1)/(ix), equal to t at x = 0.
cplx phase_integral(double x, double t) {
    const double y = 0.5 * x * t;
    const double sinc = std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
    return std::exp(I1 * y) * (t * sinc);
}

void add_panels(double a, double b, double hmax, const std::vector<double>& gx, const std::vector<double>& gw,
                std::vector<double>& u, std::vector<double>& w) {
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
    for (int p = 0; p < n; ++p) {
        const double lo = a + (b - a) * p / n, hi = a + (b - a) * (p + 1) / n;
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t k = 0; k < gx.size(); ++k) {
            u.push_back(mid + half * gx[k]);
            w.push_back(half * gw[k]);
        }
    }
}

const std::vector<double>& gl16(bool weights) {
    static std::vector<double> x, w;
    static const bool init = [] {
        gauss_legendre(16, x, w);
        return true;
    }();
    (void)init;
    return weights ? w : x;
}

CumulantKernel expand(const std::vector<double>& bohr, const BathModel& bath, double t, const ScalarKernels& s) {
    CumulantKernel K;
    K.t = t;
    K.bohr = bohr;
    K.n = bath.n();
    const int n = K.n, nb = static_cast<int>(bohr.size());
    K.gamma = Matrix::Zero(nb * n, nb * n);
    K.xi = Matrix::Zero(nb * n, nb * n);
    const Matrix& c = bath.coupling_matrix();
    for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    K.gamma(p * n + i, q * n + j) = c(j, i) * s.k(p, q);
                    K.xi(p * n + i, q * n + j) = c(j, i) * s.xi(p, q);
                }
    return K;
}

} // namespace

ScalarKernels scalar_kernels(const std::vector<double>& bohr, const BathModel& bath, double t) {
    if (t < 0.0) throw ValidationError("cumulant kernel: t must be >= 0");
    const auto nb = static_cast<Eigen::Index>(bohr.size());
    ScalarKernels s{Matrix::Zero(nb, nb), Matrix::Zero(nb, nb)};
    if (t == 0.0 || bath.is_zero() || nb == 0) return s;
    double wmax = 0.0;
    for (double w : bohr) wmax = std::max(wmax, std::abs(w));
    const TimeQuadrature q = build_time_quadrature(bath, t, wmax);
    std::vector<cplx> G(bohr.size());
    for (std::size_t p = 0; p < bohr.size(); ++p) G[p] = half_line_moments(q, bohr[p]).G;

    for (Eigen::Index p = 0; p < nb; ++p)
        for (Eigen::Index r = 0; r < nb; ++r) {
            const double w = bohr[p], wp = bohr[r];
            const double D = wp - w;
            if (std::abs(D) * t >= 1.0) {
                const cplx e = std::exp(I1 * (D * t));
                s.k(p, r) = (I1 / D) * (std::conj(G[p]) + G[r] - e * (G[p] + std::conj(G[r])));
                s.xi(p, r) = -(e * (G[p] - std::conj(G[r])) - G[r] + std::conj(G[p])) / (2.0 * D);
            } else {
                cplx kk = 0.0, xx = 0.0;
                for (std::size_t m = 0; m < q.u.size(); ++m) {
                    const double u = q.u[m];
                    const cplx W = q.w[m] * std::exp(I1 * (D * u)) * phase_integral(D, t - u);
                    const cplx a = std::exp(I1 * (w * u)) * q.c[m];
                    const cplx b = std::exp(-I1 * (wp * u)) * std::conj(q.c[m]);
                    kk += W * (a + b);
                    xx += W * (a - b);
                }
                s.k(p, r) = kk;
                s.xi(p, r) = xx / (2.0 * I1);
            }
        }
    return s;
}

CumulantKernel gamma_kernel(const std::vector<double>& bohr, const BathModel& bath, double t) {
    return expand(bohr, bath, t, scalar_kernels(bohr, bath, t));
}

CumulantKernel gamma_kernel(const JumpOperatorSet& jset, const BathModel& bath, double t) {
    if (jset.n_couplings() != bath.n()) throw ValidationError("gamma_kernel: coupling count mismatch");
    return gamma_kernel(jset.bohr, bath, t);
}

cplx gamma_kernel_sinc(const BathModel& bath, double omega, double omega_p, double t) {
    if (t < 0.0) throw ValidationError("gamma_kernel_sinc: t must be >= 0");
    if (t == 0.0 || bath.is_zero()) return 0.0;
    if (const auto* m = std::get_if<ModeSet>(&bath.spectral())) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < m->omega.size(); ++k) {
            const double wk = m->omega[k];
            acc += m->g2[k] * (m->emission[k] * phase_integral(omega_p - wk, t) * std::conj(phase_integral(omega - wk, t)) +
                               m->absorption[k] * phase_integral(omega_p + wk, t) * std::conj(phase_integral(omega + wk, t)));
        }
        return acc;
    }
    const double W = std::max(bath.window(omega), bath.window(omega_p));
    std::vector<double> pts{-W, 0.0, W, omega, omega_p};
    if (const auto* tab = std::get_if<TabulatedDensity>(&bath.spectral()))
        for (double x : tab->omega)
            if (x > 0.0 && x < W) {
                pts.push_back(x);
                pts.push_back(-x);
            }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double hmax = std::min(3.0 / t, 0.25 * bath.frequency_scale());
    if (2.0 * W / hmax > 2e5) throw NumericalError("gamma_kernel_sinc: t too large for the frequency-domain route");
    std::vector<double> u, w;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) add_panels(pts[k], pts[k + 1], hmax, gl16(false), gl16(true), u, w);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
        acc += w[k] * bath.rate(u[k]) * phase_integral(omega_p - u[k], t) * std::conj(phase_integral(omega - u[k], t));
    return acc / kTwoPi;
}

cplx gamma_kernel_direct(const BathModel& bath, double omega, double omega_p, double t) {
    if (t < 0.0) throw ValidationError("gamma_kernel_direct: t must be >= 0");
    if (t == 0.0 || bath.is_zero()) return 0.0;
    const double hmax = std::min(bath.correlation_time(),
                                 3.0 / (std::abs(omega) + std::abs(omega_p) + bath.correlation_frequency() + 1e-300));
    std::vector<double> u, w;
    add_panels(0.0, t, hmax, gl16(false), gl16(true), u, w);
    if (u.size() > 2000) throw NumericalError("gamma_kernel_direct: grid exceeds 2000 x 2000");
    std::vector<cplx> es(u.size()), ev(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        es[k] = w[k] * std::exp(I1 * (omega_p * u[k]));
        ev[k] = w[k] * std::exp(-I1 * (omega * u[k]));
    }
    cplx acc = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) {
        cplx row = 0.0;
        for (std::size_t b = 0; b < u.size(); ++b) {
            const double d = u[a] - u[b];
            const cplx c = d >= 0.0 ? bath.correlation(d) : std::conj(bath.correlation(-d));
            row += ev[b] * c;
        }
        acc += es[a] * row;
    }
    return acc;
}

cplx xi_kernel(const BathModel& bath, double omega, double omega_p, double t) {
    if (omega == omega_p) return scalar_kernels({omega}, bath, t).xi(0, 0);
    return scalar_kernels({omega, omega_p}, bath, t).xi(0, 1);
}

cplx gamma_kernel_longtime(const BathModel& bath, double omega, double omega_p, double t) {
    const double D = omega_p - omega;
    if (std::abs(D) <= 1e-12 * std::max(1.0, std::abs(omega)))
        return t * bath.rate(omega) - 2.0 * bath.shift_derivative(omega);
    const cplx G(0.5 * bath.rate(omega), bath.shift(omega));
    const cplx Gp(0.5 * bath.rate(omega_p), bath.shift(omega_p));
    const cplx e = std::exp(I1 * (D * t));
    return (I1 / D) * (std::conj(G) + Gp - e * (G + std::conj(Gp)));
}

cplx xi_kernel_longtime(const BathModel& bath, double omega, double omega_p, double t) {
    const double D = omega_p - omega;
    if (std::abs(D) <= 1e-12 * std::max(1.0, std::abs(omega)))
        return t * bath.shift(omega) + 0.5 * bath.rate_derivative(omega);
    const cplx G(0.5 * bath.rate(omega), bath.shift(omega));
    const cplx Gp(0.5 * bath.rate(omega_p), bath.shift(omega_p));
    const cplx e = std::exp(I1 * (D * t));
    return -(e * (G - std::conj(Gp)) - Gp + std::conj(G)) / (2.0 * D);
}

HermitianOperator second_correction(const JumpOperatorSet& jset, const BathModel& bath, double t) {
    return HermitianOperator(counterterm_hamiltonian(jset, bath, t), 1e-10);
}

Superoperator cumulant_superoperator(const JumpOperatorSet& jset, const CumulantKernel& kernel, double lambda) {
    if (jset.n_bohr() == 0) return Superoperator::zero(jset.dim());
    return kernel_dissipator(jset.flat(), kernel.gamma) * (lambda * lambda);
}

Superoperator cumulant_schroedinger(const JumpOperatorSet& jset, const CumulantKernel& kernel, double lambda) {
    Superoperator K = Superoperator::commutator(jset.H) * kernel.t;
    if (jset.n_bohr() == 0) return K;
    Matrix g = kernel.gamma;
    const int n = kernel.n;
    for (Eigen::Index a = 0; a < g.rows(); ++a)
        for (Eigen::Index b = 0; b < g.cols(); ++b) {
            const double D = kernel.bohr[b / n] - kernel.bohr[a / n];
            g(a, b) *= std::exp(-I1 * (0.5 * D * kernel.t));
        }
    return K + kernel_dissipator(jset.flat(), g) * (lambda * lambda);
}

HermitianOperator cumulant_hamiltonian(const JumpOperatorSet& jset, const CumulantKernel& kernel) {
    const int n = jset.n_couplings(), nb = jset.n_bohr();
    Matrix h = Matrix::Zero(jset.dim(), jset.dim());
    for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const cplx v = kernel.xi(p * n + i, q * n + j);
                    if (v != 0.0) h += v * jset.ops[q][j].adjoint() * jset.ops[p][i];
                }
    return HermitianOperator(h, 1e-9 * std::max(1.0, h.norm()));
}

Trajectory evolve_cumulant(const JumpOperatorSet& jset, const BathModel& bath, const DensityMatrix& rho0,
                           const std::vector<double>& times, Picture picture, double lambda, bool renormalized) {
    if (rho0.dim() != jset.dim()) throw ValidationError("evolve_cumulant: state dimension mismatch");
    Trajectory tr;
    for (double t : times) {
        if (t < 0.0) throw ValidationError("evolve_cumulant: negative time");
        const CumulantKernel K = gamma_kernel(jset, bath, t);
        Matrix rho;
        if (renormalized) {
            const Superoperator gen = picture == Picture::interaction ? cumulant_superoperator(jset, K, lambda)
                                                                      : cumulant_schroedinger(jset, K, lambda);
            rho = gen.exp().apply(rho0.matrix());
        } else {
            const Superoperator gen = cumulant_superoperator(jset, K, lambda) +
                                      Superoperator::commutator(lambda * lambda * cumulant_hamiltonian(jset, K).matrix());
            rho = gen.exp().apply(rho0.matrix());
            if (picture == Picture::schroedinger) {
                const Matrix U = matrix_exponential(-I1 * t * jset.H);
                rho = U * rho * U.adjoint();
            }
        }
        tr.times.push_back(t);
        tr.trace_defect.push_back(std::abs(rho.trace() - 1.0));
        tr.min_eigenvalue.push_back(min_eigenvalue(rho));
        tr.states.push_back(rho);
    }
    return tr;
}

BrConsistency br_consistency(const JumpOperatorSet& jset, const BathModel& bath, double t, double h, double lambda) {
    if (!(h > 0.0) || t - h < 0.0) throw ValidationError("br_consistency: need 0 < h <= t");
    const Superoperator Kp = cumulant_superoperator(jset, gamma_kernel(jset, bath, t + h), lambda);
    const Superoperator Km = cumulant_superoperator(jset, gamma_kernel(jset, bath, t - h), lambda);
    const Superoperator L = redfield_generator(jset, bath, t, Picture::interaction, lambda);
    const Matrix dK = (Kp.matrix() - Km.matrix()) / (2.0 * h);
    return {(dK - L.matrix()).norm(), L.matrix().norm()};
}

OdeRhs cumulant_ode_rhs(const Superoperator& K, const Superoperator& dK, int n_max) {
    const double nk = K.matrix().norm();
    if (nk > 20.0) throw NumericalError("cumulant_ode_rhs: ||K|| > 20, series not reliable");
    Matrix term = dK.matrix();
    Matrix sum = term;
    double fact = 1.0;
    for (int k = 1; k <= n_max; ++k) {
        term = K.matrix() * term - term * K.matrix();
        fact *= (k + 1);
        sum += term / fact;
    }
    const double x = 2.0 * nk;
    double tail = dK.matrix().norm() * std::exp(x);
    for (int k = 1; k <= n_max + 1; ++k) tail *= x / (k + 1);
    return {Superoperator(sum), tail};
}

} // namespace rwc
