#include "rwc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace rwc {

Eigen::Index TruncatedBath::bath_dim() const {
    Eigen::Index d = 1;
    for (int k = 0; k < modes(); ++k) {
        d *= n_max + 1;
        if (d > (Eigen::Index{1} << 40)) throw ValidationError("TruncatedBath: dimension overflow");
    }
    return d;
}

TruncatedBath discretize_bath(const SpectralDensity& sd, int M, double omega_max, int n_max) {
    if (M < 1) throw ValidationError("discretize_bath: M must be >= 1");
    if (n_max < 1) throw ValidationError("discretize_bath: n_max must be >= 1");
    if (!(omega_max > 0.0)) {
        const BathModel probe(1.0, sd, Matrix::Identity(1, 1));
        omega_max = 6.0 * probe.frequency_scale();
    }
    TruncatedBath tb;
    tb.n_max = n_max;
    tb.omega.resize(M);
    tb.g.resize(M);
    const double dw = omega_max / M;
    for (int k = 0; k < M; ++k) {
        const double w = (k + 0.5) * dw;
        tb.omega(k) = w;
        tb.g(k) = std::sqrt(std::max(spectral_density(sd, w), 0.0) * dw / (2.0 * M_PI));
    }
    return tb;
}

RealVector thermal_weights(double beta, double omega, int n_max) {
    RealVector p(n_max + 1);
    for (int n = 0; n <= n_max; ++n) p(n) = std::isinf(beta) ? (n == 0 ? 1.0 : 0.0) : std::exp(-beta * omega * n);
    return p / p.sum();
}

BathModel to_bath_model(const TruncatedBath& tb, double beta) {
    ModeSet ms;
    for (int k = 0; k < tb.modes(); ++k) {
        const RealVector p = thermal_weights(beta, tb.omega(k), tb.n_max);
        double a = 0.0, e = 0.0;
        for (int n = 0; n <= tb.n_max; ++n) {
            if (n < tb.n_max) a += p(n) * (n + 1);
            e += p(n) * n;
        }
        ms.omega.push_back(tb.omega(k));
        ms.g2.push_back(std::norm(tb.g(k)));
        ms.emission.push_back(a);
        ms.absorption.push_back(e);
    }
    return BathModel(beta, ms, Matrix::Identity(1, 1));
}

namespace {

std::vector<Eigen::Index> strides(const TruncatedBath& tb) {
    std::vector<Eigen::Index> s(tb.modes());
    Eigen::Index acc = 1;
    for (int k = tb.modes() - 1; k >= 0; --k) {
        s[k] = acc;
        acc *= tb.n_max + 1;
    }
    return s;
}

int level(Eigen::Index r, Eigen::Index stride, int n_max) { return static_cast<int>((r / stride) % (n_max + 1)); }

void check_system(const Matrix& H_S0, const Matrix& S) {
    if (H_S0.rows() != H_S0.cols() || S.rows() != H_S0.rows() || S.cols() != H_S0.cols())
        throw ValidationError("oracle: system operator shape mismatch");
    HermitianOperator(H_S0, 1e-10);
    HermitianOperator(S, 1e-10);
}

} // namespace

SparseMatrix total_hamiltonian_sparse(const Matrix& H_S0, const Matrix& S, const TruncatedBath& tb, double lambda) {
    check_system(H_S0, S);
    const Eigen::Index dS = H_S0.rows(), dR = tb.bath_dim();
    const auto st = strides(tb);
    std::vector<Eigen::Triplet<cplx>> trip;
    for (Eigen::Index r = 0; r < dR; ++r) {
        double e = 0.0;
        for (int k = 0; k < tb.modes(); ++k) e += tb.omega(k) * level(r, st[k], tb.n_max);
        for (Eigen::Index s = 0; s < dS; ++s) {
            for (Eigen::Index sp = 0; sp < dS; ++sp)
                if (H_S0(s, sp) != 0.0) trip.emplace_back(s * dR + r, sp * dR + r, H_S0(s, sp));
            if (e != 0.0) trip.emplace_back(s * dR + r, s * dR + r, e);
        }
        if (lambda == 0.0) continue;
        // <r'| R |r> for r' = r with one mode raised
        for (int k = 0; k < tb.modes(); ++k) {
            const int n = level(r, st[k], tb.n_max);
            if (n == tb.n_max || tb.g(k) == 0.0) continue;
            const Eigen::Index rp = r + st[k];
            const cplx up = tb.g(k) * std::sqrt(static_cast<double>(n + 1));
            for (Eigen::Index s = 0; s < dS; ++s)
                for (Eigen::Index sp = 0; sp < dS; ++sp) {
                    if (S(s, sp) == 0.0) continue;
                    const cplx v = lambda * S(s, sp);
                    trip.emplace_back(s * dR + rp, sp * dR + r, v * up);
                    trip.emplace_back(s * dR + r, sp * dR + rp, v * std::conj(up));
                }
        }
    }
    SparseMatrix H(dS * dR, dS * dR);
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

HermitianOperator total_hamiltonian(const Matrix& H_S0, const Matrix& S, const TruncatedBath& tb, double lambda) {
    const Eigen::Index dim = H_S0.rows() * tb.bath_dim();
    if (dim > kDenseOracleLimit)
        throw ValidationError("total_hamiltonian: dimension " + std::to_string(dim) + " exceeds dense limit 4096");
    return HermitianOperator(Matrix(total_hamiltonian_sparse(H_S0, S, tb, lambda)), 1e-12);
}

namespace {

// Sum_k x^k/k! v for x = A with ||A|| <= 1 per substep.
class Propagator {
public:
    Propagator(const SparseMatrix& H, Eigen::Index dS, const SystemDrive& drive)
        : H_(H), dS_(dS), dR_(H.rows() / dS), drive_(drive) {
        for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
            double col = 0.0;
            for (SparseMatrix::InnerIterator it(H, k); it; ++it) col += std::abs(it.value());
            bound_ = std::max(bound_, col);
        }
    }

    Vector apply_h(const Vector& v, const Matrix* D) const {
        Vector out = H_ * v;
        if (D) {
            Eigen::Map<const Matrix> m(v.data(), dR_, dS_);
            Eigen::Map<Matrix> o(out.data(), dR_, dS_);
            o += m * D->transpose();
        }
        return out;
    }

    // psi(t+h) from psi(t); fourth-order Magnus when a drive is present, exact otherwise.
    Vector step(const Vector& psi, double t, double h) const {
        if (!drive_) {
            auto omega = [&](const Vector& v) -> Vector { return (-I1 * h) * apply_h(v, nullptr); };
            return expv(omega, h * bound_, psi);
        }
        const double c = std::sqrt(3.0) / 6.0;
        const Matrix D1 = drive_(t + (0.5 - c) * h), D2 = drive_(t + (0.5 + c) * h);
        const double dnorm = std::max(operator_norm(D1), operator_norm(D2));
        auto omega = [&](const Vector& v) -> Vector {
            const Vector a1 = apply_h(v, &D1), a2 = apply_h(v, &D2);
            return (-0.5 * I1 * h) * (a1 + a2) - (std::sqrt(3.0) / 12.0 * h * h) * (apply_h(a1, &D2) - apply_h(a2, &D1));
        };
        const double nb = h * (bound_ + dnorm) + std::sqrt(3.0) / 6.0 * h * h * operator_norm(D2 - D1) * (bound_ + dnorm);
        return expv(omega, nb, psi);
    }

private:
    template <class Op>
    static Vector expv(const Op& omega, double norm_bound, const Vector& psi) {
        const int sub = std::max(1, static_cast<int>(std::ceil(norm_bound)));
        Vector v = psi;
        for (int s = 0; s < sub; ++s) {
            Vector term = v, sum = v;
            for (int k = 1; k < 60; ++k) {
                term = omega(term) / (static_cast<double>(k) * sub);
                sum += term;
                if (term.norm() < 1e-16 * sum.norm()) break;
            }
            v = sum;
        }
        return v;
    }

    const SparseMatrix& H_;
    Eigen::Index dS_, dR_;
    const SystemDrive& drive_;
    double bound_{0.0};
};

} // namespace

OracleTrajectory exact_reduced_evolution(const Matrix& H_S0, const Matrix& S, const TruncatedBath& tb, double lambda,
                                         double beta, const DensityMatrix& rho_S0, const std::vector<double>& times,
                                         const SystemDrive& drive, double dt) {
    if (rho_S0.dim() != H_S0.rows()) throw ValidationError("exact_reduced_evolution: state dimension mismatch");
    if (!(beta > 0.0)) throw ValidationError("exact_reduced_evolution: beta must be > 0");
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1]))
            throw ValidationError("exact_reduced_evolution: times must be non-negative and ascending");
    const SparseMatrix H = total_hamiltonian_sparse(H_S0, S, tb, lambda);
    const Eigen::Index dS = H_S0.rows(), dR = tb.bath_dim();
    const auto st = strides(tb);

    // Product initial state as a mixture of pure components.
    std::vector<RealVector> pm;
    for (int k = 0; k < tb.modes(); ++k) pm.push_back(thermal_weights(beta, tb.omega(k), tb.n_max));
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_S0.matrix());
    std::vector<double> weight;
    std::vector<Vector> psi;
    for (Eigen::Index a = 0; a < dS; ++a) {
        const double pa = es.eigenvalues()(a);
        if (pa < 1e-13) continue;
        for (Eigen::Index r = 0; r < dR; ++r) {
            double p = pa;
            for (int k = 0; k < tb.modes() && p >= 1e-13; ++k) p *= pm[k](level(r, st[k], tb.n_max));
            if (p < 1e-13) continue;
            Vector v = Vector::Zero(dS * dR);
            for (Eigen::Index s = 0; s < dS; ++s) v(s * dR + r) = es.eigenvectors()(s, a);
            weight.push_back(p);
            psi.push_back(std::move(v));
        }
    }
    double wsum = 0.0;
    for (double w : weight) wsum += w;
    for (double& w : weight) w /= wsum;

    const Propagator prop(H, dS, drive);
    if (!(dt > 0.0)) dt = drive ? 0.01 : std::numeric_limits<double>::infinity();
    OracleTrajectory out;
    double now = 0.0;
    for (double t : times) {
        while (now < t) {
            const double h = std::min(dt, t - now);
            for (Vector& v : psi) v = prop.step(v, now, h);
            now += h;
        }
        Matrix rho = Matrix::Zero(dS, dS);
        double top = 0.0;
        for (std::size_t c = 0; c < psi.size(); ++c) {
            Eigen::Map<const Matrix> m(psi[c].data(), dR, dS);
            rho += weight[c] * (m.transpose() * m.conjugate());
            for (int k = 0; k < tb.modes(); ++k) {
                double pk = 0.0;
                for (Eigen::Index r = 0; r < dR; ++r)
                    if (level(r, st[k], tb.n_max) == tb.n_max) pk += m.row(r).squaredNorm();
                top = std::max(top, weight[c] * pk);
            }
        }
        out.max_top_population = std::max(out.max_top_population, top);
        out.times.push_back(t);
        out.states.push_back(hermitian_part(rho));
    }
    if (out.max_top_population > 1e-6)
        out.warnings.push_back("exact_reduced_evolution: top Fock population " +
                               std::to_string(out.max_top_population) + " exceeds 1e-6");
    return out;
}

DensityMatrix exact_mean_force(const HermitianOperator& H_tot, double beta, Eigen::Index d_S) {
    const Matrix& H = H_tot.matrix();
    const Eigen::Index D = H.rows();
    if (D > kDenseOracleLimit) throw ValidationError("exact_mean_force: dimension exceeds dense limit 4096");
    if (d_S < 1 || D % d_S != 0) throw ValidationError("exact_mean_force: d_S does not divide the dimension");
    if (!(beta >= 0.0) || std::isinf(beta)) throw ValidationError("exact_mean_force: beta must be finite and >= 0");
    const Eigen::Index dR = D / d_S;
    RealVector E;
    Matrix V;
    if (H.imag().norm() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.real());
        E = es.eigenvalues();
        V = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(H);
        E = es.eigenvalues();
        V = es.eigenvectors();
    }
    RealVector w = (-beta * (E.array() - E.minCoeff())).exp();
    w /= w.sum();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < D; ++k)
        if (w(k) > 1e-18) keep.push_back(k);
    Matrix B(D, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) B.col(static_cast<Eigen::Index>(c)) = V.col(keep[c]) * std::sqrt(w(keep[c]));
    Matrix rho(d_S, d_S);
    for (Eigen::Index s = 0; s < d_S; ++s)
        for (Eigen::Index sp = 0; sp < d_S; ++sp)
            rho(s, sp) = (B.middleRows(s * dR, dR).array() * B.middleRows(sp * dR, dR).conjugate().array()).sum();
    return DensityMatrix(hermitian_part(rho / rho.trace()), 1e-10, 1e-10, 1e-10);
}

} // namespace rwc
