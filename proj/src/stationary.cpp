#include "rwc/stationary.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace rwc {

SteadyState steady_state(const Superoperator& L, double tol) {
    const Eigen::Index d = L.dim();
    const Eigen::Index d2 = d * d;
    Eigen::BDCSVD<Matrix> svd(L.matrix(), Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    std::vector<Eigen::Index> null;
    for (Eigen::Index k = 0; k < d2; ++k)
        if (sv(k) <= tol * std::max(smax, 1.0)) null.push_back(k);
    if (null.empty()) throw NumericalError("steady_state: generator has trivial kernel");
    const Matrix& V = svd.matrixV();

    SteadyState out;
    out.kernel_dim = static_cast<int>(null.size());
    // Project the maximally mixed state onto the kernel.
    const Vector mixed = vec(Matrix::Identity(d, d) / static_cast<double>(d));
    Vector x = Vector::Zero(d2);
    for (Eigen::Index k : null) x += V.col(k) * V.col(k).dot(mixed);
    Matrix rho = unvec(x, d);
    rho = hermitian_part(rho);
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-12) throw NumericalError("steady_state: kernel has no trace component");
    rho /= tr;
    out.rho = DensityMatrix(rho, 1e-10, 1e-10, 1e-8);
    const double mn = min_eigenvalue(rho);
    if (mn < -1e-10) out.warnings.push_back("steady_state: min eigenvalue " + std::to_string(mn));
    if (out.kernel_dim != 1) {
        out.warnings.push_back("steady_state: kernel dimension " + std::to_string(out.kernel_dim) +
                               ", generator is not ergodic");
        for (Eigen::Index k : null) {
            Matrix b = unvec(V.col(k), d);
            Matrix h = hermitian_part(b);
            if (h.norm() < 1e-8) h = hermitian_part(I1 * b);
            const cplx t = h.trace();
            if (std::abs(t) > 1e-10) h /= t;
            out.basis.push_back(h);
        }
    } else {
        out.basis.push_back(rho);
    }
    return out;
}

HermitianOperator redfield_delta_H(const JumpOperatorSet& jset, const BathModel& bath) {
    const Eigen::Index d = jset.dim();
    Matrix h = Matrix::Zero(d, d);
    if (bath.is_zero() || jset.n_bohr() < 2) return HermitianOperator(h);
    if (bath.zero_temperature()) throw ValidationError("redfield_delta_H: requires finite beta");
    const int n = jset.n_couplings(), nb = jset.n_bohr();
    const double beta = bath.beta();
    const Matrix& c = bath.coupling_matrix();
    std::vector<cplx> G(nb), Gm(nb);
    for (int k = 0; k < nb; ++k) {
        G[k] = cplx(0.5 * bath.rate(jset.bohr[k]), bath.shift(jset.bohr[k]));
        Gm[k] = cplx(0.5 * bath.rate(-jset.bohr[k]), bath.shift(-jset.bohr[k]));
    }
    // gamma^BR_ij(w, w') = c_ji (Gamma(w) + Gamma(w')^*)
    for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q) {
            if (p == q) continue;
            const double w = jset.bohr[p], wp = jset.bohr[q];
            const double x = beta * (wp - w);
            const cplx pre = I1 / std::expm1(x);
            const cplx br_minus = Gm[q] + std::conj(Gm[p]);  // scalar part of gamma^BR(-w', -w)
            const cplx br = G[p] + std::conj(G[q]);           // scalar part of gamma^BR(w, w')
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const cplx f = pre * (std::exp(beta * wp) * c(i, j) * br_minus -
                                          0.5 * (std::exp(-beta * (w - wp)) + 1.0) * c(j, i) * br);
                    if (f != 0.0) h += f * jset.ops[q][j].adjoint() * jset.ops[p][i];
                }
        }
    return HermitianOperator(h, 1e-10);
}

CoherenceReport coherence_report(const Matrix& rho, const Matrix& H_basis) {
    if (rho.rows() != H_basis.rows()) throw ValidationError("coherence_report: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(H_basis));
    const Matrix r = es.eigenvectors().adjoint() * rho * es.eigenvectors();
    CoherenceReport out;
    out.populations = r.diagonal().real();
    for (Eigen::Index a = 0; a < r.rows(); ++a)
        for (Eigen::Index b = 0; b < r.cols(); ++b)
            if (a != b) out.coherence += std::abs(r(a, b));
    return out;
}

SteadyStateReport steady_state_report(const Superoperator& L, const Matrix& H_basis, double beta) {
    SteadyState ss = steady_state(L);
    DensityMatrix ref = gibbs_state(H_basis, beta);
    const CoherenceReport cs = coherence_report(ss.rho, H_basis), cr = coherence_report(ref, H_basis);
    SteadyStateReport out{ss.rho, ref, trace_distance(ss.rho, ref), (cs.populations - cr.populations).cwiseAbs().maxCoeff(),
                          cs.coherence, ss.kernel_dim, ss.warnings};
    return out;
}

} // namespace rwc
