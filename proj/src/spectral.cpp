#include "rwc/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace rwc {

EigenDecomposition decompose(const Matrix& H, double tau_deg) {
    if (H.rows() != H.cols() || H.rows() == 0) throw ValidationError("decompose: H must be square");
    if (hermiticity_defect(H) > 1e-12 * std::max(1.0, H.norm()))
        throw ValidationError("decompose: H must be Hermitian");
    EigenDecomposition e;
    e.H = hermitian_part(H);
    e.tau_deg = tau_deg;
    Eigen::SelfAdjointEigenSolver<Matrix> es(e.H);
    const RealVector& ev = es.eigenvalues();
    e.eigenvectors = es.eigenvectors();
    e.spectral_range = ev(ev.size() - 1) - ev(0);
    const double tol = tau_deg * e.spectral_range;

    std::vector<double> levels;
    Eigen::Index start = 0;
    const Eigen::Index n = ev.size();
    for (Eigen::Index k = 1; k <= n; ++k) {
        if (k == n || ev(k) - ev(k - 1) > tol) {
            const Eigen::Index m = k - start;
            levels.push_back(ev.segment(start, m).mean());
            const Matrix V = e.eigenvectors.middleCols(start, m);
            e.projectors.push_back(V * V.adjoint());
            start = k;
        }
    }
    e.energies = Eigen::Map<RealVector>(levels.data(), static_cast<Eigen::Index>(levels.size()));
    return e;
}

int JumpOperatorSet::conjugate_index(int k) const {
    const double target = -bohr[static_cast<std::size_t>(k)];
    for (int q = 0; q < n_bohr(); ++q)
        if (bohr[static_cast<std::size_t>(q)] == target) return q;
    return -1;
}

std::vector<Matrix> JumpOperatorSet::flat() const {
    std::vector<Matrix> out;
    for (const auto& row : ops)
        for (const auto& op : row) out.push_back(op);
    return out;
}

JumpOperatorSet jump_operators(const EigenDecomposition& eig, const std::vector<Matrix>& S) {
    JumpOperatorSet j;
    j.H = eig.H;
    j.couplings = S;
    const Eigen::Index d = eig.H.rows();
    for (const auto& s : S)
        if (s.rows() != d || s.cols() != d) throw ValidationError("jump_operators: coupling dimension mismatch");

    const auto L = static_cast<int>(eig.energies.size());
    const double tol = eig.tau_deg * eig.spectral_range;

    // Positive differences, clustered; negatives mirror them exactly.
    std::vector<double> diffs;
    for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b)
            if (eig.energies(b) > eig.energies(a)) diffs.push_back(eig.energies(b) - eig.energies(a));
    std::sort(diffs.begin(), diffs.end());
    std::vector<double> reps;
    for (std::size_t k = 0; k < diffs.size();) {
        std::size_t m = k + 1;
        while (m < diffs.size() && diffs[m] - diffs[m - 1] <= tol) ++m;
        double sum = 0.0;
        for (std::size_t q = k; q < m; ++q) sum += diffs[q];
        reps.push_back(sum / static_cast<double>(m - k));
        k = m;
    }
    std::vector<double> all;
    for (auto it = reps.rbegin(); it != reps.rend(); ++it) all.push_back(-*it);
    all.push_back(0.0);
    for (double r : reps) all.push_back(r);

    auto find = [&](double w) {
        int best = 0;
        double dist = std::abs(all[0] - w);
        for (int q = 1; q < static_cast<int>(all.size()); ++q) {
            const double dq = std::abs(all[static_cast<std::size_t>(q)] - w);
            if (dq < dist) {
                dist = dq;
                best = q;
            }
        }
        return best;
    };

    const std::size_t n = S.size();
    std::vector<std::vector<Matrix>> acc(all.size(), std::vector<Matrix>(n, Matrix::Zero(d, d)));
    for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b) {
            const int k = find(eig.energies(b) - eig.energies(a));
            for (std::size_t i = 0; i < n; ++i)
                acc[static_cast<std::size_t>(k)][i] += eig.projectors[static_cast<std::size_t>(a)] * S[i] *
                                                        eig.projectors[static_cast<std::size_t>(b)];
        }

    double smax = 0.0;
    for (const auto& s : S) smax = std::max(smax, s.norm());
    const double keep = 1e-14 * std::max(smax, 1e-300);
    for (std::size_t k = 0; k < all.size(); ++k) {
        double m = 0.0;
        for (const auto& op : acc[k]) m = std::max(m, op.norm());
        if (m > keep) {
            j.bohr.push_back(all[k]);
            j.ops.push_back(acc[k]);
        }
        if (all[k] == 0.0)
            for (std::size_t i = 0; i < n; ++i)
                if (acc[k][i].norm() > 1e-10 * S[i].norm())
                    j.warnings.push_back("coupling " + std::to_string(i) +
                                         " has a component commuting with H (omega = 0 jump operator)");
    }
    return j;
}

JumpOperatorSet jump_operators(const Matrix& H, const std::vector<Matrix>& S, double tau_deg) {
    return jump_operators(decompose(H, tau_deg), S);
}

EigenoperatorResidual verify_eigenoperator(const EigenDecomposition& eig, const JumpOperatorSet& jset) {
    EigenoperatorResidual r;
    const Matrix& H = eig.H;
    const int nb = jset.n_bohr(), n = jset.n_couplings();
    for (int k = 0; k < nb; ++k) {
        const double w = jset.bohr[static_cast<std::size_t>(k)];
        for (int i = 0; i < n; ++i) {
            const Matrix& s = jset.ops[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            r.first_kind = std::max(r.first_kind, (commutator(H, s) + w * s).norm());
        }
    }
    for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) {
            const double dw = jset.bohr[static_cast<std::size_t>(k)] - jset.bohr[static_cast<std::size_t>(l)];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const Matrix p = jset.ops[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].adjoint() *
                                     jset.ops[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
                    r.second_kind = std::max(r.second_kind, (commutator(H, p) - dw * p).norm());
                }
        }
    for (int i = 0; i < n; ++i) {
        Matrix sum = Matrix::Zero(jset.dim(), jset.dim());
        for (int k = 0; k < nb; ++k) sum += jset.ops[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        r.completeness = std::max(r.completeness, (sum - jset.couplings[static_cast<std::size_t>(i)]).norm());
    }
    for (int k = 0; k < nb; ++k) {
        const int q = jset.conjugate_index(k);
        for (int i = 0; i < n; ++i) {
            const Matrix& s = jset.ops[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            const double d = q < 0 ? s.norm()
                                   : (jset.ops[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)] - s.adjoint()).norm();
            r.conjugation = std::max(r.conjugation, d);
        }
    }
    return r;
}

Matrix interaction_picture_coupling(const JumpOperatorSet& jset, int i, double t) {
    Matrix out = Matrix::Zero(jset.dim(), jset.dim());
    for (int k = 0; k < jset.n_bohr(); ++k)
        out += std::exp(-I1 * (jset.bohr[static_cast<std::size_t>(k)] * t)) *
               jset.ops[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    return out;
}

Matrix diagonal_projection(const EigenDecomposition& eig, const Matrix& x) {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& p : eig.projectors) out += p * x * p;
    return out;
}

} // namespace rwc
