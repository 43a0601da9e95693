#include "rwc/meanforce.hpp"

#include <cmath>

#include "rwc/cumulant.hpp"

namespace rwc {

namespace {

constexpr int kMaxTerms = 60;
constexpr double kRelTol = 1e-14;

// B_1, B_2, ... until the norm drops below tolerance relative to the first.
std::vector<Matrix> zassenhaus_terms(const Matrix& A, const Matrix& B) {
    std::vector<Matrix> out;
    Matrix ad = B;
    const double ref = B.norm();
    double fact = 1.0;
    for (int m = 1; m <= kMaxTerms; ++m) {
        fact *= m;
        out.push_back(ad / fact);
        if (out.back().norm() < kRelTol * ref) return out;
        ad = A * ad - ad * A;
    }
    throw NumericalError("zassenhaus_truncated: inner sum did not converge within 60 terms");
}

} // namespace

Matrix zassenhaus_truncated(const Matrix& A, const Matrix& B, int p_max) {
    if (p_max != 1 && p_max != 2) throw ValidationError("zassenhaus_truncated: p_max must be 1 or 2");
    if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols())
        throw ValidationError("zassenhaus_truncated: shape mismatch");
    const Eigen::Index d = A.rows();
    const Matrix eA = matrix_exponential(A);
    if (B.norm() == 0.0) return eA;
    const std::vector<Matrix> Bm = zassenhaus_terms(A, B);
    Matrix sum = Matrix::Identity(d, d);
    for (const Matrix& b : Bm) sum += b;
    if (p_max == 2) {
        const auto n = static_cast<int>(Bm.size());
        for (int n1 = 1; n1 <= n; ++n1)
            for (int n2 = 1; n2 <= n; ++n2)
                sum += (static_cast<double>(n1) / (n1 + n2)) * (Bm[n2 - 1] * Bm[n1 - 1]);
    }
    return sum * eA;
}

HermitianOperator mf_correction_1(const std::vector<Matrix>& S, const RealVector& expectations) {
    if (S.empty()) throw ValidationError("mf_correction_1: no coupling operators");
    if (static_cast<Eigen::Index>(S.size()) != expectations.size())
        throw ValidationError("mf_correction_1: one expectation per coupling required");
    Matrix h = Matrix::Zero(S.front().rows(), S.front().cols());
    for (std::size_t i = 0; i < S.size(); ++i) h += expectations(static_cast<Eigen::Index>(i)) * S[i];
    return HermitianOperator(h);
}

namespace {

struct ShiftCache {
    double s, ds;
};

cplx upsilon_from(const BathModel& bath, int i, int j, double w, double wp, const ShiftCache& a,
                  const ShiftCache& b, const ShiftCache& ma, const ShiftCache& mb) {
    // a = S(w), b = S(w'), ma = S(-w), mb = S(-w')
    const double beta = bath.beta();
    const cplx cij = bath.coupling_matrix()(i, j), cji = bath.coupling_matrix()(j, i);
    const double x = beta * (wp - w);
    if (std::abs(x) < 1e-6)
        return cij * a.s - (cij * a.ds - std::exp(beta * w) * cji * ma.ds) / beta;
    const double num_a = std::exp(x), den = std::expm1(x);
    return (num_a * cij * a.s - cij * b.s - std::exp(beta * wp) * cji * (mb.s - ma.s)) / den;
}

ShiftCache shift_at(const BathModel& bath, double w) { return {bath.shift(w), bath.shift_derivative(w)}; }

} // namespace

cplx upsilon2(const BathModel& bath, int i, int j, double omega, double omega_p) {
    if (i < 0 || j < 0 || i >= bath.n() || j >= bath.n()) throw ValidationError("upsilon2: index out of range");
    if (bath.zero_temperature()) throw ValidationError("upsilon2: requires finite beta");
    if (bath.is_zero()) return 0.0;
    return upsilon_from(bath, i, j, omega, omega_p, shift_at(bath, omega), shift_at(bath, omega_p),
                        shift_at(bath, -omega), shift_at(bath, -omega_p));
}

Matrix upsilon_table(const JumpOperatorSet& jset, const BathModel& bath) {
    if (bath.zero_temperature()) throw ValidationError("upsilon_table: requires finite beta");
    const int n = jset.n_couplings(), nb = jset.n_bohr();
    if (bath.n() != n) throw ValidationError("upsilon_table: coupling count mismatch");
    Matrix u = Matrix::Zero(nb * n, nb * n);
    if (bath.is_zero()) return u;
    std::vector<ShiftCache> pos(nb), neg(nb);
    for (int k = 0; k < nb; ++k) {
        pos[k] = shift_at(bath, jset.bohr[k]);
        neg[k] = shift_at(bath, -jset.bohr[k]);
    }
    for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    u(p * n + i, q * n + j) =
                        upsilon_from(bath, i, j, jset.bohr[p], jset.bohr[q], pos[p], pos[q], neg[p], neg[q]);
    return u;
}

namespace {

Matrix upsilon_sum(const JumpOperatorSet& jset, const Matrix& u) {
    const int n = jset.n_couplings(), nb = jset.n_bohr();
    Matrix h = Matrix::Zero(jset.dim(), jset.dim());
    for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const cplx v = u(p * n + i, q * n + j);
                    if (v != 0.0) h += v * jset.ops[p][i].adjoint() * jset.ops[q][j];
                }
    return h;
}

} // namespace

HermitianOperator mf_correction_2(const JumpOperatorSet& jset, const BathModel& bath) {
    return HermitianOperator(upsilon_sum(jset, upsilon_table(jset, bath)), 1e-10);
}

CorrectionDiscrepancy correction_discrepancy(const JumpOperatorSet& jset, const BathModel& bath, double lambda,
                                             double tau_deg) {
    if (bath.zero_temperature()) throw ValidationError("correction_discrepancy: requires finite beta");
    const Eigen::Index d = jset.dim();
    CorrectionDiscrepancy out{Matrix::Zero(d, d), Matrix::Zero(d, d), 0.0};
    if (bath.is_zero()) return out;
    const int n = jset.n_couplings();
    const Matrix& c = bath.coupling_matrix();
    const double beta = bath.beta();
    for (int k = 0; k < jset.n_bohr(); ++k) {
        const double w = jset.bohr[k];
        const double dp = bath.shift_derivative(w), dm = bath.shift_derivative(-w);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const cplx coef = -(c(i, j) * dp - std::exp(beta * w) * c(j, i) * dm) / beta;
                if (coef != 0.0) out.closed += coef * jset.ops[k][i].adjoint() * jset.ops[k][j];
            }
    }
    const Matrix hmf = mf_correction_2(jset, bath).matrix();
    const Matrix hc = second_correction(jset, bath, kInfiniteTime).matrix();
    const Matrix H2 = jset.H + lambda * lambda * hc;
    const JumpOperatorSet j2 = jump_operators(H2, jset.couplings, tau_deg);
    const Matrix hc2 = second_correction(j2, bath, kInfiniteTime).matrix();
    out.direct = diagonal_projection(decompose(jset.H, tau_deg), hmf - hc2);
    const double ref = out.closed.norm();
    out.relative = ref > 0.0 ? (out.direct - out.closed).norm() / ref : (out.direct - out.closed).norm();
    return out;
}

MeanForceResult compute_mean_force(const Matrix& H_S0, const std::vector<Matrix>& S, const BathModel& bath,
                                   double lambda, double tau_deg) {
    const HermitianOperator h0(H_S0);
    const RealVector off = bath.offsets().size() ? bath.offsets() : RealVector::Zero(static_cast<Eigen::Index>(S.size()));
    const HermitianOperator c1 = mf_correction_1(S, off);
    const Matrix h1 = h0.matrix() + lambda * c1.matrix();
    JumpOperatorSet jset = jump_operators(h1, S, tau_deg);
    Matrix u = upsilon_table(jset, bath);
    const HermitianOperator c2(upsilon_sum(jset, u), 1e-10);
    const Matrix h2 = lambda * lambda * c2.matrix();
    const HermitianOperator hmf(h1 + h2, 1e-10);
    return {HermitianOperator(lambda * c1.matrix()),
            HermitianOperator(h2, 1e-10),
            hmf,
            gibbs_state(hmf.matrix(), bath.beta()),
            std::move(jset),
            std::move(u),
            operator_norm(commutator(h1, h2))};
}

} // namespace rwc
