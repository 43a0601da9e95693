// meanforce.hpp - Zassenhaus expansion and mean-force Hamiltonian corrections

#pragma once

#include <vector>

#include "rwc/bath.hpp"
#include "rwc/operators.hpp"
#include "rwc/spectral.hpp"

namespace rwc {

// e^{A+B} ~ {1 + sum_{p<=p_max} sum_n c(n) B_{n_p}...B_{n_1}} e^A with B_m = ad_A^{m-1} B / m!.
// Inner sums stop once the term norm falls below 1e-14 of the running sum (at most 60 terms).
Matrix zassenhaus_truncated(const Matrix& A, const Matrix& B, int p_max);

// sum_i S_i <R_i>; same operator as the centering correction.
HermitianOperator mf_correction_1(const std::vector<Matrix>& S, const RealVector& expectations);

// Upsilon_ij(w, w'); the diagonal limit is taken when |w' - w| beta < 1e-6.
cplx upsilon2(const BathModel& bath, int i, int j, double omega, double omega_p);

// sum Upsilon_ij(w, w') S_i(w)^dag S_j(w'), without the lambda^2 factor.
HermitianOperator mf_correction_2(const JumpOperatorSet& jset, const BathModel& bath);

// Table of Upsilon in kernel layout: entry (p n + i, q n + j) = Upsilon_ij(w_p, w_q).
Matrix upsilon_table(const JumpOperatorSet& jset, const BathModel& bath);

struct CorrectionDiscrepancy {
    Matrix closed;   // -(1/beta) sum (S'_ij(w) - e^{beta w} S'_ji(-w)) S_i(w)^dag S_j(w)
    Matrix direct;   // diagonal part of H_mf,C2 - H_C2(infinity), the latter on H_S1 + lambda^2 H_C2
    double relative{0.0};
};
// jset is built on H_S1; the direct route uses the jump operators of the shifted Hamiltonian.
CorrectionDiscrepancy correction_discrepancy(const JumpOperatorSet& jset, const BathModel& bath, double lambda,
                                             double tau_deg = 1e-9);

struct MeanForceResult {
    HermitianOperator H_mf1;   // lambda sum S_i <R_i>
    HermitianOperator H_mf2;   // lambda^2 sum Upsilon S^dag S
    HermitianOperator H_mf;    // H_S0 + H_mf1 + H_mf2
    DensityMatrix gibbs;
    JumpOperatorSet jset;      // built on H_S0 + H_mf1
    Matrix upsilon;
    double commutator_norm{0.0}; // ||[H_S1, H_mf2]||
};

MeanForceResult compute_mean_force(const Matrix& H_S0, const std::vector<Matrix>& S, const BathModel& bath,
                                   double lambda, double tau_deg = 1e-9);

} // namespace rwc
