// spectral.hpp - eigenstructure, Bohr frequencies and jump operators

#pragma once

#include <string>
#include <vector>

#include "rwc/operators.hpp"

namespace rwc {

struct EigenDecomposition {
    Matrix H;                        // the decomposed Hamiltonian
    RealVector energies;             // merged levels, ascending
    std::vector<Matrix> projectors;  // one per level
    Matrix eigenvectors;             // columns ordered by eigenvalue
    double tau_deg{1e-9};
    double spectral_range{0.0};
};

EigenDecomposition decompose(const Matrix& H, double tau_deg = 1e-9);

struct JumpOperatorSet {
    Matrix H;
    std::vector<double> bohr;               // ascending
    std::vector<std::vector<Matrix>> ops;   // ops[k][i] = S_i(bohr[k])
    std::vector<Matrix> couplings;          // the S_i themselves
    std::vector<std::string> warnings;

    int n_couplings() const { return static_cast<int>(couplings.size()); }
    int n_bohr() const { return static_cast<int>(bohr.size()); }
    Eigen::Index dim() const { return H.rows(); }
    // Index of -bohr[k] in the list, or -1 when absent.
    int conjugate_index(int k) const;
    // Flattened operator list, entry k * n + i.
    std::vector<Matrix> flat() const;
};

JumpOperatorSet jump_operators(const EigenDecomposition& eig, const std::vector<Matrix>& S);
JumpOperatorSet jump_operators(const Matrix& H, const std::vector<Matrix>& S, double tau_deg = 1e-9);

struct EigenoperatorResidual {
    double first_kind{0.0};   // max ||[H, S_i(w)] + w S_i(w)||
    double second_kind{0.0};  // max ||[H, S_i(w)^dag S_j(w')] - (w - w') S_i(w)^dag S_j(w')||
    double completeness{0.0}; // max ||sum_w S_i(w) - S_i||
    double conjugation{0.0};  // max ||S_i(-w) - S_i(w)^dag||
};

EigenoperatorResidual verify_eigenoperator(const EigenDecomposition& eig, const JumpOperatorSet& jset);

// sum_w e^{-iwt} S_i(w), the interaction-picture coupling.
Matrix interaction_picture_coupling(const JumpOperatorSet& jset, int i, double t);

// Block-diagonal part of X in the eigenbasis of eig: sum_e P(e) X P(e).
Matrix diagonal_projection(const EigenDecomposition& eig, const Matrix& x);

} // namespace rwc
