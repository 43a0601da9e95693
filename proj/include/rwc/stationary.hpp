// stationary.hpp - steady states, Redfield stationary correction, coherence diagnostics

#pragma once

#include <string>
#include <vector>

#include "rwc/bath.hpp"
#include "rwc/operators.hpp"
#include "rwc/spectral.hpp"

namespace rwc {

struct SteadyState {
    DensityMatrix rho;
    int kernel_dim{0};
    std::vector<Matrix> basis;          // unit-trace Hermitian kernel elements
    std::vector<std::string> warnings;
};

// Unit-trace element of ker L via SVD; kernel directions are those with singular value
// below tol times the largest one.
SteadyState steady_state(const Superoperator& L, double tol = 1e-10);

// sum_{w != w'} f_ij(w, w') S_j(w')^dag S_i(w) with the long-time Redfield kernel; no lambda factor.
HermitianOperator redfield_delta_H(const JumpOperatorSet& jset, const BathModel& bath);

struct CoherenceReport {
    RealVector populations;   // in the eigenbasis of the reference Hamiltonian
    double coherence{0.0};    // off-diagonal 1-norm in that basis
};
CoherenceReport coherence_report(const Matrix& rho, const Matrix& H_basis);

struct SteadyStateReport {
    DensityMatrix steady;
    DensityMatrix reference;          // Gibbs state of the basis Hamiltonian
    double trace_distance{0.0};
    double population_distance{0.0}; // max |p_steady - p_ref| in the basis of H_basis
    double coherence{0.0};
    int kernel_dim{0};
    std::vector<std::string> warnings;
};
SteadyStateReport steady_state_report(const Superoperator& L, const Matrix& H_basis, double beta);

} // namespace rwc
