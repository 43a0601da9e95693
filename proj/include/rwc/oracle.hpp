// oracle.hpp - system coupled to truncated harmonic modes: exact dynamics and reduced Gibbs state

#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "rwc/bath.hpp"
#include "rwc/operators.hpp"

namespace rwc {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr Eigen::Index kDenseOracleLimit = 4096;

struct TruncatedBath {
    RealVector omega;  // > 0
    Vector g;          // R = sum_k (conj(g_k) b_k + g_k b_k^dag)
    int n_max{4};      // highest Fock level per mode

    int modes() const { return static_cast<int>(omega.size()); }
    Eigen::Index bath_dim() const;
};

// Midpoint grid on (0, omega_max], |g_k|^2 = J(w_k) dw / (2 pi); omega_max <= 0 picks 6 x frequency scale.
TruncatedBath discretize_bath(const SpectralDensity& sd, int M, double omega_max = 0.0, int n_max = 4);

// Truncated Boltzmann weights of one mode, normalized.
RealVector thermal_weights(double beta, double omega, int n_max);

// Mode-set bath with the truncated thermal weights <b b^dag>, <b^dag b>; single coupling, c = 1.
BathModel to_bath_model(const TruncatedBath& tb, double beta);

// H_S0 x 1 + 1 x sum w_k b^dag b + lambda S x R, system factor first, mode 0 most significant.
HermitianOperator total_hamiltonian(const Matrix& H_S0, const Matrix& S, const TruncatedBath& tb, double lambda = 1.0);
SparseMatrix total_hamiltonian_sparse(const Matrix& H_S0, const Matrix& S, const TruncatedBath& tb,
                                      double lambda = 1.0);

struct OracleTrajectory {
    std::vector<double> times;
    std::vector<Matrix> states;       // Schroedinger picture
    double max_top_population{0.0};   // largest population of any mode's top Fock level
    std::vector<std::string> warnings;
};

// Time-dependent system term added to H_S0 (for counterterms); empty means none.
using SystemDrive = std::function<Matrix(double)>;

// rho_S(t) = Tr_R[U (rho_S0 x rho_R) U^dag] with rho_R the truncated thermal product state.
// Pure components below 1e-13 weight are dropped; propagation uses fourth-order Magnus
// steps of size <= dt with a Taylor series for the exponential action.
OracleTrajectory exact_reduced_evolution(const Matrix& H_S0, const Matrix& S, const TruncatedBath& tb, double lambda,
                                         double beta, const DensityMatrix& rho_S0, const std::vector<double>& times,
                                         const SystemDrive& drive = {}, double dt = 0.0);

// Tr_R[e^{-beta H}]/Tr[e^{-beta H}] by dense diagonalization.
DensityMatrix exact_mean_force(const HermitianOperator& H_tot, double beta, Eigen::Index d_S);

} // namespace rwc
