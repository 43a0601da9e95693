// cumulant.hpp - second-order cumulant equation: kernels, counterterm, evolution

#pragma once

#include <vector>

#include "rwc/bath.hpp"
#include "rwc/generators.hpp"
#include "rwc/operators.hpp"
#include "rwc/spectral.hpp"

namespace rwc {

// Rows (w,i) and columns (w',j), flattened as k * n + i.
struct CumulantKernel {
    double t{0.0};
    std::vector<double> bohr;
    int n{1};
    Matrix gamma;
    Matrix xi;
};

// Scalar kernels of the unit-weight bath:
// k(w,w',t) = int_0^t int_0^t ds dv e^{i(w' s - w v)} C(s - v),
// xi(w,w',t) = (1/2i) int_0^t W(u)[e^{iwu} C(u) - e^{-iw'u} C(u)^*] du.
struct ScalarKernels {
    Matrix k;
    Matrix xi;
};
ScalarKernels scalar_kernels(const std::vector<double>& bohr, const BathModel& bath, double t);

CumulantKernel gamma_kernel(const std::vector<double>& bohr, const BathModel& bath, double t);
CumulantKernel gamma_kernel(const JumpOperatorSet& jset, const BathModel& bath, double t);

// Frequency-domain single integral with the sinc product; cross-check route.
cplx gamma_kernel_sinc(const BathModel& bath, double omega, double omega_p, double t);
// Brute-force 2-D quadrature over C(s - v); oracle route, grid capped at 2000 x 2000.
cplx gamma_kernel_direct(const BathModel& bath, double omega, double omega_p, double t);
cplx xi_kernel(const BathModel& bath, double omega, double omega_p, double t);

// Long-time forms built from gamma, S and their frequency derivatives.
cplx gamma_kernel_longtime(const BathModel& bath, double omega, double omega_p, double t);
cplx xi_kernel_longtime(const BathModel& bath, double omega, double omega_p, double t);

// H_C2(t) = sum (Gamma^(t)_ij(w') - Gamma^(t)*_ji(w))/2i S_i(w)^dag S_j(w'); t = kInfiniteTime uses Gamma.
HermitianOperator second_correction(const JumpOperatorSet& jset, const BathModel& bath, double t);

// lambda^2 sum gamma_ij(w,w',t) (S_i(w) X S_j(w')^dag - 1/2 {S_j(w')^dag S_i(w), X})
Superoperator cumulant_superoperator(const JumpOperatorSet& jset, const CumulantKernel& kernel, double lambda = 1.0);

// Lambda(t) = sum xi_ij(w,w',t) S_j(w')^dag S_i(w); the Hamiltonian part of the bare cumulant.
HermitianOperator cumulant_hamiltonian(const JumpOperatorSet& jset, const CumulantKernel& kernel);

// -i t [H,.] + lambda^2 dissipator with e^{-it(w'-w)/2} gamma kernel.
Superoperator cumulant_schroedinger(const JumpOperatorSet& jset, const CumulantKernel& kernel, double lambda = 1.0);

// States in the requested picture; jset must be built on the physical Hamiltonian.
// With renormalized = false the generator also carries -i lambda^2 [Lambda(t), .].
Trajectory evolve_cumulant(const JumpOperatorSet& jset, const BathModel& bath, const DensityMatrix& rho0,
                           const std::vector<double>& times, Picture picture, double lambda = 1.0,
                           bool renormalized = true);

struct BrConsistency {
    double residual{0.0};   // ||dK/dt - L_BR||
    double reference{0.0};  // ||L_BR||
    double relative() const { return reference > 0.0 ? residual / reference : residual; }
};
BrConsistency br_consistency(const JumpOperatorSet& jset, const BathModel& bath, double t, double h,
                             double lambda = 1.0);

struct OdeRhs {
    Superoperator rhs;
    double tail_bound{0.0};
};
// sum_{k=0}^{n_max} ad_K^k(dK)/(k+1)!
OdeRhs cumulant_ode_rhs(const Superoperator& K, const Superoperator& dK, int n_max = 8);

} // namespace rwc
