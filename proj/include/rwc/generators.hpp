// generators.hpp - Davies-GKSL, Lamb-Stark, Bloch-Redfield and renormalization

#pragma once

#include <limits>
#include <vector>

#include "rwc/bath.hpp"
#include "rwc/operators.hpp"
#include "rwc/spectral.hpp"

namespace rwc {

enum class Picture { interaction, schroedinger };

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

struct GeneratorOptions {
    bool include_lamb_stark{false};
    Picture picture{Picture::schroedinger};
    bool renormalized{true}; // forces include_lamb_stark = false
    double lambda{1.0};

    GeneratorOptions normalized() const {
        GeneratorOptions o = *this;
        if (o.renormalized) o.include_lamb_stark = false;
        return o;
    }
};

// X -> sum_ab k(a,b) (A_a X A_b^dag - 1/2 {A_b^dag A_a, X})
Superoperator kernel_dissipator(const std::vector<Matrix>& ops, const Matrix& k);

struct CenteringResult {
    HermitianOperator H_C1; // sum_i S_i <R_i>
    HermitianOperator H_S1; // H_S0 + lambda H_C1
};
CenteringResult centering_correction(const Matrix& H_S0, const std::vector<Matrix>& S,
                                     const RealVector& offsets, double lambda = 1.0);

HermitianOperator lamb_stark_hamiltonian(const JumpOperatorSet& jset, const BathModel& bath);

// Davies rates in kernel layout: block-diagonal in w, entry (k n + a, k n + b) = gamma_ba(w_k).
Matrix davies_kernel(const JumpOperatorSet& jset, const BathModel& bath);

Superoperator davies_generator(const JumpOperatorSet& jset, const BathModel& bath, const GeneratorOptions& opts);

// G(w_k, t) for every Bohr frequency; t = kInfiniteTime gives Gamma(w_k).
std::vector<cplx> unit_Gammas(const JumpOperatorSet& jset, const BathModel& bath, double t);

// Redfield kernel e^{i(w'-w)t}(Gamma^(t)_ji(w) + Gamma^(t)*_ij(w')), phase dropped in the
// Schroedinger picture or at t = infinity.
Matrix redfield_kernel(const JumpOperatorSet& jset, const BathModel& bath, double t, Picture picture);

// L_BR(t); the Schroedinger picture adds -i[H,.] with H = jset.H.
Superoperator redfield_generator(const JumpOperatorSet& jset, const BathModel& bath, double t,
                                 Picture picture = Picture::interaction, double lambda = 1.0);

struct RenormalizedSetup {
    HermitianOperator H_ren;
    GeneratorOptions options;
    JumpOperatorSet jset;
};
// Steps of the simplified recipe: H_S1 is the physical Hamiltonian, the
// Lamb-Stark term is skipped, jump operators are rebuilt on H_S1.
RenormalizedSetup renormalize_simplified(const Matrix& H_S0, const std::vector<Matrix>& S, const BathModel& bath,
                                         GeneratorOptions opts, double tau_deg = 1e-9);

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;
    std::vector<double> trace_defect;
    std::vector<double> min_eigenvalue;
};

// rho(t) = e^{L t} rho0 with the Davies generator; interaction-picture states are
// rotated back with e^{iHt}, H = jset.H.
Trajectory evolve_davies(const JumpOperatorSet& jset, const BathModel& bath, const DensityMatrix& rho0,
                         const std::vector<double>& times, const GeneratorOptions& opts);

// Time-dependent Redfield equation integrated in the Schroedinger picture with RK4 until
// the generator has saturated, then propagated with e^{L_BR(inf) t}. Without renormalization
// the Hamiltonian carries + lambda^2 H_C2(t).
Trajectory evolve_redfield(const JumpOperatorSet& jset, const BathModel& bath, const DensityMatrix& rho0,
                           const std::vector<double>& times, Picture picture, double lambda = 1.0,
                           bool renormalized = true);

// sum (G_ij(w', t) - G_ji(w, t)^*)/2i S_i(w)^dag S_j(w'), t = kInfiniteTime allowed.
Matrix counterterm_hamiltonian(const JumpOperatorSet& jset, const BathModel& bath, double t);

// Rotate a Schroedinger-picture state into the interaction picture of H.
Matrix to_interaction_picture(const Matrix& H, const Matrix& rho, double t);

// Hamiltonian part of a generator in the GKSL normal form with traceless jump operators.
Matrix hamiltonian_part(const Superoperator& L);

} // namespace rwc
