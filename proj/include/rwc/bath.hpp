// bath.hpp - thermal bosonic bath: rates, shifts, correlation functions

#pragma once

#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "rwc/operators.hpp"

namespace rwc {

// J(w) = kappa * w^s * wc^(1-s) * exp(-|w|/wc)
struct OhmicExponential {
    double s{1.0};
    double omega_c{10.0};
    double kappa{1.0};
};

// (w, J(w)) pairs on w >= 0, linearly interpolated, zero outside the table.
struct TabulatedDensity {
    std::vector<double> omega;
    std::vector<double> J;
};

// Finite set of bosonic modes coupled with strengths |g_k|^2. The thermal
// weights emission[k] = <b b^dag> and absorption[k] = <b^dag b> may come from a
// truncated oscillator; rates are delta distributions at +/- omega_k.
struct ModeSet {
    std::vector<double> omega;
    std::vector<double> g2;
    std::vector<double> emission;
    std::vector<double> absorption;
};

using SpectralDensity = std::variant<OhmicExponential, TabulatedDensity, ModeSet>;

double spectral_density(const SpectralDensity& sd, double omega);

class BathModel {
public:
    BathModel() = default;
    // c: Hermitian PSD cross-coupling weights; offsets: <R_i> in the reservoir state.
    BathModel(double beta, SpectralDensity sd, Matrix c, RealVector offsets = {});

    static BathModel empty(int n_couplings, double beta = 1.0);

    double beta() const { return beta_; }
    const SpectralDensity& spectral() const { return sd_; }
    const Matrix& coupling_matrix() const { return c_; }
    const RealVector& offsets() const { return offsets_; }
    int n() const { return static_cast<int>(c_.rows()); }
    bool is_zero() const { return zero_; }
    bool is_discrete() const { return std::holds_alternative<ModeSet>(sd_); }
    bool zero_temperature() const { return !std::isfinite(beta_); }

    // Scalar functions of the unit-weight bath (the c_ij factor is stripped).
    double rate(double omega) const;             // gamma(w)
    double shift(double omega) const;            // S(w)
    double shift_derivative(double omega) const; // dS/dw
    double rate_derivative(double omega) const;  // dgamma/dw
    cplx correlation(double tau) const;          // C(tau)

    // Frequency scale: w_c, largest table frequency or largest mode frequency.
    double frequency_scale() const;
    // Integration window for principal-value integrals at frequency omega.
    double window(double omega) const;
    // Shortest time scale of C(u) near u = 0 and its late-time oscillation frequency.
    double correlation_time() const;
    double correlation_frequency() const;

private:
    double beta_{1.0};
    SpectralDensity sd_{OhmicExponential{}};
    Matrix c_;
    RealVector offsets_;
    bool zero_{false};
};

double occupation(double beta, double omega);

cplx gamma_rate(const BathModel& bath, int i, int j, double omega);
cplx lamb_shift_S(const BathModel& bath, int i, int j, double omega);
cplx half_fourier_Gamma(const BathModel& bath, int i, int j, double omega);
cplx correlation_function(const BathModel& bath, int i, int j, double tau);

// Gamma^(t)_ij(w) = c_ij * int_0^t e^{iwu} C(u) du, time-domain quadrature.
cplx finite_time_Gamma(const BathModel& bath, int i, int j, double omega, double t);
// Same quantity from (1/2pi) int dW gamma(W) (e^{i(w-W)t} - 1)/(i(w-W)).
cplx finite_time_Gamma_spectral(const BathModel& bath, int i, int j, double omega, double t);

// Composite Gauss-Legendre rule on [0, t] with C(u) sampled at the nodes.
// Panels are graded near u = 0 and limited so that e^{iwu} turns by at most
// a few radians per panel for |w| <= omega_abs_max.
struct TimeQuadrature {
    double t{0.0};
    std::vector<double> u;
    std::vector<double> w;
    std::vector<cplx> c;
};
TimeQuadrature build_time_quadrature(const BathModel& bath, double t, double omega_abs_max);

// G(w,t) = int_0^t e^{iwu} C(u) du and M(w,t) = int_0^t u e^{iwu} C(u) du.
struct HalfLineMoments {
    cplx G;
    cplx M;
};
HalfLineMoments half_line_moments(const TimeQuadrature& q, double omega);

// Complex Hurwitz zeta for s > 1, Re a > 0.
cplx hurwitz_zeta(double s, cplx a);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

} // namespace rwc
