#include "rwc/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace rwc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPanelOrder = 16;

struct GlRule {
    std::vector<double> x, w;
    GlRule() { gauss_legendre(kPanelOrder, x, w); }
};

const GlRule& panel_rule() {
    static const GlRule rule;
    return rule;
}

// Adds a GL panel on [a, b] to (u, w).
void add_panel(double a, double b, std::vector<double>& u, std::vector<double>& w) {
    const auto& r = panel_rule();
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t k = 0; k < r.x.size(); ++k) {
        u.push_back(mid + half * r.x[k]);
        w.push_back(half * r.w[k]);
    }
}

double tabulated_J(const TabulatedDensity& tab, double omega) {
    const double x = std::abs(omega);
    const auto& om = tab.omega;
    if (x < om.front() || x > om.back()) return 0.0;
    auto it = std::upper_bound(om.begin(), om.end(), x);
    if (it == om.end()) return tab.J.back();
    const std::size_t k = static_cast<std::size_t>(it - om.begin());
    if (k == 0) return tab.J.front();
    const double f = (x - om[k - 1]) / (om[k] - om[k - 1]);
    return tab.J[k - 1] + f * (tab.J[k] - tab.J[k - 1]);
}

// (e^{ixt} - 1)/(ix), equal to t at x = 0.
cplx phase_integral(double x, double t) {
    const double y = 0.5 * x * t;
    const double sinc = std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
    return std::exp(I1 * y) * (t * sinc);
}

struct ShiftIntegrand {
    const BathModel* bath;
    double omega;
    double g0;
};

double shift_integrand(double x, void* p) {
    auto* s = static_cast<ShiftIntegrand*>(p);
    const double d = s->omega - x;
    if (d == 0.0) return 0.0;
    return (s->bath->rate(x) - s->g0) / d;
}

} // namespace

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
    if (!t) throw NumericalError("gauss_legendre: allocation failed");
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &x[static_cast<std::size_t>(i)],
                                      &w[static_cast<std::size_t>(i)], t);
    gsl_integration_glfixed_table_free(t);
}

double spectral_density(const SpectralDensity& sd, double omega) {
    if (const auto* o = std::get_if<OhmicExponential>(&sd)) {
        const double x = std::abs(omega);
        if (x == 0.0) return 0.0;
        return o->kappa * std::pow(x, o->s) * std::pow(o->omega_c, 1.0 - o->s) * std::exp(-x / o->omega_c);
    }
    if (const auto* t = std::get_if<TabulatedDensity>(&sd)) return tabulated_J(*t, omega);
    throw ValidationError("spectral_density: a discrete mode set has no pointwise density");
}

// ---- BathModel ----

BathModel::BathModel(double beta, SpectralDensity sd, Matrix c, RealVector offsets)
    : beta_(beta), sd_(std::move(sd)), c_(std::move(c)), offsets_(std::move(offsets)) {
    if (!(beta_ > 0.0)) throw ValidationError("BathModel: beta must be positive");
    if (c_.rows() != c_.cols() || c_.rows() == 0) throw ValidationError("BathModel: c must be square");
    if (hermiticity_defect(c_) > 1e-12 * std::max(1.0, c_.norm()))
        throw ValidationError("BathModel: c must be Hermitian");
    c_ = hermitian_part(c_);
    const RealVector ev = hermitian_eigenvalues(c_);
    if (ev.minCoeff() < -1e-12 * std::max(ev.maxCoeff(), 0.0))
        throw ValidationError("BathModel: c must be positive semidefinite");
    if (offsets_.size() == 0) offsets_ = RealVector::Zero(c_.rows());
    if (offsets_.size() != c_.rows()) throw ValidationError("BathModel: offsets size mismatch");

    bool zero_density = false;
    if (auto* o = std::get_if<OhmicExponential>(&sd_)) {
        if (!(o->s > 0.0)) throw ValidationError("BathModel: Ohmic exponent must be positive");
        if (!(o->omega_c > 0.0)) throw ValidationError("BathModel: cutoff must be positive");
        if (!(o->kappa >= 0.0)) throw ValidationError("BathModel: kappa must be non-negative");
        zero_density = o->kappa == 0.0;
    } else if (auto* t = std::get_if<TabulatedDensity>(&sd_)) {
        if (t->omega.size() < 2 || t->omega.size() != t->J.size())
            throw ValidationError("BathModel: table needs at least two (omega, J) pairs");
        for (std::size_t k = 0; k < t->omega.size(); ++k) {
            if (t->omega[k] < 0.0 || t->J[k] < 0.0) throw ValidationError("BathModel: table entries must be >= 0");
            if (k > 0 && !(t->omega[k] > t->omega[k - 1]))
                throw ValidationError("BathModel: table frequencies must increase");
        }
        zero_density = std::all_of(t->J.begin(), t->J.end(), [](double j) { return j == 0.0; });
    } else {
        auto& m = std::get<ModeSet>(sd_);
        const std::size_t n = m.omega.size();
        if (n == 0 || m.g2.size() != n) throw ValidationError("BathModel: mode set sizes mismatch");
        if (m.emission.empty() && m.absorption.empty()) {
            for (double w : m.omega) {
                const double nb = std::isfinite(beta_) ? occupation(beta_, w) : 0.0;
                m.emission.push_back(nb + 1.0);
                m.absorption.push_back(nb);
            }
        }
        if (m.emission.size() != n || m.absorption.size() != n)
            throw ValidationError("BathModel: mode weights sizes mismatch");
        for (std::size_t k = 0; k < n; ++k)
            if (!(m.omega[k] > 0.0) || m.g2[k] < 0.0 || m.emission[k] < 0.0 || m.absorption[k] < 0.0)
                throw ValidationError("BathModel: invalid mode entry");
        zero_density = std::all_of(m.g2.begin(), m.g2.end(), [](double g) { return g == 0.0; });
    }
    zero_ = zero_density || c_.norm() == 0.0;
}

BathModel BathModel::empty(int n_couplings, double beta) {
    return BathModel(beta, OhmicExponential{1.0, 1.0, 0.0}, Matrix::Identity(n_couplings, n_couplings));
}

double BathModel::frequency_scale() const {
    if (const auto* o = std::get_if<OhmicExponential>(&sd_)) return o->omega_c;
    if (const auto* t = std::get_if<TabulatedDensity>(&sd_)) return t->omega.back();
    const auto& m = std::get<ModeSet>(sd_);
    return *std::max_element(m.omega.begin(), m.omega.end());
}

double BathModel::window(double omega) const {
    double w = std::holds_alternative<OhmicExponential>(sd_) ? 50.0 * frequency_scale() : frequency_scale();
    if (std::isfinite(beta_)) w = std::max(w, std::abs(omega) + 40.0 / beta_);
    return std::max(w, 2.0 * std::abs(omega));
}

double BathModel::correlation_time() const { return 1.0 / frequency_scale(); }

double BathModel::correlation_frequency() const {
    return std::holds_alternative<OhmicExponential>(sd_) ? 0.0 : frequency_scale();
}

double BathModel::rate(double omega) const {
    if (zero_) return 0.0;
    if (is_discrete()) return 0.0;
    if (omega == 0.0) {
        if (const auto* o = std::get_if<OhmicExponential>(&sd_)) {
            if (o->s == 1.0) return std::isfinite(beta_) ? o->kappa / beta_ : 0.0;
            if (o->s > 1.0) return 0.0;
            throw NumericalError("bath: rate at omega = 0 diverges for s < 1");
        }
        const auto& t = std::get<TabulatedDensity>(sd_);
        if (t.omega.front() == 0.0 && t.J.front() > 0.0)
            throw NumericalError("bath: rate at omega = 0 diverges for J(0) > 0");
        if (!std::isfinite(beta_)) return 0.0;
        const double h = 1e-9 * t.omega.back();
        return spectral_density(sd_, h) / (beta_ * h);
    }
    const double j = spectral_density(sd_, omega);
    if (j == 0.0) return 0.0;
    return j / std::abs(std::expm1(-beta_ * omega));
}

double BathModel::shift(double omega) const {
    if (zero_) return 0.0;
    if (const auto* m = std::get_if<ModeSet>(&sd_)) {
        double s = 0.0;
        for (std::size_t k = 0; k < m->omega.size(); ++k) {
            const double dm = omega - m->omega[k], dp = omega + m->omega[k];
            if (dm == 0.0 || dp == 0.0) throw NumericalError("bath: shift evaluated on a mode frequency");
            s += m->g2[k] * (m->emission[k] / dm + m->absorption[k] / dp);
        }
        return s;
    }
    const double W = window(omega);
    std::vector<double> pts{-W, W};
    if (std::abs(omega) < W) pts.push_back(omega);
    if (omega != 0.0) pts.push_back(0.0);
    if (const auto* t = std::get_if<TabulatedDensity>(&sd_))
        for (double x : t->omega)
            if (x > 0.0 && x < W) {
                pts.push_back(x);
                pts.push_back(-x);
            }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double g0 = rate(omega);
    ShiftIntegrand data{this, omega, g0};
    gsl_function f{&shift_integrand, &data};
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    const std::size_t limit = std::max<std::size_t>(4000, 4 * pts.size());
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(limit);
    double result = 0.0, abserr = 0.0;
    const double scale = std::max(std::abs(g0), rate(frequency_scale()));
    const int status = gsl_integration_qagp(&f, pts.data(), pts.size(), 1e-15 * scale, 1e-11, limit, ws,
                                            &result, &abserr);
    gsl_integration_workspace_free(ws);
    gsl_set_error_handler(old);
    if (status != GSL_SUCCESS && !(abserr <= 1e-8 * std::max(std::abs(result), scale)))
        throw NumericalError("bath: principal-value quadrature did not converge at omega = " +
                             std::to_string(omega) + " (" + gsl_strerror(status) + ")");
    result += g0 * std::log((W + omega) / (W - omega));
    return result / kTwoPi;
}

double BathModel::shift_derivative(double omega) const {
    if (zero_) return 0.0;
    if (const auto* m = std::get_if<ModeSet>(&sd_)) {
        double s = 0.0;
        for (std::size_t k = 0; k < m->omega.size(); ++k) {
            const double dm = omega - m->omega[k], dp = omega + m->omega[k];
            s -= m->g2[k] * (m->emission[k] / (dm * dm) + m->absorption[k] / (dp * dp));
        }
        return s;
    }
    const double h = 1e-4 * frequency_scale();
    return (shift(omega + h) - shift(omega - h)) / (2.0 * h);
}

double BathModel::rate_derivative(double omega) const {
    if (zero_ || is_discrete()) return 0.0;
    const double h = 1e-4 * frequency_scale();
    return (rate(omega + h) - rate(omega - h)) / (2.0 * h);
}

cplx BathModel::correlation(double tau) const {
    if (zero_) return 0.0;
    if (const auto* o = std::get_if<OhmicExponential>(&sd_)) {
        const double p = o->s + 1.0;
        const double pref = o->kappa * std::pow(o->omega_c, 1.0 - o->s) * std::tgamma(p) / kTwoPi;
        const cplx z(1.0 / o->omega_c, tau);
        if (!std::isfinite(beta_)) return pref * std::pow(z, -p);
        return pref * std::pow(beta_, -p) *
               (hurwitz_zeta(p, z / beta_) + hurwitz_zeta(p, 1.0 + std::conj(z) / beta_));
    }
    if (const auto* m = std::get_if<ModeSet>(&sd_)) {
        cplx c = 0.0;
        for (std::size_t k = 0; k < m->omega.size(); ++k) {
            const cplx ph = std::exp(-I1 * (m->omega[k] * tau));
            c += m->g2[k] * (m->emission[k] * ph + m->absorption[k] * std::conj(ph));
        }
        return c;
    }
    // Tabulated: (1/2pi) int [gamma(W) e^{-iW tau} + gamma(-W) e^{iW tau}] dW over the table.
    const auto& t = std::get<TabulatedDensity>(sd_);
    std::vector<double> u, w;
    const double hmax = std::abs(tau) > 0.0 ? 3.0 / std::abs(tau) : t.omega.back();
    for (std::size_t k = 0; k + 1 < t.omega.size(); ++k) {
        const double a = t.omega[k], b = t.omega[k + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
        for (int q = 0; q < n; ++q) add_panel(a + (b - a) * q / n, a + (b - a) * (q + 1) / n, u, w);
    }
    cplx c = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const cplx ph = std::exp(-I1 * (u[k] * tau));
        c += w[k] * (rate(u[k]) * ph + rate(-u[k]) * std::conj(ph));
    }
    return c / kTwoPi;
}

// ---- free functions ----

double occupation(double beta, double omega) {
    if (omega == 0.0) throw ValidationError("occupation: omega = 0 has no finite occupation");
    if (!std::isfinite(beta)) return omega > 0.0 ? 0.0 : -1.0;
    return 1.0 / std::expm1(beta * omega);
}

cplx gamma_rate(const BathModel& bath, int i, int j, double omega) {
    return bath.coupling_matrix()(i, j) * bath.rate(omega);
}

cplx lamb_shift_S(const BathModel& bath, int i, int j, double omega) {
    return bath.coupling_matrix()(i, j) * bath.shift(omega);
}

cplx half_fourier_Gamma(const BathModel& bath, int i, int j, double omega) {
    return bath.coupling_matrix()(i, j) * cplx(0.5 * bath.rate(omega), bath.shift(omega));
}

cplx correlation_function(const BathModel& bath, int i, int j, double tau) {
    return bath.coupling_matrix()(i, j) * bath.correlation(tau);
}

cplx finite_time_Gamma(const BathModel& bath, int i, int j, double omega, double t) {
    if (t < 0.0) throw ValidationError("finite_time_Gamma: t must be >= 0");
    if (t == 0.0 || bath.is_zero()) return 0.0;
    const TimeQuadrature q = build_time_quadrature(bath, t, std::abs(omega));
    return bath.coupling_matrix()(i, j) * half_line_moments(q, omega).G;
}

cplx finite_time_Gamma_spectral(const BathModel& bath, int i, int j, double omega, double t) {
    if (t < 0.0) throw ValidationError("finite_time_Gamma_spectral: t must be >= 0");
    if (t == 0.0 || bath.is_zero()) return 0.0;
    const cplx c = bath.coupling_matrix()(i, j);
    if (const auto* m = std::get_if<ModeSet>(&bath.spectral())) {
        cplx g = 0.0;
        for (std::size_t k = 0; k < m->omega.size(); ++k)
            g += m->g2[k] * (m->emission[k] * phase_integral(omega - m->omega[k], t) +
                             m->absorption[k] * phase_integral(omega + m->omega[k], t));
        return c * g;
    }
    const double W = bath.window(omega);
    std::vector<double> pts{-W, 0.0, W};
    if (omega != 0.0) pts.push_back(omega);
    if (const auto* tab = std::get_if<TabulatedDensity>(&bath.spectral()))
        for (double x : tab->omega)
            if (x > 0.0 && x < W) {
                pts.push_back(x);
                pts.push_back(-x);
            }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double hmax = std::min(3.0 / t, 0.25 * bath.frequency_scale());
    std::vector<double> u, w;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double a = pts[k], b = pts[k + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
        for (int p = 0; p < n; ++p) add_panel(a + (b - a) * p / n, a + (b - a) * (p + 1) / n, u, w);
    }
    cplx g = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) g += w[k] * bath.rate(u[k]) * phase_integral(omega - u[k], t);
    return c * g / kTwoPi;
}

TimeQuadrature build_time_quadrature(const BathModel& bath, double t, double omega_abs_max) {
    TimeQuadrature q;
    q.t = t;
    if (t <= 0.0) return q;
    const double tc = bath.correlation_time();
    double hcap = 3.0 / (omega_abs_max + bath.correlation_frequency() + 1e-300);
    if (std::isfinite(bath.beta())) hcap = std::min(hcap, bath.beta());
    double a = 0.0;
    while (a < t) {
        const double h = std::min(hcap, tc + 0.5 * a);
        const double b = std::min(t, a + h);
        add_panel(a, b, q.u, q.w);
        a = b;
    }
    q.c.resize(q.u.size());
    for (std::size_t k = 0; k < q.u.size(); ++k) q.c[k] = bath.correlation(q.u[k]);
    return q;
}

HalfLineMoments half_line_moments(const TimeQuadrature& q, double omega) {
    HalfLineMoments m{0.0, 0.0};
    for (std::size_t k = 0; k < q.u.size(); ++k) {
        const cplx f = q.w[k] * std::exp(I1 * (omega * q.u[k])) * q.c[k];
        m.G += f;
        m.M += q.u[k] * f;
    }
    return m;
}

cplx hurwitz_zeta(double s, cplx a) {
    if (!(s > 1.0)) throw ValidationError("hurwitz_zeta: s must exceed 1");
    if (!(a.real() > 0.0)) throw ValidationError("hurwitz_zeta: Re a must be positive");
    // Euler-Maclaurin with the tail starting at a + N.
    static constexpr double B2k[] = {1.0 / 6.0,   -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
                                     5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};
    const int N = std::max(0, static_cast<int>(std::ceil(16.0 - std::abs(a))));
    cplx sum = 0.0;
    for (int n = 0; n < N; ++n) sum += std::pow(a + static_cast<double>(n), -s);
    const cplx z = a + static_cast<double>(N);
    const cplx zs = std::pow(z, -s);
    sum += z * zs / (s - 1.0) + 0.5 * zs;
    cplx zpow = zs / z;      // z^{-s-1}
    const cplx zinv2 = 1.0 / (z * z);
    double rising = s;       // s (s+1) ... (s+2k-2)
    double fact = 2.0;       // (2k)!
    for (int k = 1; k <= 8; ++k) {
        const cplx term = B2k[k - 1] / fact * rising * zpow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        rising *= (s + 2 * k - 1) * (s + 2 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        zpow *= zinv2;
    }
    return sum;
}

} // namespace rwc
