#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <sstream>

#include "rwc/cumulant.hpp"
#include "rwc/meanforce.hpp"
#include "rwc/oracle.hpp"
#include "rwc/scenario.hpp"
#include "rwc/spectral.hpp"
#include "rwc/stationary.hpp"

namespace rwc {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json header(const Scenario& sc, const char* command) {
    return {{"command", command},
            {"scenario", sc.name},
            {"scenario_hash", scenario_hash(sc)},
            {"metadata", sc.metadata},
            {"generated_at", utc_now()}};
}

// Physical Hamiltonian of the renormalized recipe; the bare one otherwise.
Matrix physical_hamiltonian(const Scenario& sc, const BathModel& bath) {
    if (!sc.renormalized) return sc.H;
    return centering_correction(sc.H, sc.S, bath.offsets(), sc.lambda).H_S1.matrix();
}

double reference_bohr(const JumpOperatorSet& jset) {
    double w = 0.0;
    for (double b : jset.bohr) w = std::max(w, b);
    return w > 0.0 ? w : 1.0;
}

Trajectory run_equation(const Scenario& sc, Equation eq, const JumpOperatorSet& jset, const BathModel& bath,
                        const DensityMatrix& rho0, const std::vector<double>& times, Picture picture,
                        double lambda) {
    switch (eq) {
    case Equation::davies: {
        GeneratorOptions o = sc.options();
        o.picture = picture;
        o.lambda = lambda;
        return evolve_davies(jset, bath, rho0, times, o);
    }
    case Equation::redfield:
        return evolve_redfield(jset, bath, rho0, times, picture, lambda, sc.renormalized);
    case Equation::cumulant:
        return evolve_cumulant(jset, bath, rho0, times, picture, lambda, sc.renormalized);
    }
    throw ValidationError("unknown equation");
}

json check(const std::string& name, double value, double tol, bool passed, json extra = json::object()) {
    json j = {{"name", name}, {"value", value}, {"tolerance", tol}, {"passed", passed}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

} // namespace

CommandResult cmd_evolve(const Scenario& sc) {
    const BathModel bath = sc.bath();
    const Matrix H = physical_hamiltonian(sc, bath);
    const JumpOperatorSet jset = jump_operators(H, sc.S);
    const DensityMatrix rho0 = sc.initial_state();
    const std::vector<double> times = sc.grid.values();
    const Trajectory tr = run_equation(sc, sc.equation, jset, bath, rho0, times, sc.picture, sc.lambda);

    const Eigen::Index d = H.rows();
    std::ostringstream csv;
    csv << "t";
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) csv << ",re_" << a << '_' << b << ",im_" << a << '_' << b;
    for (Eigen::Index k = 0; k < d; ++k) csv << ",p_" << k;
    csv << ",coherence,trace_defect,min_eigenvalue\r\n";

    json warnings = jset.warnings;
    double worst_trace = 0.0, worst_eig = 1.0;
    int violations = 0;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const Matrix& r = tr.states[k];
        const CoherenceReport cr = coherence_report(r, H);
        csv << fmt(tr.times[k]);
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = 0; b < d; ++b) csv << ',' << fmt(r(a, b).real()) << ',' << fmt(r(a, b).imag());
        for (Eigen::Index p = 0; p < d; ++p) csv << ',' << fmt(cr.populations(p));
        csv << ',' << fmt(cr.coherence) << ',' << fmt(tr.trace_defect[k]) << ',' << fmt(tr.min_eigenvalue[k]) << "\r\n";
        worst_trace = std::max(worst_trace, tr.trace_defect[k]);
        worst_eig = std::min(worst_eig, tr.min_eigenvalue[k]);
        if (tr.trace_defect[k] > 1e-9 || tr.min_eigenvalue[k] < -1e-9) ++violations;
    }
    if (violations)
        warnings.push_back(std::to_string(violations) + " states violate trace or positivity at 1e-9");

    const double w0 = reference_bohr(jset);
    const double gamma0 = bath.is_zero() ? 0.0 : sc.lambda * sc.lambda * bath.rate(w0);
    json rep = header(sc, "evolve");
    rep["equation"] = equation_name(sc.equation);
    rep["picture"] = sc.picture == Picture::interaction ? "interaction" : "schroedinger";
    rep["physical_hamiltonian"] = matrix_to_json(H);
    rep["bohr_frequencies"] = jset.bohr;
    rep["reference_rate"] = gamma0;
    rep["points"] = tr.times.size();
    rep["max_trace_defect"] = worst_trace;
    rep["min_eigenvalue"] = worst_eig;
    if (!tr.states.empty()) {
        rep["final_state"] = matrix_to_json(tr.states.back());
        if (std::isfinite(sc.beta))
            rep["final_distance_to_gibbs"] = trace_distance(tr.states.back(), gibbs_state(H, sc.beta));
    }
    rep["warnings"] = warnings;
    return {rep, csv.str(), 0};
}

CommandResult cmd_meanforce(const Scenario& sc) {
    if (!std::isfinite(sc.beta)) throw ValidationError("meanforce: requires finite beta");
    const BathModel bath = sc.bath();
    const MeanForceResult mf = compute_mean_force(sc.H, sc.S, bath, sc.lambda);
    json rep = header(sc, "meanforce");
    rep["H_mf1"] = matrix_to_json(mf.H_mf1.matrix());
    rep["H_mf2"] = matrix_to_json(mf.H_mf2.matrix());
    rep["H_mf"] = matrix_to_json(mf.H_mf.matrix());
    rep["gibbs_mf"] = matrix_to_json(mf.gibbs.matrix());
    rep["bohr_frequencies"] = mf.jset.bohr;
    rep["upsilon"] = matrix_to_json(mf.upsilon);
    rep["commutator_norm"] = mf.commutator_norm;
    rep["distance_mf_to_bare_gibbs"] = trace_distance(mf.gibbs, gibbs_state(sc.H, sc.beta));
    if (sc.oracle) {
        if (sc.S.size() != 1) throw ValidationError("meanforce: oracle comparison supports one coupling operator");
        TruncatedBath tb = discretize_bath(bath.spectral(), sc.oracle->modes, sc.oracle->omega_max, sc.oracle->n_max);
        tb.g *= std::sqrt(bath.coupling_matrix()(0, 0).real());
        const DensityMatrix exact = exact_mean_force(total_hamiltonian(sc.H, sc.S[0], tb, sc.lambda), sc.beta, sc.H.rows());
        const BathModel modes = to_bath_model(tb, sc.beta);
        const MeanForceResult mfm = compute_mean_force(sc.H, sc.S, modes, sc.lambda);
        rep["oracle"] = {{"dimension", sc.H.rows() * tb.bath_dim()},
                         {"exact_state", matrix_to_json(exact.matrix())},
                         {"distance_exact_to_mf_modes", trace_distance(exact, mfm.gibbs)},
                         {"distance_exact_to_mf_continuum", trace_distance(exact, mf.gibbs)},
                         {"distance_exact_to_bare_gibbs", trace_distance(exact, gibbs_state(sc.H, sc.beta))}};
    }
    return {rep, "", 0};
}

CommandResult cmd_verify(const Scenario& sc) {
    const BathModel bath = sc.bath();
    const Matrix H = physical_hamiltonian(sc, bath);
    const EigenDecomposition eig = decompose(H);
    const JumpOperatorSet jset = jump_operators(eig, sc.S);
    const double w0 = reference_bohr(jset);
    const double l2 = sc.lambda * sc.lambda;
    json checks = json::array();

    const EigenoperatorResidual res = verify_eigenoperator(eig, jset);
    const double hn = std::max(operator_norm(H), 1e-300);
    const double eo = std::max({res.first_kind, res.second_kind, res.completeness, res.conjugation});
    checks.push_back(check("eigenoperator", eo / hn, 1e-11, eo <= 1e-11 * hn));

    if (bath.is_zero() || sc.lambda == 0.0) {
        for (const char* n : {"kms", "kernel_psd", "cptp", "redfield_consistency", "long_time", "steady_state"})
            checks.push_back(check(n, 0.0, 0.0, true, {{"note", "no coupling"}}));
    } else {
        const bool finite_beta = std::isfinite(sc.beta);
        double kms = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double w = w0 * (0.1 + 2.9 * k / 19.0);
            const double g = bath.rate(w), gm = bath.rate(-w);
            const double target = finite_beta ? std::exp(-sc.beta * w) * g : 0.0;
            kms = std::max(kms, std::abs(gm - target) / g);
        }
        checks.push_back(check("kms", kms, 1e-10, kms <= 1e-10));

        const double gamma0 = l2 * std::max(bath.rate(w0), 1e-300);
        double psd = std::numeric_limits<double>::infinity();
        for (double t : {1.0 / w0, 10.0 / w0, 100.0 / w0}) {
            const RealVector ev = hermitian_eigenvalues(gamma_kernel(jset, bath, t).gamma);
            psd = std::min(psd, ev.minCoeff() / std::max(ev.maxCoeff(), 1e-300));
        }
        checks.push_back(check("kernel_psd", psd, -1e-9, psd >= -1e-9));

        double choi = std::numeric_limits<double>::infinity(), trd = 0.0;
        for (double f : {0.1, 1.0, 10.0}) {
            const CumulantKernel K = gamma_kernel(jset, bath, f / gamma0);
            const CptpReport r = is_cptp(cumulant_superoperator(jset, K, sc.lambda).exp(), 1e-9);
            choi = std::min(choi, r.min_choi_eig);
            trd = std::max(trd, r.trace_defect);
        }
        checks.push_back(check("cptp", choi, -1e-9, choi >= -1e-9 && trd <= 1e-10, {{"trace_defect", trd}}));

        double br = 0.0;
        for (double f : {0.5, 2.0, 5.0}) br = std::max(br, br_consistency(jset, bath, f / w0, 1e-4 / w0, sc.lambda).relative());
        checks.push_back(check("redfield_consistency", br, 1e-6, br <= 1e-6));

        const double wc = bath.frequency_scale();
        const double t1 = 20.0 / wc, t2 = 200.0 / wc;
        const CumulantKernel k1 = gamma_kernel(jset.bohr, bath, t1), k2 = gamma_kernel(jset.bohr, bath, t2);
        bool decreasing = true;
        double worst = std::numeric_limits<double>::infinity();
        for (int p = 0; p < jset.n_bohr(); ++p)
            for (int q = 0; q < jset.n_bohr(); ++q) {
                const double w = jset.bohr[p], wp = jset.bohr[q];
                const double e1 = std::abs(k1.gamma(p * k1.n, q * k1.n) / bath.coupling_matrix()(0, 0) -
                                           gamma_kernel_longtime(bath, w, wp, t1));
                const double e2 = std::abs(k2.gamma(p * k2.n, q * k2.n) / bath.coupling_matrix()(0, 0) -
                                           gamma_kernel_longtime(bath, w, wp, t2));
                if (e1 > 1e-12 && !(e2 < e1)) decreasing = false;
                if (e1 > 1e-12) worst = std::min(worst, -std::log(e2 / e1) / std::log(t2 / t1));
            }
        if (!std::isfinite(worst)) worst = 0.0;
        checks.push_back(check("long_time", worst, 0.0, decreasing, {{"note", "smallest two-point decay order"}}));

        if (finite_beta) {
            GeneratorOptions o = sc.options();
            o.picture = Picture::schroedinger;
            o.renormalized = true;
            const SteadyStateReport ss = steady_state_report(davies_generator(jset, bath, o), H, sc.beta);
            checks.push_back(check("steady_state", ss.trace_distance, 1e-8, ss.trace_distance <= 1e-8,
                                   {{"kernel_dim", ss.kernel_dim}}));
        } else {
            checks.push_back(check("steady_state", 0.0, 0.0, true, {{"note", "zero temperature, skipped"}}));
        }
    }
    bool all = true;
    for (const auto& c : checks) all = all && c["passed"].get<bool>();
    json rep = header(sc, "verify");
    rep["checks"] = checks;
    rep["passed"] = all;
    return {rep, "", all ? 0 : 4};
}

CommandResult cmd_compare(const Scenario& sc) {
    if (!sc.oracle) throw ValidationError("compare: scenario has no oracle block");
    if (sc.S.size() != 1) throw ValidationError("compare: oracle supports one coupling operator");
    if (!std::isfinite(sc.beta)) throw ValidationError("compare: requires finite beta");
    const BathModel bath = sc.bath();
    if (bath.offsets().cwiseAbs().maxCoeff() > 0.0)
        throw ValidationError("compare: oracle modes are centered; offsets must be zero");
    TruncatedBath tb = discretize_bath(bath.spectral(), sc.oracle->modes, sc.oracle->omega_max, sc.oracle->n_max);
    tb.g *= std::sqrt(bath.coupling_matrix()(0, 0).real());
    const BathModel modes = to_bath_model(tb, sc.beta);
    const double recurrence = 2.0 * M_PI / (tb.omega(1 % tb.modes()) - (tb.modes() > 1 ? tb.omega(0) : 0.0));
    const double horizon = 0.6 * recurrence;

    std::vector<double> times;
    json warnings = json::array();
    for (double t : sc.grid.values())
        if (t <= horizon) times.push_back(t);
    if (times.size() < 2) {
        times.clear();
        for (int k = 0; k <= 12; ++k) times.push_back(horizon * k / 12.0);
        warnings.push_back("time grid replaced by 13 points on [0, 0.6 recurrence]");
    } else if (times.size() < sc.grid.values().size()) {
        warnings.push_back("times beyond 0.6 recurrence dropped");
    }

    const JumpOperatorSet jset = jump_operators(sc.H, sc.S);
    const DensityMatrix rho0 = sc.initial_state();
    std::ostringstream csv;
    csv << "t,lambda,err_cumulant,err_redfield,err_davies\r\n";
    json summary = json::array();
    for (double lam : {sc.lambda, 0.5 * sc.lambda}) {
        const SystemDrive drive = [&](double t) { return Matrix(-lam * lam * counterterm_hamiltonian(jset, modes, t)); };
        const OracleTrajectory ex =
            exact_reduced_evolution(sc.H, sc.S[0], tb, lam, sc.beta, rho0, times, drive, sc.oracle->dt);
        const Trajectory cu = run_equation(sc, Equation::cumulant, jset, modes, rho0, times, Picture::interaction, lam);
        const Trajectory rf = run_equation(sc, Equation::redfield, jset, modes, rho0, times, Picture::interaction, lam);
        const Trajectory dv = run_equation(sc, Equation::davies, jset, modes, rho0, times, Picture::interaction, lam);
        double mc = 0.0, mr = 0.0, md = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const Matrix e = to_interaction_picture(sc.H, ex.states[k], times[k]);
            const double ec = trace_distance(e, cu.states[k]), er = trace_distance(e, rf.states[k]),
                         ed = trace_distance(e, dv.states[k]);
            mc = std::max(mc, ec);
            mr = std::max(mr, er);
            md = std::max(md, ed);
            csv << fmt(times[k]) << ',' << fmt(lam) << ',' << fmt(ec) << ',' << fmt(er) << ',' << fmt(ed) << "\r\n";
        }
        for (const auto& w : ex.warnings) warnings.push_back(w);
        summary.push_back({{"lambda", lam},
                           {"max_err_cumulant", mc},
                           {"max_err_redfield", mr},
                           {"max_err_davies", md},
                           {"max_top_fock_population", ex.max_top_population}});
    }
    json rep = header(sc, "compare");
    rep["horizon"] = horizon;
    rep["recurrence_time"] = recurrence;
    rep["oracle_dimension"] = sc.H.rows() * tb.bath_dim();
    rep["summary"] = summary;
    const double c0 = summary[0]["max_err_cumulant"], c1 = summary[1]["max_err_cumulant"];
    rep["cumulant_error_ratio"] = c1 > 0.0 ? c0 / c1 : 0.0;
    const double r0 = summary[0]["max_err_redfield"], d0 = summary[0]["max_err_davies"];
    rep["ordering"] = {{"cumulant_le_redfield", c0 <= 1.1 * r0}, {"redfield_le_davies", r0 <= d0}};
    rep["warnings"] = warnings;
    return {rep, csv.str(), 0};
}

} // namespace rwc
