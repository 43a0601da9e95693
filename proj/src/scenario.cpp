#include "rwc/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "rwc/spectral.hpp"

namespace rwc {

std::vector<double> TimeGrid::values() const {
    std::vector<double> t(static_cast<std::size_t>(points));
    if (points == 1) {
        t[0] = stop;
        return t;
    }
    for (int k = 0; k < points; ++k) {
        const double f = static_cast<double>(k) / (points - 1);
        t[k] = logarithmic ? start * std::pow(stop / start, f) : start + f * (stop - start);
    }
    return t;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        json row = json::array();
        for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back({m(a, b).real(), m(a, b).imag()});
        rows.push_back(row);
    }
    return rows;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ValidationError("scenario." + field + ": " + what);
}

cplx complex_from_json(const json& v, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail(field, "expected a number or a [re, im] pair");
}

double number(const json& obj, const char* key, double fallback, const std::string& field) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(field + "." + key, "expected a number");
    return obj[key].get<double>();
}

bool flag(const json& obj, const char* key, bool fallback, const std::string& field) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail(field + "." + key, "expected true or false");
    return obj[key].get<bool>();
}

std::vector<double> number_list(const json& v, const std::string& field) {
    if (!v.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) fail(field, "expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace

Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Matrix m(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const json& row = j[static_cast<std::size_t>(a)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) fail(field, "matrix must be square");
        for (Eigen::Index b = 0; b < n; ++b)
            m(a, b) = complex_from_json(row[static_cast<std::size_t>(b)], field);
    }
    return m;
}

Equation parse_equation(const std::string& name) {
    if (name == "davies") return Equation::davies;
    if (name == "redfield") return Equation::redfield;
    if (name == "cumulant") return Equation::cumulant;
    throw ValidationError("equation must be davies, redfield or cumulant, got '" + name + "'");
}

std::string equation_name(Equation e) {
    switch (e) {
    case Equation::davies: return "davies";
    case Equation::redfield: return "redfield";
    case Equation::cumulant: return "cumulant";
    }
    return "cumulant";
}

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) fail("", "document must be a JSON object");
    Scenario sc;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail("name", "expected a string");
        sc.name = doc["name"].get<std::string>();
    }
    if (doc.contains("metadata")) sc.metadata = doc["metadata"];

    if (!doc.contains("system")) fail("system", "missing");
    const json& sys = doc["system"];
    if (!sys.contains("hamiltonian")) fail("system.hamiltonian", "missing");
    sc.H = matrix_from_json(sys["hamiltonian"], "system.hamiltonian");
    if (hermiticity_defect(sc.H) > 1e-12 * std::max(1.0, sc.H.norm())) fail("system.hamiltonian", "not Hermitian");
    if (!sys.contains("couplings") || !sys["couplings"].is_array() || sys["couplings"].empty())
        fail("system.couplings", "expected a non-empty list of matrices");
    for (std::size_t i = 0; i < sys["couplings"].size(); ++i) {
        const std::string f = "system.couplings[" + std::to_string(i) + "]";
        Matrix s = matrix_from_json(sys["couplings"][i], f);
        if (s.rows() != sc.H.rows()) fail(f, "dimension differs from the Hamiltonian");
        if (hermiticity_defect(s) > 1e-12 * std::max(1.0, s.norm())) fail(f, "not Hermitian");
        sc.S.push_back(std::move(s));
    }
    if (sys.contains("initial_state")) {
        Matrix r = matrix_from_json(sys["initial_state"], "system.initial_state");
        if (r.rows() != sc.H.rows()) fail("system.initial_state", "dimension differs from the Hamiltonian");
        try {
            DensityMatrix check(r, 1e-10, 1e-10, 1e-10);
        } catch (const ValidationError& e) {
            fail("system.initial_state", e.what());
        }
        sc.rho0 = r;
    }

    if (!doc.contains("bath")) fail("bath", "missing");
    const json& b = doc["bath"];
    if (b.contains("family")) sc.family = b["family"].get<std::string>();
    if (sc.family != "ohmic" && sc.family != "tabulated" && sc.family != "none")
        fail("bath.family", "expected ohmic, tabulated or none");
    sc.s = number(b, "s", sc.s, "bath");
    sc.omega_c = number(b, "omega_c", sc.omega_c, "bath");
    sc.kappa = number(b, "kappa", sc.kappa, "bath");
    if (b.contains("beta") && b["beta"].is_string() && b["beta"] == "inf") sc.beta = kInfiniteTime;
    else sc.beta = number(b, "beta", sc.beta, "bath");
    if (!(sc.beta > 0.0)) fail("bath.beta", "must be > 0");
    if (sc.family == "tabulated") {
        if (!b.contains("omega") || !b.contains("J")) fail("bath", "tabulated family needs omega and J");
        sc.table_omega = number_list(b["omega"], "bath.omega");
        sc.table_J = number_list(b["J"], "bath.J");
    }
    const auto n = static_cast<Eigen::Index>(sc.S.size());
    if (b.contains("c")) {
        sc.c = matrix_from_json(b["c"], "bath.c");
        if (sc.c.rows() != n) fail("bath.c", "size must equal the number of couplings");
    }
    if (b.contains("offsets")) {
        const auto v = number_list(b["offsets"], "bath.offsets");
        if (static_cast<Eigen::Index>(v.size()) != n) fail("bath.offsets", "one entry per coupling required");
        sc.offsets = Eigen::Map<const RealVector>(v.data(), n);
    }

    sc.lambda = number(doc, "lambda", sc.lambda, "");
    if (!(sc.lambda >= 0.0)) fail("lambda", "must be >= 0");

    if (doc.contains("time_grid")) {
        const json& g = doc["time_grid"];
        sc.grid.start = number(g, "start", 0.0, "time_grid");
        sc.grid.stop = number(g, "stop", 1.0, "time_grid");
        if (g.contains("points")) {
            if (!g["points"].is_number_integer()) fail("time_grid.points", "expected an integer");
            sc.grid.points = g["points"].get<int>();
        }
        if (g.contains("spacing")) {
            const std::string sp = g["spacing"].get<std::string>();
            if (sp != "linear" && sp != "log") fail("time_grid.spacing", "expected linear or log");
            sc.grid.logarithmic = sp == "log";
        }
    }
    if (sc.grid.points < 1) fail("time_grid.points", "must be >= 1");
    if (sc.grid.start < 0.0 || sc.grid.stop < sc.grid.start) fail("time_grid", "need 0 <= start <= stop");
    if (sc.grid.logarithmic && !(sc.grid.start > 0.0)) fail("time_grid", "log spacing needs start > 0");

    if (doc.contains("options")) {
        const json& o = doc["options"];
        if (o.contains("picture")) {
            const std::string p = o["picture"].get<std::string>();
            if (p != "interaction" && p != "schroedinger") fail("options.picture", "expected interaction or schroedinger");
            sc.picture = p == "interaction" ? Picture::interaction : Picture::schroedinger;
        }
        sc.include_lamb_stark = flag(o, "include_lamb_stark", sc.include_lamb_stark, "options");
        sc.renormalized = flag(o, "renormalized", sc.renormalized, "options");
        if (o.contains("equation")) sc.equation = parse_equation(o["equation"].get<std::string>());
    }

    if (doc.contains("oracle") && !doc["oracle"].is_null()) {
        const json& o = doc["oracle"];
        OracleBlock ob;
        ob.modes = static_cast<int>(number(o, "modes", ob.modes, "oracle"));
        ob.n_max = static_cast<int>(number(o, "n_max", ob.n_max, "oracle"));
        ob.omega_max = number(o, "omega_max", ob.omega_max, "oracle");
        ob.dt = number(o, "dt", ob.dt, "oracle");
        if (ob.modes < 1 || ob.n_max < 1) fail("oracle", "modes and n_max must be >= 1");
        if (!(ob.dt > 0.0)) fail("oracle.dt", "must be > 0");
        sc.oracle = ob;
    }

    // Construct once so that bath preconditions surface at parse time.
    (void)sc.bath();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(doc);
}

BathModel Scenario::bath() const {
    const auto n = static_cast<int>(S.size());
    if (family == "none") return BathModel::empty(n, beta);
    Matrix cm = c.size() ? c : Matrix(Matrix::Identity(n, n));
    SpectralDensity sd = OhmicExponential{s, omega_c, kappa};
    if (family == "tabulated") sd = TabulatedDensity{table_omega, table_J};
    return BathModel(beta, sd, cm, offsets.size() ? offsets : RealVector::Zero(n));
}

DensityMatrix Scenario::initial_state() const {
    if (rho0) return DensityMatrix(*rho0, 1e-10, 1e-10, 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const Vector v = es.eigenvectors().col(H.rows() - 1);
    return DensityMatrix(v * v.adjoint(), 1e-10, 1e-10, 1e-10);
}

GeneratorOptions Scenario::options() const {
    GeneratorOptions o;
    o.include_lamb_stark = include_lamb_stark;
    o.picture = picture;
    o.renormalized = renormalized;
    o.lambda = lambda;
    return o;
}

json scenario_to_json(const Scenario& sc) {
    json doc;
    doc["name"] = sc.name;
    doc["metadata"] = sc.metadata;
    json sys;
    sys["hamiltonian"] = matrix_to_json(sc.H);
    sys["couplings"] = json::array();
    for (const Matrix& s : sc.S) sys["couplings"].push_back(matrix_to_json(s));
    if (sc.rho0) sys["initial_state"] = matrix_to_json(*sc.rho0);
    doc["system"] = sys;
    json b;
    b["family"] = sc.family;
    b["s"] = sc.s;
    b["omega_c"] = sc.omega_c;
    b["kappa"] = sc.kappa;
    if (std::isinf(sc.beta)) b["beta"] = "inf";
    else b["beta"] = sc.beta;
    if (sc.family == "tabulated") {
        b["omega"] = sc.table_omega;
        b["J"] = sc.table_J;
    }
    if (sc.c.size()) b["c"] = matrix_to_json(sc.c);
    if (sc.offsets.size()) b["offsets"] = std::vector<double>(sc.offsets.data(), sc.offsets.data() + sc.offsets.size());
    doc["bath"] = b;
    doc["lambda"] = sc.lambda;
    doc["time_grid"] = {{"start", sc.grid.start},
                        {"stop", sc.grid.stop},
                        {"points", sc.grid.points},
                        {"spacing", sc.grid.logarithmic ? "log" : "linear"}};
    doc["options"] = {{"picture", sc.picture == Picture::interaction ? "interaction" : "schroedinger"},
                      {"include_lamb_stark", sc.include_lamb_stark},
                      {"renormalized", sc.renormalized},
                      {"equation", equation_name(sc.equation)}};
    if (sc.oracle)
        doc["oracle"] = {{"modes", sc.oracle->modes},
                         {"n_max", sc.oracle->n_max},
                         {"omega_max", sc.oracle->omega_max},
                         {"dt", sc.oracle->dt}};
    return doc;
}

std::string scenario_hash(const Scenario& sc) {
    const std::string text = scenario_to_json(sc).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::vector<std::string> preset_names() {
    return {"qubit-ohmic", "atom-em", "superconducting-phonon", "empty-bath"};
}

namespace {

json qubit_doc(const std::string& name, double omega_c, double kappa, double beta, double lambda, double stop,
               int points, bool log) {
    Scenario sc;
    sc.name = name;
    sc.H = 0.5 * sigma_z();
    sc.S = {sigma_x()};
    sc.omega_c = omega_c;
    sc.kappa = kappa;
    sc.beta = beta;
    sc.lambda = lambda;
    sc.grid = {log ? 0.1 : 0.0, stop, points, log};
    return scenario_to_json(sc);
}

// gamma(w0) of the unit-weight Ohmic bath with s = 1.
double ohmic_rate(double w0, double omega_c, double kappa, double beta) {
    return BathModel(beta, OhmicExponential{1.0, omega_c, kappa}, Matrix::Identity(1, 1)).rate(w0);
}

} // namespace

json preset(const std::string& name) {
    if (name == "qubit-ohmic") {
        const double lambda = 0.1, g = lambda * lambda * ohmic_rate(1.0, 10.0, 1.0, 1.0);
        json doc = qubit_doc(name, 10.0, 1.0, 1.0, lambda, 50.0 / g, 41, true);
        doc["metadata"] = {{"reference_frequency", "omega_0 = 1"}, {"omega_c_over_omega_0", 10.0}};
        doc["oracle"] = {{"modes", 5}, {"n_max", 4}, {"omega_max", 0.0}, {"dt", 0.005}};
        return doc;
    }
    if (name == "atom-em") {
        // Optical transition: w ~ 1e15 /s, gamma ~ 1e9 /s, cutoff ~ 1e19 /s, room temperature.
        const double wc = 1e4, beta = 25.0, target = 1e-6;
        const double kappa = target / ohmic_rate(1.0, wc, 1.0, beta);
        json doc = qubit_doc(name, wc, kappa, beta, 1.0, 200.0, 41, false);
        doc["options"]["equation"] = "davies";
        doc["metadata"] = {{"reference_frequency", "omega_0 = 1e15 rad/s"},
                           {"physical", {{"omega", 1e15}, {"gamma", 1e9}, {"omega_c", 1e19}}},
                           {"rescaled", {{"omega", 1.0}, {"gamma", target}, {"omega_c", wc}}}};
        return doc;
    }
    if (name == "superconducting-phonon") {
        // Transmon-like qubit: w ~ 5e9 /s, gamma ~ 1e4 /s, Debye frequency ~ 1e13 /s.
        const double wc = 2e3, beta = 2.0, target = 2e-6;
        const double kappa = target / ohmic_rate(1.0, wc, 1.0, beta);
        json doc = qubit_doc(name, wc, kappa, beta, 1.0, 200.0, 41, false);
        doc["options"]["equation"] = "davies";
        doc["metadata"] = {{"reference_frequency", "omega_0 = 5e9 rad/s"},
                           {"physical", {{"omega", 5e9}, {"gamma", 1e4}, {"omega_D", 1e13}}},
                           {"rescaled", {{"omega", 1.0}, {"gamma", target}, {"omega_c", wc}}}};
        return doc;
    }
    if (name == "empty-bath") {
        json doc = qubit_doc(name, 10.0, 1.0, 1.0, 0.1, 10.0, 11, false);
        doc["bath"]["family"] = "none";
        doc["oracle"] = {{"modes", 2}, {"n_max", 2}, {"omega_max", 0.0}, {"dt", 0.01}};
        return doc;
    }
    throw ValidationError("unknown preset '" + name + "'");
}

} // namespace rwc
