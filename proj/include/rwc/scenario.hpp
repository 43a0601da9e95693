// scenario.hpp - scenario documents, presets and the command layer behind the CLI

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwc/bath.hpp"
#include "rwc/generators.hpp"
#include "rwc/operators.hpp"

namespace rwc {

using json = nlohmann::json;

enum class Equation { davies, redfield, cumulant };

struct TimeGrid {
    double start{0.0};
    double stop{1.0};
    int points{11};
    bool logarithmic{false};

    std::vector<double> values() const;
};

struct OracleBlock {
    int modes{5};
    int n_max{4};
    double omega_max{0.0}; // 0 picks 6 x frequency scale
    double dt{0.005};
};

struct Scenario {
    std::string name{"scenario"};
    json metadata = json::object();
    Matrix H;                        // H_S0
    std::vector<Matrix> S;
    std::optional<Matrix> rho0;      // default: highest eigenstate of H
    std::string family{"ohmic"};     // ohmic | tabulated | none
    double s{1.0}, omega_c{10.0}, kappa{1.0}, beta{1.0};
    std::vector<double> table_omega, table_J;
    Matrix c;                        // empty means identity
    RealVector offsets;
    double lambda{0.1};
    TimeGrid grid;
    Picture picture{Picture::schroedinger};
    bool include_lamb_stark{false};
    bool renormalized{true};
    Equation equation{Equation::cumulant};
    std::optional<OracleBlock> oracle;

    BathModel bath() const;
    DensityMatrix initial_state() const;
    GeneratorOptions options() const;
};

// Parsing validates every precondition and throws ValidationError naming the field.
Scenario parse_scenario(const json& doc);
Scenario load_scenario(const std::string& path);
json scenario_to_json(const Scenario& sc);

// 64-bit FNV-1a of the canonical JSON form, as 16 hex digits.
std::string scenario_hash(const Scenario& sc);

std::vector<std::string> preset_names();
json preset(const std::string& name);

Equation parse_equation(const std::string& name);
std::string equation_name(Equation e);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& field);

struct CommandResult {
    json report;
    std::string csv;  // empty when the command has no table
    int exit_code{0};
};

CommandResult cmd_evolve(const Scenario& sc);
CommandResult cmd_meanforce(const Scenario& sc);
CommandResult cmd_verify(const Scenario& sc);
CommandResult cmd_compare(const Scenario& sc);

} // namespace rwc
