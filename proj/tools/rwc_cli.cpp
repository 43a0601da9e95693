// rwc - command-line front end: evolve | meanforce | verify | compare | preset

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rwc/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Write through a temporary file in the target directory, then rename.
void write_atomic(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw rwc::ValidationError("cannot write '" + tmp.string() + "'");
        out << text;
        out.flush();
        if (!out) throw rwc::ValidationError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

struct Options {
    std::string scenario;
    std::string out{"."};
    std::string equation;
    double lambda{-1.0};
    int threads{1};
    std::string preset;
};

int run(const std::string& command, const Options& opt) {
    if (command == "preset") {
        const fs::path target = opt.out;
        if (target.has_parent_path()) fs::create_directories(target.parent_path());
        write_atomic(target, rwc::preset(opt.preset).dump(2) + "\n");
        std::cout << "wrote " << target.string() << "\n";
        return 0;
    }
    rwc::Scenario sc = rwc::load_scenario(opt.scenario);
    if (!opt.equation.empty()) sc.equation = rwc::parse_equation(opt.equation);
    if (opt.lambda >= 0.0) sc.lambda = opt.lambda;
    else if (opt.lambda != -1.0) throw rwc::ValidationError("--lambda must be >= 0");

    rwc::CommandResult res;
    if (command == "evolve") res = rwc::cmd_evolve(sc);
    else if (command == "meanforce") res = rwc::cmd_meanforce(sc);
    else if (command == "verify") res = rwc::cmd_verify(sc);
    else res = rwc::cmd_compare(sc);
    res.report["threads"] = opt.threads;

    const fs::path dir = opt.out;
    fs::create_directories(dir);
    std::string stem = sc.name + "_" + command;
    if (command == "evolve") stem += "_" + rwc::equation_name(sc.equation);
    if (!res.csv.empty()) {
        write_atomic(dir / (stem + ".csv"), res.csv);
        res.report["table"] = stem + ".csv";
    }
    write_atomic(dir / (stem + ".json"), res.report.dump(2) + "\n");
    std::cout << "wrote " << (dir / (stem + ".json")).string() << "\n";
    if (command == "verify")
        for (const auto& c : res.report["checks"])
            std::cout << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << " "
                      << c["value"].get<double>() << "\n";
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Renormalized weak-coupling master equations"};
    app.require_subcommand(1);
    Options opt;
    for (const char* name : {"evolve", "meanforce", "verify", "compare"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--scenario", opt.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--equation", opt.equation, "davies | redfield | cumulant");
        sub->add_option("--lambda", opt.lambda, "override the coupling strength");
        sub->add_option("--threads", opt.threads, "worker threads (computations are single-threaded)")
            ->check(CLI::PositiveNumber);
    }
    CLI::App* pre = app.add_subcommand("preset", "write a named preset scenario");
    pre->add_option("name", opt.preset, "qubit-ohmic | atom-em | superconducting-phonon | empty-bath")->required();
    pre->add_option("--out", opt.out, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, opt);
    } catch (const rwc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const rwc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "validation error: scenario: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
