#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef RWC_CLI_PATH
#error "RWC_CLI_PATH must point at the rwc executable"
#endif

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / "rwc_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + RWC_CLI_PATH + "\" " + args + " > \"" +
                            (workdir() / "stdout.txt").string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path preset(const std::string& name) {
    const fs::path p = workdir() / (name + ".json");
    REQUIRE(run("preset " + name + " --out \"" + p.string() + "\"") == 0);
    return p;
}

} // namespace

TEST_CASE("presets load and round-trip") {
    for (const char* n : {"qubit-ohmic", "atom-em", "superconducting-phonon", "empty-bath"}) {
        const fs::path p = preset(n);
        const auto j = nlohmann::json::parse(slurp(p));
        CHECK(j.at("name") == n);
    }
    CHECK(run("preset no-such-preset --out \"" + (workdir() / "x.json").string() + "\"") == 2);
}

TEST_CASE("invalid scenarios exit with code 2") {
    const fs::path bad = workdir() / "bad.json";
    std::ofstream(bad) << "{\"name\": \"bad\", \"system\": {\"hamiltonian\": [[1, 2], [3, 4]]}}";
    CHECK(run("evolve --scenario \"" + bad.string() + "\" --out \"" + workdir().string() + "\"") == 2);
    const fs::path broken = workdir() / "broken.json";
    std::ofstream(broken) << "{ not json";
    CHECK(run("verify --scenario \"" + broken.string() + "\"") == 2);
    CHECK(run("evolve") == 2);
}

TEST_CASE("compare without an oracle block is rejected") {
    auto j = nlohmann::json::parse(slurp(preset("qubit-ohmic")));
    j.erase("oracle");
    const fs::path p = workdir() / "no_oracle.json";
    std::ofstream(p) << j.dump();
    CHECK(run("compare --scenario \"" + p.string() + "\" --out \"" + workdir().string() + "\"") == 2);
}

TEST_CASE("empty bath keeps populations constant") {
    const fs::path p = preset("empty-bath");
    const fs::path out = workdir() / "empty";
    REQUIRE(run("evolve --scenario \"" + p.string() + "\" --out \"" + out.string() + "\"") == 0);
    std::istringstream csv(slurp(out / "empty-bath_evolve_cumulant.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    double first = -1.0;
    while (std::getline(csv, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        REQUIRE(cells.size() == 14);
        const double p1 = std::stod(cells[10]);
        if (first < 0.0) first = p1;
        CHECK(std::abs(p1 - first) < 1e-12);
        ++rows;
    }
    CHECK(rows > 2);
}

TEST_CASE("evolve output is deterministic and verify passes") {
    const fs::path p = preset("qubit-ohmic");
    const fs::path a = workdir() / "a", b = workdir() / "b";
    for (const char* eq : {"davies", "redfield", "cumulant"}) {
        const std::string args = std::string(" --equation ") + eq + " --scenario \"" + p.string() + "\"";
        REQUIRE(run("evolve" + args + " --out \"" + a.string() + "\"") == 0);
        REQUIRE(run("evolve" + args + " --out \"" + b.string() + "\"") == 0);
        const std::string f = std::string("qubit-ohmic_evolve_") + eq + ".csv";
        const std::string ca = slurp(a / f);
        CHECK(!ca.empty());
        CHECK(ca == slurp(b / f));
        CHECK(ca.find("\r\n") != std::string::npos);
    }
    CHECK(run("verify --scenario \"" + p.string() + "\" --out \"" + a.string() + "\"") == 0);
    const auto rep = nlohmann::json::parse(slurp(a / "qubit-ohmic_verify.json"));
    CHECK(rep.contains("checks"));
}
