#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Outcome {
    int exit_code;
    std::string out;
};

/// Runs the CLI through the shell; stderr is discarded unless redirected in `args`.
Outcome qrbs(const std::string& args, const std::string& env = "") {
    const std::string command = env + " '" QRBS_CLI_PATH "' " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        out.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "qrbs_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kData = QRBS_DATA_DIR;

}  // namespace

TEST_CASE("stage by TNM") {
    auto r = qrbs("stage --tnm T1,N0,M0");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "00000001  I-A\n");

    r = qrbs("stage --tnm T2,N0,M0 --engine statevector");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "00010100  II-A or III-A\n");

    CHECK(qrbs("stage --tnm T9,N0,M0").exit_code == 2);
    CHECK(qrbs("stage").exit_code == 2);
    CHECK(qrbs("stage --tnm T0,N0,M0").exit_code == 1);
    CHECK(qrbs("no-such-command").exit_code == 2);
}

TEST_CASE("stage from findings") {
    auto r = qrbs("stage --findings '" + kData + "/findings_example.json' --explain");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("T2 N1 M0") != std::string::npos);
    CHECK(r.out.find("q6") != std::string::npos);
    CHECK(r.out.find("II-B") != std::string::npos);

    r = qrbs("stage --findings '" + kData + "/findings_example.json' --json");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("bits") == "00001000");
    CHECK(doc.at("activated_qubit") == 6);

    CHECK(qrbs("stage --findings /nonexistent/findings.json").exit_code == 1);
}

TEST_CASE("statevector cap from the environment") {
    CHECK(qrbs("stage --tnm T1,N0,M0 --engine statevector", "QRBS_MAX_QUBITS=10").exit_code == 1);
    CHECK(qrbs("stage --tnm T1,N0,M0 --engine statevector --max-qubits 10").exit_code == 1);
}

TEST_CASE("verify-idc prints a passing table") {
    const auto r = qrbs("verify-idc");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int passes = 0;
    while (std::getline(lines, line)) {
        if (line.size() >= 4 && line.compare(line.size() - 4, 4, "PASS") == 0) {
            ++passes;
        }
    }
    CHECK(passes == 15);

    const auto json = qrbs("verify-idc --json");
    REQUIRE(json.exit_code == 0);
    const auto doc = nlohmann::json::parse(json.out);
    CHECK(doc.at("pass") == true);
    CHECK(doc.at("rows").size() == 15);
}

TEST_CASE("rlb") {
    const std::string file = "--constraints '" + kData + "/ledley_lusted.constraints'";
    auto r = qrbs("rlb " + file + " --symptoms 2 --diagnoses 2 --json");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("rlb") ==
          nlohmann::json::array({"S0D0", "S2D1", "S1D2", "S3D2", "S2D3", "S3D3"}));

    r = qrbs("rlb " + file + " --symptoms 2 --diagnoses 2 --case 01");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("d1: present") != std::string::npos);
    CHECK(r.out.find("d2: absent") != std::string::npos);

    CHECK(qrbs("rlb " + file + " --symptoms 3 --diagnoses 2").exit_code == 1);
}

TEST_CASE("compile, simulate and verify a rule file") {
    const auto dir = scratch_dir();
    const auto qasm = dir / "inference.qasm";
    const auto map = dir / "inference_map.json";
    const std::string rules = "--rules '" + kData + "/inference_example.rules'";

    auto r = qrbs("compile " + rules + " -o '" + qasm.string() + "' --map '" + map.string() + "'");
    REQUIRE(r.exit_code == 0);
    const auto mapping = nlohmann::json::parse(read_file(map));
    CHECK(mapping.at("ancilla_count") == 4);
    CHECK(mapping.at("input_map").size() == 5);

    // Inputs A=1, B=1, D=1 (q0, q1, q3); R lands in c0.
    r = qrbs("simulate --circuit '" + qasm.string() + "' --input 000001011");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("1", 0) == 0);
    r = qrbs("simulate --circuit '" + qasm.string() + "' --input 000000011 --engine statevector");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("0", 0) == 0);
    CHECK(qrbs("simulate --circuit '" + qasm.string() + "' --input 0000000000011").exit_code == 1);

    CHECK(qrbs("verify-compile " + rules).exit_code == 0);
    CHECK(qrbs("verify-compile " + rules + " --no-share --no-measure-direct").exit_code == 0);
    CHECK(qrbs("compile " + rules + " --budget 2").exit_code == 1);
}

TEST_CASE("export is byte-stable") {
    const auto a = qrbs("export --idc --format qasm");
    const auto b = qrbs("export --idc --format qasm");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("OPENQASM 2.0;", 0) == 0);

    const auto meta = qrbs("export --idc --format json");
    REQUIRE(meta.exit_code == 0);
    const auto doc = nlohmann::json::parse(meta.out);
    CHECK(doc.at("num_qubits") == 24);
    CHECK(doc.at("num_classical_bits") == 8);
}
