#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "seqrule/rule_text.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr merged
};

CliResult run_cli(const std::string& args) {
    std::string command = std::string(SEQRULE_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        result.output.append(buffer, n);
    }
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("cli: sequence and generating function") {
    CliResult seq = run_cli("seq --coeffs 3,2,-1 --depth 7");
    CHECK(seq.exit_code == 0);
    CHECK(seq.output == "1, 3, 11, 38, 133, 464, 1620, 5655\n");

    CliResult gf = run_cli("gf --coeffs 3,2,-1");
    CHECK(gf.exit_code == 0);
    CHECK(gf.output == "1 / (1 - 3x - 2x^2 + x^3)\n");
}

TEST_CASE("cli: compile emits the golden ordinary rule") {
    CliResult result = run_cli("compile --coeffs 5,-6,2 --stage ordinary");
    CHECK(result.exit_code == 0);
    CHECK(seqrule::parse_rule(result.output) ==
          seqrule::parse_rule(seqrule::fixtures::kOrdinary562Text));
}

TEST_CASE("cli: positivity verdicts and exit codes") {
    CliResult unknown = run_cli("positivity --coeffs 1,-1");
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.output.find("unknown") != std::string::npos);

    CliResult witness = run_cli("positivity --coeffs 5,-6,2");
    CHECK(witness.exit_code == 0);
    CHECK(witness.output ==
          "witness: q = [1, 0], r = [4, 1], slack = [3, 1, 0]\n");
}

TEST_CASE("cli: verify reports matches and uses exit 3 on divergence") {
    CliResult ok = run_cli("verify --coeffs 3,2,-1 --init 2,3 --depth 7");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("all stages match") != std::string::npos);
}

TEST_CASE("cli: identical invocations give byte-identical output") {
    CliResult a = run_cli("verify --coeffs 5,-6,2 --depth 6 --json");
    CliResult b = run_cli("verify --coeffs 5,-6,2 --depth 6 --json");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("\"all_match\": true") != std::string::npos);
}

TEST_CASE("cli: expansion round-trips through a rule file") {
    CliResult direct = run_cli("expand --coeffs 5,-6,2 --stage ordinary --depth 6");
    CHECK(direct.exit_code == 0);

    CliResult compiled = run_cli("compile --coeffs 5,-6,2 --stage ordinary");
    auto path = temp_file("seqrule_cli_roundtrip.rule");
    {
        std::ofstream out(path);
        out << compiled.output;
    }
    CliResult from_file = run_cli("expand --rule " + path.string() + " --depth 6");
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.output == direct.output);
    std::filesystem::remove(path);
}

TEST_CASE("cli: parametric rule files work through expand") {
    auto path = temp_file("seqrule_cli_parametric.rule");
    {
        std::ofstream out(path);
        out << seqrule::fixtures::kInvolutionsLevelIndexedText;
    }
    CliResult result = run_cli("expand --rule " + path.string() + " --depth 7");
    CHECK(result.exit_code == 0);
    CHECK(result.output ==
          "0 1\n1 1\n2 2\n3 4\n4 10\n5 26\n6 76\n7 232\n");
    std::filesystem::remove(path);
}

TEST_CASE("cli: usage errors exit with 1") {
    CHECK(run_cli("expand --depth 3").exit_code == 1);          // no input source
    CHECK(run_cli("expand --coeffs 2 --rule x --depth 3").exit_code == 1);
    CHECK(run_cli("seq --coeffs 2 --depth 100").exit_code == 1);  // over the cap
    CHECK(run_cli("seq --coeffs nope").exit_code == 1);
    CHECK(run_cli("compile --coeffs 2 --stage bogus").exit_code == 1);
    CHECK(run_cli("nonsense").exit_code == 1);
}

TEST_CASE("cli: depth cap can be raised explicitly") {
    CliResult result = run_cli("seq --coeffs 1 --depth 80 --depth-cap 128");
    CHECK(result.exit_code == 0);
}

TEST_CASE("cli: dot export writes a digraph") {
    CliResult result = run_cli("dot --coeffs 3,2,-1 --stage jumpfree --depth 2");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("digraph") != std::string::npos);

    CliResult compact =
        run_cli("dot --coeffs 5,-6,2 --stage jumpfree --depth 3 --compact");
    CHECK(compact.exit_code == 0);
    CHECK(compact.output.find("^") != std::string::npos);
}

TEST_CASE("cli: json documents carry the stable field names") {
    CliResult result = run_cli("positivity --coeffs 5,-6,2 --json");
    CHECK(result.exit_code == 0);
    for (const char* field :
         {"\"command\"", "\"inputs\"", "\"result\"", "\"diagnostics\"", "\"q\"",
          "\"r\"", "\"slack\"", "\"status\""}) {
        CHECK(result.output.find(field) != std::string::npos);
    }
}
