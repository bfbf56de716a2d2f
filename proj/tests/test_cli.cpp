// Drives the built command-line binary end to end and checks the exit code
// contract: 0 on success, 2 on malformed input, 3 on solver-level failure.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(QCEX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("demo then analyze round trip") {
    CHECK(run("demo b-zero -o /tmp/qcex_cli_bz.json") == 0);
    CHECK(run("analyze /tmp/qcex_cli_bz.json --json /tmp/qcex_cli_bz_report.json") == 0);
    std::ifstream rep("/tmp/qcex_cli_bz_report.json");
    REQUIRE(rep.good());
    std::string all((std::istreambuf_iterator<char>(rep)), std::istreambuf_iterator<char>());
    CHECK(all.find("\"hull_main\"") != std::string::npos);
    CHECK(all.find("\"opt_sdp\"") != std::string::npos);
}

TEST_CASE("check and solve subcommands succeed on demo instances") {
    CHECK(run("demo optimality -o /tmp/qcex_cli_opt.json") == 0);
    CHECK(run("check /tmp/qcex_cli_opt.json") == 0);
    CHECK(run("solve /tmp/qcex_cli_opt.json") == 0);
}

TEST_CASE("purify succeeds when the multiplicity threshold is met") {
    CHECK(run("demo qmp --qmp-n 2 --qmp-k 4 --qmp-m 2 --seed 3 -o /tmp/qcex_cli_qmp.json") == 0);
    CHECK(run("purify /tmp/qcex_cli_qmp.json --variant hull") == 0);
    CHECK(run("purify /tmp/qcex_cli_qmp.json --variant slice") == 0);
}

TEST_CASE("exit code 2 on malformed input") {
    {
        std::ofstream bad("/tmp/qcex_cli_bad.json");
        bad << "{ not json";
    }
    CHECK(run("analyze /tmp/qcex_cli_bad.json") == 2);
    {
        std::ofstream bad("/tmp/qcex_cli_bad2.json");
        bad << "{\"N\": 2, \"objective\": {\"A\": [[1,0],[0,1]], \"b\": [0,0], \"c\": 0}, "
               "\"constraints\": []}";
    }
    CHECK(run("analyze /tmp/qcex_cli_bad2.json") == 2);
    CHECK(run("analyze /tmp/qcex_cli_missing_file.json") == 2);
    CHECK(run("demo unknown-name") == 2);
}

TEST_CASE("exit code 3 when an algorithm cannot run") {
    CHECK(run("demo b-zero -o /tmp/qcex_cli_bz3.json") == 0);
    // multiplicity 1 < m + 1, the decomposition precondition fails
    CHECK(run("purify /tmp/qcex_cli_bz3.json --variant slice") == 3);
}
