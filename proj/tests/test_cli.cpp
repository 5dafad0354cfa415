#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "fsdim/bitseq.hpp"

#ifndef FSDIM_CLI_PATH
#error "FSDIM_CLI_PATH must point at the built binary"
#endif

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(FSDIM_CLI_PATH) + " " + args +
                      " > cli_test_stdout.txt 2> cli_test_stderr.txt";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("cli gen writes the requested prefix") {
    CHECK(run_cli("gen --kind champernowne --n 16 --out cli_seq.txt") == 0);
    CHECK(fsdim::read_bits("cli_seq.txt").str() == "1101110010111011");
    std::remove("cli_seq.txt");
}

TEST_CASE("cli estimate from a bit file with a shifted oracle") {
    CHECK(run_cli("gen --kind bernoulli --p-num 1 --p-den 2 --seed 3 "
                  "--n 2048 --out cli_alpha.txt") == 0);
    CHECK(run_cli("estimate --alpha cli_alpha.txt --beta-shift 1 --k 2,4 "
                  "--n-max 1024 --format json --out cli_report.json") == 0);
    std::string rep = slurp("cli_report.json");
    CHECK(rep.find("\"config\":") != std::string::npos);
    CHECK(rep.find("\"estimates\":") != std::string::npos);
    CHECK(rep.find("\"cross_checks\":") != std::string::npos);
    CHECK(rep.find("\"version\":") != std::string::npos);
    std::remove("cli_alpha.txt");
    std::remove("cli_report.json");
}

TEST_CASE("cli validate flags the valence explosion with a witness") {
    {
        std::ofstream out("cli_bad.mode");
        out << "type mode\nvalence 1\n[states]\nv0\n[edges]\n"
               "v0 v0 00 -\nv0 v0 10 -\nv0 v0 01 -\nv0 v0 11 -\n";
    }
    CHECK(run_cli("validate --mode cli_bad.mode --Lmax 4 --mmax 6") == 1);
    std::string out = slurp("cli_test_stdout.txt");
    CHECK(out.find("valence exceeded") != std::string::npos);
    CHECK(out.find("witness") != std::string::npos);
    std::remove("cli_bad.mode");
}

TEST_CASE("cli validate accepts a well-formed gambler") {
    {
        std::ofstream out("cli_fair.gambler");
        out << "type gambler\nlookahead 0\n[states]\ns0 start\n[bet]\n"
               "s0 0 1/2 s0 s0\ns0 1 1/2 s0 s0\n";
    }
    CHECK(run_cli("validate --gambler cli_fair.gambler") == 0);
    std::remove("cli_fair.gambler");
}

TEST_CASE("cli check runs a single suite") {
    CHECK(run_cli("check --suite doubling --seed 7") == 0);
    CHECK(slurp("cli_test_stdout.txt").find("ok") == 0);
}

TEST_CASE("cli usage errors exit with 2") {
    CHECK(run_cli("bogus-subcommand") == 2);
    CHECK(run_cli("estimate --alpha nonsense-spec --n 64 --k 2") == 2);
    std::remove("cli_test_stdout.txt");
    std::remove("cli_test_stderr.txt");
}
