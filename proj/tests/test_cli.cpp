#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mpva/cli.hpp"
#include "mpva/expr.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& contents = "")
        : path("/tmp/mpva_test_" + name) {
        if (!contents.empty()) {
            std::ofstream f(path);
            f << contents;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("verify exits 0 on catalog families") {
    CHECK(mpva::cli::dispatch({"verify", "--family", "complementary", "--order", "2"}) ==
          0);
    CHECK(mpva::cli::dispatch({"verify", "--family", "type-viii"}) == 0);
}

TEST_CASE("verify exits 1 on a broken structure file") {
    TempFile bad("bad.mpva",
                 "symbol u identity;\n"
                 "mode 1 = u[0]^2*u[1];\n");
    TempFile out("bad_report.txt");
    CHECK(mpva::cli::dispatch({"verify", "--expr-file", bad.path, "--out", out.path}) ==
          1);
    std::string report = slurp(out.path);
    CHECK(report.find("jacobi residual (1,2):") != std::string::npos);
}

TEST_CASE("raw symmetric structure fails skew") {
    TempFile raw("raw.mpva",
                 "symbol u identity;\n"
                 "mode 1 = u[0]*u[1];\n"
                 "rawmode -1 = u[0]*u[-1];\n");
    TempFile out("raw_report.txt");
    CHECK(mpva::cli::dispatch({"verify", "--expr-file", raw.path, "--out", out.path}) ==
          1);
    CHECK(slurp(out.path).find("skew residual") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(mpva::cli::dispatch({"verify", "--family", "no-such-family"}) == 1);
    CHECK(mpva::cli::dispatch({"verify"}) == 2);
    CHECK(mpva::cli::dispatch({"wat"}) == 2);
    CHECK(mpva::cli::dispatch({"simulate", "--flow", "wat"}) == 2);
}

TEST_CASE("hierarchy command passes and reports") {
    TempFile out("hier.json");
    CHECK(mpva::cli::dispatch({"hierarchy", "--g", "u", "--F", "u", "--depth", "4",
                               "--format", "json", "--out", out.path}) == 0);
    std::string report = slurp(out.path);
    CHECK(report.find("\"pass\": true") != std::string::npos);
    CHECK(report.find("\"lemma72a\": true") != std::string::npos);
}

TEST_CASE("lax-check passes end to end") {
    TempFile out("lax.txt");
    CHECK(mpva::cli::dispatch({"lax-check", "--max-flow", "1", "--max-density", "2",
                               "--out", out.path}) == 0);
    std::string text = slurp(out.path);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("corresponds to the hierarchy flow") != std::string::npos);
}

TEST_CASE("json reports are byte-identical across runs") {
    TempFile a("det_a.json"), b("det_b.json");
    std::vector<std::string> args = {"verify", "--family",  "ftv",
                                     "--format", "json", "--out", ""};
    args.back() = a.path;
    CHECK(mpva::cli::dispatch(args) == 0);
    args.back() = b.path;
    CHECK(mpva::cli::dispatch(args) == 0);
    CHECK(slurp(a.path) == slurp(b.path));
}

TEST_CASE("export emits the structure schema") {
    TempFile out("export.json");
    CHECK(mpva::cli::dispatch({"export", "--family", "complementary", "--order", "2",
                               "--out", out.path}) == 0);
    std::string json = slurp(out.path);
    CHECK(json.find("\"order\": 2") != std::string::npos);
    CHECK(json.find("\"eps_min_poly\": \"eps+1\"") != std::string::npos);
    CHECK(json.find("\"modes\"") != std::string::npos);
}

TEST_CASE("bracket command prints the lambda expansion") {
    TempFile out("bracket.txt");
    CHECK(mpva::cli::dispatch({"bracket", "--family", "volterra", "--f", "u[0]",
                               "--expr2", "u[0]", "--out", out.path}) == 0);
    std::string text = slurp(out.path);
    CHECK(text.find("lambda^1: u[0]*u[1]") != std::string::npos);
    CHECK(text.find("lambda^-1: -u[0]*u[-1]") != std::string::npos);
}

TEST_CASE("MPVA_TOWER_DEPTH overrides the free-derivative cap") {
    // bracketing g'' needs g''' (tower level 3)
    std::vector<std::string> args = {"bracket", "--family", "general", "--order",
                                     "1",       "--f",      "g''[0]"};
    setenv("MPVA_TOWER_DEPTH", "2", 1);
    CHECK(mpva::cli::dispatch(args) == 2);
    setenv("MPVA_TOWER_DEPTH", "4", 1);
    CHECK(mpva::cli::dispatch(args) == 0);
    unsetenv("MPVA_TOWER_DEPTH");
    mpva::SymbolTable::set_default_tower_cap(4);
}

TEST_CASE("simulate writes a CSV with functional columns") {
    TempFile out("sim.csv");
    CHECK(mpva::cli::dispatch({"simulate", "--lattice", "8", "--steps", "50", "--dt",
                               "1e-3", "--seed", "3", "--densities", "u,h2", "--out",
                               out.path}) == 0);
    std::string csv = slurp(out.path);
    CHECK(csv.rfind("step,t,u,h2", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 52);
}
