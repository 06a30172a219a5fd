#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "sapg/io.hpp"

// End-to-end exercises of the installed binary: exit codes are part of the
// contract (0 success, 1 usage/config, 2 iteration cap, 3 property failure).

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "sapg_cli_output.txt";
    const std::string cmd =
        std::string(SAPG_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::string text;
    {
        std::ifstream in(out);
        std::string line;
        while (std::getline(in, line)) text += line + "\n";
    }
    fs::remove(out);
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return RunResult{code, text};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("gen then solve reproduces the universal iteration count") {
    const fs::path inst = fresh_dir("sapg_cli_inst");
    const fs::path out = fresh_dir("sapg_cli_run");

    auto gen = run_cli("gen --m 40 --n 80 --spar 0.2 --seed 7 --out " + inst.string());
    CHECK(gen.exit_code == 0);
    CHECK(fs::exists(inst / "A.csv"));
    CHECK(fs::exists(inst / "spec.json"));

    auto solve =
        run_cli("solve --instance " + inst.string() + " --out " + out.string());
    CHECK(solve.exit_code == 0);
    CHECK(fs::exists(out / "result.json"));
    CHECK(fs::exists(out / "trace.csv"));

    const json result = json::parse(sapg::read_text_file((out / "result.json").string()));
    CHECK(result.at("iterations").get<int>() == 223);
    CHECK(result.at("stop_reason").get<std::string>() == "residual_met");

    fs::remove_all(inst);
    fs::remove_all(out);
}

TEST_CASE("config violations exit 1 and name the field") {
    const fs::path out = fresh_dir("sapg_cli_bad");
    auto bad = run_cli("solve --m 20 --n 40 --spar 0.2 --seed 3 --override alpha=3 --out " +
                       out.string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("alpha") != std::string::npos);

    auto unknown = run_cli("solve --m 20 --n 40 --spar 0.2 --seed 3 --override frobnicate=1 --out " +
                           out.string());
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.output.find("frobnicate") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("the spg path dispatches and the cap exits 2") {
    const fs::path out = fresh_dir("sapg_cli_spg");
    auto spg = run_cli("solve --m 20 --n 40 --spar 0.2 --seed 3 --algorithm spg --out " +
                       out.string());
    CHECK(spg.exit_code == 0);

    auto capped = run_cli(
        "solve --m 20 --n 40 --spar 0.2 --seed 3 --override maxiter=10 --out " + out.string());
    CHECK(capped.exit_code == 2);
    fs::remove_all(out);
}

TEST_CASE("bench runs a quick grid and fails cleanly on a missing spec") {
    const fs::path out = fresh_dir("sapg_cli_bench");
    const fs::path spec = out / "spec.json";
    sapg::write_text_file(spec.string(),
                          R"({"kind":"linear_l1","sizes":[[20,40]],"spars":[0.2],
                              "trials":2,"algorithms":["sapg","spg"],"base_seed":11})");

    auto ok = run_cli("bench --spec " + spec.string() + " --out " + (out / "r").string());
    CHECK(ok.exit_code == 0);
    CHECK(fs::exists(out / "r" / "tables" / "summary.csv"));
    CHECK(fs::exists(out / "r" / "manifest.json"));

    auto missing = run_cli("bench --spec /nonexistent/spec.json --out " + out.string());
    CHECK(missing.exit_code == 1);
    fs::remove_all(out);
}

TEST_CASE("solve --diagnostics emits the energy CSV") {
    const fs::path out = fresh_dir("sapg_cli_diag");
    auto run = run_cli("solve --m 20 --n 40 --spar 0.2 --seed 5 --diagnostics --out " +
                       out.string());
    CHECK(run.exit_code == 0);
    REQUIRE(fs::exists(out / "diagnostics.csv"));
    std::ifstream in(out / "diagnostics.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,W,E,rate_stat,step_norm");
    fs::remove_all(out);
}

TEST_CASE("check is green on a fresh build, red with an injected fault") {
    auto ok = run_cli("check --suite prox");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("ok") != std::string::npos);

    auto fault = run_cli("check --suite smoothing --inject-fault kappa-zero");
    CHECK(fault.exit_code == 3);
    CHECK(fault.output.find("envelope") != std::string::npos);
}
