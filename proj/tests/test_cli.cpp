#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(PRALG_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/pralg_test_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

const char* kRunning = R"({
  "atoms": [
    {"label": "x", "weight": "1/2"},
    {"label": "y", "weight": "1/4"},
    {"label": "z", "weight": "1/4"}
  ],
  "events": {"A": ["x", "y"], "B": ["x"], "P": ["x"]},
  "subalgebras": {"C": ["B"]}
})";

const char* kCoin = R"({
  "atoms": [{"label": "h", "weight": "1/2"}, {"label": "t", "weight": "1/2"}],
  "events": {"H": ["h"], "ALLBOTH": ["h", "t"]}
})";

} // namespace

TEST_CASE("eval prints exact rationals") {
    std::string coin = write_temp("coin.json", kCoin);
    RunResult r = run_cli("eval --structure " + coin + " --inline \"mu(1)\"");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("1/1") != std::string::npos);

    RunResult chi = run_cli("eval --structure " + coin +
                            " --inline \"inf y . |mu(x /\\ y) - mu(x /\\ ~y)|\""
                            " --bind x=ALL --witness");
    CHECK(chi.exit_code == 0);
    CHECK(chi.output.find("0/1") != std::string::npos);
    CHECK(chi.output.find("witness y") != std::string::npos);
}

TEST_CASE("eval exit codes") {
    std::string coin = write_temp("coin.json", kCoin);
    RunResult parse_err = run_cli("eval --structure " + coin + " --inline \"mu(\"");
    CHECK(parse_err.exit_code == 2);

    RunResult unbound = run_cli("eval --structure " + coin + " --inline \"mu(q)\"");
    CHECK(unbound.exit_code == 3);
    CHECK(unbound.output.find("q") != std::string::npos);
}

TEST_CASE("atoms report") {
    std::string f = write_temp("running.json", kRunning);
    RunResult r = run_cli("atoms --structure " + f);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Phi = [1/2, 1/4, 1/4]") != std::string::npos);
    CHECK(r.output.find("1\t1/2\t1/2") != std::string::npos);

    RunResult js = run_cli("atoms --structure " + f + " --json");
    CHECK(js.exit_code == 0);
    auto doc = nlohmann::json::parse(js.output);
    CHECK(doc["phi_invariant"][0] == "1/2");
    CHECK(doc["rows"][0]["phi_n"] == "1/2");
    CHECK(doc["rows"][2]["phi_n"] == "0/1");
}

TEST_CASE("indep report on the dependent pair") {
    std::string f = write_temp("running.json", kRunning);
    RunResult r = run_cli("indep --structure " + f + " --S B --T A --json");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    CHECK(doc["independent"] == false);
    CHECK(doc["defect"] == "1/8");
    CHECK(doc["all_agree"] == true);
}

TEST_CASE("entropy of the fair coin") {
    std::string coin = write_temp("coin.json", kCoin);
    RunResult r = run_cli("entropy --structure " + coin + " --A H --C trivial");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0.693147") != std::string::npos);
}

TEST_CASE("axioms on a broken file") {
    std::string broken = write_temp("broken.json", R"({
      "atoms": [{"label": "a", "weight": "1/2"}, {"label": "b", "weight": "1/4"}]
    })");
    RunResult r = run_cli("axioms --structure " + broken);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("total mass 1") != std::string::npos);
    CHECK(r.output.find("3/4") != std::string::npos);

    std::string coin = write_temp("coin.json", kCoin);
    CHECK(run_cli("axioms --structure " + coin).exit_code == 0);
}

TEST_CASE("gen is deterministic and self-consistent") {
    RunResult a = run_cli("gen --random 3 --seed 7");
    RunResult b = run_cli("gen --random 3 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    std::string path = write_temp("gen.json", a.output);
    CHECK(run_cli("axioms --structure " + path).exit_code == 0);

    RunResult u = run_cli("gen --uniform 2");
    auto doc = nlohmann::json::parse(u.output);
    CHECK(doc["atoms"].size() == 2);
    CHECK(doc["atoms"][0]["weight"] == "1/2");
}

TEST_CASE("type and forking subcommands") {
    std::string f = write_temp("running.json", kRunning);
    RunResult r = run_cli("type --structure " + f + " --tuple A --base C --json");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    CHECK(doc["arity"] == 1);
    CHECK(doc["cells"][1]["values"][0] == "1/1");

    // over the default trivial base, swapping {x} and {y} moves each
    // coordinate measure by 1/4
    RunResult d = run_cli("type --structure " + f +
                          " --tuple B,{y},{z} --other {y},B,{z} --distance --json");
    CHECK(d.exit_code == 0);
    auto ddoc = nlohmann::json::parse(d.output);
    CHECK(ddoc["distance"] == "1/4");

    RunResult fork = run_cli("forking --structure " + f +
                             " --tuple A,{z} --E trivial --C C --eps 1/8 --json");
    CHECK(fork.exit_code == 0);
    auto fdoc = nlohmann::json::parse(fork.output);
    CHECK(fdoc.contains("eps_forks"));

    RunResult rv = run_cli("rv --structure " + f + " --E A,{z} --F B,{y},{z}");
    CHECK(rv.exit_code == 3); // length mismatch is a semantic error
    RunResult rv2 = run_cli("rv --structure " + f + " --E A,{z} --F {y},A");
    CHECK(rv2.exit_code == 3); // not a partition (overlap)
    // E = ({x,y},{z}), F = ({z},{x,y}): rho_2 = (3/4 + 1/4)/2
    RunResult rv3 = run_cli("rv --structure " + f + " --E A,{z} --F {z},A --json");
    CHECK(rv3.exit_code == 0);
    auto rdoc = nlohmann::json::parse(rv3.output);
    CHECK(rdoc["rho_n"] == "1/2");
}

TEST_CASE("json and table outputs carry the same values") {
    std::string f = write_temp("running.json", kRunning);
    RunResult table = run_cli("indep --structure " + f + " --S B --T A");
    RunResult js = run_cli("indep --structure " + f + " --S B --T A --json");
    auto doc = nlohmann::json::parse(js.output);
    CHECK(table.output.find(doc["defect"].get<std::string>()) != std::string::npos);
    CHECK(table.output.find("independent: no") != std::string::npos);
}
