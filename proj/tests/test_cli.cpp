#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "simrel/commands.hpp"

using namespace simrel;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(RunConfig config, const std::string& input = "")
{
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = run_command(config, in, out, err);
    return {code, out.str(), err.str()};
}

RunConfig cmd(Command c)
{
    RunConfig config;
    config.command = c;
    return config;
}

std::map<std::string, std::string> key_values(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        REQUIRE(eq != std::string::npos);
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

const std::string chain = "ts 3\n0 1\n1 2\nend\n";

} // namespace

TEST_CASE("sim", "[cli]")
{
    const auto r = run(cmd(Command::sim), chain);
    CHECK(r.code == 0);
    CHECK(r.out == "blocks 3\n0: 0\n1: 1\n2: 2\nrel\n1 0\n2 0\n2 1\nend\n");

    const auto echo = run(cmd(Command::sim), "ts 3\nend\nblocks\n0: 2 0\n1: 1\nend\nrel\n1 0\nend\n");
    CHECK(echo.code == 0);
    CHECK(echo.out == "blocks 2\n0: 0 2\n1: 1\nrel\n1 0\nend\n");

    const auto bad = run(cmd(Command::sim), "ts 3\n0 1\n1 x\nend\n");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("line 3") != std::string::npos);

    auto full = cmd(Command::sim);
    full.checks = Checks::full;
    CHECK(run(full, chain).out == r.out);
}

TEST_CASE("sim reads and writes files", "[cli]")
{
    const auto dir = std::filesystem::temp_directory_path() / "simrel_cli_test";
    std::filesystem::create_directories(dir);
    const auto in_path = dir / "chain.ts";
    const auto out_path = dir / "chain.out";
    std::ofstream(in_path) << chain;

    auto config = cmd(Command::sim);
    config.input = in_path.string();
    config.output = out_path.string();
    const auto r = run(config);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream result(out_path);
    std::stringstream text;
    text << result.rdbuf();
    CHECK(text.str() == "blocks 3\n0: 0\n1: 1\n2: 2\nrel\n1 0\n2 0\n2 1\nend\n");

    config.input = (dir / "missing.ts").string();
    CHECK(run(config).code == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("verify", "[cli]")
{
    const auto ok = run(cmd(Command::verify), chain);
    CHECK(ok.code == 0);
    CHECK(ok.out == "ok\n");

    auto capped = cmd(Command::verify);
    capped.oracle_cap = 2;
    const auto over = run(capped, chain);
    CHECK(over.code == 1);
    CHECK(over.err.find("oracle cap exceeded") != std::string::npos);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto gen = cmd(Command::gen);
        gen.seed = seed;
        gen.states = 1 + seed % 8;
        gen.arcs = (seed * 7) % (*gen.states * *gen.states + 1);
        gen.preorder = static_cast<PreorderMode>(seed % 3);
        const auto problem = run(gen);
        REQUIRE(problem.code == 0);
        auto full = cmd(Command::verify);
        full.checks = Checks::full;
        CHECK(run(full, problem.out).code == 0);
    }
}

TEST_CASE("quotient", "[cli]")
{
    const auto fork = run(cmd(Command::quotient), "ts 3\n0 2\n1 2\nend\n");
    CHECK(fork.code == 0);
    CHECK(fork.out == "ts 2\n0 1\nend\n# 0: 0 1\n# 1: 2\n");

    const auto id = run(cmd(Command::quotient), "ts 3\n0 1\n1 2\n2 0\nend\nblocks\n0: 0\n1: 1\n2: 2\nend\n");
    CHECK(id.out == "ts 3\n0 1\n1 2\n2 0\nend\n# 0: 0\n# 1: 1\n# 2: 2\n");

    const auto cycle = run(cmd(Command::quotient), "ts 2\n0 1\n1 0\nend\n");
    CHECK(cycle.out == "ts 1\n0 0\nend\n# 0: 0 1\n");
}

TEST_CASE("gen", "[cli]")
{
    auto config = cmd(Command::gen);
    config.seed = 1;
    config.states = 3;
    config.arcs = 0;
    const auto r = run(config);
    CHECK(r.code == 0);
    CHECK(r.out == "# gen seed=1 states=3 arcs=0 preorder=qxq\nts 3\nend\n");
    CHECK(run(config).out == r.out);

    config.arcs = 10;
    CHECK(run(config).code == 1);
    config.arcs.reset();
    CHECK(run(config).code == 1);
}

TEST_CASE("stats", "[cli]")
{
    const auto r = run(cmd(Command::stats), chain);
    REQUIRE(r.code == 0);
    const auto kv = key_values(r.out);
    for (const char* key : {"iterations", "final_blocks", "nodes_created", "relcount_entries", "loop_tally_simupdate",
                            "loop_tally_split1", "loop_tally_split2", "loop_tally_refine", "loop_total", "ratio"}) {
        CHECK(kv.count(key) == 1);
    }
    CHECK(kv.at("final_blocks") == "3");
    CHECK(std::stoul(kv.at("relcount_entries")) <= 9);
    CHECK(std::isfinite(std::stod(kv.at("ratio"))));

    const auto idle = key_values(run(cmd(Command::stats), "ts 4\nend\n").out);
    CHECK(idle.at("iterations") == "0");
    CHECK(std::isfinite(std::stod(idle.at("ratio"))));
}
