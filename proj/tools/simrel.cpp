#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "simrel/commands.hpp"

int main(int argc, char** argv)
{
    using namespace simrel;

    CLI::App app{"Coarsest simulation preorder of a transition system"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    std::string checks = "none";
    std::string preorder = "qxq";
    app.add_option("--input", config.input, "problem file, - for stdin")->capture_default_str();
    app.add_option("--output", config.output, "output file, - for stdout")->capture_default_str();
    app.add_option("--checks", checks, "none or full")->check(CLI::IsMember({"none", "full"}))->capture_default_str();
    app.add_option("--seed", config.seed, "generator seed");
    app.add_option("--states", config.states, "generated state count");
    app.add_option("--arcs", config.arcs, "generated transition count");
    app.add_option("--preorder", preorder, "qxq, labels or explicit")
        ->check(CLI::IsMember({"qxq", "labels", "explicit"}))
        ->capture_default_str();
    app.add_option("--oracle-cap", config.oracle_cap, "largest state count verify accepts")->capture_default_str();

    const std::map<std::string, Command> commands{
        {"sim", Command::sim},
        {"verify", Command::verify},
        {"quotient", Command::quotient},
        {"gen", Command::gen},
        {"stats", Command::stats},
    };
    const std::map<std::string, std::string> help{
        {"sim", "compute the coarsest simulation"},
        {"verify", "compare the result with the brute-force oracle"},
        {"quotient", "write the system quotiented by simulation equivalence"},
        {"gen", "write a random problem file"},
        {"stats", "print work and space counters"},
    };
    for (const auto& [name, text] : help) {
        app.add_subcommand(name, text);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    config.command = commands.at(app.get_subcommands().front()->get_name());
    config.checks = checks == "full" ? Checks::full : Checks::none;
    config.preorder = parse_mode(preorder);
    return run_command(config, std::cin, std::cout, std::cerr);
}
