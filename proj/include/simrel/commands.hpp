#pragma once

/*
 * The command-line commands, callable in-process.
 *
 * Exit codes: 0 success, 1 input error, 2 internal invariant violation,
 * 3 verification mismatch.
 */

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "simrel/engine.hpp"
#include "simrel/generator.hpp"
#include "simrel/oracle.hpp"
#include "simrel/preorder.hpp"
#include "simrel/problem_io.hpp"
#include "simrel/types.hpp"

namespace simrel {

enum class Command { sim, verify, quotient, gen, stats };

struct RunConfig {
    Command command = Command::sim;
    std::string input = "-";  ///< path, or "-" for the input stream
    std::string output = "-"; ///< path, or "-" for the output stream
    Checks checks = Checks::none;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> states;
    std::optional<std::size_t> arcs;
    PreorderMode preorder = PreorderMode::qxq;
    std::size_t oracle_cap = 64;
};

namespace detail {

inline std::string read_input(const RunConfig& config, std::istream& in)
{
    std::ostringstream text;
    if (config.input == "-") {
        text << in.rdbuf();
    } else {
        std::ifstream file(config.input, std::ios::binary);
        if (!file) {
            throw InputError("cannot open input file '" + config.input + "'");
        }
        text << file.rdbuf();
    }
    return text.str();
}

inline void write_output(const RunConfig& config, std::ostream& out, const std::string& text)
{
    if (config.output == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(config.output, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text)) {
        throw InputError("cannot write output file '" + config.output + "'");
    }
}

inline std::string format_stats(const EngineStats& s, const TransitionSystem& ts)
{
    char ratio[64];
    std::snprintf(ratio, sizeof ratio, "%.6f", s.ratio(ts.num_states(), ts.num_transitions()));
    std::ostringstream out;
    out << "iterations=" << s.iterations << '\n'
        << "final_blocks=" << s.final_blocks << '\n'
        << "peak_blocks=" << s.peak_blocks << '\n'
        << "nodes_created=" << s.nodes_created << '\n'
        << "relcount_entries=" << s.relcount_entries << '\n'
        << "split_rounds=" << s.split_rounds << '\n'
        << "loop_tally_simupdate=" << s.tally_simupdate << '\n'
        << "loop_tally_split1=" << s.tally_split1 << '\n'
        << "loop_tally_split2=" << s.tally_split2 << '\n'
        << "loop_tally_refine=" << s.tally_refine << '\n'
        << "loop_total=" << s.loop_total() << '\n'
        << "ratio=" << ratio << '\n';
    return out.str();
}

inline int run_verify(const RunConfig& config, const Problem& problem, std::ostream& out)
{
    const auto& ts = problem.system;
    if (ts.num_states() > config.oracle_cap) {
        throw InputError("oracle cap exceeded: " + std::to_string(ts.num_states()) + " states > " +
                         std::to_string(config.oracle_cap));
    }
    const auto engine = explicit_relation(compute_simulation(ts, problem.initial, {config.checks, std::nullopt}));
    const auto expected = oracle::naive_coarsest_simulation(ts, explicit_relation(problem.initial));
    if (engine == expected) {
        write_output(config, out, "ok\n");
        return 0;
    }
    const auto extra = engine - expected;
    const bool engine_has = !extra.empty();
    const auto w = engine_has ? extra.pairs().front() : (expected - engine).pairs().front();
    write_output(config, out,
                 "mismatch " + oracle::pair_text(w.first, w.second) +
                     (engine_has ? " in engine result, not in oracle\n" : " in oracle, not in engine result\n"));
    return 3;
}

inline int run(const RunConfig& config, std::istream& in, std::ostream& out)
{
    if (config.command == Command::gen) {
        if (!config.seed || !config.states || !config.arcs) {
            throw InputError("gen needs --seed, --states and --arcs");
        }
        write_output(config, out, generate_problem({*config.seed, *config.states, *config.arcs, config.preorder}));
        return 0;
    }

    const Problem problem = parse_problem(read_input(config, in));
    const auto& ts = problem.system;
    switch (config.command) {
    case Command::sim:
        write_output(config, out, serialize_result(compute_simulation(ts, problem.initial, {config.checks, std::nullopt})));
        return 0;
    case Command::verify:
        return run_verify(config, problem, out);
    case Command::quotient: {
        const auto result = compute_simulation(ts, problem.initial, {config.checks, std::nullopt}).canonical();
        std::string text = serialize_system(quotient(ts, result.blocks));
        for (std::size_t b = 0; b < result.blocks.size(); ++b) {
            text += "# " + std::to_string(b) + ":";
            for (State q : result.blocks[b]) {
                text += " " + std::to_string(q);
            }
            text += "\n";
        }
        write_output(config, out, text);
        return 0;
    }
    case Command::stats: {
        SimulationEngine engine(ts, problem.initial, {config.checks, std::nullopt});
        engine.run();
        write_output(config, out, format_stats(engine.stats(), ts));
        return 0;
    }
    case Command::gen:
        break;
    }
    return 0;
}

} // namespace detail

/// Runs one command. Errors are reported on `err` and mapped to exit codes.
inline int run_command(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err)
{
    try {
        return detail::run(config, in, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InvariantViolation& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace simrel
