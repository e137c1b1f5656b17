#pragma once

#include <cstdint>
#include <string>

#include "simrel/generator.hpp"
#include "simrel/problem_io.hpp"
#include "simrel/random.hpp"

namespace simrel::test {

/// A generated problem with 1..max_states states, a uniformly chosen arc
/// count and the given preorder mode.
inline Problem random_instance(Rng& rng, std::size_t max_states, PreorderMode mode = PreorderMode::explicit_order)
{
    GenConfig config;
    config.seed = rng.next();
    config.states = rng.between(1, max_states);
    config.arcs = rng.between(0, config.states * config.states);
    config.mode = mode;
    return parse_problem(generate_problem(config));
}

/// The system on 3 states whose edge set is the bit pattern `mask`
/// (bit 3u + v set means u -> v).
inline TransitionSystem three_state_graph(unsigned mask)
{
    std::vector<Transition> arcs;
    for (State u = 0; u < 3; ++u) {
        for (State v = 0; v < 3; ++v) {
            if (mask & (1u << (3 * u + v))) {
                arcs.emplace_back(u, v);
            }
        }
    }
    return TransitionSystem(3, std::move(arcs));
}

} // namespace simrel::test
