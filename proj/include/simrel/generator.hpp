#pragma once

/*
 * Seeded random problem files.
 *
 * All randomness comes from simrel::Rng (mt19937_64 + rejection sampling),
 * so a seed and a configuration determine the output bytes.
 *
 *   transitions  m distinct pairs out of the n*n possible ones, drawn with
 *                Floyd's sampling algorithm, emitted in sorted order
 *   qxq          no preorder section (the universal preorder)
 *   labels       every state gets a label from {a, b, c}
 *   explicit     a random partition (block count uniform in 1..n, every
 *                state placed uniformly, empty blocks dropped), a random DAG
 *                over the blocks (each forward pair of a random block order
 *                kept with probability 1/2), then its reflexive-transitive
 *                closure
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "simrel/random.hpp"
#include "simrel/types.hpp"

namespace simrel {

enum class PreorderMode { qxq, labels, explicit_order };

inline std::string_view mode_name(PreorderMode mode)
{
    switch (mode) {
    case PreorderMode::qxq:
        return "qxq";
    case PreorderMode::labels:
        return "labels";
    case PreorderMode::explicit_order:
        return "explicit";
    }
    return "?";
}

inline PreorderMode parse_mode(std::string_view name)
{
    if (name == "qxq") {
        return PreorderMode::qxq;
    }
    if (name == "labels") {
        return PreorderMode::labels;
    }
    if (name == "explicit") {
        return PreorderMode::explicit_order;
    }
    throw InputError("unknown preorder mode '" + std::string(name) + "'");
}

struct GenConfig {
    std::uint64_t seed = 0;
    std::size_t states = 1;
    std::size_t arcs = 0;
    PreorderMode mode = PreorderMode::qxq;
};

/// Throws InputError when states is 0 or arcs exceeds states².
inline std::string generate_problem(const GenConfig& config)
{
    const std::size_t n = config.states;
    if (n == 0) {
        throw InputError("--states must be at least 1");
    }
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * n;
    if (config.arcs > pairs) {
        throw InputError("--arcs " + std::to_string(config.arcs) + " exceeds states^2 = " + std::to_string(pairs));
    }
    Rng rng(config.seed);

    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(config.arcs * 2);
    for (std::uint64_t j = pairs - config.arcs; j < pairs; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second) {
            chosen.insert(j);
        }
    }
    std::vector<std::uint64_t> arcs(chosen.begin(), chosen.end());
    std::sort(arcs.begin(), arcs.end());

    std::string out = "# gen seed=" + std::to_string(config.seed) + " states=" + std::to_string(n) +
                      " arcs=" + std::to_string(config.arcs) + " preorder=" + std::string(mode_name(config.mode)) +
                      "\n";
    out += "ts " + std::to_string(n) + "\n";
    for (std::uint64_t a : arcs) {
        out += std::to_string(a / n) + " " + std::to_string(a % n) + "\n";
    }
    out += "end\n";

    if (config.mode == PreorderMode::labels) {
        static constexpr char alphabet[] = {'a', 'b', 'c'};
        for (std::size_t q = 0; q < n; ++q) {
            out += "label " + std::to_string(q) + " " + alphabet[rng.below(3)] + "\n";
        }
    } else if (config.mode == PreorderMode::explicit_order) {
        const std::size_t k = rng.between(1, n);
        std::vector<std::size_t> raw(n);
        for (auto& b : raw) {
            b = rng.below(k);
        }
        std::vector<std::size_t> renumber(k, k);
        std::vector<std::vector<std::size_t>> blocks;
        for (std::size_t q = 0; q < n; ++q) {
            if (renumber[raw[q]] == k) {
                renumber[raw[q]] = blocks.size();
                blocks.emplace_back();
            }
            blocks[renumber[raw[q]]].push_back(q);
        }
        const std::size_t m = blocks.size();

        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) {
            order[i] = i;
        }
        rng.shuffle(std::span<std::size_t>(order));
        std::vector<boost::dynamic_bitset<>> rel(m, boost::dynamic_bitset<>(m));
        for (std::size_t i = 0; i < m; ++i) {
            rel[i].set(i);
        }
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                if (rng.coin()) {
                    rel[order[i]].set(order[j]);
                }
            }
        }
        for (std::size_t via = 0; via < m; ++via) {
            for (std::size_t i = 0; i < m; ++i) {
                if (rel[i].test(via)) {
                    rel[i] |= rel[via];
                }
            }
        }

        out += "blocks\n";
        for (std::size_t i = 0; i < m; ++i) {
            out += std::to_string(i) + ":";
            for (std::size_t q : blocks[i]) {
                out += " " + std::to_string(q);
            }
            out += "\n";
        }
        out += "end\nrel\n";
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i != j && rel[i].test(j)) {
                    out += std::to_string(i) + " " + std::to_string(j) + "\n";
                }
            }
        }
        out += "end\n";
    }
    return out;
}

} // namespace simrel
