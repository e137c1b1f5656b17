#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "simrel/state_relation.hpp"
#include "simrel/transition_system.hpp"
#include "simrel/types.hpp"

namespace simrel {

using StateBlock = std::vector<State>;
using StateBlocks = std::vector<StateBlock>;
using BlockPair = std::pair<std::size_t, std::size_t>;

/**
 * A preorder represented as a partition-relation pair (P, R).
 *
 * `rel` holds pairs of block indexes, reflexive pairs included. The pair
 * (i, j) means blocks[i] x blocks[j] is contained in the preorder, i.e. every
 * state of block i is simulated by every state of block j.
 *
 * Equality is semantic: two pairs compare equal when they describe the same
 * preorder, regardless of block order or order of states within a block.
 */
struct PartitionRelationPair {
    StateBlocks blocks;
    std::set<BlockPair> rel;

    /// One block holding all states: the preorder Q x Q.
    static PartitionRelationPair universal(std::size_t n)
    {
        PartitionRelationPair prp;
        if (n > 0) {
            StateBlock all(n);
            for (std::size_t q = 0; q < n; ++q) {
                all[q] = static_cast<State>(q);
            }
            prp.blocks.push_back(std::move(all));
            prp.rel.emplace(0, 0);
        }
        return prp;
    }

    /// Singleton blocks with the identity relation.
    static PartitionRelationPair identity(std::size_t n)
    {
        PartitionRelationPair prp;
        for (std::size_t q = 0; q < n; ++q) {
            prp.blocks.push_back({static_cast<State>(q)});
            prp.rel.emplace(q, q);
        }
        return prp;
    }

    std::size_t num_states() const
    {
        std::size_t n = 0;
        for (const auto& b : blocks) {
            n += b.size();
        }
        return n;
    }

    /// Checks the partition covers 0..n-1 exactly once and that rel is
    /// reflexive, transitive and antisymmetric. Throws InputError.
    void validate(std::size_t n) const;

    /// Blocks sorted by smallest member, states ascending, rel renumbered.
    PartitionRelationPair canonical() const;

    friend bool operator==(const PartitionRelationPair& a, const PartitionRelationPair& b)
    {
        const auto ca = a.canonical();
        const auto cb = b.canonical();
        return ca.blocks == cb.blocks && ca.rel == cb.rel;
    }
};

/// Checks that `blocks` is a partition of 0..n-1. Throws InputError.
inline void validate_partition(const StateBlocks& blocks, std::size_t n)
{
    std::vector<std::size_t> owner(n, blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) {
            throw InputError("block " + std::to_string(b) + " is empty");
        }
        for (State q : blocks[b]) {
            if (q >= n) {
                throw InputError("block " + std::to_string(b) + " contains state " + std::to_string(q) +
                                 " outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
            }
            if (owner[q] != blocks.size()) {
                throw InputError("state " + std::to_string(q) + " appears in blocks " + std::to_string(owner[q]) +
                                 " and " + std::to_string(b));
            }
            owner[q] = b;
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (owner[q] == blocks.size()) {
            throw InputError("state " + std::to_string(q) + " belongs to no block");
        }
    }
}

inline void PartitionRelationPair::validate(std::size_t n) const
{
    validate_partition(blocks, n);
    const std::size_t k = blocks.size();
    std::vector<boost::dynamic_bitset<>> rows(k, boost::dynamic_bitset<>(k));
    for (const auto& [i, j] : rel) {
        if (i >= k || j >= k) {
            throw InputError("rel pair (" + std::to_string(i) + ", " + std::to_string(j) + ") names a missing block");
        }
        rows[i].set(j);
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!rows[i].test(i)) {
            throw InputError("rel is not reflexive on block " + std::to_string(i));
        }
    }
    for (const auto& [i, j] : rel) {
        if (i != j && rows[j].test(i)) {
            throw InputError("rel is not antisymmetric: blocks " + std::to_string(i) + " and " + std::to_string(j) +
                             " are related both ways and should be one block");
        }
        if (!rows[j].is_subset_of(rows[i])) {
            auto missing = rows[j] - rows[i];
            throw InputError("rel is not transitive: (" + std::to_string(i) + ", " + std::to_string(j) + ") and (" +
                             std::to_string(j) + ", " + std::to_string(missing.find_first()) +
                             ") are present but (" + std::to_string(i) + ", " +
                             std::to_string(missing.find_first()) + ") is not");
        }
    }
}

inline PartitionRelationPair PartitionRelationPair::canonical() const
{
    std::vector<std::size_t> order(blocks.size());
    StateBlocks sorted = blocks;
    for (auto& b : sorted) {
        std::sort(b.begin(), b.end());
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sorted[a].front() < sorted[b].front();
    });
    std::vector<std::size_t> new_index(blocks.size());
    PartitionRelationPair out;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        new_index[order[pos]] = pos;
        out.blocks.push_back(std::move(sorted[order[pos]]));
    }
    for (const auto& [i, j] : rel) {
        out.rel.emplace(new_index[i], new_index[j]);
    }
    return out;
}

/// The relation over states associated to a partition-relation pair:
/// the union of C x D over (C, D) in rel.
inline StateRelation explicit_relation(const PartitionRelationPair& prp)
{
    StateRelation r(prp.num_states());
    for (const auto& [i, j] : prp.rel) {
        for (State p : prp.blocks[i]) {
            for (State q : prp.blocks[j]) {
                r.insert(p, q);
            }
        }
    }
    return r;
}

/// Inverse of explicit_relation for preorders.
inline PartitionRelationPair to_partition_relation(const StateRelation& preorder)
{
    PartitionRelationPair prp;
    prp.blocks = preorder.blocks();
    for (std::size_t i = 0; i < prp.blocks.size(); ++i) {
        for (std::size_t j = 0; j < prp.blocks.size(); ++j) {
            if (preorder.contains(prp.blocks[i].front(), prp.blocks[j].front())) {
                prp.rel.emplace(i, j);
            }
        }
    }
    return prp;
}

/**
 * Restricts a preorder so that a state with a successor is never simulated
 * by a state without one. Every block is split on "has a successor" and the
 * pairs from successor-having blocks to successor-free blocks are dropped.
 *
 * The result is a preorder, is (Q x Q)-stable, and still contains every
 * simulation contained in the input.
 */
inline PartitionRelationPair init_refine(const PartitionRelationPair& prp, const TransitionSystem& ts)
{
    PartitionRelationPair out;
    // parts[b] = {index of successor part, index of successor-free part}, npos if absent
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::pair<std::size_t, std::size_t>> parts(prp.blocks.size(), {none, none});
    std::vector<bool> live;
    for (std::size_t b = 0; b < prp.blocks.size(); ++b) {
        StateBlock moving, dead;
        for (State q : prp.blocks[b]) {
            (ts.has_successor(q) ? moving : dead).push_back(q);
        }
        if (!moving.empty()) {
            parts[b].first = out.blocks.size();
            out.blocks.push_back(std::move(moving));
            live.push_back(true);
        }
        if (!dead.empty()) {
            parts[b].second = out.blocks.size();
            out.blocks.push_back(std::move(dead));
            live.push_back(false);
        }
    }
    for (const auto& [i, j] : prp.rel) {
        for (std::size_t from : {parts[i].first, parts[i].second}) {
            for (std::size_t to : {parts[j].first, parts[j].second}) {
                if (from == none || to == none) {
                    continue;
                }
                if (live[from] && !live[to]) {
                    continue;
                }
                out.rel.emplace(from, to);
            }
        }
    }
    return out;
}

/// Existential quotient: one state per block, and B -> B' whenever some
/// member of B has a transition into B'. Throws InputError if `blocks` is
/// not a partition of the system's states.
inline TransitionSystem quotient(const TransitionSystem& ts, const StateBlocks& blocks)
{
    validate_partition(blocks, ts.num_states());
    std::vector<State> block_of(ts.num_states());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (State q : blocks[b]) {
            block_of[q] = static_cast<State>(b);
        }
    }
    std::vector<Transition> arcs;
    arcs.reserve(ts.num_transitions());
    for (const auto& [u, v] : ts.transitions()) {
        arcs.emplace_back(block_of[u], block_of[v]);
    }
    return TransitionSystem(blocks.size(), std::move(arcs));
}

} // namespace simrel
