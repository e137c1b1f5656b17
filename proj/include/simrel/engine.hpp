#pragma once

/*
 * Coarsest simulation inside an initial preorder, by refining a
 * partition-relation pair.
 *
 * State kept per current block C:
 *   rel_[C]        row of blocks D with C x D inside the current preorder
 *   counts_[B][C]  number of blocks E' reached from C's representative with
 *                  B x E' inside the preorder the counters refer to
 *   count_[C]      scratch used by split2, zero between uses
 * and per node N:
 *   notrel_[N]     nodes whose states were dropped from N's image last round
 *   notrel_next_[N] the same, being collected by the running refine()
 *
 * Each main-loop iteration runs sim_update_data, then split1 and split2 until
 * neither splits anything, then refine.
 * With Checks::full every step is cross-checked against the brute-force
 * oracle and an InvariantViolation is thrown on the first mismatch.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "simrel/indexed_set.hpp"
#include "simrel/oracle.hpp"
#include "simrel/preorder.hpp"
#include "simrel/random.hpp"
#include "simrel/refinable_partition.hpp"
#include "simrel/state_relation.hpp"
#include "simrel/transition_system.hpp"
#include "simrel/types.hpp"

namespace simrel {

enum class Checks { none, full };

struct EngineOptions {
    Checks checks = Checks::none;
    /// When set, refiner nodes are visited in a shuffled order (test hook).
    std::optional<std::uint64_t> order_seed;
};

struct EngineStats {
    std::size_t iterations = 0;
    std::size_t final_blocks = 0;
    std::size_t peak_blocks = 0;
    std::size_t nodes_created = 0;
    std::size_t relcount_entries = 0;
    std::uint64_t tally_simupdate = 0;
    std::uint64_t tally_split1 = 0;
    std::uint64_t tally_split2 = 0;
    std::uint64_t tally_refine = 0;
    std::size_t split_rounds = 0;

    std::uint64_t loop_total() const { return tally_simupdate + tally_split1 + tally_split2 + tally_refine; }

    /// |P|·|->| + |P|² + |Q| + 1 for the final partition.
    double work_budget(std::size_t num_states, std::size_t num_transitions) const
    {
        const double p = static_cast<double>(final_blocks);
        return p * static_cast<double>(num_transitions) + p * p + static_cast<double>(num_states) + 1.0;
    }

    double ratio(std::size_t num_states, std::size_t num_transitions) const
    {
        return static_cast<double>(loop_total()) / work_budget(num_states, num_transitions);
    }
};

class SimulationEngine {
public:
    using Row = boost::dynamic_bitset<>;

    /// Loads `initial`, applies the successor split and prunes rel, and
    /// sets up counters for the universal relation. The system must outlive
    /// the engine. Throws InputError if `initial` is not a valid preorder.
    SimulationEngine(const TransitionSystem& ts, const PartitionRelationPair& initial, EngineOptions options = {})
        : ts_(&ts), options_(options), rng_(options.order_seed.value_or(0))
    {
        initial.validate(ts.num_states());
        partition_ = RefinablePartition::from_blocks(initial.blocks, ts.num_states());
        const std::size_t k = partition_.num_blocks();
        rel_.assign(k, Row(k));
        for (const auto& [i, j] : initial.rel) {
            rel_[i].set(j);
        }
        counts_.assign(k, std::vector<std::uint32_t>(k, 0));
        count_.assign(k, 0);
        notrel_.resize(partition_.num_nodes());
        notrel_next_.resize(partition_.num_nodes());
        if (options_.checks == Checks::full) {
            init_relation_ = explicit_relation(initial);
            prev_relation_ = StateRelation::full(ts.num_states());
        }

        // Split every block into states with and without a successor.
        std::vector<State> live;
        for (State q = 0; q < ts.num_states(); ++q) {
            if (ts.has_successor(q)) {
                live.push_back(q);
            }
        }
        split(live);

        // A block that can move is never simulated by one that cannot.
        const std::size_t blocks = partition_.num_blocks();
        for (BlockId c = 0; c < blocks; ++c) {
            if (!ts.has_successor(partition_.representative(c))) {
                continue;
            }
            for (BlockId d = 0; d < blocks; ++d) {
                if (!ts.has_successor(partition_.representative(d))) {
                    rel_[c].reset(d);
                }
            }
        }

        for (BlockId c = 0; c < blocks; ++c) {
            const NodeId node = partition_.node_of(c);
            notrel_next_[node].clear();
            notrel_[node].clear();
            for (BlockId d = 0; d < blocks; ++d) {
                if (!rel_[c].test(d)) {
                    notrel_[node].push_back(partition_.node_of(d));
                }
            }
            if (!notrel_[node].empty()) {
                refiners_.insert(node);
            }
        }

        for (auto& row : counts_) {
            std::fill(row.begin(), row.end(), 0);
        }
        for (BlockId target = 0; target < blocks; ++target) {
            collect_rep_predecessors(partition_.block_states(target), pre_);
            for (BlockId e : pre_) {
                for (BlockId b = 0; b < blocks; ++b) {
                    ++counts_[b][e];
                }
            }
            pre_.clear();
        }
        note_peak();
    }

    bool done() const { return refiners_.empty(); }

    /// Brings the counters from the previous relation to the current one.
    void sim_update_data()
    {
        for (NodeId b_node : refiner_order()) {
            const BlockId b = partition_.choose_block(b_node);
            if (options_.checks == Checks::full && !partition_.node_is_block(b_node)) {
                throw InvariantViolation("refiner node " + std::to_string(b_node) + " holds more than one block");
            }
            auto& row = counts_[b];
            for (NodeId n : notrel_[b_node]) {
                for (BlockId target : partition_.node_blocks(n)) {
                    for (State t : partition_.block_states(target)) {
                        for (State e : ts_->predecessors(t)) {
                            ++stats_.tally_simupdate;
                            const BlockId eb = partition_.block_of(e);
                            if (partition_.representative(eb) == e) {
                                pre_.insert(eb);
                            }
                        }
                    }
                    for (BlockId e : pre_) {
                        if (row[e] == 0) {
                            throw InvariantViolation("counter of block " + std::to_string(e) + " towards block " +
                                                     std::to_string(b) + " would become negative");
                        }
                        --row[e];
                    }
                    pre_.clear();
                }
            }
        }
    }

    /// One pass over the refiner nodes, splitting on transitions from blocks
    /// whose counter is zero. Returns whether any block was split.
    bool split1()
    {
        bool any = false;
        for (NodeId b_node : refiner_order()) {
            any = split1_node(b_node) || any;
        }
        return any;
    }

    /// One pass over the refiner nodes, splitting on maximal representative
    /// transitions. Returns whether any block was split.
    bool split2()
    {
        bool any = false;
        for (NodeId b_node : refiner_order()) {
            any = split2_node(b_node) || any;
        }
        return any;
    }

    /// Splits until no splitter transition into a refiner node is left.
    ///
    /// A split gives one half a new representative, and that can create a
    /// zero-counter splitter into a node visited earlier. So split1 passes are
    /// repeated until one splits nothing, and this is re-established after
    /// every split made by split2, whose test is only sound in that state.
    /// Every repetition is paid for by at least one new block.
    void split_until_stable()
    {
        std::size_t before = 0;
        do {
            before = partition_.num_blocks();
            while (split1()) {
            }
            for (NodeId b_node : refiner_order()) {
                if (split2_node(b_node)) {
                    while (split1()) {
                    }
                }
            }
            ++stats_.split_rounds;
        } while (partition_.num_blocks() != before);
    }

    /// Drops the pairs that can no longer be matched and stages the next round.
    void refine()
    {
        next_refiners_.clear();
        for (NodeId b_node : refiner_order()) {
            const BlockId b = partition_.choose_block(b_node);
            for (NodeId n : notrel_[b_node]) {
                for (State t : partition_.node_states(n)) {
                    for (State d : ts_->predecessors(t)) {
                        ++stats_.tally_refine;
                        const BlockId db = partition_.block_of(d);
                        if (counts_[b][db] == 0) {
                            remove_.insert(db);
                        }
                    }
                }
            }
            for (State t : partition_.node_states(b_node)) {
                for (State c : ts_->predecessors(t)) {
                    ++stats_.tally_refine;
                    const BlockId cb = partition_.block_of(c);
                    for (BlockId d : remove_) {
                        ++stats_.tally_refine;
                        if (rel_[cb].test(d)) {
                            rel_[cb].reset(d);
                            const NodeId c_node = partition_.node_of(cb);
                            notrel_next_[c_node].push_back(partition_.node_of(d));
                            next_refiners_.insert(c_node);
                        }
                    }
                }
            }
            remove_.clear();
            notrel_[b_node].clear();
        }
        for (NodeId n : next_refiners_) {
            std::swap(notrel_[n], notrel_next_[n]);
        }
        refiners_.clear();
        refiners_.swap(next_refiners_);
    }

    /// One main-loop iteration. Returns false, without doing anything else,
    /// once no refiner node is left.
    bool step()
    {
        const bool full = options_.checks == Checks::full;
        if (full) {
            check_loop_top();
        }
        if (done()) {
            return false;
        }
        ++stats_.iterations;
        sim_update_data();
        StateRelation current;
        if (full) {
            current = expanded_relation();
            throw_if_failed(check_counters(current), "after sim_update_data");
        }
        split_until_stable();
        if (full) {
            throw_if_failed(check_partition(current), "after split1/split2");
            throw_if_failed(check_counters(current), "after split1/split2");
        }
        refine();
        if (full) {
            auto expected = oracle::refine_oracle(*ts_, current, *prev_relation_);
            throw_if_failed(expected.report, "refine oracle");
            if (!(expanded_relation() == expected.refined)) {
                const auto diff = (expanded_relation() - expected.refined) | (expected.refined - expanded_relation());
                const auto w = diff.pairs().front();
                oracle::OracleReport report;
                report.fail("relation after refine = refine oracle", oracle::pair_text(w.first, w.second));
                throw_if_failed(report, "after refine");
            }
            prev_relation_ = std::move(current);
        }
        note_peak();
        return true;
    }

    PartitionRelationPair run()
    {
        while (step()) {
        }
        return result();
    }

    /// Current blocks in id order and the relation over them.
    PartitionRelationPair result() const
    {
        PartitionRelationPair prp;
        prp.blocks = partition_.blocks();
        for (BlockId c = 0; c < rel_.size(); ++c) {
            for (auto d = rel_[c].find_first(); d != Row::npos; d = rel_[c].find_next(d)) {
                prp.rel.emplace(c, d);
            }
        }
        return prp;
    }

    /// The preorder represented by the current partition and rel rows.
    StateRelation expanded_relation() const
    {
        StateRelation r(ts_->num_states());
        for (BlockId c = 0; c < rel_.size(); ++c) {
            for (auto d = rel_[c].find_first(); d != Row::npos; d = rel_[c].find_next(d)) {
                for (State p : partition_.block_states(c)) {
                    for (State q : partition_.block_states(static_cast<BlockId>(d))) {
                        r.insert(p, q);
                    }
                }
            }
        }
        return r;
    }

    /// Pairs scheduled as removed: the union of B x (union of B's notrel).
    StateRelation pending_removal() const
    {
        StateRelation r(ts_->num_states());
        for (NodeId b : refiners_) {
            for (NodeId n : notrel_[b]) {
                for (State p : partition_.node_states(b)) {
                    for (State q : partition_.node_states(n)) {
                        r.insert(p, q);
                    }
                }
            }
        }
        return r;
    }

    /// Splits the partition with the full bookkeeping for each split block.
    /// The represented relation is unchanged.
    void split(std::span<const State> marked)
    {
        partition_.split(marked, [this](const RefinablePartition::SplitEvent& ev) {
            split_update_data(ev.kept, ev.created, ev.fresh_rep);
        });
    }

    const RefinablePartition& partition() const { return partition_; }
    bool related(BlockId c, BlockId d) const { return rel_[c].test(d); }
    std::uint32_t relcount(BlockId b, BlockId e) const { return counts_[b][e]; }
    std::span<const NodeId> refiner_nodes() const { return refiners_.items(); }
    std::span<const NodeId> notrel(NodeId n) const { return notrel_[n]; }

    EngineStats stats() const
    {
        EngineStats s = stats_;
        s.final_blocks = partition_.num_blocks();
        s.nodes_created = partition_.num_nodes();
        s.relcount_entries = 0;
        for (const auto& row : counts_) {
            s.relcount_entries += row.size();
        }
        return s;
    }

    /// Counters against `reference`: counts_[B][E] must be the number of
    /// blocks E' with rep(E) -> E' and B x E' inside reference.
    oracle::OracleReport check_counters(const StateRelation& reference) const
    {
        oracle::OracleReport report;
        const std::size_t k = partition_.num_blocks();
        std::vector<Row> inside(k, Row(k));
        for (BlockId b = 0; b < k; ++b) {
            for (BlockId t = 0; t < k; ++t) {
                bool all = true;
                for (State p : partition_.block_states(b)) {
                    for (State q : partition_.block_states(t)) {
                        all = all && reference.contains(p, q);
                    }
                }
                inside[b][t] = all;
            }
        }
        for (BlockId e = 0; e < k; ++e) {
            Row reached(k);
            for (State s : ts_->successors(partition_.representative(e))) {
                reached.set(partition_.block_of(s));
            }
            for (BlockId b = 0; b < k; ++b) {
                const auto expected = (reached & inside[b]).count();
                if (counts_[b][e] != expected) {
                    report.fail("relcount", "block " + std::to_string(b) + " / block " + std::to_string(e) + ": " +
                                                std::to_string(counts_[b][e]) + " != " + std::to_string(expected));
                }
            }
        }
        return report;
    }

    /// The partition must be the coarsest block-stable one for `reference`.
    oracle::OracleReport check_partition(const StateRelation& reference) const
    {
        oracle::OracleReport report;
        const auto expected = oracle::coarsest_block_stable_partition(*ts_, reference);
        if (oracle::canonical_blocks(partition_.blocks()) != expected) {
            report.fail("partition = coarsest block-stable partition", "");
        }
        return report;
    }

private:
    bool split1_node(NodeId b_node)
    {
        const BlockId b = partition_.choose_block(b_node);
        bool needed = false;
        for (State t : partition_.node_states(b_node)) {
            for (State e : ts_->predecessors(t)) {
                ++stats_.tally_split1;
                if (counts_[b][partition_.block_of(e)] == 0) {
                    needed = true;
                    break;
                }
            }
            if (needed) {
                break;
            }
        }
        if (!needed) {
            return false;
        }
        marked_.clear();
        const Row image = rel_[b];
        for (auto d = image.find_first(); d != Row::npos; d = image.find_next(d)) {
            for (State t : partition_.block_states(static_cast<BlockId>(d))) {
                for (State q : ts_->predecessors(t)) {
                    ++stats_.tally_split1;
                    marked_.insert(q);
                }
            }
        }
        const std::size_t before = partition_.num_blocks();
        split(marked_.items());
        marked_.clear();
        return partition_.num_blocks() != before;
    }

    bool split2_node(NodeId b_node)
    {
        for (BlockId sub : partition_.node_blocks(b_node)) {
            for (State t : partition_.block_states(sub)) {
                for (State e : ts_->predecessors(t)) {
                    ++stats_.tally_split2;
                    const BlockId eb = partition_.block_of(e);
                    if (partition_.representative(eb) == e) {
                        pre_.insert(eb);
                    }
                }
            }
            for (BlockId e : pre_) {
                ++count_[e];
                touched_.insert(e);
            }
            pre_.clear();
        }
        const BlockId b = partition_.choose_block(b_node);
        for (BlockId e : touched_) {
            // The representative's transition into the node is maximal.
            if (counts_[b][e] == count_[e]) {
                touched_max_.insert(e);
            }
            count_[e] = 0;
        }
        marked_.clear();
        for (State t : partition_.node_states(b_node)) {
            for (State e : ts_->predecessors(t)) {
                ++stats_.tally_split2;
                if (touched_max_.contains(partition_.block_of(e))) {
                    marked_.insert(e);
                }
            }
        }
        touched_.clear();
        touched_max_.clear();
        const std::size_t before = partition_.num_blocks();
        split(marked_.items());
        marked_.clear();
        return partition_.num_blocks() != before;
    }

    void split_update_data(BlockId c, BlockId d, BlockId x)
    {
        const std::size_t k = partition_.num_blocks();
        count_.push_back(0);

        rel_.push_back(rel_[c]);
        for (auto& row : rel_) {
            row.resize(k);
        }
        for (BlockId e = 0; e < k; ++e) {
            if (rel_[e].test(c)) {
                rel_[e].set(d);
            }
        }

        counts_.push_back(counts_[c]);
        for (auto& row : counts_) {
            row.push_back(x == c ? row[c] : 0);
        }

        // Blocks whose representative reaches both halves counted C once
        // and now reach one more block inside every image containing C.
        collect_rep_predecessors(partition_.block_states(c), split_touched_);
        for (State t : partition_.block_states(d)) {
            for (State e : ts_->predecessors(t)) {
                const BlockId eb = partition_.block_of(e);
                if (partition_.representative(eb) == e && split_touched_.contains(eb)) {
                    split_both_.insert(eb);
                }
            }
        }
        for (BlockId e : split_both_) {
            for (BlockId b = 0; b < k; ++b) {
                if (rel_[b].test(c)) {
                    ++counts_[b][e];
                }
            }
        }
        split_touched_.clear();
        split_both_.clear();

        // The half with a fresh representative gets its column from scratch.
        for (auto& row : counts_) {
            row[x] = 0;
        }
        for (State s : ts_->successors(partition_.representative(x))) {
            split_touched_.insert(partition_.block_of(s));
        }
        for (BlockId t : split_touched_) {
            for (BlockId b = 0; b < k; ++b) {
                if (rel_[b].test(t)) {
                    ++counts_[b][x];
                }
            }
        }
        split_touched_.clear();

        notrel_.resize(partition_.num_nodes());
        notrel_next_.resize(partition_.num_nodes());
        for (BlockId half : {c, d}) {
            notrel_[partition_.node_of(half)].clear();
            notrel_next_[partition_.node_of(half)].clear();
        }
    }

    /// Inserts into `out` the blocks whose representative has a successor in `states`.
    void collect_rep_predecessors(std::span<const State> states, IndexedSet<BlockId>& out) const
    {
        for (State t : states) {
            for (State e : ts_->predecessors(t)) {
                const BlockId eb = partition_.block_of(e);
                if (partition_.representative(eb) == e) {
                    out.insert(eb);
                }
            }
        }
    }

    std::vector<NodeId> refiner_order()
    {
        std::vector<NodeId> order(refiners_.begin(), refiners_.end());
        if (options_.order_seed) {
            rng_.shuffle(std::span<NodeId>(order));
        }
        return order;
    }

    void note_peak() { stats_.peak_blocks = std::max(stats_.peak_blocks, partition_.num_blocks()); }

    static void throw_if_failed(const oracle::OracleReport& report, const std::string& where)
    {
        if (!report.passed) {
            throw InvariantViolation(where + ": " + report.describe());
        }
    }

    void check_loop_top()
    {
        oracle::OracleReport report;
        const auto current = expanded_relation();
        const auto& prev = *prev_relation_;
        partition_.check_invariants();

        if (!current.is_preorder()) {
            report.fail("relation is a preorder", "");
        }
        if (oracle::canonical_blocks(current.blocks()) != oracle::canonical_blocks(partition_.blocks())) {
            report.fail("rel is antisymmetric on blocks", "");
        }
        if (!current.is_subset_of(prev)) {
            report.fail("relation shrinks", "");
        } else if (!oracle::is_stable(*ts_, current, prev)) {
            report.fail("relation is stable w.r.t. the previous one", "");
        }
        if (!oracle::naive_coarsest_simulation(*ts_, *init_relation_).is_subset_of(current)) {
            report.fail("simulations inside the initial preorder are kept", "");
        }
        if (stats_.iterations > 0 && prev.is_preorder() &&
            !oracle::naive_coarsest_simulation(*ts_, prev).is_subset_of(current)) {
            report.fail("simulations inside the previous relation are kept", "");
        }
        if (!(pending_removal() == prev - current)) {
            report.fail("notrel lists = previous relation minus current", "");
        }
        for (NodeId n = 0; n < partition_.num_nodes(); ++n) {
            const bool is_refiner = refiners_.contains(n);
            if (!notrel_next_[n].empty()) {
                report.fail("staging lists are empty", "node " + std::to_string(n));
            }
            if (is_refiner && (notrel_[n].empty() || !partition_.node_is_block(n))) {
                report.fail("refiner nodes are current blocks with non-empty notrel", "node " + std::to_string(n));
            }
            if (!is_refiner && !notrel_[n].empty()) {
                report.fail("every node with non-empty notrel is a refiner", "node " + std::to_string(n));
            }
        }
        report.merge(check_counters(prev));
        throw_if_failed(report, "loop top, iteration " + std::to_string(stats_.iterations + 1));
    }

    const TransitionSystem* ts_;
    EngineOptions options_;
    Rng rng_;
    RefinablePartition partition_;
    std::vector<Row> rel_;
    std::vector<std::vector<std::uint32_t>> counts_;
    std::vector<std::uint32_t> count_;
    std::vector<std::vector<NodeId>> notrel_;
    std::vector<std::vector<NodeId>> notrel_next_;
    IndexedSet<NodeId> refiners_;
    IndexedSet<NodeId> next_refiners_;
    IndexedSet<BlockId> pre_;
    IndexedSet<BlockId> touched_;
    IndexedSet<BlockId> touched_max_;
    IndexedSet<BlockId> remove_;
    IndexedSet<BlockId> split_touched_;
    IndexedSet<BlockId> split_both_;
    IndexedSet<State> marked_;
    EngineStats stats_;
    std::optional<StateRelation> init_relation_;
    std::optional<StateRelation> prev_relation_;
};

/// Coarsest simulation inside `initial`, as a partition-relation pair.
inline PartitionRelationPair compute_simulation(const TransitionSystem& ts, const PartitionRelationPair& initial,
                                                EngineOptions options = {})
{
    SimulationEngine engine(ts, initial, options);
    return engine.run();
}

} // namespace simrel
