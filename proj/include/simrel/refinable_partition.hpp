#pragma once

/*
 * Array-backed refinable partition with two generations of blocks.
 *
 * States are laid out in an array T so that each block occupies a contiguous
 * subarray. Blocks do not own their extent directly: each block points to a
 * node, and a node is an immutable [begin, end) window of T. When a block is
 * split both halves get fresh nodes carved out of the old window, and the
 * old node survives unchanged as the ancestor of the two. So the state set
 * of a node never changes after creation, while a node that no block points
 * to any more covers at least two current blocks.
 *
 *     T:      | 4 | 1 | 0 | 3 | 2 |
 *     node 0  [---------------------)     {0,1,2,3,4}, ancestor
 *     node 1  [-------)                   {4,1}  = block 1
 *     node 2          [-------------)     {0,3,2} = block 0
 *
 * Split moves the marked states of a block to the FRONT of its window. The
 * marked part becomes a new block; the unmarked part keeps the old block id.
 * Block and node ids are allocated in increasing order and never reused.
 */

#include <cstddef>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "simrel/preorder.hpp"
#include "simrel/types.hpp"

namespace simrel {

class RefinablePartition {
public:
    struct SplitEvent {
        BlockId kept;     ///< unmarked part, keeps the old id
        BlockId created;  ///< marked part, new id
        BlockId fresh_rep; ///< whichever of the two did not inherit the old representative
    };

    /// Forward range over the current blocks contained in a node.
    class NodeBlocks {
    public:
        class iterator {
        public:
            using iterator_category = std::forward_iterator_tag;
            using value_type = BlockId;
            using difference_type = std::ptrdiff_t;
            using pointer = const BlockId*;
            using reference = BlockId;

            iterator() = default;
            iterator(const RefinablePartition* p, std::size_t pos) : p_(p), pos_(pos) {}

            BlockId operator*() const { return p_->block_of_[p_->elements_[pos_]]; }
            iterator& operator++()
            {
                pos_ = p_->nodes_[p_->blocks_[**this].node].end;
                return *this;
            }
            iterator operator++(int)
            {
                auto old = *this;
                ++*this;
                return old;
            }
            bool operator==(const iterator& o) const { return pos_ == o.pos_; }

        private:
            const RefinablePartition* p_ = nullptr;
            std::size_t pos_ = 0;
        };

        NodeBlocks(const RefinablePartition* p, std::size_t begin, std::size_t end) : p_(p), begin_(begin), end_(end) {}
        iterator begin() const { return {p_, begin_}; }
        iterator end() const { return {p_, end_}; }

    private:
        const RefinablePartition* p_;
        std::size_t begin_;
        std::size_t end_;
    };

    RefinablePartition() = default;

    /// One node per block; a block's representative is its first element.
    /// Block ids follow the order of `blocks`. Throws InputError if `blocks`
    /// is not a partition of 0..num_states-1.
    static RefinablePartition from_blocks(const StateBlocks& blocks, std::size_t num_states)
    {
        validate_partition(blocks, num_states);
        RefinablePartition p;
        p.elements_.reserve(num_states);
        p.position_.resize(num_states);
        p.block_of_.resize(num_states);
        for (const auto& block : blocks) {
            const auto id = static_cast<BlockId>(p.blocks_.size());
            const std::size_t begin = p.elements_.size();
            for (State q : block) {
                p.position_[q] = p.elements_.size();
                p.block_of_[q] = id;
                p.elements_.push_back(q);
            }
            p.nodes_.push_back({begin, p.elements_.size()});
            p.blocks_.push_back({static_cast<NodeId>(p.nodes_.size() - 1), block.front()});
        }
        p.marked_count_.assign(p.blocks_.size(), 0);
        return p;
    }

    std::size_t num_states() const noexcept { return elements_.size(); }
    std::size_t num_blocks() const noexcept { return blocks_.size(); }
    std::size_t num_nodes() const noexcept { return nodes_.size(); }

    BlockId block_of(State q) const { return block_of_[q]; }
    NodeId node_of(BlockId b) const { return blocks_[b].node; }
    State representative(BlockId b) const { return blocks_[b].rep; }
    std::size_t position(State q) const { return position_[q]; }
    std::span<const State> layout() const noexcept { return elements_; }

    std::span<const State> node_states(NodeId n) const
    {
        return {elements_.data() + nodes_[n].begin, elements_.data() + nodes_[n].end};
    }

    std::span<const State> block_states(BlockId b) const { return node_states(blocks_[b].node); }

    NodeBlocks node_blocks(NodeId n) const { return {this, nodes_[n].begin, nodes_[n].end}; }

    /// The block of the node's first element. O(1).
    BlockId choose_block(NodeId n) const { return block_of_[elements_[nodes_[n].begin]]; }

    /// True when the node is exactly the extent of a current block.
    bool node_is_block(NodeId n) const { return blocks_[choose_block(n)].node == n; }

    /**
     * Replaces every block E with E & marked != {} and E not inside marked by
     * E & marked (new id) and E \ marked (old id). `on_split` is called once
     * per split block, right after that block has been divided, with a
     * SplitEvent. Runs in O(|marked|) plus the callbacks. Duplicate entries
     * in `marked` are ignored.
     */
    template <typename OnSplit>
    void split(std::span<const State> marked, OnSplit&& on_split)
    {
        touched_.clear();
        for (State q : marked) {
            const BlockId b = block_of_[q];
            const auto& node = nodes_[blocks_[b].node];
            const std::size_t target = node.begin + marked_count_[b];
            const std::size_t pos = position_[q];
            if (pos < target) {
                continue; // already in the marked prefix
            }
            if (marked_count_[b] == 0) {
                touched_.push_back(b);
            }
            const State other = elements_[target];
            elements_[target] = q;
            elements_[pos] = other;
            position_[q] = target;
            position_[other] = pos;
            ++marked_count_[b];
        }

        for (BlockId kept : touched_) {
            const std::size_t k = marked_count_[kept];
            marked_count_[kept] = 0;
            const Node window = nodes_[blocks_[kept].node];
            if (k == window.end - window.begin) {
                continue;
            }
            const auto created = static_cast<BlockId>(blocks_.size());
            nodes_.push_back({window.begin, window.begin + k});
            nodes_.push_back({window.begin + k, window.end});
            blocks_.push_back({static_cast<NodeId>(nodes_.size() - 2), blocks_[kept].rep});
            marked_count_.push_back(0);
            blocks_[kept].node = static_cast<NodeId>(nodes_.size() - 1);
            for (std::size_t pos = window.begin; pos < window.begin + k; ++pos) {
                block_of_[elements_[pos]] = created;
            }

            BlockId fresh = created;
            if (block_of_[blocks_[kept].rep] == created) {
                fresh = kept;
            }
            blocks_[fresh].rep = elements_[nodes_[blocks_[fresh].node].begin];
            on_split(SplitEvent{kept, created, fresh});
        }
        touched_.clear();
    }

    void split(std::span<const State> marked)
    {
        split(marked, [](const SplitEvent&) {});
    }

    /// Current blocks in id order, states in layout order.
    StateBlocks blocks() const
    {
        StateBlocks out;
        out.reserve(blocks_.size());
        for (BlockId b = 0; b < blocks_.size(); ++b) {
            auto states = block_states(b);
            out.emplace_back(states.begin(), states.end());
        }
        return out;
    }

    /// Structural self-check; throws InvariantViolation.
    void check_invariants() const
    {
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (position_[elements_[i]] != i) {
                throw InvariantViolation("position is not the inverse of the layout at index " + std::to_string(i));
            }
        }
        std::size_t covered = 0;
        for (BlockId b = 0; b < blocks_.size(); ++b) {
            const auto& node = nodes_[blocks_[b].node];
            if (node.begin >= node.end) {
                throw InvariantViolation("block " + std::to_string(b) + " is empty");
            }
            for (std::size_t pos = node.begin; pos < node.end; ++pos) {
                if (block_of_[elements_[pos]] != b) {
                    throw InvariantViolation("block " + std::to_string(b) + " window holds a foreign state");
                }
            }
            if (block_of_[blocks_[b].rep] != b) {
                throw InvariantViolation("representative of block " + std::to_string(b) + " is not a member");
            }
            covered += node.end - node.begin;
        }
        if (covered != elements_.size()) {
            throw InvariantViolation("block windows do not cover all states");
        }
    }

private:
    struct Node {
        std::size_t begin;
        std::size_t end;
    };
    struct Block {
        NodeId node;
        State rep;
    };

    std::vector<State> elements_;
    std::vector<std::size_t> position_;
    std::vector<BlockId> block_of_;
    std::vector<Block> blocks_;
    std::vector<Node> nodes_;
    std::vector<std::size_t> marked_count_;
    std::vector<BlockId> touched_;
};

} // namespace simrel
