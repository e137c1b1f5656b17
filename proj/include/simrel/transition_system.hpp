#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simrel/types.hpp"

namespace simrel {

using Transition = std::pair<State, State>;

/**
 * A finite transition system (Q, ->) with Q = {0, ..., n-1}.
 *
 * Transitions are stored once, sorted and deduplicated. Successor and
 * predecessor lists are kept in compressed (offset + flat array) form so
 * that ->(q) and ->^{-1}(q) can both be scanned in time linear in their size.
 */
class TransitionSystem {
public:
    TransitionSystem() = default;

    /// Duplicate pairs are dropped. Throws InputError on out-of-range ids.
    TransitionSystem(std::size_t num_states, std::vector<Transition> transitions)
        : num_states_(num_states), transitions_(std::move(transitions))
    {
        for (const auto& [u, v] : transitions_) {
            if (u >= num_states_ || v >= num_states_) {
                throw InputError("transition " + std::to_string(u) + " -> " + std::to_string(v) +
                                 " uses a state outside 0.." + std::to_string(num_states_ == 0 ? 0 : num_states_ - 1));
            }
        }
        std::sort(transitions_.begin(), transitions_.end());
        transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
        build_index();
    }

    std::size_t num_states() const noexcept { return num_states_; }
    std::size_t num_transitions() const noexcept { return transitions_.size(); }

    /// All transitions, lexicographically sorted.
    std::span<const Transition> transitions() const noexcept { return transitions_; }

    std::span<const State> successors(State q) const
    {
        return {succ_.data() + succ_offset_[q], succ_.data() + succ_offset_[q + 1]};
    }

    std::span<const State> predecessors(State q) const
    {
        return {pred_.data() + pred_offset_[q], pred_.data() + pred_offset_[q + 1]};
    }

    bool has_successor(State q) const { return succ_offset_[q] != succ_offset_[q + 1]; }

    bool has_transition(State u, State v) const
    {
        auto succ = successors(u);
        return std::binary_search(succ.begin(), succ.end(), v);
    }

    friend bool operator==(const TransitionSystem& a, const TransitionSystem& b)
    {
        return a.num_states_ == b.num_states_ && a.transitions_ == b.transitions_;
    }

private:
    void build_index()
    {
        succ_offset_.assign(num_states_ + 1, 0);
        pred_offset_.assign(num_states_ + 1, 0);
        for (const auto& [u, v] : transitions_) {
            ++succ_offset_[u + 1];
            ++pred_offset_[v + 1];
        }
        for (std::size_t q = 0; q < num_states_; ++q) {
            succ_offset_[q + 1] += succ_offset_[q];
            pred_offset_[q + 1] += pred_offset_[q];
        }
        succ_.resize(transitions_.size());
        pred_.resize(transitions_.size());
        std::vector<std::size_t> succ_fill(succ_offset_.begin(), succ_offset_.end() - 1);
        std::vector<std::size_t> pred_fill(pred_offset_.begin(), pred_offset_.end() - 1);
        // transitions_ is sorted, so both lists come out sorted
        for (const auto& [u, v] : transitions_) {
            succ_[succ_fill[u]++] = v;
            pred_[pred_fill[v]++] = u;
        }
    }

    std::size_t num_states_ = 0;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> succ_offset_{0};
    std::vector<State> succ_;
    std::vector<std::size_t> pred_offset_{0};
    std::vector<State> pred_;
};

} // namespace simrel
