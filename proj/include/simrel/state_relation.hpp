#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <utility>
#include <vector>

#include "simrel/types.hpp"

namespace simrel {

/**
 * An explicit relation over {0, ..., n-1}, stored as a dense boolean matrix
 * (one bitset row per state). Row q holds R(q) = { q' | (q, q') in R }.
 *
 * This is the working representation of the oracle; it favours simple,
 * auditable set algebra over memory use and is meant for small n.
 */
class StateRelation {
public:
    using Row = boost::dynamic_bitset<>;

    StateRelation() = default;
    explicit StateRelation(std::size_t n) : rows_(n, Row(n)) {}

    static StateRelation identity(std::size_t n)
    {
        StateRelation r(n);
        for (std::size_t q = 0; q < n; ++q) {
            r.rows_[q].set(q);
        }
        return r;
    }

    static StateRelation full(std::size_t n)
    {
        StateRelation r(n);
        for (auto& row : r.rows_) {
            row.set();
        }
        return r;
    }

    std::size_t num_states() const noexcept { return rows_.size(); }

    bool contains(State p, State q) const { return rows_[p].test(q); }
    void insert(State p, State q) { rows_[p].set(q); }
    void erase(State p, State q) { rows_[p].reset(q); }

    const Row& image(State p) const { return rows_[p]; }
    Row& image(State p) { return rows_[p]; }

    /// Number of pairs.
    std::size_t size() const
    {
        std::size_t n = 0;
        for (const auto& row : rows_) {
            n += row.count();
        }
        return n;
    }

    bool empty() const { return size() == 0; }

    bool is_subset_of(const StateRelation& other) const
    {
        for (std::size_t q = 0; q < rows_.size(); ++q) {
            if (!rows_[q].is_subset_of(other.rows_[q])) {
                return false;
            }
        }
        return true;
    }

    std::vector<std::pair<State, State>> pairs() const
    {
        std::vector<std::pair<State, State>> out;
        for (std::size_t p = 0; p < rows_.size(); ++p) {
            for (auto q = rows_[p].find_first(); q != Row::npos; q = rows_[p].find_next(q)) {
                out.emplace_back(static_cast<State>(p), static_cast<State>(q));
            }
        }
        return out;
    }

    StateRelation inverse() const
    {
        StateRelation inv(rows_.size());
        for (const auto& [p, q] : pairs()) {
            inv.insert(q, p);
        }
        return inv;
    }

    bool is_reflexive() const
    {
        for (std::size_t q = 0; q < rows_.size(); ++q) {
            if (!rows_[q].test(q)) {
                return false;
            }
        }
        return true;
    }

    bool is_transitive() const
    {
        for (std::size_t p = 0; p < rows_.size(); ++p) {
            for (auto q = rows_[p].find_first(); q != Row::npos; q = rows_[p].find_next(q)) {
                if (!rows_[q].is_subset_of(rows_[p])) {
                    return false;
                }
            }
        }
        return true;
    }

    bool is_preorder() const { return is_reflexive() && is_transitive(); }

    /// Equivalence classes [q] = { q' | q R q' and q' R q } of a preorder,
    /// ordered by their smallest member; members ascending.
    std::vector<std::vector<State>> blocks() const
    {
        std::vector<std::vector<State>> out;
        std::vector<bool> seen(rows_.size(), false);
        for (std::size_t p = 0; p < rows_.size(); ++p) {
            if (seen[p]) {
                continue;
            }
            std::vector<State> block;
            for (std::size_t q = p; q < rows_.size(); ++q) {
                if (!seen[q] && rows_[p].test(q) && rows_[q].test(p)) {
                    seen[q] = true;
                    block.push_back(static_cast<State>(q));
                }
            }
            if (block.empty()) { // p not reflexive; keep it on its own
                seen[p] = true;
                block.push_back(static_cast<State>(p));
            }
            out.push_back(std::move(block));
        }
        return out;
    }

    StateRelation& operator|=(const StateRelation& other)
    {
        for (std::size_t q = 0; q < rows_.size(); ++q) {
            rows_[q] |= other.rows_[q];
        }
        return *this;
    }

    StateRelation& operator&=(const StateRelation& other)
    {
        for (std::size_t q = 0; q < rows_.size(); ++q) {
            rows_[q] &= other.rows_[q];
        }
        return *this;
    }

    StateRelation& operator-=(const StateRelation& other)
    {
        for (std::size_t q = 0; q < rows_.size(); ++q) {
            rows_[q] -= other.rows_[q];
        }
        return *this;
    }

    friend StateRelation operator|(StateRelation a, const StateRelation& b) { return a |= b; }
    friend StateRelation operator&(StateRelation a, const StateRelation& b) { return a &= b; }
    friend StateRelation operator-(StateRelation a, const StateRelation& b) { return a -= b; }

    friend bool operator==(const StateRelation& a, const StateRelation& b) { return a.rows_ == b.rows_; }

private:
    std::vector<Row> rows_;
};

/// Relational composition `outer o inner` = { (x, y) | y in outer(inner(x)) },
/// i.e. apply `inner` first.
inline StateRelation compose(const StateRelation& outer, const StateRelation& inner)
{
    const std::size_t n = inner.num_states();
    StateRelation out(n);
    for (std::size_t x = 0; x < n; ++x) {
        const auto& mid = inner.image(static_cast<State>(x));
        for (auto z = mid.find_first(); z != StateRelation::Row::npos; z = mid.find_next(z)) {
            out.image(static_cast<State>(x)) |= outer.image(static_cast<State>(z));
        }
    }
    return out;
}

} // namespace simrel
