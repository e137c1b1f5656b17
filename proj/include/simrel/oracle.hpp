#pragma once

/*
 * Brute-force reference implementations over explicit state relations.
 *
 * Everything here works on dense StateRelation matrices and recomputes from
 * scratch; none of it shares code paths with the partition-refinement
 * engine, which is what makes it usable as a checker for that engine.
 * Intended for systems of a few dozen states.
 *
 * Composition follows the usual right-to-left convention:
 * `compose(S, R)` is S o R = { (x, y) | y in S(R(x)) }.
 */

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "simrel/preorder.hpp"
#include "simrel/state_relation.hpp"
#include "simrel/transition_system.hpp"
#include "simrel/types.hpp"

namespace simrel::oracle {

struct OracleReport {
    struct Violation {
        std::string invariant;
        std::string witness;
    };

    bool passed = true;
    std::vector<Violation> violations;

    void fail(std::string invariant, std::string witness)
    {
        passed = false;
        violations.push_back({std::move(invariant), std::move(witness)});
    }

    void merge(const OracleReport& other)
    {
        for (const auto& v : other.violations) {
            fail(v.invariant, v.witness);
        }
    }

    std::string describe() const
    {
        std::string out;
        for (const auto& v : violations) {
            out += v.invariant + ": " + v.witness + "\n";
        }
        return out;
    }
};

inline std::string pair_text(State p, State q)
{
    return "(" + std::to_string(p) + ", " + std::to_string(q) + ")";
}

/// The transition relation as a StateRelation.
inline StateRelation forward(const TransitionSystem& ts)
{
    StateRelation t(ts.num_states());
    for (const auto& [u, v] : ts.transitions()) {
        t.insert(u, v);
    }
    return t;
}

/// The inverse transition relation: (x, y) iff y -> x.
inline StateRelation backward(const TransitionSystem& ts)
{
    return forward(ts).inverse();
}

/// The equivalence relation whose classes are `blocks`.
inline StateRelation equivalence(const StateBlocks& blocks, std::size_t n)
{
    StateRelation r(n);
    for (const auto& block : blocks) {
        for (State p : block) {
            for (State q : block) {
                r.insert(p, q);
            }
        }
    }
    return r;
}

/// [.]_R: relates each state to the members of its preorder block.
inline StateRelation block_relation(const StateRelation& preorder)
{
    return preorder & preorder.inverse();
}

inline StateBlocks canonical_blocks(StateBlocks blocks)
{
    for (auto& b : blocks) {
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

/// Classical local check: q S q' and q -> q1 imply some q' -> q1' with q1 S q1'.
inline bool is_simulation(const TransitionSystem& ts, const StateRelation& rel)
{
    for (const auto& [q, qs] : rel.pairs()) {
        for (State q1 : ts.successors(q)) {
            bool matched = false;
            for (State q1s : ts.successors(qs)) {
                if (rel.contains(q1, q1s)) {
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                return false;
            }
        }
    }
    return true;
}

/// Greatest simulation inside `init`: delete violating pairs in row-major
/// sweeps until a sweep deletes nothing. Throws InputError if `init` is not
/// a preorder.
inline StateRelation naive_coarsest_simulation(const TransitionSystem& ts, const StateRelation& init)
{
    if (!init.is_preorder()) {
        throw InputError("initial relation is not a preorder");
    }
    StateRelation rel = init;
    const std::size_t n = ts.num_states();
    bool changed = true;
    while (changed) {
        changed = false;
        for (State q = 0; q < n; ++q) {
            for (State qs = 0; qs < n; ++qs) {
                if (!rel.contains(q, qs)) {
                    continue;
                }
                for (State q1 : ts.successors(q)) {
                    bool matched = false;
                    for (State q1s : ts.successors(qs)) {
                        if (rel.contains(q1, q1s)) {
                            matched = true;
                            break;
                        }
                    }
                    if (!matched) {
                        rel.erase(q, qs);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    return rel;
}

/// q -> q' is maximal for R when every other successor q'' of q with
/// q' R q'' lies in the block of q'.
inline StateRelation maximal_transitions(const TransitionSystem& ts, const StateRelation& preorder)
{
    StateRelation out(ts.num_states());
    for (const auto& [q, q1] : ts.transitions()) {
        bool maximal = true;
        for (State q2 : ts.successors(q)) {
            if (preorder.contains(q1, q2) && !preorder.contains(q2, q1)) {
                maximal = false;
                break;
            }
        }
        if (maximal) {
            out.insert(q, q1);
        }
    }
    return out;
}

/// R o ->^{-1} is included in ->^{-1} o U. Throws InputError unless r is
/// included in u.
inline bool is_stable(const TransitionSystem& ts, const StateRelation& r, const StateRelation& u)
{
    if (!r.is_subset_of(u)) {
        throw InputError("is_stable: r is not included in u");
    }
    const auto back = backward(ts);
    return compose(r, back).is_subset_of(compose(back, u));
}

struct BlockStabilityForms {
    bool same_block;     ///< equivalent states agree on membership in ->^{-1} o R(b)
    bool composed;       ///< P o ->^{-1} in ->^{-1} o R
    bool maximal_based;  ///< P o ->_R^{-1} in ->^{-1} o [.]_R
};

inline BlockStabilityForms block_stability_forms(const TransitionSystem& ts, const StateBlocks& p,
                                                 const StateRelation& r)
{
    const std::size_t n = ts.num_states();
    const auto back = backward(ts);
    const auto pre_r = compose(back, r); // pre_r(b) = ->^{-1}(R(b))
    const auto peq = equivalence(p, n);

    BlockStabilityForms forms{true, true, true};
    for (const auto& block : p) {
        for (State b = 0; b < n && forms.same_block; ++b) {
            const bool first = pre_r.contains(b, block.front());
            for (State d : block) {
                if (pre_r.contains(b, d) != first) {
                    forms.same_block = false;
                    break;
                }
            }
        }
    }
    forms.composed = compose(peq, back).is_subset_of(pre_r);
    const auto back_max = maximal_transitions(ts, r).inverse();
    forms.maximal_based = compose(peq, back_max).is_subset_of(compose(back, block_relation(r)));
    return forms;
}

/// Whether the equivalence given by `p` is R-block-stable. All three
/// equivalent formulations are evaluated and must agree; a disagreement
/// throws InvariantViolation. Throws InputError if a block of p is not
/// inside a block of r.
inline bool is_block_stable(const TransitionSystem& ts, const StateBlocks& p, const StateRelation& r)
{
    for (const auto& block : p) {
        for (State d : block) {
            if (!r.contains(block.front(), d) || !r.contains(d, block.front())) {
                throw InputError("is_block_stable: partition block not inside a block of r");
            }
        }
    }
    const auto forms = block_stability_forms(ts, p, r);
    if (forms.same_block != forms.composed || forms.same_block != forms.maximal_based) {
        throw InvariantViolation("block-stability formulations disagree");
    }
    return forms.same_block;
}

/// Coarsest R-block-stable partition: start from the blocks of r and split
/// on every predicate ->^{-1} o R(b) until a full pass changes nothing.
/// Blocks are returned sorted.
inline StateBlocks coarsest_block_stable_partition(const TransitionSystem& ts, const StateRelation& r)
{
    const std::size_t n = ts.num_states();
    const auto pre_r = compose(backward(ts), r);
    StateBlocks blocks = r.blocks();
    bool changed = true;
    while (changed) {
        changed = false;
        for (State b = 0; b < n; ++b) {
            StateBlocks next;
            for (auto& block : blocks) {
                StateBlock in, out;
                for (State d : block) {
                    (pre_r.contains(b, d) ? in : out).push_back(d);
                }
                if (!in.empty() && !out.empty()) {
                    changed = true;
                    next.push_back(std::move(in));
                    next.push_back(std::move(out));
                } else {
                    next.push_back(std::move(block));
                }
            }
            blocks = std::move(next);
        }
    }
    return canonical_blocks(std::move(blocks));
}

struct RefineOutcome {
    StateRelation refined;         ///< V = r \ NotRel'
    StateRelation removed_product; ///< NotRel' from block products over plain transitions
    StateRelation removed_maximal; ///< the same set from maximal transitions, pair by pair
    OracleReport report;
};

/**
 * One refine step evaluated directly from its definition.
 *
 * With NotRel = u \ r and P the coarsest r-block-stable partition, the
 * removed set is the union of [c]_P x [d]_P over c -> b, c r d,
 * d in ->^{-1}(NotRel(b)), d not in ->^{-1}(r(b)). It is also computed
 * from maximal transitions only, and the two must coincide. The report
 * further checks that V is a preorder, is r-stable, keeps every simulation
 * inside r, and has exactly the blocks of P.
 */
inline RefineOutcome refine_oracle(const TransitionSystem& ts, const StateRelation& r, const StateRelation& u)
{
    const std::size_t n = ts.num_states();
    RefineOutcome out{r, StateRelation(n), StateRelation(n), {}};
    if (!r.is_preorder()) {
        out.report.fail("precondition", "r is not a preorder");
    }
    if (!u.is_preorder()) {
        out.report.fail("precondition", "u is not a preorder");
    }
    if (!r.is_subset_of(u)) {
        out.report.fail("precondition", "r is not included in u");
        return out;
    }
    if (!is_stable(ts, r, u)) {
        out.report.fail("precondition", "r is not u-stable");
    }
    if (!out.report.passed) {
        return out;
    }

    const auto notrel = u - r;
    const auto partition = coarsest_block_stable_partition(ts, r);
    std::vector<std::size_t> block_of(n);
    for (std::size_t i = 0; i < partition.size(); ++i) {
        for (State q : partition[i]) {
            block_of[q] = i;
        }
    }

    const auto back = backward(ts);
    const auto pre_notrel = compose(back, notrel);
    const auto pre_r = compose(back, r);
    for (const auto& [c, b] : ts.transitions()) {
        auto candidates = r.image(c) & pre_notrel.image(b);
        candidates -= pre_r.image(b);
        for (auto d = candidates.find_first(); d != StateRelation::Row::npos; d = candidates.find_next(d)) {
            for (State c2 : partition[block_of[c]]) {
                for (State d2 : partition[block_of[d]]) {
                    out.removed_product.insert(c2, d2);
                }
            }
        }
    }

    const auto max_forward = maximal_transitions(ts, r);
    const auto back_max = max_forward.inverse();
    const auto pre_notrel_max = compose(back_max, notrel);
    const auto pre_r_max = compose(back_max, r);
    for (const auto& [c, b] : max_forward.pairs()) {
        auto candidates = r.image(c) & pre_notrel_max.image(b);
        candidates -= pre_r_max.image(b);
        for (auto d = candidates.find_first(); d != StateRelation::Row::npos; d = candidates.find_next(d)) {
            out.removed_maximal.insert(c, static_cast<State>(d));
        }
    }

    if (!(out.removed_product == out.removed_maximal)) {
        const auto diff = (out.removed_product - out.removed_maximal) | (out.removed_maximal - out.removed_product);
        const auto w = diff.pairs().front();
        out.report.fail("removed set: product form = maximal-transition form", pair_text(w.first, w.second));
    }

    out.refined = r - out.removed_product;
    const auto& v = out.refined;
    if (!compose(v, back).is_subset_of(compose(back, r))) {
        out.report.fail("V o ->^{-1} in ->^{-1} o r", "");
    }
    if (!v.is_preorder()) {
        out.report.fail("V is a preorder", "");
    }
    if (!is_stable(ts, v, r)) {
        out.report.fail("V is r-stable", "");
    }
    if (!naive_coarsest_simulation(ts, r).is_subset_of(v)) {
        out.report.fail("simulations inside r stay inside V", "");
    }
    if (canonical_blocks(v.blocks()) != partition) {
        out.report.fail("blocks of V = coarsest r-block-stable partition", "");
    }
    return out;
}

} // namespace simrel::oracle
