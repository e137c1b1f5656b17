#include <catch_amalgamated.hpp>

#include "simrel/oracle.hpp"
#include "simrel/preorder.hpp"
#include "simrel/problem_io.hpp"
#include "simrel/random.hpp"
#include "simrel/state_relation.hpp"
#include "simrel/transition_system.hpp"

#include "support.hpp"

using namespace simrel;

TEST_CASE("transition system indexes", "[ts]")
{
    TransitionSystem ts(4, {{2, 1}, {0, 1}, {0, 1}, {1, 3}, {3, 3}});
    CHECK(ts.num_states() == 4);
    CHECK(ts.num_transitions() == 4); // the duplicate 0 -> 1 is dropped
    CHECK(std::vector<State>(ts.successors(0).begin(), ts.successors(0).end()) == std::vector<State>{1});
    CHECK(std::vector<State>(ts.predecessors(1).begin(), ts.predecessors(1).end()) == std::vector<State>{0, 2});
    CHECK(ts.has_transition(3, 3));
    CHECK(ts.has_successor(2));
    for (State u = 0; u < 4; ++u) {
        for (State v : ts.successors(u)) {
            const auto pre = ts.predecessors(v);
            CHECK(std::find(pre.begin(), pre.end(), u) != pre.end());
        }
    }
    CHECK_THROWS_AS(TransitionSystem(2, {{0, 2}}), InputError);
}

TEST_CASE("parse_problem: default preorder is Q x Q", "[parse]")
{
    const auto p = parse_problem("ts 2\n0 1\nend");
    CHECK(p.system.num_states() == 2);
    CHECK(p.system.num_transitions() == 1);
    REQUIRE(p.initial.blocks.size() == 1);
    CHECK(p.initial.blocks[0] == StateBlock{0, 1});
    CHECK(p.initial.rel == std::set<BlockPair>{{0, 0}});
}

TEST_CASE("parse_problem: explicit blocks and rel", "[parse]")
{
    const auto p = parse_problem("ts 3\n0 1\n1 2\nend\nblocks\n0: 0\n1: 1\n2: 2\nend\nrel\n2 1\n2 0\n1 0\nend");
    CHECK(p.initial.blocks == StateBlocks{{0}, {1}, {2}});
    CHECK(p.initial.rel == std::set<BlockPair>{{0, 0}, {1, 1}, {2, 2}, {2, 1}, {2, 0}, {1, 0}});
}

TEST_CASE("parse_problem: rejects", "[parse]")
{
    auto line_of = [](std::string_view text) {
        try {
            parse_problem(text);
        } catch (const InputError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    // Mutually related distinct blocks.
    CHECK_THROWS_AS(parse_problem("ts 2\n0 1\nend\nblocks\n0: 0\n1: 1\nend\nrel\n0 1\n1 0\nend"), InputError);
    // Not transitively closed.
    CHECK_THROWS_AS(parse_problem("ts 3\nend\nblocks\n0: 0\n1: 1\n2: 2\nend\nrel\n0 1\n1 2\nend"), InputError);
    CHECK(line_of("ts 3\n0 1\n1 x\nend") == 3);
    CHECK(line_of("ts 2\n0 5\nend") == 2);
    CHECK(line_of("ts 2\nend\nblocks\n0: 0 1\n1: 1\nend") == 5); // duplicate membership
    CHECK(line_of("ts 2\nend\nblocks\n0: 0\n2: 1\nend") == 5);    // idx out of sequence
    CHECK_THROWS_AS(parse_problem("ts 2\nend\nblocks\n0: 0\nend"), InputError); // state 1 uncovered
    CHECK_THROWS_AS(parse_problem("ts 2\nend\nrel\nend"), InputError);          // rel without blocks
    CHECK_THROWS_AS(parse_problem("ts 0\nend"), InputError);
    CHECK_THROWS_AS(parse_problem(""), InputError);
    CHECK_THROWS_AS(parse_problem("ts 2\n0 1\n"), InputError); // missing end
}

TEST_CASE("parse_problem: comments, labels and precedence", "[parse]")
{
    const auto labelled = parse_problem("# c\nts 4\n\n0 1   # arc\nend\nlabel 2 b\nlabel 0 a\nlabel 3 a\n");
    CHECK(labelled.initial.blocks == StateBlocks{{0, 3}, {1}, {2}});
    CHECK(labelled.initial.rel == std::set<BlockPair>{{0, 0}, {1, 1}, {2, 2}});

    const auto both = parse_problem("ts 2\nend\nlabel 0 a\nlabel 1 b\nblocks\n0: 0 1\nend\n");
    CHECK(both.initial.blocks == StateBlocks{{0, 1}});
}

TEST_CASE("explicit_relation", "[prp]")
{
    PartitionRelationPair one{{{0, 1}}, {{0, 0}}};
    CHECK(explicit_relation(one) == StateRelation::full(2));

    CHECK(explicit_relation(PartitionRelationPair::identity(2)) == StateRelation::identity(2));

    PartitionRelationPair below{{{0}, {1}}, {{0, 0}, {1, 1}, {0, 1}}};
    auto expected = StateRelation::identity(2);
    expected.insert(0, 1);
    CHECK(explicit_relation(below) == expected);
}

TEST_CASE("init_refine", "[prp]")
{
    SECTION("chain")
    {
        TransitionSystem ts(3, {{0, 1}, {1, 2}});
        const auto r = explicit_relation(init_refine(PartitionRelationPair::universal(3), ts));
        auto expected = StateRelation::full(3);
        expected.erase(0, 2);
        expected.erase(1, 2);
        CHECK(r == expected);
        CHECK(oracle::is_stable(ts, r, StateRelation::full(3)));
    }
    SECTION("no transitions")
    {
        TransitionSystem ts(2, {});
        CHECK(explicit_relation(init_refine(PartitionRelationPair::universal(2), ts)) == StateRelation::full(2));
    }
    SECTION("self-loop and isolated state")
    {
        TransitionSystem ts(2, {{0, 0}});
        auto expected = StateRelation::full(2);
        expected.erase(0, 1);
        CHECK(explicit_relation(init_refine(PartitionRelationPair::universal(2), ts)) == expected);
    }
}

TEST_CASE("init_refine properties on random preorders", "[prp][property]")
{
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const auto inst = test::random_instance(rng, 6);
        const auto before = explicit_relation(inst.initial);
        const auto refined = init_refine(inst.initial, inst.system);
        REQUIRE_NOTHROW(refined.validate(inst.system.num_states()));
        const auto after = explicit_relation(refined);
        CHECK(after.is_subset_of(before));
        CHECK(oracle::is_stable(inst.system, after, StateRelation::full(inst.system.num_states())));
        CHECK(oracle::naive_coarsest_simulation(inst.system, before).is_subset_of(after));
    }
}

TEST_CASE("quotient", "[prp]")
{
    TransitionSystem fork(3, {{0, 2}, {1, 2}});
    CHECK(quotient(fork, {{0, 1}, {2}}) == TransitionSystem(2, {{0, 1}}));

    TransitionSystem cycle(2, {{0, 1}, {1, 0}});
    CHECK(quotient(cycle, {{0, 1}}) == TransitionSystem(1, {{0, 0}}));

    TransitionSystem ts(3, {{0, 1}, {1, 2}, {2, 2}});
    CHECK(quotient(ts, {{0}, {1}, {2}}) == ts);
    CHECK_THROWS_AS(quotient(ts, {{0}, {1}}), InputError);

    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto inst = test::random_instance(rng, 6);
        const auto& blocks = inst.initial.blocks;
        const auto q = quotient(inst.system, blocks);
        std::vector<State> block_of(inst.system.num_states());
        for (State b = 0; b < blocks.size(); ++b) {
            for (State s : blocks[b]) {
                block_of[s] = b;
            }
        }
        for (const auto& [u, v] : inst.system.transitions()) {
            CHECK(q.has_transition(block_of[u], block_of[v]));
        }
    }
}

TEST_CASE("serialize_result", "[io]")
{
    PartitionRelationPair prp{{{2}, {0, 1}}, {{0, 0}, {1, 1}, {0, 1}}};
    CHECK(serialize_result(prp) == "blocks 2\n0: 0 1\n1: 2\nrel\n1 0\nend\n");
    CHECK(serialize_result(PartitionRelationPair::identity(1)) == "blocks 1\n0: 0\nrel\nend\n");

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto inst = test::random_instance(rng, 7);
        const auto text = serialize_result(inst.initial);
        const auto back = parse_result(text);
        CHECK(back == inst.initial);
        CHECK(serialize_result(back) == text);
    }
}

TEST_CASE("state relation basics", "[relation]")
{
    auto r = StateRelation::identity(3);
    r.insert(0, 1);
    r.insert(1, 2);
    CHECK_FALSE(r.is_transitive());
    r.insert(0, 2);
    CHECK(r.is_preorder());
    CHECK(r.blocks() == StateBlocks{{0}, {1}, {2}});

    // compose(S, R) applies R first.
    StateRelation a(3), b(3);
    a.insert(0, 1);
    b.insert(1, 2);
    CHECK(compose(b, a).pairs() == std::vector<std::pair<State, State>>{{0, 2}});
    CHECK(compose(a, b).empty());
    CHECK(r.inverse().contains(2, 0));
}
