#include <catch_amalgamated.hpp>

#include <set>

#include "simrel/generator.hpp"
#include "simrel/problem_io.hpp"
#include "simrel/random.hpp"

using namespace simrel;

TEST_CASE("rng is reproducible and bounded", "[rng]")
{
    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(a.next() == b.next());
    }
    Rng c(1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto x = c.below(7);
        REQUIRE(x < 7);
        seen.insert(x);
        const auto y = c.between(3, 5);
        REQUIRE(y >= 3);
        REQUIRE(y <= 5);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("gen: frozen outputs", "[gen]")
{
    CHECK(generate_problem({1, 3, 0, PreorderMode::qxq}) == "# gen seed=1 states=3 arcs=0 preorder=qxq\nts 3\nend\n");
    CHECK(generate_problem({7, 3, 2, PreorderMode::labels}) ==
          "# gen seed=7 states=3 arcs=2 preorder=labels\nts 3\n2 0\n2 1\nend\nlabel 0 a\nlabel 1 a\nlabel 2 b\n");
}

TEST_CASE("gen: same seed, same bytes", "[gen]")
{
    for (auto mode : {PreorderMode::qxq, PreorderMode::labels, PreorderMode::explicit_order}) {
        const GenConfig config{123456789, 9, 20, mode};
        CHECK(generate_problem(config) == generate_problem(config));
    }
    CHECK(generate_problem({1, 9, 20, PreorderMode::qxq}) != generate_problem({2, 9, 20, PreorderMode::qxq}));
}

TEST_CASE("gen: rejects bad sizes", "[gen]")
{
    CHECK_THROWS_AS(generate_problem({1, 0, 0, PreorderMode::qxq}), InputError);
    CHECK_THROWS_AS(generate_problem({1, 2, 5, PreorderMode::qxq}), InputError);
    CHECK_NOTHROW(generate_problem({1, 2, 4, PreorderMode::qxq}));
    CHECK_THROWS_AS(parse_mode("total"), InputError);
}

TEST_CASE("gen: output always parses", "[gen][property]")
{
    Rng rng(2);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const std::size_t n = rng.between(1, 10);
        const std::size_t m = rng.between(0, n * n);
        const auto mode = static_cast<PreorderMode>(seed % 3);
        const auto text = generate_problem({seed, n, m, mode});
        Problem p;
        REQUIRE_NOTHROW(p = parse_problem(text));
        CHECK(p.system.num_states() == n);
        CHECK(p.system.num_transitions() == m);
        CHECK_NOTHROW(p.initial.validate(n));
    }
}

TEST_CASE("gen: full and empty arc sets", "[gen]")
{
    const auto full = parse_problem(generate_problem({5, 4, 16, PreorderMode::qxq}));
    CHECK(full.system.num_transitions() == 16);
    const auto none = parse_problem(generate_problem({5, 4, 0, PreorderMode::explicit_order}));
    CHECK(none.system.num_transitions() == 0);
}
