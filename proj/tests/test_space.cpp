#include "doctest.h"
#include "fixtures.hpp"
#include "hypergrid/space.hpp"

using namespace hypergrid;
using hypergrid::testing::figure1a;
using hypergrid::testing::figure1b;
using hypergrid::testing::sharing_pairs;

TEST_CASE("evidence keeps its prior as accrued value") {
    HypothesisSpace space;
    space.add_evidence("h1", 0.7);
    const auto& h = space.at("h1");
    CHECK(h.level == 0);
    REQUIRE(h.accrued);
    CHECK(*h.accrued == 0.7);
    CHECK_FALSE(h.is_alternative());
    CHECK(space.conflict_count() == 0);
}

TEST_CASE("shared support creates a conflict automatically") {
    auto space = figure1a();
    const auto edge = space.find_conflict("H2", "H1");
    REQUIRE(edge);
    CHECK(edge->a == HypothesisId("H1"));
    CHECK(edge->b == HypothesisId("H2"));
    CHECK(edge->reason == ConflictReason::shared_support);
    CHECK(space.conflict_count() == 1);
}

TEST_CASE("add_hypothesis rejects malformed input") {
    auto space = figure1a();
    SUBCASE("empty support above level 0") {
        space.add_hypothesis("G", 2, 1, {"H1"});
        CHECK_THROWS_AS(space.add_hypothesis("X", 2, 1, {}), SpaceError);
    }
    SUBCASE("unknown support") { CHECK_THROWS_AS(space.add_hypothesis("X", 1, 2, {"nope"}), SpaceError); }
    SUBCASE("support on the wrong level") { CHECK_THROWS_AS(space.add_hypothesis("X", 1, 2, {"H1"}), SpaceError); }
    SUBCASE("support larger than the model") {
        CHECK_THROWS_AS(space.add_hypothesis("X", 1, 1, {"h1", "h3"}), SpaceError);
    }
    SUBCASE("duplicate support set") { CHECK_THROWS_AS(space.add_hypothesis("X", 1, 3, {"h1", "h2"}), SpaceError); }
    SUBCASE("prior out of range") { CHECK_THROWS_AS(space.add_evidence("h9", 1.5), SpaceError); }
    SUBCASE("prior above level 0") { CHECK_THROWS_AS(space.add_hypothesis("X", 1, 1, {"h3"}, 0.5), SpaceError); }
    SUBCASE("evidence without prior") { CHECK_THROWS_AS(space.add_hypothesis("x", 0, 1, {}), SpaceError); }
    SUBCASE("duplicate id") { CHECK_THROWS_AS(space.add_evidence("h1", 0.1), SpaceError); }
    SUBCASE("skipped level") { CHECK_THROWS_AS(space.add_hypothesis("X", 3, 1, {"H1"}), SpaceError); }
}

TEST_CASE("declare_conflict") {
    HypothesisSpace space;
    space.add_evidence("w", 0.5);
    space.add_evidence("r", 0.5);
    space.add_hypothesis("alibi-A", 1, 1, {"w"});
    space.add_hypothesis("alibi-B", 1, 1, {"r"});

    const auto edge = space.declare_conflict("alibi-A", "alibi-B");
    CHECK(edge.reason == ConflictReason::domain_declared);
    CHECK(space.in_conflict("alibi-B", "alibi-A"));

    CHECK_THROWS_AS(space.declare_conflict("alibi-A", "alibi-A"), SpaceError);
    CHECK_THROWS_AS(space.declare_conflict("alibi-A", "w"), SpaceError);
    CHECK_THROWS_AS(space.declare_conflict("alibi-A", "ghost"), SpaceError);
}

TEST_CASE("re-declaring a shared-support edge leaves it unchanged") {
    auto space = figure1a();
    const auto before = space.conflicts();
    const auto first = space.declare_conflict("H1", "H2");
    const auto second = space.declare_conflict("H2", "H1");
    CHECK(first == second);
    CHECK(first.reason == ConflictReason::shared_support);
    CHECK(space.conflicts() == before);
}

TEST_CASE("alternatives for the two-hypothesis conflict") {
    auto space = figure1a();
    const auto created = space.generate_alternatives(*space.find_conflict("H1", "H2"));
    REQUIRE(created.size() == 2);
    CHECK(created[0] == HypothesisId("H3"));
    CHECK(created[1] == HypothesisId("H4"));

    const auto& h3 = space.at("H3");
    CHECK(h3.support == IdSet{"h1"});
    CHECK(h3.model_size == 2);
    CHECK(h3.alternative_of == HypothesisId("H1"));
    const auto& h4 = space.at("H4");
    CHECK(h4.support == IdSet{"h3"});
    CHECK(h4.alternative_of == HypothesisId("H2"));

    // Rule 1 edges involving the new nodes.
    CHECK(space.in_conflict("H1", "H3"));
    CHECK(space.in_conflict("H2", "H4"));
    CHECK_FALSE(space.in_conflict("H3", "H4"));
    CHECK_FALSE(space.in_conflict("H1", "H4"));
    CHECK_FALSE(space.in_conflict("H2", "H3"));

    // Calling again reuses instead of duplicating.
    const auto again = space.generate_alternatives(*space.find_conflict("H1", "H2"));
    CHECK(again == created);
    CHECK(space.level(1).size() == 4);
}

TEST_CASE("subset support yields one alternative and no empty node") {
    HypothesisSpace space;
    space.add_evidence("h2", 0.5);
    space.add_evidence("h3", 0.5);
    space.add_hypothesis("H1", 1, 2, {"h2"});
    space.add_hypothesis("H2", 1, 2, {"h2", "h3"});
    const auto created = space.generate_alternatives(*space.find_conflict("H1", "H2"));
    REQUIRE(created.size() == 1);
    CHECK(space.at(created[0]).support == IdSet{"h3"});
    CHECK(space.at(created[0]).alternative_of == HypothesisId("H2"));
    CHECK(space.level(1).size() == 3);
}

TEST_CASE("alternatives only for shared-support edges") {
    auto space = figure1a();
    space.add_hypothesis("G1", 2, 1, {"H1"});
    space.add_hypothesis("G2", 2, 1, {"H2"});
    const auto edge = space.declare_conflict("G1", "G2");
    CHECK_THROWS_AS(space.generate_alternatives(edge), SpaceError);
    CHECK_THROWS_AS(space.generate_alternatives(ConflictEdge{"H1", "ghost", ConflictReason::shared_support, {}}),
                    SpaceError);
}

TEST_CASE("alternative ids fall back to a suffix when the parent has no number") {
    HypothesisSpace space;
    space.add_evidence("a", 0.3);
    space.add_evidence("b", 0.3);
    space.add_evidence("c", 0.4);
    space.add_hypothesis("left", 1, 2, {"a", "b"});
    space.add_hypothesis("right", 1, 2, {"b", "c"});
    const auto created = space.generate_alternatives(*space.find_conflict("left", "right"));
    CHECK(created == std::vector<HypothesisId>{"left~1", "right~1"});
}

TEST_CASE("propagation on a conflict-free hierarchy adds nothing") {
    HypothesisSpace space;
    for (const char* e : {"a", "b", "c", "d"}) space.add_evidence(e, 0.25);
    space.add_hypothesis("X", 1, 2, {"a", "b"});
    space.add_hypothesis("Y", 1, 2, {"c", "d"});
    space.add_hypothesis("Z", 2, 2, {"X", "Y"});
    CHECK(space.propagate_conflicts_upward() == 0);
}

TEST_CASE("propagation over the two-level alternatives space adds nothing") {
    auto space = figure1a();
    space.generate_all_alternatives();
    const auto before = space.conflicts();
    CHECK(space.propagate_conflicts_upward() == 0);
    CHECK(space.conflicts() == before);
    // H1-H2 (h2), H1-H3 (h1), H2-H4 (h3)
    CHECK(space.conflict_count() == 3);
}

TEST_CASE("a declared evidence conflict propagates to exactly one upper pair") {
    HypothesisSpace space;
    for (const char* e : {"a", "b", "c", "d"}) space.add_evidence(e, 0.25);
    space.add_hypothesis("X", 1, 2, {"a", "b"});
    space.add_hypothesis("Y", 1, 2, {"c", "d"});
    space.declare_conflict("b", "c");

    // Brute-force oracle: every distinct upper pair with a claimant on each side.
    int expected = 0;
    for (const auto& p : space.level(1))
        for (const auto& q : space.level(1))
            if (p < q && ((space.at(p).support.count("b") && space.at(q).support.count("c")) ||
                          (space.at(p).support.count("c") && space.at(q).support.count("b"))))
                ++expected;
    CHECK(expected == 1);
    CHECK(space.propagate_conflicts_upward() == 1);
    const auto edge = space.find_conflict("X", "Y");
    REQUIRE(edge);
    CHECK(edge->reason == ConflictReason::propagated);
    REQUIRE(edge->source);
    CHECK(edge->source->first == HypothesisId("b"));
    CHECK(space.propagate_conflicts_upward() == 0);
}

TEST_CASE("propagation climbs several levels") {
    HypothesisSpace space;
    for (const char* e : {"a", "b"}) space.add_evidence(e, 0.5);
    space.add_hypothesis("X", 1, 1, {"a"});
    space.add_hypothesis("Y", 1, 1, {"b"});
    space.add_hypothesis("P", 2, 1, {"X"});
    space.add_hypothesis("Q", 2, 1, {"Y"});
    space.declare_conflict("a", "b");
    CHECK(space.propagate_conflicts_upward() == 2);
    CHECK(space.in_conflict("X", "Y"));
    CHECK(space.in_conflict("P", "Q"));
}

TEST_CASE("validate") {
    SUBCASE("alternatives space is valid with a0 = 2") {
        auto space = figure1b();
        const auto report = space.validate();
        CHECK(report.valid());
        CHECK(report.fan_out.at(0) == 2);
        CHECK(space.validated());
        CHECK(space.fan_out(0) == 2);
    }
    SUBCASE("without alternatives the generation rule is violated") {
        auto space = figure1a();
        const auto report = space.validate();
        CHECK_FALSE(report.valid());
        const auto missing = std::count_if(report.violations.begin(), report.violations.end(), [](const Violation& v) {
            return v.kind == Violation::Kind::missing_alternative;
        });
        CHECK(missing == 2);
        CHECK_FALSE(space.validated());
        CHECK_FALSE(space.fan_out(0));
    }
    SUBCASE("unclaimed lower hypotheses break constant fan-out") {
        HypothesisSpace space;
        space.add_evidence("a", 0.5);
        space.add_evidence("b", 0.5);
        space.add_hypothesis("X", 1, 1, {"a"});
        const auto report = space.validate();
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].kind == Violation::Kind::nonconstant_fan_out);
    }
    SUBCASE("mutation drops the recorded fan-out") {
        auto space = figure1b();
        REQUIRE(space.validated());
        space.add_evidence("h4", 0.0);
        CHECK_FALSE(space.validated());
        CHECK_FALSE(space.fan_out(0));
    }
}

TEST_CASE("identical support sets cannot coexist") {
    HypothesisSpace space;
    space.add_evidence("h1", 0.5);
    space.add_hypothesis("H", 1, 1, {"h1"});
    CHECK_THROWS_AS(space.add_hypothesis("H'", 1, 1, {"h1"}), SpaceError);
    CHECK(space.validate().valid());
}

TEST_CASE("conflict edges are canonical, symmetric and irreflexive") {
    auto space = figure1b();
    for (const auto& e : space.conflicts()) {
        CHECK(e.a < e.b);
        CHECK(space.in_conflict(e.a, e.b));
        CHECK(space.in_conflict(e.b, e.a));
        CHECK_FALSE(space.in_conflict(e.a, e.a));
    }
}

TEST_CASE("Rule 1 closure by pair scan") {
    auto space = figure1b();
    for (const auto& [a, b] : sharing_pairs(space)) CHECK(space.in_conflict(a, b));
}

TEST_CASE("reused alternatives remember every parent") {
    // Three hypotheses over a chain; X's and Z's reduced sets meet at {b}.
    HypothesisSpace space;
    for (const char* e : {"a", "b", "c"}) space.add_evidence(e, 1.0 / 3);
    space.add_hypothesis("X", 1, 2, {"a", "b"});
    space.add_hypothesis("Y", 1, 1, {"a"});
    space.add_hypothesis("Z", 1, 2, {"b", "c"});
    space.add_hypothesis("W", 1, 1, {"c"});
    space.generate_all_alternatives();
    // X vs Y reduces X to {b}; Z vs W reduces Z to {b}: one node, two parents.
    std::vector<HypothesisId> over_b;
    for (const auto& id : space.level(1))
        if (space.at(id).support == IdSet{"b"}) over_b.push_back(id);
    REQUIRE(over_b.size() == 1);
    CHECK(space.at(over_b[0]).alternative_parents == IdSet{"X", "Z"});
    // Rules 1-3 hold, but b is now claimed three times and a, c twice.
    const auto report = space.validate();
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == Violation::Kind::nonconstant_fan_out);
}
