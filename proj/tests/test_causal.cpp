#include "doctest.h"

#include "bellpost/causal.hpp"

using namespace bellpost;

TEST_CASE("two-party diagram shape") {
    const auto g = bell_diagram(2, DiagramKind::Lhv);
    CHECK(g.nodes.size() == 7);       // L + {X,A,D} per party
    CHECK(g.edges.size() == 8);
    CHECK(g.bidirected.size() == 2);
    const auto eg = g.expanded();
    CHECK(eg.nodes.size() == 9);
    CHECK(eg.edges.size() == 12);
    CHECK_NOTHROW(g.check());
}

TEST_CASE("factorization query separates, detection conditioning connects") {
    const auto g = bell_diagram(2, DiagramKind::Lhv);

    const DsepQuery fact{{"A1", "X1"}, {"A2", "X2"}, {"L", "D1", "D2"}};
    CHECK(d_separated(g, fact).separated);
    // symmetry in source/target
    CHECK(d_separated(g, DsepQuery{fact.targets, fact.sources, fact.given}).separated);

    const DsepQuery sel{{"X1"}, {"L"}, {"D1", "D2"}};
    const auto res = d_separated(g, sel);
    CHECK_FALSE(res.separated);
    CHECK(is_open_path(g, res.witness, sel.given));

    CHECK(d_separated(g, DsepQuery{{"X1"}, {"L"}, {}}).separated);
}

TEST_CASE("witness validator rejects blocked and broken paths") {
    const auto g = bell_diagram(2, DiagramKind::Lhv);
    // X1 -> D1 <- L is open given D1 but blocked unconditioned
    std::vector<PathStep> path = {{"X1", false}, {"D1", true}, {"L", false}};
    CHECK(is_open_path(g, path, {"D1"}));
    CHECK_FALSE(is_open_path(g, path, {}));
    std::vector<PathStep> broken = {{"X1", false}, {"A2", false}};
    CHECK_FALSE(is_open_path(g, broken, {}));
}

TEST_CASE("three-party bipartition diagrams") {
    const auto fig2b = bell_diagram(3, DiagramKind::Hlnhv, {2, 3});
    CHECK(fig2b.has_node("G23"));
    const DsepQuery q{{"A1", "X1"}, {"A2", "X2", "A3", "X3"}, {"L", "D1", "D2", "D3"}};
    CHECK(d_separated(fig2b, q).separated);

    const auto fig2a = bell_diagram(3, DiagramKind::Hlnhv);
    CHECK(fig2a.has_node("G12"));
    CHECK(fig2a.has_node("G13"));
    CHECK(fig2a.has_node("G23"));
    CHECK_FALSE(d_separated(fig2a, DsepQuery{{"A1"}, {"A2"}, {"L"}}).separated);

    CHECK_THROWS(bell_diagram(3, DiagramKind::Hlnhv, {1, 1}));
    CHECK_THROWS(bell_diagram(3, DiagramKind::Lhv, {2, 3}));
}

TEST_CASE("CI oracle is sound on separated queries and sharp on connected ones") {
    const auto g = bell_diagram(2, DiagramKind::Lhv);
    const DsepQuery fact{{"A1", "X1"}, {"A2", "X2"}, {"L", "D1", "D2"}};
    for (int i = 0; i < 10; ++i) CHECK(ci_oracle(g, 50 + i, fact) < 1e-10);

    const DsepQuery sel{{"X1"}, {"L"}, {"D1", "D2"}};
    CHECK(search_ci_violation(g, sel, 50, 7) > 0.01);

    // marginal independence of disconnected roots
    CausalDag two;
    two.add_node("P");
    two.add_node("Q");
    CHECK(ci_oracle(two, 1, DsepQuery{{"P"}, {"Q"}, {}}) < 1e-14);
}

TEST_CASE("section-two battery passes and the negative control fails") {
    const auto rep = verify_causal_claims(900);
    for (const auto& c : rep.claims) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.pass);
    }
    CHECK(rep.all_pass);

    const auto neg = verify_causal_claims(900, true);
    CHECK_FALSE(neg.all_pass);
    bool conservation_failed = false;
    for (const auto& c : neg.claims)
        if (!c.pass && c.name.find("conservation") != std::string::npos)
            conservation_failed = true;
    CHECK(conservation_failed);
}
