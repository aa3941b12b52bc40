#include <gtest/gtest.h>

#include "duplex/error.hpp"
#include "duplex/viewfilter.hpp"
#include "support/testing.hpp"

using namespace duplex;

namespace {

Graph square() {
    Graph g("sq", {}, {{"v", ValueKind::Scalar}, {"tags", ValueKind::TermSet}}, {{"w", ValueKind::Scalar}});
    g.add_node("a", "a", {{"v", 1}, {"tags", TermSet{"x"}}});
    g.add_node("b", "b", {{"v", 2}, {"tags", TermSet{"x", "y"}}});
    g.add_node("c", "c", {{"v", 3}, {"tags", TermSet{"y"}}});
    g.add_node("d", "d");
    g.add_edge("a", "b", {{"w", 0.9}});
    g.add_edge("b", "c", {{"w", 0.5}});
    g.add_edge("c", "d", {{"w", 0.75}});
    g.add_edge("a", "d");
    return g;
}

} // namespace

TEST(Filter, NodeThresholdIsInclusiveAndClosesEdges) {
    Graph g = square();
    ViewMask m = node_threshold_filter(g, "v", Comparator::AtLeast, 2);
    EXPECT_EQ(m.visible_nodes(g), (std::vector<std::string>{"b", "c"}));
    EXPECT_EQ(m.visible_edges(g), (std::vector<std::string>{"b--c"}));
    ViewMask at_most = node_threshold_filter(g, "v", Comparator::AtMost, 2);
    EXPECT_EQ(at_most.visible_nodes(g), (std::vector<std::string>{"a", "b"}));
}

TEST(Filter, EdgeThresholdKeepsAllNodes) {
    Graph g = square();
    ViewMask m = edge_threshold_filter(g, "w", Comparator::AtLeast, 0.75);
    EXPECT_EQ(m.visible_node_count(), 4u);
    EXPECT_EQ(m.visible_edges(g), (std::vector<std::string>{"a--b", "c--d"}));
}

TEST(Filter, TermFilters) {
    Graph g = square();
    EXPECT_EQ(term_node_filter(g, "tags", "y").visible_nodes(g), (std::vector<std::string>{"b", "c"}));
    EXPECT_EQ(shared_term_edge_filter(g, "tags", "x").visible_edges(g), (std::vector<std::string>{"a--b"}));
}

TEST(Filter, EmptyListShowsEverything) {
    Graph g = square();
    ViewMask m = apply_filters(g, {});
    EXPECT_EQ(m.visible_node_count(), g.node_count());
    EXPECT_EQ(m.visible_edge_count(), g.edge_count());
}

TEST(Filter, ValidationNamesTheAttribute) {
    Graph g = square();
    try {
        validate_filter(g, NodeThreshold{"missing", Comparator::AtLeast, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownAttr);
        EXPECT_EQ(e.detail(), "missing");
        EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
    }
    try {
        validate_filter(g, TermNode{"v", "x"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::KindMismatch);
    }
}

TEST(Filter, ComposeRejectsForeignMask) {
    Graph g = square();
    Graph other("other");
    other.add_node("z", "z");
    std::vector<ViewMask> masks{ViewMask::all_visible(other)};
    EXPECT_THROW(compose_masks(g, masks), Error);
}

TEST(Filter, ComparatorNames) {
    EXPECT_EQ(parse_comparator(">="), Comparator::AtLeast);
    EXPECT_EQ(parse_comparator("le"), Comparator::AtMost);
    EXPECT_FALSE(parse_comparator(">"));
}

TEST(Filter, MatchesOracleOnRandomGraphs) {
    support::Rng rng(5);
    std::uniform_real_distribution<double> th(-2.0, 8.0);
    for (int round = 0; round < 300; ++round) {
        Graph g = support::random_graph(rng, "g", 30);
        std::vector<FilterSpec> specs;
        std::uniform_int_distribution<int> count(0, 4);
        int n = count(rng);
        for (int i = 0; i < n; ++i) {
            switch (count(rng) % 4) {
                case 0: specs.push_back(NodeThreshold{"score", rng() % 2 ? Comparator::AtLeast : Comparator::AtMost, th(rng)}); break;
                case 1: specs.push_back(EdgeThreshold{"w", rng() % 2 ? Comparator::AtLeast : Comparator::AtMost, th(rng) / 8}); break;
                case 2: specs.push_back(TermNode{"tags", support::term_pool()[rng() % 10]}); break;
                default: specs.push_back(SharedTermEdge{"tags", support::term_pool()[rng() % 10]}); break;
            }
        }
        EXPECT_EQ(support::visible_sets(g, apply_filters(g, specs)), support::oracle_filter(g, specs)) << round;
    }
}

TEST(Filter, CompositionIsOrderIndependentAndClosed) {
    support::Rng rng(9);
    for (int round = 0; round < 200; ++round) {
        Graph g = support::random_graph(rng, "g", 25);
        std::vector<FilterSpec> specs{NodeThreshold{"score", Comparator::AtLeast, 2.0},
                                      EdgeThreshold{"w", Comparator::AtMost, 0.6}, TermNode{"tags", "vote"}};
        std::shuffle(specs.begin(), specs.end(), rng);
        ViewMask a = apply_filters(g, specs);
        std::reverse(specs.begin(), specs.end());
        ViewMask b = apply_filters(g, specs);
        EXPECT_EQ(a, b);
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            if (!a.edge_visible(e)) continue;
            auto [u, v] = g.endpoints(e);
            EXPECT_TRUE(a.node_visible(u) && a.node_visible(v));
        }
        // Adding a filter never shows more.
        specs.push_back(SharedTermEdge{"tags", "avis"});
        ViewMask c = apply_filters(g, specs);
        for (std::size_t n = 0; n < g.node_count(); ++n) EXPECT_LE(c.node_visible(n), a.node_visible(n));
        for (std::size_t e = 0; e < g.edge_count(); ++e) EXPECT_LE(c.edge_visible(e), a.edge_visible(e));
    }
}

TEST(Filter, UniversalAndUnknownTerms) {
    Graph g = square();
    Graph h("h", {}, {{"tags", ValueKind::TermSet}}, {});
    h.add_node("p", "", {{"tags", TermSet{"x", "q"}}});
    h.add_node("r", "", {{"tags", TermSet{"x"}}});
    h.add_edge("p", "r");
    EXPECT_EQ(term_node_filter(h, "tags", "x").visible_node_count(), 2u);
    EXPECT_EQ(shared_term_edge_filter(h, "tags", "x").visible_edge_count(), 1u);
    EXPECT_EQ(term_node_filter(g, "tags", "zz").visible_node_count(), 0u);
    EXPECT_EQ(shared_term_edge_filter(g, "tags", "zz").visible_edge_count(), 0u);
    EXPECT_EQ(shared_term_edge_filter(g, "tags", "zz").visible_node_count(), g.node_count());
}

TEST(Filter, ComposeAlgebra) {
    support::Rng rng(13);
    for (int round = 0; round < 200; ++round) {
        Graph g = support::random_graph(rng, "g", 20);
        ViewMask a = node_threshold_filter(g, "score", Comparator::AtLeast, 2.0);
        ViewMask b = edge_threshold_filter(g, "w", Comparator::AtMost, 0.6);
        ViewMask c = term_node_filter(g, "tags", "vote");
        ViewMask all = ViewMask::all_visible(g), none = ViewMask::none_visible(g);
        auto both = [&](const ViewMask& x, const ViewMask& y) { return compose_masks(g, std::vector<ViewMask>{x, y}); };
        EXPECT_EQ(both(a, all), a);
        EXPECT_EQ(both(a, none), none);
        EXPECT_EQ(both(a, b), both(b, a));
        EXPECT_EQ(both(both(a, b), c), both(a, both(b, c)));
        EXPECT_EQ(both(a, a), a);
        EXPECT_EQ(compose_masks(g, std::vector<ViewMask>{a, b, c}), both(a, both(b, c)));
    }
}

TEST(Filter, PureAndMonotoneInThreshold) {
    support::Rng rng(17);
    std::uniform_real_distribution<double> t(-1, 12);
    for (int round = 0; round < 200; ++round) {
        Graph g = support::random_graph(rng, "g", 20);
        Graph copy = g;
        double lo = t(rng), hi = t(rng);
        if (lo > hi) std::swap(lo, hi);
        ViewMask at_lo = node_threshold_filter(g, "score", Comparator::AtLeast, lo);
        ViewMask at_hi = node_threshold_filter(g, "score", Comparator::AtLeast, hi);
        EXPECT_EQ(node_threshold_filter(g, "score", Comparator::AtLeast, lo), at_lo);
        for (std::size_t n = 0; n < g.node_count(); ++n) EXPECT_LE(at_hi.node_visible(n), at_lo.node_visible(n));
        ViewMask max_lo = edge_threshold_filter(g, "w", Comparator::AtMost, lo / 10);
        ViewMask max_hi = edge_threshold_filter(g, "w", Comparator::AtMost, hi / 10);
        for (std::size_t e = 0; e < g.edge_count(); ++e) EXPECT_LE(max_lo.edge_visible(e), max_hi.edge_visible(e));
        EXPECT_EQ(g, copy);
    }
}
