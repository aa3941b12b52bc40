#include <gtest/gtest.h>

#include <algorithm>

#include "duplex/coupling.hpp"
#include "duplex/ingest.hpp"
#include "duplex/viewfilter.hpp"
#include "duplex/workspace.hpp"
#include "support/testing.hpp"

using namespace duplex;

namespace {

const Workspace& ws() {
    static const Workspace w = load_workspace(support::fixture_workspace());
    return w;
}

const Graph& arbiters() { return ws().graph("arbiters"); }
const Graph& terms() { return ws().graph("terms"); }

const TermSet& vocab(const std::string& id) { return arbiters().node(id).attrs.at("vocab").terms(); }

std::set<std::string> high_participation() {
    std::set<std::string> out;
    for (const auto& n : arbiters().nodes())
        if (n.attrs.at("votes").scalar() >= 50) out.insert(n.id);
    return out;
}

} // namespace

TEST(Fixture, ShapeAndRanges) {
    EXPECT_EQ(arbiters().node_count(), 19u);
    EXPECT_EQ(connected_components(arbiters()).size(), 2u);
    EXPECT_EQ(attr_range(arbiters(), ElementKind::Node, "votes"), (ScalarRange{2, 87}));
    EXPECT_EQ(attr_range(arbiters(), ElementKind::Edge, "agreement"), (ScalarRange{0.25, 1.0}));
    EXPECT_EQ(terms().node_count(), 97u);
    EXPECT_EQ(terms().edge_count(), 0u);
    EXPECT_EQ(attr_range(terms(), ElementKind::Node, "df"), (ScalarRange{10, 18}));
}

TEST(Fixture, HighParticipationArbiters) {
    EXPECT_EQ(high_participation(), (std::set<std::string>{"A05", "A06", "Aoineko", "R", "Solensean", "Traroth"}));
    ViewMask m = node_threshold_filter(arbiters(), "votes", Comparator::AtLeast, 50);
    auto visible = m.visible_nodes(arbiters());
    EXPECT_EQ(std::set<std::string>(visible.begin(), visible.end()), high_participation());
    EXPECT_EQ(node_threshold_filter(arbiters(), "votes", Comparator::AtLeast, 0).visible_node_count(), 19u);
    EXPECT_EQ(node_threshold_filter(arbiters(), "votes", Comparator::AtLeast, 88).visible_node_count(), 0u);
}

TEST(Fixture, AgreementThresholds) {
    EXPECT_EQ(edge_threshold_filter(arbiters(), "agreement", Comparator::AtLeast, 0.25).visible_edge_count(), 87u);
    EXPECT_EQ(edge_threshold_filter(arbiters(), "agreement", Comparator::AtLeast, 1.01).visible_edge_count(), 0u);
    ViewMask high = edge_threshold_filter(arbiters(), "agreement", Comparator::AtLeast, 0.75);
    std::set<std::string> scan;
    for (const auto& e : arbiters().edges())
        if (e.attrs.at("agreement").scalar() >= 0.75) scan.insert(e.id);
    auto got = high.visible_edges(arbiters());
    EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), scan);
}

TEST(Fixture, VocabularyGapsAmongActiveArbiters) {
    auto active = high_participation();
    // Terms every other active arbiter uses but the given one does not.
    auto gaps = [&](const std::string& who) {
        std::set<std::string> out;
        for (const auto& t : terms().nodes()) {
            if (vocab(who).count(t.id)) continue;
            bool everyone_else = std::all_of(active.begin(), active.end(), [&](const std::string& a) {
                return a == who || vocab(a).count(t.id);
            });
            if (everyone_else) out.insert(t.id);
        }
        return out;
    };
    EXPECT_EQ(gaps("R"), (std::set<std::string>{"attendre", "contributeurs", "déjà", "fond", "permettre", "prendre"}));
    EXPECT_EQ(gaps("Solensean"), (std::set<std::string>{"justifier"}));
    std::set<std::string> without_justifier;
    for (const auto& a : active)
        if (!vocab(a).count("justifier")) without_justifier.insert(a);
    EXPECT_EQ(without_justifier, (std::set<std::string>{"Solensean"}));
}

TEST(Fixture, AoinekoReachesNinetyTwoTerms) {
    Selection s{"arbiters", {"Aoineko"}, {}};
    IdSet got = propagate_node_selection(ws().graphs, ws().coupling("vocab"), s);
    // Scan every term node against Aoineko's vocabulary.
    IdSet scan;
    for (const auto& t : terms().nodes())
        if (vocab("Aoineko").count(t.id)) scan.insert(t.id);
    EXPECT_EQ(got, scan);
    EXPECT_EQ(got.size(), 92u);
    HighlightState h = build_highlight(ws().graphs, ws().couplings, s);
    EXPECT_EQ(h.source, s);
    EXPECT_EQ(h.reactions.at("terms"), got);
}

TEST(Fixture, PermettreReachesEveryUserExceptR) {
    IdSet got = propagate_node_selection(ws().graphs, ws().coupling("vocab"), Selection{"terms", {"permettre"}, {}});
    IdSet scan;
    for (const auto& n : arbiters().nodes())
        if (vocab(n.id).count("permettre")) scan.insert(n.id);
    EXPECT_EQ(got, scan);
    EXPECT_FALSE(got.count("R"));
    for (const auto& a : high_participation())
        if (a != "R") EXPECT_TRUE(got.count(a)) << a;
}

TEST(Fixture, EdgeSelectionUsesSharedVocabulary) {
    const Coupling& c = ws().coupling("vocab");
    for (const auto& e : arbiters().edges()) {
        IdSet common;
        std::set_intersection(vocab(e.u).begin(), vocab(e.u).end(), vocab(e.v).begin(), vocab(e.v).end(),
                              std::inserter(common, common.end()));
        EXPECT_EQ(propagate_edge_selection(ws().graphs, c, Selection{"arbiters", {}, {e.id}}), common) << e.id;
    }
}

TEST(Fixture, NeighborsOfRMatchEdgeScan) {
    std::set<std::string> scan;
    for (const auto& e : arbiters().edges()) {
        if (e.u == "R") scan.insert(e.v);
        if (e.v == "R") scan.insert(e.u);
    }
    EXPECT_EQ(arbiters().neighbors("R"), scan);
}

TEST(Fixture, ReferenceProfiles) {
    for (const auto& n : arbiters().nodes()) {
        const Distribution& d = n.attrs.at("profile").distribution();
        EXPECT_EQ(d.entries().size(), 7u) << n.id;
    }
    const Distribution& r = arbiters().node("R").attrs.at("profile").distribution();
    EXPECT_EQ(r.count("attendre"), 0.0);
    EXPECT_EQ(std::count_if(r.entries().begin(), r.entries().end(), [](const auto& e) { return e.second > 0; }), 6);
}

TEST(Fixture, MinDfOneKeepsEveryTerm) {
    auto records = read_terms_csv(support::data_dir() / "arbcom" / "terms.csv");
    std::set<std::string> distinct;
    for (const auto& r : records) distinct.insert(r.term);
    EXPECT_EQ(build_lexical_graph(records, 1).terms.node_count(), distinct.size());
    EXPECT_EQ(build_lexical_graph(records, 10).terms.node_count(), 97u);
}
