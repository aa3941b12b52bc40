#include <gtest/gtest.h>

#include "duplex/error.hpp"
#include "duplex/serialize.hpp"
#include "duplex/workspace.hpp"
#include "support/testing.hpp"

using namespace duplex;

namespace {

Error caught(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "no error thrown";
    return Error(ErrorCode::InvalidArgument, "", "");
}

const char* kTwoGraphs = R"({
  "version": 1, "kind": "workspace",
  "graphs": [
    {"id": "a", "directed": false, "node_schema": {"k": "text"}, "edge_schema": {},
     "nodes": [{"id": "x", "attrs": {"k": "t"}}], "edges": []},
    {"id": "b", "directed": false, "node_schema": {"k": "text"}, "edge_schema": {},
     "nodes": [{"id": "y", "attrs": {"k": "t"}}]}
  ],
  "couplings": [{"id": "c", "graph_a": "a", "graph_b": "%s", "a_attr": "k", "op": "eq", "b_attr": "k"}]
})";

std::string with_target(const std::string& b) {
    char buf[2048];
    std::snprintf(buf, sizeof buf, kTwoGraphs, b.c_str());
    return buf;
}

} // namespace

TEST(Workspace, ParsesMinimalDocument) {
    Workspace ws = parse_workspace(with_target("b"));
    EXPECT_EQ(ws.graphs.size(), 2u);
    EXPECT_EQ(ws.graph("a").node("x").label, "x");
    EXPECT_EQ(ws.coupling("c").op, RelationOp::Eq);
}

TEST(Workspace, CouplingToUnknownGraphNamesIt) {
    Error e = caught([] { parse_workspace(with_target("ghost"), "ws.json"); });
    EXPECT_EQ(e.code(), ErrorCode::UnresolvedReference);
    EXPECT_EQ(e.detail(), "ghost");
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
}

TEST(Workspace, TruncatedFileIsParseErrorWithPosition) {
    std::string text = with_target("b");
    auto dir = support::scratch_dir("truncated");
    for (std::size_t cut : {text.size() / 3, text.size() / 2, text.size() - 2}) {
        write_text_file(dir / "ws.json", text.substr(0, cut));
        Error e = caught([&] { load_workspace(dir / "ws.json"); });
        EXPECT_EQ(e.code(), ErrorCode::ParseError) << cut;
        EXPECT_NE(e.detail().find("line"), std::string::npos) << e.detail();
    }
}

TEST(Workspace, FieldErrorsCarryJsonPointer) {
    std::string text = with_target("b");
    text.replace(text.find("\"t\"}}], \"edges\""), 3, "1.5");
    Error e = caught([&] { parse_workspace(text); });
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(e.detail(), "/graphs/0/nodes/0/attrs/k");
}

TEST(Workspace, RejectsWrongVersionAndKind) {
    std::string text = with_target("b");
    std::string v2 = text;
    v2.replace(v2.find("\"version\": 1"), 12, "\"version\": 2");
    EXPECT_EQ(caught([&] { parse_workspace(v2); }).code(), ErrorCode::ParseError);
    std::string s = text;
    s.replace(s.find("\"workspace\""), 11, "\"session\"");
    EXPECT_EQ(caught([&] { parse_workspace(s); }).code(), ErrorCode::ParseError);
}

TEST(Workspace, StyleBindingMustResolve) {
    Workspace ws = parse_workspace(with_target("b"));
    ws.styles.graphs["a"].node_size_attr = "missing";
    EXPECT_EQ(caught([&] { ws.validate(); }).code(), ErrorCode::UnresolvedReference);
    ws.styles.graphs["a"].node_size_attr = "k";
    EXPECT_EQ(caught([&] { ws.validate(); }).code(), ErrorCode::KindMismatch);
}

TEST(Workspace, RandomRoundTripIsIdentity) {
    support::Rng rng(41);
    for (int round = 0; round < 100; ++round) {
        Workspace ws = support::random_workspace(rng, 20, true);
        std::string text = dump_workspace(ws);
        Workspace back = parse_workspace(text);
        ASSERT_EQ(back, ws) << "round " << round;
        EXPECT_EQ(dump_workspace(back), text);
    }
}

TEST(Session, RandomRoundTripIsIdentity) {
    support::Rng rng(43);
    auto dir = support::scratch_dir("sessions");
    for (int round = 0; round < 100; ++round) {
        Session s = support::random_session(rng, 20);
        save_session(s, dir / "s.json");
        Session back = load_session(dir / "s.json");
        ASSERT_EQ(back, s) << "round " << round;
    }
}

TEST(Session, FixtureRoundTrip) {
    Session s;
    s.workspace = load_workspace(support::fixture_workspace());
    s.filters["arbiters"] = {NodeThreshold{"votes", Comparator::AtLeast, 50}};
    s.layouts["arbiters"] = compute_layout(s.workspace.graph("arbiters"), s.mask("arbiters"), Canvas{}, LayoutParams{});
    s.selection = Selection{"arbiters", {"Aoineko"}, {}};
    s.highlight = build_highlight(s.workspace.graphs, s.workspace.couplings, *s.selection);
    s.lens["arbiters"] = LensState{true, LensSpec{{500, 500}, 100, 3}};
    auto path = support::scratch_dir("fixture") / "session.json";
    save_session(s, path);
    EXPECT_EQ(load_session(path), s);
}

TEST(Session, DanglingReferencesRejected) {
    support::Rng rng(47);
    Session s = support::random_session(rng, 10);
    s.selection = Selection{"nowhere", {"x"}, {}};
    EXPECT_EQ(caught([&] { s.validate(); }).code(), ErrorCode::UnresolvedReference);
    EXPECT_EQ(caught([&] { save_session(s, support::scratch_dir("bad") / "s.json"); }).code(),
              ErrorCode::UnresolvedReference);
}

TEST(Files, MissingFileIsIoError) {
    EXPECT_EQ(caught([] { load_workspace("/nonexistent/ws.json"); }).code(), ErrorCode::IoError);
}
