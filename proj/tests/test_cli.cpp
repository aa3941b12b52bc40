#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"
#include "duplex/coupling.hpp"
#include "duplex/workspace.hpp"
#include "support/testing.hpp"
#include "support/xml.hpp"

using namespace duplex;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "duplex");
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string ws() { return support::fixture_workspace().string(); }

} // namespace

TEST(Cli, StatsOnFixture) {
    CliRun r = run({"stats", ws()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto l = lines(r.out);
    ASSERT_GE(l.size(), 12u);
    EXPECT_EQ(l[0], "graph: arbiters");
    EXPECT_EQ(l[1], "nodes: 19");
    EXPECT_EQ(l[3], "components: 2");
    EXPECT_EQ(l[4], "votes: 2..87");
    EXPECT_EQ(l[5], "agreement: 0.25..1");
    EXPECT_EQ(l[8], "nodes: 97");
    EXPECT_EQ(l[11], "df: 10..18");
}

TEST(Cli, CoupleListsSortedReactions) {
    CliRun r = run({"couple", ws(), "--select", "arbiters:Aoineko"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto l = lines(r.out);
    EXPECT_EQ(l.size(), 92u);
    EXPECT_TRUE(std::is_sorted(l.begin(), l.end()));
    Workspace w = load_workspace(ws());
    HighlightState h = build_highlight(w.graphs, w.couplings, Selection{"arbiters", {"Aoineko"}, {}});
    EXPECT_EQ(std::vector<std::string>(h.reactions.at("terms").begin(), h.reactions.at("terms").end()), l);
}

TEST(Cli, FilterPairsBoundsWithAttributes) {
    CliRun r = run({"filter", ws(), "--graph", "arbiters", "--node-attr", "votes", "--min", "50", "--edge-attr",
                 "agreement", "--min", "0.75"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto l = lines(r.out);
    ASSERT_FALSE(l.empty());
    EXPECT_EQ(l[0], "nodes: 6");
    EXPECT_EQ(l[7], "edges: 6");
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    CliRun r = run({"stats", ws(), "--no-such-flag"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("error"), std::string::npos);
    EXPECT_EQ(run({"layout", ws(), "--graph", "arbiters", "--algo", "spring"}).code, 2);
    EXPECT_EQ(run({"layout", ws(), "--graph", "arbiters", "--canvas", "12"}).code, 2);
}

TEST(Cli, DataErrorsExitOne) {
    CliRun r = run({"stats", "/nonexistent/ws.json"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("IoError"), std::string::npos);
    CliRun g = run({"filter", ws(), "--graph", "nope"});
    EXPECT_EQ(g.code, 1);
    EXPECT_NE(g.err.find("nope"), std::string::npos);
}

TEST(Cli, BuildPipelineReproducesFixture) {
    auto dir = support::scratch_dir("cli_build");
    auto data = support::data_dir() / "arbcom";
    CliRun a = run({"build-agreement", (data / "votes.csv").string(), "-o", (dir / "arb.json").string()});
    ASSERT_EQ(a.code, 0) << a.err;
    CliRun b = run({"build-lexical", (data / "terms.csv").string(), "--min-df", "10", "--social", (dir / "arb.json").string(),
                 "--reference-terms", (data / "reference_terms.txt").string(), "-o", (dir / "ws.json").string()});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(load_workspace(dir / "ws.json"), load_workspace(ws()));
}

TEST(Cli, LayoutIsDeterministicAndExportParses) {
    std::vector<std::string> args{"layout", ws(), "--graph", "arbiters", "--algo", "fr", "--seed", "7", "--iters", "100"};
    CliRun a = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(lines(a.out).size(), 19u);
    EXPECT_EQ(run(args).out, a.out);

    auto svg = support::scratch_dir("cli_export") / "terms.svg";
    CliRun e = run({"export", ws(), "--graph", "terms", "--select", "arbiters:Aoineko", "-o", svg.string()});
    ASSERT_EQ(e.code, 0) << e.err;
    auto doc = support::parse_xml(read_text_file(svg));
    ASSERT_TRUE(doc.ok) << doc.error;
    EXPECT_EQ(support::find_all(*doc.root, "rect", "reaction-marker").size(), 92u);
}

TEST(Cli, RepeatedSelectUnionsNodes) {
    CliRun r = run({"couple", ws(), "--select", "arbiters:R", "--select", "arbiters:Solensean"});
    ASSERT_EQ(r.code, 0) << r.err;
    Workspace w = load_workspace(ws());
    HighlightState h = build_highlight(w.graphs, w.couplings, Selection{"arbiters", {"R", "Solensean"}, {}});
    const IdSet& terms = h.reactions.at("terms");
    EXPECT_EQ(lines(r.out), std::vector<std::string>(terms.begin(), terms.end()));
}

TEST(Cli, UnknownFlagPrintsUsage) {
    CliRun r = run({"stats", ws(), "--bogus"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--bogus"), std::string::npos);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
    std::vector<std::vector<std::string>> commands{
        {"stats", ws()},
        {"couple", ws(), "--select", "terms:permettre"},
        {"filter", ws(), "--graph", "arbiters", "--node-attr", "votes", "--min", "50", "--shared-term", "vocab=permettre"},
        {"layout", ws(), "--graph", "arbiters", "--algo", "stress", "--seed", "42", "--iters", "60"}};
    for (const auto& c : commands) {
        CliRun a = run(c), b = run(c);
        ASSERT_EQ(a.code, 0) << c[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << c[0];
    }
    auto dir = support::scratch_dir("cli_bytes");
    for (const char* name : {"one.svg", "two.svg"})
        ASSERT_EQ(run({"export", ws(), "--graph", "arbiters", "--select", "arbiters:R", "-o", (dir / name).string()}).code, 0);
    EXPECT_EQ(read_text_file(dir / "one.svg"), read_text_file(dir / "two.svg"));
}

TEST(Cli, WritesOnlyTheNamedOutput) {
    auto dir = support::scratch_dir("cli_outputs");
    ASSERT_EQ(run({"layout", ws(), "--graph", "terms", "--algo", "grid", "-o", (dir / "grid.json").string()}).code, 0);
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) names.push_back(entry.path().filename().string());
    EXPECT_EQ(names, std::vector<std::string>{"grid.json"});
}
