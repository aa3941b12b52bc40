#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "duplex/error.hpp"
#include "duplex/layout.hpp"
#include "duplex/workspace.hpp"
#include "support/testing.hpp"

using namespace duplex;

namespace {

Graph path(int n) {
    Graph g("p");
    for (int i = 0; i < n; ++i) g.add_node("v" + std::to_string(i), "");
    for (int i = 0; i + 1 < n; ++i) g.add_edge("v" + std::to_string(i), "v" + std::to_string(i + 1));
    return g;
}

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

LayoutParams params(Algorithm a, std::uint64_t seed = 42, int iters = 300) {
    LayoutParams p;
    p.algorithm = a;
    p.seed = seed;
    p.iterations = iters;
    return p;
}

} // namespace

TEST(Rng, MatchesHandWrittenMmixRecurrence) {
    Lcg64 rng(42);
    std::uint64_t state = 42;
    for (int i = 0; i < 1000; ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        ASSERT_EQ(rng(), state);
    }
    Lcg64 u(7);
    for (int i = 0; i < 1000; ++i) {
        double x = unit_interval(u);
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
}

TEST(Layout, RandomUsesSeedStreamInIdOrder) {
    Graph g = path(4);
    Canvas c{200, 100};
    LayoutResult r = layout_random(g, ViewMask::all_visible(g), c, 5);
    std::uint64_t s = 5;
    auto next = [&] {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) / 9007199254740992.0;
    };
    for (const char* id : {"v0", "v1", "v2", "v3"}) {
        double x = next() * 200;
        double y = next() * 100;
        EXPECT_EQ(r.positions.at(id), (Point{x, y})) << id;
    }
}

TEST(Layout, CircularGeometry) {
    Graph g = path(6);
    Canvas c{800, 600};
    LayoutResult r = layout_circular(g, ViewMask::all_visible(g), c);
    for (int k = 0; k < 6; ++k) {
        Point p = r.positions.at("v" + std::to_string(k));
        EXPECT_NEAR(dist(p, {400, 300}), 240.0, 1e-9);
        EXPECT_NEAR(std::atan2(p.y - 300, p.x - 400), std::remainder(2 * std::numbers::pi * k / 6, 2 * std::numbers::pi), 1e-9);
    }
}

TEST(Layout, CircularDegreeOrderPutsHubFirst) {
    Graph g("star");
    for (const char* id : {"a", "b", "c", "hub"}) g.add_node(id, "");
    for (const char* id : {"a", "b", "c"}) g.add_edge("hub", id);
    LayoutResult r = layout_circular(g, ViewMask::all_visible(g), Canvas{}, CircularOrder::Degree);
    EXPECT_NEAR(r.positions.at("hub").x, 900.0, 1e-9);
    EXPECT_NEAR(r.positions.at("hub").y, 500.0, 1e-9);
}

TEST(Layout, GridRowMajor) {
    Graph g = path(5);
    LayoutResult r = layout_grid(g, ViewMask::all_visible(g), Canvas{1000, 1000});
    // 3 columns, 2 rows, 50px margin.
    EXPECT_EQ(r.provenance.params.at("columns"), 3.0);
    EXPECT_EQ(r.provenance.params.at("rows"), 2.0);
    EXPECT_NEAR(r.positions.at("v0").x, 50 + 900.0 / 6, 1e-9);
    EXPECT_NEAR(r.positions.at("v3").y, 50 + 900.0 * 3 / 4, 1e-9);
}

TEST(Layout, EveryAlgorithmDeterministicAndInsideCanvas) {
    support::Rng rng(21);
    for (int round = 0; round < 20; ++round) {
        Graph g = support::random_graph(rng, "g", 20);
        ViewMask all = ViewMask::all_visible(g);
        Canvas c{640, 480};
        for (int a = 0; a < 5; ++a) {
            auto p = params(static_cast<Algorithm>(a), rng(), 50);
            LayoutResult r1 = compute_layout(g, all, c, p);
            LayoutResult r2 = compute_layout(g, all, c, p);
            EXPECT_EQ(r1, r2);
            EXPECT_EQ(r1.positions.size(), g.node_count());
            for (const auto& [id, pt] : r1.positions) {
                EXPECT_GE(pt.x, 0.0);
                EXPECT_LE(pt.x, c.width);
                EXPECT_GE(pt.y, 0.0);
                EXPECT_LE(pt.y, c.height);
            }
        }
    }
}

TEST(Layout, OnlyVisibleNodesArePlaced) {
    Graph g = path(5);
    ViewMask m = ViewMask::all_visible(g);
    m.set_node(1, false);
    m.close_edges(g);
    for (int a = 0; a < 5; ++a) {
        LayoutResult r = compute_layout(g, m, Canvas{}, params(static_cast<Algorithm>(a)));
        EXPECT_EQ(r.positions.size(), 4u);
        EXPECT_FALSE(r.positions.count("v1"));
    }
    LayoutResult empty = compute_layout(g, ViewMask::none_visible(g), Canvas{}, params(Algorithm::Stress));
    EXPECT_TRUE(empty.positions.empty());
}

TEST(Layout, RejectsForeignMaskAndBadCanvas) {
    Graph g = path(3);
    Graph h = path(4);
    EXPECT_THROW(layout_grid(g, ViewMask::all_visible(h), Canvas{}), Error);
    EXPECT_THROW(layout_grid(g, ViewMask::all_visible(g), Canvas{0, 10}), Error);
    EXPECT_THROW(layout_fruchterman_reingold(g, ViewMask::all_visible(g), Canvas{}, 1, -1), Error);
}

TEST(Layout, FrWithoutIterationsIsTheRandomLayout) {
    Graph g = path(7);
    ViewMask all = ViewMask::all_visible(g);
    EXPECT_EQ(layout_fruchterman_reingold(g, all, Canvas{}, 9, 0).positions,
              layout_random(g, all, Canvas{}, 9).positions);
}

TEST(Layout, FrTwoNodeEquilibriumNearK) {
    Graph g = path(2);
    Canvas c{1000, 1000};
    const double k = std::sqrt(c.width * c.height / 2.0);
    for (std::uint64_t seed : {1ULL, 42ULL, 1234ULL}) {
        LayoutResult r = layout_fruchterman_reingold(g, ViewMask::all_visible(g), c, seed, 500);
        EXPECT_NEAR(dist(r.positions.at("v0"), r.positions.at("v1")), k, 0.1 * k) << seed;
    }
}

TEST(Layout, StressTwoNodeOptimumAtUnitLength) {
    Graph g = path(2);
    Canvas c{1000, 1000};
    const double L = 0.8 * 1000.0;
    for (std::uint64_t seed : {0ULL, 42ULL, 99ULL}) {
        LayoutResult r = layout_stress(g, ViewMask::all_visible(g), c, 200, seed);
        EXPECT_DOUBLE_EQ(r.provenance.params.at("unit_length"), L);
        EXPECT_NEAR(dist(r.positions.at("v0"), r.positions.at("v1")), L, 0.01 * L) << seed;
    }
}

TEST(Layout, StressTraceNeverIncreases) {
    support::Rng rng(13);
    for (int round = 0; round < 30; ++round) {
        Graph g = support::random_graph(rng, "g", 25);
        LayoutResult r = layout_stress(g, ViewMask::all_visible(g), Canvas{}, 200, rng());
        ASSERT_FALSE(r.stress_trace.empty());
        for (std::size_t i = 1; i < r.stress_trace.size(); ++i)
            EXPECT_LE(r.stress_trace[i], r.stress_trace[i - 1]) << "round " << round << " step " << i;
    }
}

TEST(Layout, StressOnPathIsNearlyStraight) {
    Graph g = path(5);
    LayoutResult r = layout_stress(g, ViewMask::all_visible(g), Canvas{}, 200, 3);
    double scale = r.provenance.params.at("scale");
    double unit = r.provenance.params.at("unit_length");
    // End to end distance close to 4 units after packing.
    EXPECT_NEAR(dist(r.positions.at("v0"), r.positions.at("v4")), 4 * unit * scale, 0.02 * 4 * unit * scale);
    double s = layout_stress_value(g, ViewMask::all_visible(g), r.positions, unit * scale);
    EXPECT_LT(s, 1e-3 * unit * unit);
}

TEST(Lens, ClosedForm) {
    LensSpec l{{100, 100}, 50, 3};
    EXPECT_EQ(lens_point({100, 100}, l), (Point{100, 100}));
    Point mid = lens_point({125, 100}, l);
    // r/R = 0.5 -> 3*0.5/(1+2*0.5) = 0.75
    EXPECT_NEAR(mid.x, 137.5, 1e-12);
    EXPECT_NEAR(mid.y, 100, 1e-12);
    EXPECT_EQ(lens_point({150, 100}, l), (Point{150, 100}));
    EXPECT_EQ(lens_point({300, 100}, l), (Point{300, 100}));
}

TEST(Lens, IdentityWhenMagnificationIsOne) {
    LensSpec l{{0, 0}, 10, 1};
    for (double x = -12; x <= 12; x += 0.5) {
        Point p = lens_point({x, x / 2}, l);
        EXPECT_NEAR(p.x, x, 1e-12);
        EXPECT_NEAR(p.y, x / 2, 1e-12);
    }
}

TEST(Lens, MonotoneInsideRadius) {
    for (double m : {1.5, 2.0, 3.0, 5.0, 10.0}) {
        LensSpec l{{0, 0}, 100, m};
        double prev = -1;
        for (int i = 0; i <= 1000; ++i) {
            double r = lens_point({i * 0.1, 0}, l).x;
            EXPECT_GT(r, prev);
            prev = r;
        }
    }
}

TEST(Lens, Validation) {
    EXPECT_THROW(validate_lens(LensSpec{{0, 0}, 0, 2}), Error);
    EXPECT_THROW(validate_lens(LensSpec{{0, 0}, 10, 0.5}), Error);
    EXPECT_THROW(lens_transform({}, LensSpec{{0, 0}, -1, 2}), Error);
}

TEST(Interaction, MoveAndPan) {
    Positions p{{"a", {10, 10}}, {"b", {50, 20}}};
    Canvas c{100, 100};
    Positions moved = move_node(p, c, "a", {5, -3});
    EXPECT_EQ(moved.at("a"), (Point{15, 7}));
    EXPECT_EQ(moved.at("b"), p.at("b"));
    EXPECT_EQ(move_node(p, c, "a", {500, 0}).at("a").x, 100.0);
    EXPECT_THROW(move_node(p, c, "zz", {1, 1}), Error);
    Positions panned = pan(p, c, {3, 4});
    EXPECT_DOUBLE_EQ(dist(panned.at("a"), panned.at("b")), dist(p.at("a"), p.at("b")));
}

TEST(Layout, AlgorithmNames) {
    for (auto a : {Algorithm::Circular, Algorithm::Random, Algorithm::FruchtermanReingold, Algorithm::Stress,
                   Algorithm::Grid})
        EXPECT_EQ(parse_algorithm(to_string(a)), a);
    EXPECT_FALSE(parse_algorithm("spring"));
    EXPECT_EQ(algorithm_names(), "circular, random, fr, stress, grid");
}

TEST(Layout, CircularSingleNodeOnTheRim) {
    Graph g = path(1);
    LayoutResult r = layout_circular(g, ViewMask::all_visible(g), Canvas{1000, 1000});
    EXPECT_NEAR(r.positions.at("v0").x, 900.0, 1e-9);
    EXPECT_NEAR(r.positions.at("v0").y, 500.0, 1e-9);
}

TEST(Layout, GridSquareAndSingle) {
    Graph g = path(4);
    LayoutResult r = layout_grid(g, ViewMask::all_visible(g), Canvas{1000, 1000});
    EXPECT_EQ(r.provenance.params.at("columns"), 2.0);
    EXPECT_EQ(r.provenance.params.at("rows"), 2.0);
    EXPECT_EQ(r.positions.at("v0").y, r.positions.at("v1").y);
    EXPECT_EQ(r.positions.at("v0").x, r.positions.at("v2").x);
    Graph one = path(1);
    LayoutResult s = layout_grid(one, ViewMask::all_visible(one), Canvas{800, 600});
    EXPECT_NEAR(s.positions.at("v0").x, 400.0, 1e-9);
    EXPECT_NEAR(s.positions.at("v0").y, 300.0, 1e-9);
}

TEST(Layout, DifferentSeedsDiffer) {
    Graph g = path(8);
    ViewMask all = ViewMask::all_visible(g);
    for (auto a : {Algorithm::Random, Algorithm::FruchtermanReingold, Algorithm::Stress})
        EXPECT_NE(compute_layout(g, all, Canvas{}, params(a, 1)).positions,
                  compute_layout(g, all, Canvas{}, params(a, 2)).positions)
            << to_string(a);
}

TEST(Interaction, MoveBackAndZeroPan) {
    support::Rng rng(41);
    std::uniform_real_distribution<double> coord(100, 900), step(-50, 50);
    Canvas c{1000, 1000};
    for (int round = 0; round < 100; ++round) {
        Positions p{{"a", {coord(rng), coord(rng)}}, {"b", {coord(rng), coord(rng)}}};
        Point d{step(rng), step(rng)};
        Positions back = move_node(move_node(p, c, "a", d), c, "a", {-d.x, -d.y});
        EXPECT_NEAR(back.at("a").x, p.at("a").x, 1e-9);
        EXPECT_NEAR(back.at("a").y, p.at("a").y, 1e-9);
        EXPECT_EQ(back.at("b"), p.at("b"));
        EXPECT_EQ(pan(p, c, {0, 0}), p);
    }
}

TEST(Layout, FixtureFrKeepsNeighboursCloser) {
    Workspace ws = load_workspace(support::fixture_workspace());
    const Graph& g = ws.graph("arbiters");
    ViewMask all = ViewMask::all_visible(g);
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        LayoutResult r = compute_layout(g, all, Canvas{}, params(Algorithm::FruchtermanReingold, seed, 300));
        double near = 0, far = 0;
        int n_near = 0, n_far = 0;
        for (const auto& a : g.nodes())
            for (const auto& b : g.nodes()) {
                if (a.id >= b.id) continue;
                double d = dist(r.positions.at(a.id), r.positions.at(b.id));
                if (g.neighbors(a.id).count(b.id)) near += d, ++n_near;
                else far += d, ++n_far;
            }
        if (near / n_near < far / n_far) ++wins;
    }
    EXPECT_GE(wins, 6);
}
