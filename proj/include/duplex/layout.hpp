#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "duplex/graph.hpp"
#include "duplex/viewfilter.hpp"

namespace duplex {

/// Knuth's MMIX 64-bit linear congruential generator:
///   state' = 6364136223846793005 * state + 1442695040888963407  (mod 2^64)
/// seeded with the state itself. Being fully specified by the standard
/// library it produces the same stream on every platform.
using Lcg64 = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0>;

/// Uniform double in [0, 1) from the top 53 bits of the next state.
inline double unit_interval(Lcg64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

struct Canvas {
    double width = 1000.0;
    double height = 1000.0;
    bool operator==(const Canvas&) const = default;
    double min_side() const { return width < height ? width : height; }
};

using Positions = std::map<std::string, Point>;

struct Provenance {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::map<std::string, double> params;
    bool operator==(const Provenance&) const = default;
};

struct LayoutResult {
    std::string graph;
    Canvas canvas;
    Positions positions;
    Provenance provenance;
    // Per-iteration stress, filled by the stress layout only.
    std::vector<double> stress_trace;

    bool operator==(const LayoutResult&) const = default;
};

enum class Algorithm { Circular, Random, FruchtermanReingold, Stress, Grid };
enum class CircularOrder { Id, Degree };

std::string_view to_string(Algorithm algo);
std::optional<Algorithm> parse_algorithm(std::string_view name);
// Comma separated list of accepted names.
std::string algorithm_names();

struct LayoutParams {
    Algorithm algorithm = Algorithm::FruchtermanReingold;
    std::uint64_t seed = 42;
    int iterations = 500;
    // Initial FR temperature as a fraction of the shorter canvas side.
    double cooling = 0.1;
    CircularOrder ordering = CircularOrder::Id;
};

// Every layout places only the nodes visible in `view` and uses only
// visible edges. An empty view yields an empty result.

LayoutResult layout_circular(const Graph& graph, const ViewMask& view, Canvas canvas,
                             CircularOrder ordering = CircularOrder::Id);
LayoutResult layout_random(const Graph& graph, const ViewMask& view, Canvas canvas, std::uint64_t seed);
LayoutResult layout_fruchterman_reingold(const Graph& graph, const ViewMask& view, Canvas canvas,
                                         std::uint64_t seed, int iterations, double cooling = 0.1);
LayoutResult layout_stress(const Graph& graph, const ViewMask& view, Canvas canvas, int iterations,
                           std::uint64_t seed = 0);
LayoutResult layout_grid(const Graph& graph, const ViewMask& view, Canvas canvas);

LayoutResult compute_layout(const Graph& graph, const ViewMask& view, Canvas canvas, const LayoutParams& params);

/// Sum over visible connected pairs of (|pi - pj| - L*dij)^2 / dij^2 with
/// hop distances dij. Pairs in different components do not contribute.
double layout_stress_value(const Graph& graph, const ViewMask& view, const Positions& positions, double unit_length);

struct LensSpec {
    Point focus;
    double radius = 100.0;
    double magnification = 2.0;
    bool operator==(const LensSpec&) const = default;
};

void validate_lens(const LensSpec& lens);

/// Radial fisheye. Inside the lens a point at distance r moves to
///   r' = R * m(r/R) / (1 + (m - 1)(r/R))
/// along the same ray; outside it is left alone.
Point lens_point(Point p, const LensSpec& lens);
Positions lens_transform(const Positions& positions, const LensSpec& lens);

Point clamp_to(Point p, Canvas canvas);
Positions move_node(const Positions& positions, Canvas canvas, const std::string& node, Point delta);
Positions pan(const Positions& positions, Canvas canvas, Point delta);

} // namespace duplex
