#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duplex/coupling.hpp"
#include "duplex/graph.hpp"
#include "duplex/layout.hpp"
#include "duplex/viewfilter.hpp"

namespace duplex {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    bool operator==(const Rgb&) const = default;
};

std::string to_hex(Rgb color);
// Accepts "#rrggbb".
std::optional<Rgb> parse_hex(std::string_view text);

struct ColorRamp {
    Rgb light;
    Rgb dark;
    bool operator==(const ColorRamp&) const = default;
};

struct SizeRange {
    double min = 0.0;
    double max = 0.0;
    bool operator==(const SizeRange&) const = default;
};

enum class MarkerShape { Square, Circle };

std::string_view to_string(MarkerShape shape);
std::optional<MarkerShape> parse_marker_shape(std::string_view text);

/// Which attributes drive which channel, per graph. Empty names leave the
/// channel at its default.
struct GraphStyle {
    std::string node_color_attr;
    std::string node_size_attr;
    std::string edge_color_attr;
    std::string edge_width_attr;
    std::string sector_attr;
    bool labels = true;
    bool operator==(const GraphStyle&) const = default;
};

struct StyleConfig {
    ColorRamp node_color_ramp{{220, 220, 220}, {30, 30, 30}};
    SizeRange node_size_range{4.0, 14.0};
    SizeRange edge_width_range{0.5, 4.0};
    ColorRamp edge_color_ramp{{215, 215, 215}, {40, 40, 40}};
    Rgb selection_color{214, 39, 40};
    MarkerShape reaction_shape = MarkerShape::Square;
    Rgb reaction_color{31, 119, 180};
    std::vector<Rgb> sector_palette{{31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {148, 103, 189},
                                    {140, 86, 75},  {227, 119, 194}, {188, 189, 34}, {23, 190, 207}};
    Rgb default_node_fill{150, 150, 150};
    Rgb default_edge_color{120, 120, 120};
    std::map<std::string, GraphStyle> graphs;

    const GraphStyle& for_graph(const std::string& graph) const;
    void validate() const;
    bool operator==(const StyleConfig&) const = default;
};

/// Linear per-channel interpolation, t = 0 at range.min (light end) and
/// t = 1 at range.max (dark end). Values outside the range are clamped; a
/// degenerate range maps to the midpoint of the ramp.
Rgb map_color(double value, ScalarRange range, const ColorRamp& ramp);
double map_size(double value, ScalarRange range, SizeRange sizes);

struct Sector {
    std::string term;
    double count = 0.0;
    // Degrees, clockwise from 12 o'clock.
    double start = 0.0;
    double sweep = 0.0;
    Rgb color;
};

/// One sector per positive-count term in declared order. Colors follow the
/// term's position in the distribution, so the same term keeps its color
/// across nodes. Throws EmptyDistribution when no count is positive.
std::vector<Sector> sector_glyph(const Distribution& distribution, const std::vector<Rgb>& palette);

struct Glyph {
    std::string node;
    std::string label;
    Point center;
    double radius = 0.0;
    Rgb fill;
    std::vector<Sector> sectors;
    bool selected = false;
    bool reaction = false;
    bool show_label = true;
};

struct EdgeGlyph {
    std::string edge;
    std::string u;
    std::string v;
    Point from;
    Point to;
    double width = 1.0;
    Rgb color;
    bool selected = false;
};

/// Styled, masked view of one graph, ready to serialise. Elements are in
/// id order.
struct Scene {
    std::string graph;
    Canvas canvas;
    std::vector<EdgeGlyph> edges;
    std::vector<Glyph> nodes;
    // Square side for reaction markers, relative to the node radius.
    static constexpr double kMarkerFactor = 2.4;
};

/// Throws InvalidArgument when a visible node has no position.
Scene build_scene(const Graph& graph, const ViewMask& view, Canvas canvas, const Positions& positions,
                  const StyleConfig& style, const HighlightState* highlight);

/// SVG 1.1 document. Element ids are `n:<graph>:<node>` and
/// `e:<graph>:<edge>`; coordinates use three decimals so identical scenes
/// serialise to identical bytes.
std::string render_svg(const Scene& scene, const StyleConfig& style);

std::string render_svg(const Graph& graph, const ViewMask& view, const LayoutResult& layout,
                       const StyleConfig& style, const HighlightState* highlight);

} // namespace duplex
