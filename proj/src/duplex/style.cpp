#include "duplex/style.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "duplex/error.hpp"

namespace duplex {

std::string to_hex(Rgb color) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", color.r, color.g, color.b);
    return buf;
}

std::optional<Rgb> parse_hex(std::string_view text) {
    if (text.size() != 7 || text[0] != '#') return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    int v[6];
    for (int i = 0; i < 6; ++i) {
        v[i] = nibble(text[static_cast<std::size_t>(i) + 1]);
        if (v[i] < 0) return std::nullopt;
    }
    return Rgb{static_cast<std::uint8_t>(v[0] * 16 + v[1]), static_cast<std::uint8_t>(v[2] * 16 + v[3]),
               static_cast<std::uint8_t>(v[4] * 16 + v[5])};
}

std::string_view to_string(MarkerShape shape) { return shape == MarkerShape::Square ? "square" : "circle"; }

std::optional<MarkerShape> parse_marker_shape(std::string_view text) {
    if (text == "square") return MarkerShape::Square;
    if (text == "circle") return MarkerShape::Circle;
    return std::nullopt;
}

const GraphStyle& StyleConfig::for_graph(const std::string& graph) const {
    static const GraphStyle fallback;
    auto it = graphs.find(graph);
    return it == graphs.end() ? fallback : it->second;
}

void StyleConfig::validate() const {
    auto check = [](SizeRange r, const char* what) {
        if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min < 0.0 || r.min > r.max)
            throw Error(ErrorCode::InvalidArgument, std::string(what) + " must satisfy 0 <= min <= max", what);
    };
    check(node_size_range, "node_size_range");
    check(edge_width_range, "edge_width_range");
    if (sector_palette.empty())
        throw Error(ErrorCode::InvalidArgument, "sector_palette must not be empty", "sector_palette");
}

namespace {

double normalized(double value, ScalarRange range) {
    if (!(range.max > range.min)) return 0.5;
    return std::clamp((value - range.min) / (range.max - range.min), 0.0, 1.0);
}

std::uint8_t lerp_channel(std::uint8_t a, std::uint8_t b, double t) {
    const double v = static_cast<double>(a) + (static_cast<double>(b) - static_cast<double>(a)) * t;
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

} // namespace

Rgb map_color(double value, ScalarRange range, const ColorRamp& ramp) {
    const double t = normalized(value, range);
    return Rgb{lerp_channel(ramp.light.r, ramp.dark.r, t), lerp_channel(ramp.light.g, ramp.dark.g, t),
               lerp_channel(ramp.light.b, ramp.dark.b, t)};
}

double map_size(double value, ScalarRange range, SizeRange sizes) {
    const double t = normalized(value, range);
    if (t == 0.0) return sizes.min;
    if (t == 1.0) return sizes.max;
    return std::clamp(sizes.min + (sizes.max - sizes.min) * t, sizes.min, sizes.max);
}

std::vector<Sector> sector_glyph(const Distribution& distribution, const std::vector<Rgb>& palette) {
    if (palette.empty()) throw Error(ErrorCode::InvalidArgument, "sector palette must not be empty");
    const double total = distribution.total();
    if (!(total > 0.0)) throw Error(ErrorCode::EmptyDistribution, "distribution has no positive count");
    std::vector<Sector> out;
    double start = 0.0;
    const auto& entries = distribution.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& [term, count] = entries[i];
        if (!(count > 0.0)) continue;
        Sector s;
        s.term = term;
        s.count = count;
        s.start = start;
        s.sweep = 360.0 * count / total;
        s.color = palette[i % palette.size()];
        start += s.sweep;
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

std::optional<ScalarRange> scalar_range_or_none(const Graph& graph, ElementKind kind, const std::string& attr) {
    if (attr.empty()) return std::nullopt;
    const Schema& schema = kind == ElementKind::Node ? graph.node_schema() : graph.edge_schema();
    auto it = schema.find(attr);
    if (it == schema.end() || it->second != ValueKind::Scalar) return std::nullopt;
    try {
        return attr_range(graph, kind, attr);
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace

Scene build_scene(const Graph& graph, const ViewMask& view, Canvas canvas, const Positions& positions,
                  const StyleConfig& style, const HighlightState* highlight) {
    if (view.graph() != graph.id() || view.node_slots() != graph.node_count() ||
        view.edge_slots() != graph.edge_count())
        throw Error(ErrorCode::GraphMismatch, "view does not address graph '" + graph.id() + "'", view.graph());
    const GraphStyle& gs = style.for_graph(graph.id());

    const IdSet* selected_nodes = nullptr;
    const IdSet* selected_edges = nullptr;
    const IdSet* reactions = nullptr;
    if (highlight) {
        if (highlight->source.graph == graph.id()) {
            selected_nodes = &highlight->source.nodes;
            selected_edges = &highlight->source.edges;
        }
        auto it = highlight->reactions.find(graph.id());
        if (it != highlight->reactions.end()) reactions = &it->second;
    }

    const auto node_color_range = scalar_range_or_none(graph, ElementKind::Node, gs.node_color_attr);
    const auto node_size_range = scalar_range_or_none(graph, ElementKind::Node, gs.node_size_attr);
    const auto edge_color_range = scalar_range_or_none(graph, ElementKind::Edge, gs.edge_color_attr);
    const auto edge_width_range = scalar_range_or_none(graph, ElementKind::Edge, gs.edge_width_attr);
    const bool sectors_bound = [&] {
        auto it = graph.node_schema().find(gs.sector_attr);
        return it != graph.node_schema().end() && it->second == ValueKind::Distribution;
    }();

    Scene scene;
    scene.graph = graph.id();
    scene.canvas = canvas;

    auto position_of = [&](const std::string& id) {
        auto it = positions.find(id);
        if (it == positions.end())
            throw Error(ErrorCode::InvalidArgument, "no position for visible node '" + id + "'", id);
        if (!std::isfinite(it->second.x) || !std::isfinite(it->second.y))
            throw Error(ErrorCode::InvalidArgument, "non-finite position for node '" + id + "'", id);
        return it->second;
    };

    for (std::size_t n = 0; n < graph.node_count(); ++n) {
        if (!view.node_visible(n)) continue;
        const Node& node = graph.nodes()[n];
        Glyph g;
        g.node = node.id;
        g.label = node.label.empty() ? node.id : node.label;
        g.center = position_of(node.id);
        g.show_label = gs.labels;
        g.radius = (style.node_size_range.min + style.node_size_range.max) / 2.0;
        if (node_size_range)
            if (const AttrValue* v = graph.node_attr(n, gs.node_size_attr))
                g.radius = map_size(v->scalar(), *node_size_range, style.node_size_range);
        g.fill = style.default_node_fill;
        if (node_color_range)
            if (const AttrValue* v = graph.node_attr(n, gs.node_color_attr))
                g.fill = map_color(v->scalar(), *node_color_range, style.node_color_ramp);
        g.selected = selected_nodes && selected_nodes->count(node.id);
        g.reaction = reactions && reactions->count(node.id);
        if (g.selected) {
            g.fill = style.selection_color;
        } else if (sectors_bound) {
            if (const AttrValue* v = graph.node_attr(n, gs.sector_attr); v && v->distribution().total() > 0.0)
                g.sectors = sector_glyph(v->distribution(), style.sector_palette);
        }
        scene.nodes.push_back(std::move(g));
    }

    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        if (!view.edge_visible(e)) continue;
        const Edge& edge = graph.edges()[e];
        auto [a, b] = graph.endpoints(e);
        if (!view.node_visible(a) || !view.node_visible(b)) continue;
        EdgeGlyph g;
        g.edge = edge.id;
        g.u = edge.u;
        g.v = edge.v;
        g.from = position_of(edge.u);
        g.to = position_of(edge.v);
        g.width = (style.edge_width_range.min + style.edge_width_range.max) / 2.0;
        if (edge_width_range)
            if (const AttrValue* v = graph.edge_attr(e, gs.edge_width_attr))
                g.width = map_size(v->scalar(), *edge_width_range, style.edge_width_range);
        g.color = style.default_edge_color;
        if (edge_color_range)
            if (const AttrValue* v = graph.edge_attr(e, gs.edge_color_attr))
                g.color = map_color(v->scalar(), *edge_color_range, style.edge_color_ramp);
        g.selected = selected_edges && selected_edges->count(edge.id);
        if (g.selected) g.color = style.selection_color;
        scene.edges.push_back(std::move(g));
    }

    std::sort(scene.nodes.begin(), scene.nodes.end(), [](const Glyph& x, const Glyph& y) { return x.node < y.node; });
    std::sort(scene.edges.begin(), scene.edges.end(),
              [](const EdgeGlyph& x, const EdgeGlyph& y) { return x.edge < y.edge; });
    return scene;
}

} // namespace duplex
