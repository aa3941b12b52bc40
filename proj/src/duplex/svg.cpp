#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "duplex/error.hpp"
#include "duplex/style.hpp"

namespace duplex {

namespace {

// Fixed three decimals; never "-0.000".
std::string num(double v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate in SVG output");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default:
                // Control characters are not allowed in XML 1.0.
                if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r')
                    out += ' ';
                else
                    out += c;
        }
    }
    return out;
}

Point on_circle(Point c, double r, double degrees) {
    const double a = degrees * std::numbers::pi / 180.0;
    return Point{c.x + r * std::sin(a), c.y - r * std::cos(a)};
}

void write_node(std::ostringstream& os, const std::string& graph, const Glyph& g, const StyleConfig& style) {
    os << "<g id=\"n:" << escape(graph) << ':' << escape(g.node) << "\" class=\"node";
    if (g.selected) os << " selected";
    if (g.reaction) os << " reaction";
    os << "\">\n";

    const bool whole = g.sectors.size() == 1;
    if (g.sectors.empty() || whole) {
        const Rgb fill = whole ? g.sectors.front().color : g.fill;
        os << "<circle cx=\"" << num(g.center.x) << "\" cy=\"" << num(g.center.y) << "\" r=\"" << num(g.radius)
           << "\" fill=\"" << to_hex(fill) << "\" stroke=\"#333333\" stroke-width=\"0.500\"/>\n";
    } else {
        for (const auto& s : g.sectors) {
            const Point p0 = on_circle(g.center, g.radius, s.start);
            const Point p1 = on_circle(g.center, g.radius, s.start + s.sweep);
            os << "<path class=\"sector\" d=\"M" << num(g.center.x) << ',' << num(g.center.y) << " L" << num(p0.x)
               << ',' << num(p0.y) << " A" << num(g.radius) << ',' << num(g.radius) << " 0 "
               << (s.sweep > 180.0 ? 1 : 0) << ",1 " << num(p1.x) << ',' << num(p1.y) << " Z\" fill=\""
               << to_hex(s.color) << "\" stroke=\"#333333\" stroke-width=\"0.250\"><title>" << escape(s.term)
               << "</title></path>\n";
        }
    }

    if (g.reaction) {
        const double side = Scene::kMarkerFactor * g.radius;
        if (style.reaction_shape == MarkerShape::Square) {
            os << "<rect class=\"reaction-marker\" x=\"" << num(g.center.x - side / 2.0) << "\" y=\""
               << num(g.center.y - side / 2.0) << "\" width=\"" << num(side) << "\" height=\"" << num(side)
               << "\" fill=\"none\" stroke=\"" << to_hex(style.reaction_color) << "\" stroke-width=\"1.500\"/>\n";
        } else {
            os << "<circle class=\"reaction-marker\" cx=\"" << num(g.center.x) << "\" cy=\"" << num(g.center.y)
               << "\" r=\"" << num(side / 2.0) << "\" fill=\"none\" stroke=\"" << to_hex(style.reaction_color)
               << "\" stroke-width=\"1.500\"/>\n";
        }
    }

    if (g.show_label) {
        os << "<text x=\"" << num(g.center.x + g.radius + 2.0) << "\" y=\"" << num(g.center.y + 3.0)
           << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#222222\">" << escape(g.label) << "</text>\n";
    }
    os << "</g>\n";
}

} // namespace

std::string render_svg(const Scene& scene, const StyleConfig& style) {
    std::ostringstream os;
    const std::string w = num(scene.canvas.width);
    const std::string h = num(scene.canvas.height);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
       << "<title>" << escape(scene.graph) << "</title>\n"
       << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"#ffffff\"/>\n";

    os << "<g class=\"edges\">\n";
    for (const auto& e : scene.edges) {
        os << "<g id=\"e:" << escape(scene.graph) << ':' << escape(e.edge) << "\" class=\"edge"
           << (e.selected ? " selected" : "") << "\">\n"
           << "<line x1=\"" << num(e.from.x) << "\" y1=\"" << num(e.from.y) << "\" x2=\"" << num(e.to.x)
           << "\" y2=\"" << num(e.to.y) << "\" stroke=\"" << to_hex(e.color) << "\" stroke-width=\""
           << num(e.width) << "\"/>\n</g>\n";
    }
    os << "</g>\n";

    os << "<g class=\"nodes\">\n";
    for (const auto& g : scene.nodes) write_node(os, scene.graph, g, style);
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string render_svg(const Graph& graph, const ViewMask& view, const LayoutResult& layout,
                       const StyleConfig& style, const HighlightState* highlight) {
    return render_svg(build_scene(graph, view, layout.canvas, layout.positions, style, highlight), style);
}

} // namespace duplex
