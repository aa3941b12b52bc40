#include "duplex/viewfilter.hpp"

#include <algorithm>

#include "duplex/error.hpp"

namespace duplex {

ViewMask ViewMask::all_visible(const Graph& graph) {
    ViewMask m;
    m.graph_ = graph.id();
    m.nodes_.assign(graph.node_count(), true);
    m.edges_.assign(graph.edge_count(), true);
    return m;
}

ViewMask ViewMask::none_visible(const Graph& graph) {
    ViewMask m;
    m.graph_ = graph.id();
    m.nodes_.assign(graph.node_count(), false);
    m.edges_.assign(graph.edge_count(), false);
    return m;
}

std::size_t ViewMask::visible_node_count() const {
    return static_cast<std::size_t>(std::count(nodes_.begin(), nodes_.end(), true));
}

std::size_t ViewMask::visible_edge_count() const {
    return static_cast<std::size_t>(std::count(edges_.begin(), edges_.end(), true));
}

std::vector<std::string> ViewMask::visible_nodes(const Graph& graph) const {
    std::vector<std::string> out;
    for (std::size_t n = 0; n < nodes_.size(); ++n)
        if (nodes_[n]) out.push_back(graph.nodes()[n].id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> ViewMask::visible_edges(const Graph& graph) const {
    std::vector<std::string> out;
    for (std::size_t e = 0; e < edges_.size(); ++e)
        if (edges_[e]) out.push_back(graph.edges()[e].id);
    std::sort(out.begin(), out.end());
    return out;
}

void ViewMask::close_edges(const Graph& graph) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto [u, v] = graph.endpoints(e);
        if (!nodes_[u] || !nodes_[v]) edges_[e] = false;
    }
}

std::string_view to_string(Comparator cmp) { return cmp == Comparator::AtLeast ? ">=" : "<="; }

std::optional<Comparator> parse_comparator(std::string_view text) {
    if (text == ">=" || text == "ge") return Comparator::AtLeast;
    if (text == "<=" || text == "le") return Comparator::AtMost;
    return std::nullopt;
}

namespace {

void require_kind(const Schema& schema, const std::string& attr, ValueKind kind, std::string_view what) {
    auto it = schema.find(attr);
    if (it == schema.end())
        throw Error(ErrorCode::UnknownAttr, "unknown " + std::string(what) + " attribute '" + attr + "'", attr);
    if (it->second != kind)
        throw Error(ErrorCode::KindMismatch,
                    std::string(what) + " attribute '" + attr + "' must be " + std::string(to_string(kind)), attr);
}

bool passes(double value, Comparator cmp, double threshold) {
    return cmp == Comparator::AtLeast ? value >= threshold : value <= threshold;
}

bool has_term(const AttrValue* v, const std::string& term) { return v && v->terms().count(term) > 0; }

} // namespace

void validate_filter(const Graph& graph, const FilterSpec& spec) {
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, NodeThreshold>)
                require_kind(graph.node_schema(), f.attr, ValueKind::Scalar, "node");
            else if constexpr (std::is_same_v<T, EdgeThreshold>)
                require_kind(graph.edge_schema(), f.attr, ValueKind::Scalar, "edge");
            else
                require_kind(graph.node_schema(), f.attr, ValueKind::TermSet, "node");
        },
        spec);
}

ViewMask node_threshold_filter(const Graph& graph, const std::string& attr, Comparator cmp, double threshold) {
    require_kind(graph.node_schema(), attr, ValueKind::Scalar, "node");
    ViewMask m = ViewMask::all_visible(graph);
    for (std::size_t n = 0; n < graph.node_count(); ++n) {
        const AttrValue* v = graph.node_attr(n, attr);
        m.set_node(n, v && passes(v->scalar(), cmp, threshold));
    }
    m.close_edges(graph);
    return m;
}

ViewMask edge_threshold_filter(const Graph& graph, const std::string& attr, Comparator cmp, double threshold) {
    require_kind(graph.edge_schema(), attr, ValueKind::Scalar, "edge");
    ViewMask m = ViewMask::all_visible(graph);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        const AttrValue* v = graph.edge_attr(e, attr);
        m.set_edge(e, v && passes(v->scalar(), cmp, threshold));
    }
    return m;
}

ViewMask shared_term_edge_filter(const Graph& graph, const std::string& attr, const std::string& term) {
    require_kind(graph.node_schema(), attr, ValueKind::TermSet, "node");
    ViewMask m = ViewMask::all_visible(graph);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        auto [u, v] = graph.endpoints(e);
        m.set_edge(e, has_term(graph.node_attr(u, attr), term) && has_term(graph.node_attr(v, attr), term));
    }
    return m;
}

ViewMask term_node_filter(const Graph& graph, const std::string& attr, const std::string& term) {
    require_kind(graph.node_schema(), attr, ValueKind::TermSet, "node");
    ViewMask m = ViewMask::all_visible(graph);
    for (std::size_t n = 0; n < graph.node_count(); ++n) m.set_node(n, has_term(graph.node_attr(n, attr), term));
    m.close_edges(graph);
    return m;
}

ViewMask apply_filter(const Graph& graph, const FilterSpec& spec) {
    return std::visit(
        [&](const auto& f) -> ViewMask {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, NodeThreshold>)
                return node_threshold_filter(graph, f.attr, f.cmp, f.threshold);
            else if constexpr (std::is_same_v<T, EdgeThreshold>)
                return edge_threshold_filter(graph, f.attr, f.cmp, f.threshold);
            else if constexpr (std::is_same_v<T, SharedTermEdge>)
                return shared_term_edge_filter(graph, f.attr, f.term);
            else
                return term_node_filter(graph, f.attr, f.term);
        },
        spec);
}

ViewMask compose_masks(const Graph& graph, std::span<const ViewMask> masks) {
    ViewMask out = ViewMask::all_visible(graph);
    for (const auto& m : masks) {
        if (m.graph() != graph.id() || m.node_slots() != graph.node_count() ||
            m.edge_slots() != graph.edge_count())
            throw Error(ErrorCode::GraphMismatch, "mask for '" + m.graph() + "' cannot compose with '" +
                                                      graph.id() + "'",
                        m.graph());
        for (std::size_t n = 0; n < graph.node_count(); ++n)
            if (!m.node_visible(n)) out.set_node(n, false);
        for (std::size_t e = 0; e < graph.edge_count(); ++e)
            if (!m.edge_visible(e)) out.set_edge(e, false);
    }
    out.close_edges(graph);
    return out;
}

ViewMask apply_filters(const Graph& graph, std::span<const FilterSpec> specs) {
    std::vector<ViewMask> masks;
    masks.reserve(specs.size());
    for (const auto& s : specs) masks.push_back(apply_filter(graph, s));
    return compose_masks(graph, masks);
}

} // namespace duplex
