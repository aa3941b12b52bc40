#include "duplex/coupling.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <vector>

#include "duplex/error.hpp"

namespace duplex {

std::string_view to_string(RelationOp op) {
    switch (op) {
        case RelationOp::Eq: return "eq";
        case RelationOp::Lt: return "lt";
        case RelationOp::Le: return "le";
        case RelationOp::Gt: return "gt";
        case RelationOp::Ge: return "ge";
        case RelationOp::KeyIn: return "key_in";
        case RelationOp::Intersects: return "intersects";
        case RelationOp::Subset: return "subset";
    }
    return "?";
}

std::optional<RelationOp> parse_relation_op(std::string_view name) {
    for (auto op : {RelationOp::Eq, RelationOp::Lt, RelationOp::Le, RelationOp::Gt, RelationOp::Ge,
                    RelationOp::KeyIn, RelationOp::Intersects, RelationOp::Subset})
        if (to_string(op) == name) return op;
    return std::nullopt;
}

bool operand_kinds_valid(RelationOp op, ValueKind a, ValueKind b) {
    switch (op) {
        case RelationOp::Eq:
            return a == b && (a == ValueKind::Scalar || a == ValueKind::Text);
        case RelationOp::Lt:
        case RelationOp::Le:
        case RelationOp::Gt:
        case RelationOp::Ge:
            return a == ValueKind::Scalar && b == ValueKind::Scalar;
        case RelationOp::KeyIn:
            return a == ValueKind::TermSet && b == ValueKind::Text;
        case RelationOp::Intersects:
        case RelationOp::Subset:
            return a == ValueKind::TermSet && b == ValueKind::TermSet;
    }
    return false;
}

namespace {

bool intersects(const TermSet& x, const TermSet& y) {
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return true;
    }
    return false;
}

} // namespace

bool evaluate_relation(const AttrValue& a, RelationOp op, const AttrValue& b) {
    if (!operand_kinds_valid(op, a.kind(), b.kind()))
        throw Error(ErrorCode::KindMismatch, std::string(to_string(op)) + " cannot compare " +
                                                 std::string(to_string(a.kind())) + " with " +
                                                 std::string(to_string(b.kind())));
    switch (op) {
        case RelationOp::Eq:
            return a == b;
        case RelationOp::Lt: return a.scalar() < b.scalar();
        case RelationOp::Le: return a.scalar() <= b.scalar();
        case RelationOp::Gt: return a.scalar() > b.scalar();
        case RelationOp::Ge: return a.scalar() >= b.scalar();
        case RelationOp::KeyIn: return a.terms().count(b.text()) > 0;
        case RelationOp::Intersects: return intersects(a.terms(), b.terms());
        case RelationOp::Subset:
            return std::includes(b.terms().begin(), b.terms().end(), a.terms().begin(), a.terms().end());
    }
    return false;
}

namespace {

const Graph& find_graph(const GraphMap& graphs, const std::string& id) {
    auto it = graphs.find(id);
    if (it == graphs.end()) throw Error(ErrorCode::UnknownGraph, "unknown graph '" + id + "'", id);
    return it->second;
}

ValueKind selector_kind(const Graph& graph, const std::string& attr) {
    if (attr == kNodeKey) return ValueKind::Text;
    auto it = graph.node_schema().find(attr);
    if (it == graph.node_schema().end())
        throw Error(ErrorCode::UnknownAttr, "graph '" + graph.id() + "' has no node attribute '" + attr + "'",
                    attr);
    return it->second;
}

// Value of a coupling selector on node n, or nullopt if the node lacks it.
std::optional<AttrValue> selector_value(const Graph& graph, std::size_t n, const std::string& attr) {
    if (attr == kNodeKey) return AttrValue(graph.nodes()[n].id);
    if (const AttrValue* v = graph.node_attr(n, attr)) return *v;
    return std::nullopt;
}

struct Side {
    const Graph* selected;
    const Graph* other;
    const std::string* selected_attr;
    const std::string* other_attr;
    bool selected_is_a;
};

Side orient(const GraphMap& graphs, const Coupling& coupling, const Selection& selection) {
    if (!coupling.touches(selection.graph))
        throw Error(ErrorCode::CouplingMismatch,
                    "coupling '" + coupling.id + "' does not involve graph '" + selection.graph + "'",
                    selection.graph);
    const bool is_a = selection.graph == coupling.graph_a;
    const Graph& a = find_graph(graphs, coupling.graph_a);
    const Graph& b = find_graph(graphs, coupling.graph_b);
    return is_a ? Side{&a, &b, &coupling.a_attr, &coupling.b_attr, true}
                : Side{&b, &a, &coupling.b_attr, &coupling.a_attr, false};
}

// Nodes of side.other related to at least one of `values` (values taken on
// the selected side). Order relations collapse the selection to its extreme
// value, set relations collapse to a union; Subset needs the full scan.
IdSet match_other(const Side& side, RelationOp op, const std::vector<AttrValue>& values) {
    IdSet out;
    if (values.empty()) return out;
    const Graph& other = *side.other;
    const std::string& attr = *side.other_attr;

    auto scan = [&](const std::function<bool(const AttrValue&)>& keep) {
        for (std::size_t n = 0; n < other.node_count(); ++n) {
            auto v = selector_value(other, n, attr);
            if (v && keep(*v)) out.insert(other.nodes()[n].id);
        }
    };

    switch (op) {
        case RelationOp::Eq: {
            std::vector<AttrValue> pool(values);
            scan([&](const AttrValue& v) { return std::find(pool.begin(), pool.end(), v) != pool.end(); });
            break;
        }
        case RelationOp::Lt:
        case RelationOp::Le:
        case RelationOp::Gt:
        case RelationOp::Ge: {
            double lo = values.front().scalar();
            double hi = lo;
            for (const auto& v : values) {
                lo = std::min(lo, v.scalar());
                hi = std::max(hi, v.scalar());
            }
            // a <op> b, with the selected values on the a side or the b side.
            const bool sel_a = side.selected_is_a;
            scan([&](const AttrValue& v) {
                const double o = v.scalar();
                switch (op) {
                    case RelationOp::Lt: return sel_a ? lo < o : o < hi;
                    case RelationOp::Le: return sel_a ? lo <= o : o <= hi;
                    case RelationOp::Gt: return sel_a ? hi > o : o > lo;
                    default: return sel_a ? hi >= o : o >= lo;
                }
            });
            break;
        }
        case RelationOp::KeyIn: {
            if (side.selected_is_a) {
                TermSet keys;
                for (const auto& v : values) keys.insert(v.terms().begin(), v.terms().end());
                if (attr == kNodeKey) {
                    for (const auto& key : keys)
                        if (other.has_node(key)) out.insert(key);
                } else {
                    scan([&](const AttrValue& v) { return keys.count(v.text()) > 0; });
                }
            } else {
                TermSet keys;
                for (const auto& v : values) keys.insert(v.text());
                scan([&](const AttrValue& v) { return intersects(v.terms(), keys); });
            }
            break;
        }
        case RelationOp::Intersects: {
            TermSet all;
            for (const auto& v : values) all.insert(v.terms().begin(), v.terms().end());
            scan([&](const AttrValue& v) { return intersects(v.terms(), all); });
            break;
        }
        case RelationOp::Subset: {
            scan([&](const AttrValue& v) {
                for (const auto& s : values) {
                    const auto& a = side.selected_is_a ? s.terms() : v.terms();
                    const auto& b = side.selected_is_a ? v.terms() : s.terms();
                    if (std::includes(b.begin(), b.end(), a.begin(), a.end())) return true;
                }
                return false;
            });
            break;
        }
    }
    return out;
}

} // namespace

void validate_coupling(const GraphMap& graphs, const Coupling& coupling) {
    if (coupling.id.empty()) throw Error(ErrorCode::InvalidArgument, "coupling id must not be empty");
    if (coupling.graph_a == coupling.graph_b)
        throw Error(ErrorCode::InvalidArgument, "coupling '" + coupling.id + "' must join two distinct graphs",
                    coupling.graph_a);
    const Graph& a = find_graph(graphs, coupling.graph_a);
    const Graph& b = find_graph(graphs, coupling.graph_b);
    ValueKind ka = selector_kind(a, coupling.a_attr);
    ValueKind kb = selector_kind(b, coupling.b_attr);
    if (!operand_kinds_valid(coupling.op, ka, kb))
        throw Error(ErrorCode::KindMismatch,
                    "coupling '" + coupling.id + "': " + std::string(to_string(coupling.op)) + " cannot relate " +
                        std::string(to_string(ka)) + " with " + std::string(to_string(kb)),
                    coupling.id);
}

void validate_selection(const GraphMap& graphs, const Selection& selection) {
    const Graph& g = find_graph(graphs, selection.graph);
    for (const auto& n : selection.nodes)
        if (!g.has_node(n)) throw Error(ErrorCode::UnknownNode, "unknown node '" + n + "'", n);
    for (const auto& e : selection.edges)
        if (!g.has_edge(e)) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + e + "'", e);
}

IdSet propagate_node_selection(const GraphMap& graphs, const Coupling& coupling, const Selection& selection) {
    Side side = orient(graphs, coupling, selection);
    std::vector<AttrValue> values;
    for (const auto& id : selection.nodes) {
        auto n = side.selected->node_index(id);
        if (!n) throw Error(ErrorCode::UnknownNode, "unknown node '" + id + "'", id);
        if (auto v = selector_value(*side.selected, *n, *side.selected_attr)) values.push_back(std::move(*v));
    }
    return match_other(side, coupling.op, values);
}

IdSet propagate_edge_selection(const GraphMap& graphs, const Coupling& coupling, const Selection& selection) {
    Side side = orient(graphs, coupling, selection);
    const Graph& g = *side.selected;
    if (selector_kind(g, *side.selected_attr) != ValueKind::TermSet)
        throw Error(ErrorCode::KindMismatch,
                    "edge propagation needs a term-set attribute on '" + g.id() + "', got '" +
                        *side.selected_attr + "'",
                    *side.selected_attr);
    // KeyIn only accepts a term set on the A side.
    if (coupling.op == RelationOp::KeyIn && !side.selected_is_a)
        throw Error(ErrorCode::KindMismatch, "key_in edge propagation runs from the term-set side only",
                    coupling.id);

    std::vector<AttrValue> values;
    for (const auto& id : selection.edges) {
        auto e = g.edge_index(id);
        if (!e) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + id + "'", id);
        auto [u, v] = g.endpoints(*e);
        const AttrValue* su = g.node_attr(u, *side.selected_attr);
        const AttrValue* sv = g.node_attr(v, *side.selected_attr);
        if (!su || !sv) continue;
        TermSet common;
        std::set_intersection(su->terms().begin(), su->terms().end(), sv->terms().begin(), sv->terms().end(),
                              std::inserter(common, common.end()));
        values.emplace_back(std::move(common));
    }
    return match_other(side, coupling.op, values);
}

HighlightState build_highlight(const GraphMap& graphs, std::span<const Coupling> couplings,
                               const Selection& selection) {
    validate_selection(graphs, selection);
    HighlightState state;
    state.source = selection;
    for (const auto& c : couplings) {
        if (!c.touches(selection.graph)) continue;
        IdSet& bucket = state.reactions[c.other(selection.graph)];
        if (!selection.nodes.empty()) bucket.merge(propagate_node_selection(graphs, c, selection));
        if (!selection.edges.empty()) {
            const Graph& g = graphs.at(selection.graph);
            const std::string& attr = selection.graph == c.graph_a ? c.a_attr : c.b_attr;
            auto it = g.node_schema().find(attr);
            bool termset_side = it != g.node_schema().end() && it->second == ValueKind::TermSet;
            bool usable = termset_side && (c.op != RelationOp::KeyIn || selection.graph == c.graph_a);
            if (usable) bucket.merge(propagate_edge_selection(graphs, c, selection));
        }
    }
    return state;
}

} // namespace duplex
