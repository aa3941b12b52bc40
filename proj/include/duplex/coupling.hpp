#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "duplex/attr.hpp"
#include "duplex/graph.hpp"

namespace duplex {

using GraphMap = std::map<std::string, Graph>;
using IdSet = std::set<std::string>;

/// Predicate between an A-side value (left) and a B-side value (right).
///
///   Eq              Scalar x Scalar, or Text x Text
///   Lt Le Gt Ge     Scalar x Scalar, read as `a <op> b`
///   KeyIn           TermSet x Text: the B value is a member of the A set
///   Intersects      TermSet x TermSet: non-empty intersection
///   Subset          TermSet x TermSet: a is a subset of b
enum class RelationOp { Eq, Lt, Le, Gt, Ge, KeyIn, Intersects, Subset };

std::string_view to_string(RelationOp op);
std::optional<RelationOp> parse_relation_op(std::string_view name);

bool operand_kinds_valid(RelationOp op, ValueKind a, ValueKind b);

/// Throws KindMismatch when the operands do not fit the operator.
bool evaluate_relation(const AttrValue& a, RelationOp op, const AttrValue& b);

/// A declared coupling. `a_attr`/`b_attr` name a node attribute of the
/// respective graph or the reserved selector kNodeKey. One declaration
/// answers queries in both directions.
struct Coupling {
    std::string id;
    std::string graph_a;
    std::string graph_b;
    std::string a_attr;
    std::string b_attr;
    RelationOp op = RelationOp::Eq;

    bool touches(std::string_view graph) const { return graph == graph_a || graph == graph_b; }
    const std::string& other(std::string_view graph) const { return graph == graph_a ? graph_b : graph_a; }

    bool operator==(const Coupling&) const = default;
};

/// Throws UnknownGraph, UnknownAttr or KindMismatch.
void validate_coupling(const GraphMap& graphs, const Coupling& coupling);

struct Selection {
    std::string graph;
    IdSet nodes;
    IdSet edges;

    bool empty() const { return nodes.empty() && edges.empty(); }
    bool operator==(const Selection&) const = default;
};

/// Throws UnknownGraph, UnknownNode or UnknownEdge.
void validate_selection(const GraphMap& graphs, const Selection& selection);

/// Nodes of the coupled graph related to at least one selected node.
/// Elements that lack the coupled attribute never match.
IdSet propagate_node_selection(const GraphMap& graphs, const Coupling& coupling, const Selection& selection);

/// For each selected edge the endpoints' term sets are intersected and the
/// intersection stands in for the selected side's value. The selected
/// side's attribute must be a TermSet.
IdSet propagate_edge_selection(const GraphMap& graphs, const Coupling& coupling, const Selection& selection);

struct HighlightState {
    Selection source;
    // One entry per graph coupled to the source graph, possibly empty.
    std::map<std::string, IdSet> reactions;

    bool operator==(const HighlightState&) const = default;
};

/// Fires every coupling incident to the source graph and unions the
/// results per reacting graph. Edge selections only contribute through
/// couplings whose source-side attribute is a TermSet. No chaining.
HighlightState build_highlight(const GraphMap& graphs, std::span<const Coupling> couplings,
                               const Selection& selection);

} // namespace duplex
