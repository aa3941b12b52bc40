#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "duplex/graph.hpp"

namespace duplex {

/// Visibility over one graph's nodes and edges, indexed like the graph.
/// Masks produced by this module are edge-coherent: a visible edge always
/// has two visible endpoints.
class ViewMask {
public:
    ViewMask() = default;
    static ViewMask all_visible(const Graph& graph);
    static ViewMask none_visible(const Graph& graph);

    const std::string& graph() const noexcept { return graph_; }
    std::size_t node_slots() const noexcept { return nodes_.size(); }
    std::size_t edge_slots() const noexcept { return edges_.size(); }

    bool node_visible(std::size_t n) const { return nodes_[n]; }
    bool edge_visible(std::size_t e) const { return edges_[e]; }
    void set_node(std::size_t n, bool visible) { nodes_[n] = visible; }
    void set_edge(std::size_t e, bool visible) { edges_[e] = visible; }

    std::size_t visible_node_count() const;
    std::size_t visible_edge_count() const;

    // Sorted ids.
    std::vector<std::string> visible_nodes(const Graph& graph) const;
    std::vector<std::string> visible_edges(const Graph& graph) const;

    /// Hides every edge with a hidden endpoint.
    void close_edges(const Graph& graph);

    bool operator==(const ViewMask&) const = default;

private:
    std::string graph_;
    std::vector<bool> nodes_;
    std::vector<bool> edges_;
};

enum class Comparator { AtLeast, AtMost };

std::string_view to_string(Comparator cmp);
std::optional<Comparator> parse_comparator(std::string_view text);

struct NodeThreshold {
    std::string attr;
    Comparator cmp = Comparator::AtLeast;
    double threshold = 0.0;
    bool operator==(const NodeThreshold&) const = default;
};

struct EdgeThreshold {
    std::string attr;
    Comparator cmp = Comparator::AtLeast;
    double threshold = 0.0;
    bool operator==(const EdgeThreshold&) const = default;
};

struct SharedTermEdge {
    std::string attr;
    std::string term;
    bool operator==(const SharedTermEdge&) const = default;
};

struct TermNode {
    std::string attr;
    std::string term;
    bool operator==(const TermNode&) const = default;
};

using FilterSpec = std::variant<NodeThreshold, EdgeThreshold, SharedTermEdge, TermNode>;

/// Throws UnknownAttr or KindMismatch naming the attribute.
void validate_filter(const Graph& graph, const FilterSpec& spec);

// Thresholds are inclusive. Elements lacking the attribute fail the test.
ViewMask node_threshold_filter(const Graph& graph, const std::string& attr, Comparator cmp, double threshold);
ViewMask edge_threshold_filter(const Graph& graph, const std::string& attr, Comparator cmp, double threshold);
ViewMask shared_term_edge_filter(const Graph& graph, const std::string& attr, const std::string& term);
ViewMask term_node_filter(const Graph& graph, const std::string& attr, const std::string& term);

ViewMask apply_filter(const Graph& graph, const FilterSpec& spec);

/// Intersection plus edge closure. An empty list yields the all-visible
/// mask. Throws GraphMismatch if a mask addresses another graph.
ViewMask compose_masks(const Graph& graph, std::span<const ViewMask> masks);

/// Conjunction of all specs.
ViewMask apply_filters(const Graph& graph, std::span<const FilterSpec> specs);

} // namespace duplex
