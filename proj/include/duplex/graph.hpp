#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "duplex/attr.hpp"

namespace duplex {

struct Node {
    std::string id;
    std::string label;
    AttrMap attrs;

    bool operator==(const Node&) const = default;
};

struct Edge {
    std::string id;
    std::string u;
    std::string v;
    AttrMap attrs;

    bool operator==(const Edge&) const = default;
};

enum class ElementKind { Node, Edge };

struct GraphOptions {
    bool directed = false;
    bool allow_self_loops = false;
};

/// Attributed graph with per-graph attribute schemas. Undirected edges are
/// stored with lexicographically ordered endpoints and at most one edge per
/// endpoint pair. Elements keep insertion order and are addressed either by
/// id or by their dense index.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::string id, GraphOptions options = {});
    Graph(std::string id, GraphOptions options, Schema node_schema, Schema edge_schema);

    const std::string& id() const noexcept { return id_; }
    bool directed() const noexcept { return options_.directed; }
    bool allows_self_loops() const noexcept { return options_.allow_self_loops; }
    const GraphOptions& options() const noexcept { return options_; }

    const Schema& node_schema() const noexcept { return node_schema_; }
    const Schema& edge_schema() const noexcept { return edge_schema_; }

    // Declaring an existing name with another kind is a SchemaMismatch.
    void declare_node_attr(const std::string& name, ValueKind kind);
    void declare_edge_attr(const std::string& name, ValueKind kind);

    void add_node(const std::string& id, const std::string& label, AttrMap attrs = {});

    /// Returns the stored edge id. Without an explicit id the edge is named
    /// `u--v` (undirected, canonical order) or `u->v` (directed).
    std::string add_edge(const std::string& u, const std::string& v, AttrMap attrs = {},
                         std::optional<std::string> id = std::nullopt);

    void set_node_attr(const std::string& node_id, const std::string& name, AttrValue value);
    void set_edge_attr(const std::string& edge_id, const std::string& name, AttrValue value);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool has_node(std::string_view id) const;
    bool has_edge(std::string_view id) const;
    std::optional<std::size_t> node_index(std::string_view id) const;
    std::optional<std::size_t> edge_index(std::string_view id) const;
    const Node& node(std::string_view id) const;
    const Edge& edge(std::string_view id) const;

    // Endpoint indices of edge `e`.
    std::pair<std::size_t, std::size_t> endpoints(std::size_t e) const { return ends_[e]; }
    // Edge indices touching node `n`, in insertion order.
    const std::vector<std::size_t>& incident(std::size_t n) const { return incident_[n]; }

    std::size_t degree(std::string_view id) const;
    std::set<std::string> neighbors(std::string_view id) const;

    const AttrValue* node_attr(std::size_t n, const std::string& name) const;
    const AttrValue* edge_attr(std::size_t e, const std::string& name) const;

    bool operator==(const Graph& other) const;

private:
    void check_attrs(const Schema& schema, const AttrMap& attrs, const std::string& owner) const;
    std::size_t require_node(std::string_view id) const;

    std::string id_;
    GraphOptions options_;
    Schema node_schema_;
    Schema edge_schema_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::pair<std::size_t, std::size_t>> ends_;
    std::vector<std::vector<std::size_t>> incident_;
    std::unordered_map<std::string, std::size_t> node_ix_;
    std::unordered_map<std::string, std::size_t> edge_ix_;
    std::set<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Partition of node ids into connected components (weak connectivity for
/// directed graphs). Each class is sorted; classes are ordered by their
/// smallest id.
std::vector<std::vector<std::string>> connected_components(const Graph& graph);

struct ScalarRange {
    double min = 0.0;
    double max = 0.0;
    bool operator==(const ScalarRange&) const = default;
};

/// Exact min/max of a Scalar attribute over the elements that carry it.
ScalarRange attr_range(const Graph& graph, ElementKind kind, const std::string& attr);

} // namespace duplex
