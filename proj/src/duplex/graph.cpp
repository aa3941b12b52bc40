#include "duplex/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "duplex/error.hpp"

namespace duplex {

namespace {

void declare(Schema& schema, const std::string& name, ValueKind kind) {
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "attribute name must not be empty");
    if (name == kNodeKey) throw Error(ErrorCode::InvalidArgument, "NODE_KEY is a reserved selector", name);
    auto [it, inserted] = schema.emplace(name, kind);
    if (!inserted && it->second != kind)
        throw Error(ErrorCode::SchemaMismatch,
                    "attribute '" + name + "' already declared as " + std::string(to_string(it->second)),
                    name);
}

} // namespace

Graph::Graph(std::string id, GraphOptions options) : id_(std::move(id)), options_(options) {}

Graph::Graph(std::string id, GraphOptions options, Schema node_schema, Schema edge_schema)
    : id_(std::move(id)), options_(options) {
    for (const auto& [name, kind] : node_schema) declare(node_schema_, name, kind);
    for (const auto& [name, kind] : edge_schema) declare(edge_schema_, name, kind);
}

void Graph::declare_node_attr(const std::string& name, ValueKind kind) { declare(node_schema_, name, kind); }

void Graph::declare_edge_attr(const std::string& name, ValueKind kind) { declare(edge_schema_, name, kind); }

void Graph::check_attrs(const Schema& schema, const AttrMap& attrs, const std::string& owner) const {
    for (const auto& [name, value] : attrs) {
        auto it = schema.find(name);
        if (it == schema.end())
            throw Error(ErrorCode::SchemaMismatch, "attribute '" + name + "' on " + owner + " is not declared",
                        name);
        if (it->second != value.kind())
            throw Error(ErrorCode::SchemaMismatch,
                        "attribute '" + name + "' on " + owner + " must be " + std::string(to_string(it->second)),
                        name);
    }
}

void Graph::add_node(const std::string& id, const std::string& label, AttrMap attrs) {
    if (id.empty()) throw Error(ErrorCode::InvalidArgument, "node id must not be empty");
    if (node_ix_.count(id)) throw Error(ErrorCode::DuplicateId, "duplicate node id '" + id + "'", id);
    check_attrs(node_schema_, attrs, "node '" + id + "'");
    node_ix_.emplace(id, nodes_.size());
    nodes_.push_back(Node{id, label, std::move(attrs)});
    incident_.emplace_back();
}

std::string Graph::add_edge(const std::string& u, const std::string& v, AttrMap attrs,
                            std::optional<std::string> id) {
    auto ui = node_ix_.find(u);
    auto vi = node_ix_.find(v);
    if (ui == node_ix_.end()) throw Error(ErrorCode::UnknownEndpoint, "unknown endpoint '" + u + "'", u);
    if (vi == node_ix_.end()) throw Error(ErrorCode::UnknownEndpoint, "unknown endpoint '" + v + "'", v);
    if (u == v && !options_.allow_self_loops)
        throw Error(ErrorCode::SelfLoop, "self-loop on '" + u + "' not allowed", u);

    std::size_t a = ui->second;
    std::size_t b = vi->second;
    std::string first = u;
    std::string second = v;
    if (!options_.directed && second < first) {
        std::swap(first, second);
        std::swap(a, b);
    }
    auto key = options_.directed ? std::make_pair(a, b) : std::make_pair(std::min(a, b), std::max(a, b));
    if (pairs_.count(key))
        throw Error(ErrorCode::DuplicateEdge, "edge {" + first + "," + second + "} already exists", first);

    std::string eid = id ? *id : first + (options_.directed ? "->" : "--") + second;
    if (eid.empty()) throw Error(ErrorCode::InvalidArgument, "edge id must not be empty");
    if (edge_ix_.count(eid)) throw Error(ErrorCode::DuplicateId, "duplicate edge id '" + eid + "'", eid);
    check_attrs(edge_schema_, attrs, "edge '" + eid + "'");

    std::size_t e = edges_.size();
    edge_ix_.emplace(eid, e);
    pairs_.insert(key);
    edges_.push_back(Edge{eid, first, second, std::move(attrs)});
    ends_.emplace_back(a, b);
    incident_[a].push_back(e);
    if (b != a) incident_[b].push_back(e);
    return eid;
}

void Graph::set_node_attr(const std::string& node_id, const std::string& name, AttrValue value) {
    std::size_t n = require_node(node_id);
    AttrMap probe{{name, value}};
    check_attrs(node_schema_, probe, "node '" + node_id + "'");
    nodes_[n].attrs.insert_or_assign(name, std::move(value));
}

void Graph::set_edge_attr(const std::string& edge_id, const std::string& name, AttrValue value) {
    auto e = edge_index(edge_id);
    if (!e) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + edge_id + "'", edge_id);
    AttrMap probe{{name, value}};
    check_attrs(edge_schema_, probe, "edge '" + edge_id + "'");
    edges_[*e].attrs.insert_or_assign(name, std::move(value));
}

bool Graph::has_node(std::string_view id) const { return node_ix_.count(std::string(id)) > 0; }

bool Graph::has_edge(std::string_view id) const { return edge_ix_.count(std::string(id)) > 0; }

std::optional<std::size_t> Graph::node_index(std::string_view id) const {
    auto it = node_ix_.find(std::string(id));
    if (it == node_ix_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Graph::edge_index(std::string_view id) const {
    auto it = edge_ix_.find(std::string(id));
    if (it == edge_ix_.end()) return std::nullopt;
    return it->second;
}

std::size_t Graph::require_node(std::string_view id) const {
    auto n = node_index(id);
    if (!n) throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(id) + "'", std::string(id));
    return *n;
}

const Node& Graph::node(std::string_view id) const { return nodes_[require_node(id)]; }

const Edge& Graph::edge(std::string_view id) const {
    auto e = edge_index(id);
    if (!e) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + std::string(id) + "'", std::string(id));
    return edges_[*e];
}

std::size_t Graph::degree(std::string_view id) const { return incident_[require_node(id)].size(); }

std::set<std::string> Graph::neighbors(std::string_view id) const {
    std::size_t n = require_node(id);
    std::set<std::string> out;
    for (std::size_t e : incident_[n]) {
        auto [a, b] = ends_[e];
        out.insert(nodes_[a == n ? b : a].id);
    }
    return out;
}

const AttrValue* Graph::node_attr(std::size_t n, const std::string& name) const {
    const auto& attrs = nodes_[n].attrs;
    auto it = attrs.find(name);
    return it == attrs.end() ? nullptr : &it->second;
}

const AttrValue* Graph::edge_attr(std::size_t e, const std::string& name) const {
    const auto& attrs = edges_[e].attrs;
    auto it = attrs.find(name);
    return it == attrs.end() ? nullptr : &it->second;
}

bool Graph::operator==(const Graph& other) const {
    return id_ == other.id_ && options_.directed == other.options_.directed &&
           options_.allow_self_loops == other.options_.allow_self_loops && node_schema_ == other.node_schema_ &&
           edge_schema_ == other.edge_schema_ && nodes_ == other.nodes_ && edges_ == other.edges_;
}

std::vector<std::vector<std::string>> connected_components(const Graph& graph) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    const std::size_t n = graph.node_count();
    std::vector<std::size_t> label(n, unset);
    std::vector<std::vector<std::string>> classes;

    for (std::size_t start = 0; start < n; ++start) {
        if (label[start] != unset) continue;
        const std::size_t c = classes.size();
        classes.emplace_back();
        std::queue<std::size_t> frontier;
        frontier.push(start);
        label[start] = c;
        while (!frontier.empty()) {
            std::size_t cur = frontier.front();
            frontier.pop();
            classes[c].push_back(graph.nodes()[cur].id);
            for (std::size_t e : graph.incident(cur)) {
                auto [a, b] = graph.endpoints(e);
                std::size_t next = a == cur ? b : a;
                if (label[next] == unset) {
                    label[next] = c;
                    frontier.push(next);
                }
            }
        }
    }
    for (auto& cls : classes) std::sort(cls.begin(), cls.end());
    std::sort(classes.begin(), classes.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return classes;
}

ScalarRange attr_range(const Graph& graph, ElementKind kind, const std::string& attr) {
    const Schema& schema = kind == ElementKind::Node ? graph.node_schema() : graph.edge_schema();
    auto it = schema.find(attr);
    if (it == schema.end()) throw Error(ErrorCode::UnknownAttr, "unknown attribute '" + attr + "'", attr);
    if (it->second != ValueKind::Scalar)
        throw Error(ErrorCode::NotScalar, "attribute '" + attr + "' is not scalar", attr);

    std::optional<ScalarRange> range;
    auto visit = [&](const AttrValue* value) {
        if (!value) return;
        double x = value->scalar();
        if (!range) range = ScalarRange{x, x};
        range->min = std::min(range->min, x);
        range->max = std::max(range->max, x);
    };
    if (kind == ElementKind::Node)
        for (std::size_t i = 0; i < graph.node_count(); ++i) visit(graph.node_attr(i, attr));
    else
        for (std::size_t i = 0; i < graph.edge_count(); ++i) visit(graph.edge_attr(i, attr));

    if (!range) throw Error(ErrorCode::EmptySelection, "no element carries '" + attr + "'", attr);
    return *range;
}

} // namespace duplex
