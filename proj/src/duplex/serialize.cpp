#include "duplex/serialize.hpp"

#include <cmath>

#include "duplex/error.hpp"

namespace duplex::json_io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw Error(ErrorCode::ParseError, (path.empty() ? std::string("/") : path) + ": " + message,
                path.empty() ? "/" : path);
}

std::string child(const std::string& path, const std::string& key) {
    std::string escaped;
    for (char c : key) {
        if (c == '~')
            escaped += "~0";
        else if (c == '/')
            escaped += "~1";
        else
            escaped += c;
    }
    return path + "/" + escaped;
}

std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const json& object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

const json& field(const json& j, const char* key, const std::string& path) {
    object(j, path);
    auto it = j.find(key);
    if (it == j.end()) fail(child(path, key), "missing field");
    return *it;
}

const json* optional_field(const json& j, const char* key, const std::string& path) {
    object(j, path);
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string str(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

std::uint64_t unsigned_int(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        fail(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::string str_field(const json& j, const char* key, const std::string& path) {
    return str(field(j, key, path), child(path, key));
}

std::string str_field_or(const json& j, const char* key, const std::string& path, std::string fallback) {
    const json* f = optional_field(j, key, path);
    return f ? str(*f, child(path, key)) : fallback;
}

bool bool_field_or(const json& j, const char* key, const std::string& path, bool fallback) {
    const json* f = optional_field(j, key, path);
    return f ? boolean(*f, child(path, key)) : fallback;
}

json point(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j, const std::string& path) {
    array(j, path);
    if (j.size() != 2) fail(path, "expected [x, y]");
    return Point{number(j[0], child(path, 0)), number(j[1], child(path, 1))};
}

Schema schema_from(const json& j, const std::string& path) {
    Schema s;
    for (const auto& [name, kind] : object(j, path).items()) {
        auto k = parse_value_kind(str(kind, child(path, name)));
        if (!k) fail(child(path, name), "unknown value kind (scalar, text, termset, distribution)");
        s.emplace(name, *k);
    }
    return s;
}

json schema_to(const Schema& s) {
    json j = json::object();
    for (const auto& [name, kind] : s) j[name] = std::string(to_string(kind));
    return j;
}

json attrs_to(const AttrMap& attrs) {
    json j = json::object();
    for (const auto& [name, value] : attrs) j[name] = to_json(value);
    return j;
}

AttrMap attrs_from(const json& j, const Schema& schema, const std::string& path) {
    AttrMap out;
    for (const auto& [name, value] : object(j, path).items()) {
        auto it = schema.find(name);
        if (it == schema.end()) fail(child(path, name), "attribute not declared in schema");
        out.emplace(name, attr_from_json(value, it->second, child(path, name)));
    }
    return out;
}

json id_set(const IdSet& ids) { return json(std::vector<std::string>(ids.begin(), ids.end())); }

IdSet id_set_from(const json& j, const std::string& path) {
    IdSet out;
    array(j, path);
    for (std::size_t i = 0; i < j.size(); ++i) out.insert(str(j[i], child(path, i)));
    return out;
}

json rgb(Rgb c) { return to_hex(c); }

Rgb rgb_from(const json& j, const std::string& path) {
    auto c = parse_hex(str(j, path));
    if (!c) fail(path, "expected a color '#rrggbb'");
    return *c;
}

json ramp(const ColorRamp& r) { return json{{"light", rgb(r.light)}, {"dark", rgb(r.dark)}}; }

ColorRamp ramp_from(const json& j, const std::string& path, ColorRamp base) {
    if (const json* f = optional_field(j, "light", path)) base.light = rgb_from(*f, child(path, "light"));
    if (const json* f = optional_field(j, "dark", path)) base.dark = rgb_from(*f, child(path, "dark"));
    return base;
}

json size_range(SizeRange r) { return json::array({r.min, r.max}); }

SizeRange size_range_from(const json& j, const std::string& path) {
    array(j, path);
    if (j.size() != 2) fail(path, "expected [min, max]");
    return SizeRange{number(j[0], child(path, 0)), number(j[1], child(path, 1))};
}

// Library errors found while assembling a document become load errors.
[[noreturn]] void rethrow_as_load_error(const Error& e, const std::string& path) {
    switch (e.code()) {
        case ErrorCode::UnknownEndpoint:
        case ErrorCode::UnknownGraph:
        case ErrorCode::UnknownAttr:
        case ErrorCode::UnknownNode:
        case ErrorCode::UnknownEdge:
        case ErrorCode::UnresolvedReference:
            throw Error(ErrorCode::UnresolvedReference, path + ": " + e.what(), e.detail());
        case ErrorCode::ParseError: throw e;
        default: fail(path, e.what());
    }
}

} // namespace

json to_json(const AttrValue& value) {
    switch (value.kind()) {
        case ValueKind::Scalar: return value.scalar();
        case ValueKind::Text: return value.text();
        case ValueKind::TermSet: return json(std::vector<std::string>(value.terms().begin(), value.terms().end()));
        case ValueKind::Distribution: {
            json arr = json::array();
            for (const auto& [term, count] : value.distribution().entries()) arr.push_back(json::array({term, count}));
            return arr;
        }
    }
    return nullptr;
}

AttrValue attr_from_json(const json& j, ValueKind kind, const std::string& path) {
    switch (kind) {
        case ValueKind::Scalar: return AttrValue(number(j, path));
        case ValueKind::Text: return AttrValue(str(j, path));
        case ValueKind::TermSet: {
            array(j, path);
            TermSet set;
            for (std::size_t i = 0; i < j.size(); ++i)
                if (!set.insert(str(j[i], child(path, i))).second) fail(child(path, i), "duplicate term");
            return AttrValue(std::move(set));
        }
        case ValueKind::Distribution: {
            array(j, path);
            Distribution d;
            for (std::size_t i = 0; i < j.size(); ++i) {
                const std::string p = child(path, i);
                if (!j[i].is_array() || j[i].size() != 2) fail(p, "expected [term, count]");
                double count = number(j[i][1], child(p, 1));
                if (count < 0.0) fail(child(p, 1), "count must be >= 0");
                try {
                    d.add(str(j[i][0], child(p, 0)), count);
                } catch (const Error& e) {
                    fail(p, e.what());
                }
            }
            return AttrValue(std::move(d));
        }
    }
    fail(path, "unsupported kind");
}

json to_json(const Graph& graph) {
    json nodes = json::array();
    for (const auto& n : graph.nodes()) nodes.push_back(json{{"id", n.id}, {"label", n.label}, {"attrs", attrs_to(n.attrs)}});
    json edges = json::array();
    for (const auto& e : graph.edges())
        edges.push_back(json{{"id", e.id}, {"u", e.u}, {"v", e.v}, {"attrs", attrs_to(e.attrs)}});
    return json{{"id", graph.id()},
                {"directed", graph.directed()},
                {"allow_self_loops", graph.allows_self_loops()},
                {"node_schema", schema_to(graph.node_schema())},
                {"edge_schema", schema_to(graph.edge_schema())},
                {"nodes", std::move(nodes)},
                {"edges", std::move(edges)}};
}

Graph graph_from_json(const json& j, const std::string& path) {
    object(j, path);
    GraphOptions opts;
    opts.directed = bool_field_or(j, "directed", path, false);
    opts.allow_self_loops = bool_field_or(j, "allow_self_loops", path, false);
    Schema ns;
    Schema es;
    if (const json* f = optional_field(j, "node_schema", path)) ns = schema_from(*f, child(path, "node_schema"));
    if (const json* f = optional_field(j, "edge_schema", path)) es = schema_from(*f, child(path, "edge_schema"));

    Graph g;
    try {
        g = Graph(str_field(j, "id", path), opts, ns, es);
    } catch (const Error& e) {
        rethrow_as_load_error(e, path);
    }

    const std::string npath = child(path, "nodes");
    const json& nodes = array(field(j, "nodes", path), npath);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string p = child(npath, i);
        std::string id = str_field(nodes[i], "id", p);
        std::string label = str_field_or(nodes[i], "label", p, id);
        AttrMap attrs;
        if (const json* a = optional_field(nodes[i], "attrs", p)) attrs = attrs_from(*a, ns, child(p, "attrs"));
        try {
            g.add_node(id, label, std::move(attrs));
        } catch (const Error& e) {
            rethrow_as_load_error(e, p);
        }
    }

    const std::string epath = child(path, "edges");
    const json* edges = optional_field(j, "edges", path);
    if (edges) array(*edges, epath);
    for (std::size_t i = 0; edges && i < edges->size(); ++i) {
        const json& ej = (*edges)[i];
        const std::string p = child(epath, i);
        std::string u = str_field(ej, "u", p);
        std::string v = str_field(ej, "v", p);
        std::optional<std::string> id;
        if (const json* f = optional_field(ej, "id", p)) id = str(*f, child(p, "id"));
        AttrMap attrs;
        if (const json* a = optional_field(ej, "attrs", p)) attrs = attrs_from(*a, es, child(p, "attrs"));
        try {
            g.add_edge(u, v, std::move(attrs), id);
        } catch (const Error& e) {
            rethrow_as_load_error(e, p);
        }
    }
    return g;
}

json to_json(const Coupling& c) {
    return json{{"id", c.id},          {"graph_a", c.graph_a}, {"graph_b", c.graph_b},
                {"a_attr", c.a_attr}, {"op", to_string(c.op)}, {"b_attr", c.b_attr}};
}

Coupling coupling_from_json(const json& j, const std::string& path) {
    Coupling c;
    c.id = str_field(j, "id", path);
    c.graph_a = str_field(j, "graph_a", path);
    c.graph_b = str_field(j, "graph_b", path);
    c.a_attr = str_field(j, "a_attr", path);
    c.b_attr = str_field(j, "b_attr", path);
    auto op = parse_relation_op(str_field(j, "op", path));
    if (!op) fail(child(path, "op"), "unknown relation (eq, lt, le, gt, ge, key_in, intersects, subset)");
    c.op = *op;
    return c;
}

json to_json(const StyleConfig& s) {
    json palette = json::array();
    for (auto c : s.sector_palette) palette.push_back(rgb(c));
    json graphs = json::object();
    for (const auto& [id, g] : s.graphs)
        graphs[id] = json{{"node_color_attr", g.node_color_attr}, {"node_size_attr", g.node_size_attr},
                          {"edge_color_attr", g.edge_color_attr}, {"edge_width_attr", g.edge_width_attr},
                          {"sector_attr", g.sector_attr},         {"labels", g.labels}};
    return json{{"node_color_ramp", ramp(s.node_color_ramp)},
                {"node_size_range", size_range(s.node_size_range)},
                {"edge_width_range", size_range(s.edge_width_range)},
                {"edge_color_ramp", ramp(s.edge_color_ramp)},
                {"selection_color", rgb(s.selection_color)},
                {"reaction_marker", json{{"shape", to_string(s.reaction_shape)}, {"color", rgb(s.reaction_color)}}},
                {"sector_palette", std::move(palette)},
                {"default_node_fill", rgb(s.default_node_fill)},
                {"default_edge_color", rgb(s.default_edge_color)},
                {"graphs", std::move(graphs)}};
}

StyleConfig style_from_json(const json& j, const std::string& path, const StyleConfig& base) {
    StyleConfig s = base;
    object(j, path);
    if (const json* f = optional_field(j, "node_color_ramp", path))
        s.node_color_ramp = ramp_from(object(*f, child(path, "node_color_ramp")), child(path, "node_color_ramp"),
                                      s.node_color_ramp);
    if (const json* f = optional_field(j, "edge_color_ramp", path))
        s.edge_color_ramp = ramp_from(object(*f, child(path, "edge_color_ramp")), child(path, "edge_color_ramp"),
                                      s.edge_color_ramp);
    if (const json* f = optional_field(j, "node_size_range", path))
        s.node_size_range = size_range_from(*f, child(path, "node_size_range"));
    if (const json* f = optional_field(j, "edge_width_range", path))
        s.edge_width_range = size_range_from(*f, child(path, "edge_width_range"));
    if (const json* f = optional_field(j, "selection_color", path))
        s.selection_color = rgb_from(*f, child(path, "selection_color"));
    if (const json* f = optional_field(j, "default_node_fill", path))
        s.default_node_fill = rgb_from(*f, child(path, "default_node_fill"));
    if (const json* f = optional_field(j, "default_edge_color", path))
        s.default_edge_color = rgb_from(*f, child(path, "default_edge_color"));
    if (const json* f = optional_field(j, "reaction_marker", path)) {
        const std::string p = child(path, "reaction_marker");
        if (const json* shape = optional_field(*f, "shape", p)) {
            auto m = parse_marker_shape(str(*shape, child(p, "shape")));
            if (!m) fail(child(p, "shape"), "expected 'square' or 'circle'");
            s.reaction_shape = *m;
        }
        if (const json* color = optional_field(*f, "color", p)) s.reaction_color = rgb_from(*color, child(p, "color"));
    }
    if (const json* f = optional_field(j, "sector_palette", path)) {
        const std::string p = child(path, "sector_palette");
        array(*f, p);
        s.sector_palette.clear();
        for (std::size_t i = 0; i < f->size(); ++i) s.sector_palette.push_back(rgb_from((*f)[i], child(p, i)));
    }
    if (const json* f = optional_field(j, "graphs", path)) {
        const std::string p = child(path, "graphs");
        for (const auto& [id, gj] : object(*f, p).items()) {
            const std::string gp = child(p, id);
            object(gj, gp);
            GraphStyle g = s.for_graph(id);
            g.node_color_attr = str_field_or(gj, "node_color_attr", gp, g.node_color_attr);
            g.node_size_attr = str_field_or(gj, "node_size_attr", gp, g.node_size_attr);
            g.edge_color_attr = str_field_or(gj, "edge_color_attr", gp, g.edge_color_attr);
            g.edge_width_attr = str_field_or(gj, "edge_width_attr", gp, g.edge_width_attr);
            g.sector_attr = str_field_or(gj, "sector_attr", gp, g.sector_attr);
            g.labels = bool_field_or(gj, "labels", gp, g.labels);
            s.graphs[id] = g;
        }
    }
    try {
        s.validate();
    } catch (const Error& e) {
        fail(child(path, e.detail()), e.what());
    }
    return s;
}

json to_json(const FilterSpec& spec) {
    return std::visit(
        [](const auto& f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, NodeThreshold>)
                return json{{"kind", "node_threshold"}, {"attr", f.attr}, {"cmp", to_string(f.cmp)},
                            {"value", f.threshold}};
            else if constexpr (std::is_same_v<T, EdgeThreshold>)
                return json{{"kind", "edge_threshold"}, {"attr", f.attr}, {"cmp", to_string(f.cmp)},
                            {"value", f.threshold}};
            else if constexpr (std::is_same_v<T, SharedTermEdge>)
                return json{{"kind", "shared_term_edge"}, {"attr", f.attr}, {"term", f.term}};
            else
                return json{{"kind", "term_node"}, {"attr", f.attr}, {"term", f.term}};
        },
        spec);
}

FilterSpec filter_from_json(const json& j, const std::string& path) {
    const std::string kind = str_field(j, "kind", path);
    const std::string attr = str_field(j, "attr", path);
    auto threshold = [&]() {
        Comparator cmp = Comparator::AtLeast;
        if (const json* c = optional_field(j, "cmp", path)) {
            auto parsed = parse_comparator(str(*c, child(path, "cmp")));
            if (!parsed) fail(child(path, "cmp"), "expected '>=' or '<='");
            cmp = *parsed;
        }
        return std::make_pair(cmp, number(field(j, "value", path), child(path, "value")));
    };
    if (kind == "node_threshold") {
        auto [cmp, v] = threshold();
        return NodeThreshold{attr, cmp, v};
    }
    if (kind == "edge_threshold") {
        auto [cmp, v] = threshold();
        return EdgeThreshold{attr, cmp, v};
    }
    if (kind == "shared_term_edge") return SharedTermEdge{attr, str_field(j, "term", path)};
    if (kind == "term_node") return TermNode{attr, str_field(j, "term", path)};
    fail(child(path, "kind"), "unknown filter kind (node_threshold, edge_threshold, shared_term_edge, term_node)");
}

json to_json(const Selection& s) {
    return json{{"graph", s.graph}, {"nodes", id_set(s.nodes)}, {"edges", id_set(s.edges)}};
}

Selection selection_from_json(const json& j, const std::string& path) {
    Selection s;
    s.graph = str_field(j, "graph", path);
    if (const json* f = optional_field(j, "nodes", path)) s.nodes = id_set_from(*f, child(path, "nodes"));
    if (const json* f = optional_field(j, "edges", path)) s.edges = id_set_from(*f, child(path, "edges"));
    return s;
}

json to_json(const HighlightState& h) {
    json reactions = json::object();
    for (const auto& [g, ids] : h.reactions) reactions[g] = id_set(ids);
    return json{{"source", to_json(h.source)}, {"reactions", std::move(reactions)}};
}

HighlightState highlight_from_json(const json& j, const std::string& path) {
    HighlightState h;
    h.source = selection_from_json(field(j, "source", path), child(path, "source"));
    const std::string rp = child(path, "reactions");
    for (const auto& [g, ids] : object(field(j, "reactions", path), rp).items())
        h.reactions.emplace(g, id_set_from(ids, child(rp, g)));
    return h;
}

json to_json(const LayoutResult& l) {
    json positions = json::object();
    for (const auto& [id, p] : l.positions) positions[id] = point(p);
    json params = json::object();
    for (const auto& [k, v] : l.provenance.params) params[k] = v;
    json out{{"graph", l.graph},
             {"canvas", json::array({l.canvas.width, l.canvas.height})},
             {"provenance", json{{"algorithm", l.provenance.algorithm}, {"seed", l.provenance.seed}, {"params", params}}},
             {"positions", std::move(positions)}};
    if (!l.stress_trace.empty()) out["stress_trace"] = l.stress_trace;
    return out;
}

LayoutResult layout_from_json(const json& j, const std::string& path) {
    LayoutResult l;
    l.graph = str_field(j, "graph", path);
    Point canvas = point_from(field(j, "canvas", path), child(path, "canvas"));
    if (!(canvas.x > 0.0) || !(canvas.y > 0.0)) fail(child(path, "canvas"), "canvas must be positive");
    l.canvas = Canvas{canvas.x, canvas.y};
    const std::string pp = child(path, "provenance");
    const json& prov = field(j, "provenance", path);
    l.provenance.algorithm = str_field(prov, "algorithm", pp);
    l.provenance.seed = unsigned_int(field(prov, "seed", pp), child(pp, "seed"));
    if (const json* params = optional_field(prov, "params", pp))
        for (const auto& [k, v] : object(*params, child(pp, "params")).items())
            l.provenance.params[k] = number(v, child(child(pp, "params"), k));
    const std::string posp = child(path, "positions");
    for (const auto& [id, p] : object(field(j, "positions", path), posp).items())
        l.positions.emplace(id, point_from(p, child(posp, id)));
    if (const json* t = optional_field(j, "stress_trace", path)) {
        const std::string tp = child(path, "stress_trace");
        array(*t, tp);
        for (std::size_t i = 0; i < t->size(); ++i) l.stress_trace.push_back(number((*t)[i], child(tp, i)));
    }
    return l;
}

json to_json(const LensState& lens) {
    return json{{"enabled", lens.enabled},
                {"focus", point(lens.spec.focus)},
                {"radius", lens.spec.radius},
                {"magnification", lens.spec.magnification}};
}

LensState lens_from_json(const json& j, const std::string& path) {
    LensState l;
    l.enabled = bool_field_or(j, "enabled", path, false);
    l.spec.focus = point_from(field(j, "focus", path), child(path, "focus"));
    l.spec.radius = number(field(j, "radius", path), child(path, "radius"));
    l.spec.magnification = number(field(j, "magnification", path), child(path, "magnification"));
    try {
        validate_lens(l.spec);
    } catch (const Error& e) {
        fail(child(path, e.detail()), e.what());
    }
    return l;
}

json to_json(const Workspace& ws) {
    json graphs = json::array();
    for (const auto& [id, g] : ws.graphs) graphs.push_back(to_json(g));
    json couplings = json::array();
    for (const auto& c : ws.couplings) couplings.push_back(to_json(c));
    return json{{"version", kFormatVersion},
                {"kind", "workspace"},
                {"graphs", std::move(graphs)},
                {"couplings", std::move(couplings)},
                {"styles", to_json(ws.styles)}};
}

namespace {

void check_version(const json& j, const std::string& path) {
    const json& v = field(j, "version", path);
    if (!v.is_number_integer() || v.get<std::int64_t>() != kFormatVersion)
        fail(child(path, "version"), "unsupported version (expected " + std::to_string(kFormatVersion) + ")");
}

} // namespace

Workspace workspace_from_json(const json& j, const std::string& path) {
    object(j, path);
    check_version(j, path);
    if (const json* k = optional_field(j, "kind", path); k && str(*k, child(path, "kind")) != "workspace")
        fail(child(path, "kind"), "expected kind 'workspace'");
    Workspace ws;
    const std::string gp = child(path, "graphs");
    const json& graphs = array(field(j, "graphs", path), gp);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        Graph g = graph_from_json(graphs[i], child(gp, i));
        if (ws.graphs.count(g.id())) fail(child(child(gp, i), "id"), "duplicate graph id '" + g.id() + "'");
        ws.graphs.emplace(g.id(), std::move(g));
    }
    if (const json* cs = optional_field(j, "couplings", path)) {
        const std::string cp = child(path, "couplings");
        array(*cs, cp);
        for (std::size_t i = 0; i < cs->size(); ++i) {
            Coupling c = coupling_from_json((*cs)[i], child(cp, i));
            try {
                ws.define_coupling(std::move(c));
            } catch (const Error& e) {
                rethrow_as_load_error(e, child(cp, i));
            }
        }
    }
    if (const json* s = optional_field(j, "styles", path)) ws.styles = style_from_json(*s, child(path, "styles"));
    return ws;
}

json to_json(const Session& s) {
    json layouts = json::object();
    for (const auto& [g, l] : s.layouts) layouts[g] = to_json(l);
    json filters = json::object();
    for (const auto& [g, specs] : s.filters) {
        json arr = json::array();
        for (const auto& f : specs) arr.push_back(to_json(f));
        filters[g] = std::move(arr);
    }
    json lens = json::object();
    for (const auto& [g, l] : s.lens) lens[g] = to_json(l);
    return json{{"version", kFormatVersion},
                {"kind", "session"},
                {"workspace", to_json(s.workspace)},
                {"layouts", std::move(layouts)},
                {"filters", std::move(filters)},
                {"selection", s.selection ? to_json(*s.selection) : json(nullptr)},
                {"highlight", s.highlight ? to_json(*s.highlight) : json(nullptr)},
                {"lens", std::move(lens)}};
}

Session session_from_json(const json& j, const std::string& path) {
    object(j, path);
    check_version(j, path);
    if (const json* k = optional_field(j, "kind", path); k && str(*k, child(path, "kind")) != "session")
        fail(child(path, "kind"), "expected kind 'session'");
    Session s;
    s.workspace = workspace_from_json(field(j, "workspace", path), child(path, "workspace"));
    if (const json* ls = optional_field(j, "layouts", path)) {
        const std::string lp = child(path, "layouts");
        for (const auto& [g, l] : object(*ls, lp).items()) s.layouts.emplace(g, layout_from_json(l, child(lp, g)));
    }
    if (const json* fs = optional_field(j, "filters", path)) {
        const std::string fp = child(path, "filters");
        for (const auto& [g, arr] : object(*fs, fp).items()) {
            const std::string gp = child(fp, g);
            array(arr, gp);
            auto& specs = s.filters[g];
            for (std::size_t i = 0; i < arr.size(); ++i) specs.push_back(filter_from_json(arr[i], child(gp, i)));
        }
    }
    if (const json* sel = optional_field(j, "selection", path))
        s.selection = selection_from_json(*sel, child(path, "selection"));
    if (const json* h = optional_field(j, "highlight", path))
        s.highlight = highlight_from_json(*h, child(path, "highlight"));
    if (const json* ls = optional_field(j, "lens", path)) {
        const std::string lp = child(path, "lens");
        for (const auto& [g, l] : object(*ls, lp).items()) s.lens.emplace(g, lens_from_json(l, child(lp, g)));
    }
    s.validate();
    return s;
}

json parse_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line and column.
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        const std::string where = "line " + std::to_string(line) + ", column " + std::to_string(col);
        throw Error(ErrorCode::ParseError, source + ": " + where + ": malformed JSON", where);
    }
}

} // namespace duplex::json_io
