#include "duplex/workspace.hpp"

#include <fstream>
#include <sstream>

#include "duplex/error.hpp"
#include "duplex/serialize.hpp"

namespace duplex {

namespace {

[[noreturn]] void unresolved(const std::string& message, const std::string& detail) {
    throw Error(ErrorCode::UnresolvedReference, message, detail);
}

void check_binding(const Graph& g, ElementKind kind, const std::string& attr, bool scalar, const char* role) {
    if (attr.empty()) return;
    const Schema& schema = kind == ElementKind::Node ? g.node_schema() : g.edge_schema();
    auto it = schema.find(attr);
    if (it == schema.end())
        unresolved("style " + std::string(role) + " of graph '" + g.id() + "' names unknown attribute '" + attr + "'",
                   attr);
    const ValueKind want = scalar ? ValueKind::Scalar : ValueKind::Distribution;
    if (it->second != want)
        throw Error(ErrorCode::KindMismatch,
                    "style " + std::string(role) + " of graph '" + g.id() + "' needs a " +
                        std::string(to_string(want)) + " attribute, '" + attr + "' is " +
                        std::string(to_string(it->second)),
                    attr);
}

} // namespace

const Graph& Workspace::graph(const std::string& id) const {
    auto it = graphs.find(id);
    if (it == graphs.end()) throw Error(ErrorCode::UnknownGraph, "unknown graph '" + id + "'", id);
    return it->second;
}

Graph& Workspace::graph(const std::string& id) {
    auto it = graphs.find(id);
    if (it == graphs.end()) throw Error(ErrorCode::UnknownGraph, "unknown graph '" + id + "'", id);
    return it->second;
}

void Workspace::add_graph(Graph g) {
    if (g.id().empty()) throw Error(ErrorCode::InvalidArgument, "graph id must not be empty", "id");
    if (graphs.count(g.id())) throw Error(ErrorCode::DuplicateId, "duplicate graph '" + g.id() + "'", g.id());
    const std::string id = g.id();
    graphs.emplace(id, std::move(g));
}

const std::string& Workspace::define_coupling(Coupling c) {
    validate_coupling(graphs, c);
    for (const auto& existing : couplings)
        if (existing.id == c.id) throw Error(ErrorCode::DuplicateId, "duplicate coupling '" + c.id + "'", c.id);
    couplings.push_back(std::move(c));
    return couplings.back().id;
}

const Coupling& Workspace::coupling(const std::string& id) const {
    for (const auto& c : couplings)
        if (c.id == id) return c;
    throw Error(ErrorCode::UnknownCoupling, "unknown coupling '" + id + "'", id);
}

void Workspace::validate() const {
    for (const auto& [id, g] : graphs)
        if (id != g.id()) throw Error(ErrorCode::InvalidArgument, "graph stored under '" + id + "' has id '" + g.id() + "'", id);
    IdSet ids;
    for (const auto& c : couplings) {
        validate_coupling(graphs, c);
        if (!ids.insert(c.id).second) throw Error(ErrorCode::DuplicateId, "duplicate coupling '" + c.id + "'", c.id);
    }
    styles.validate();
    for (const auto& [id, gs] : styles.graphs) {
        auto it = graphs.find(id);
        if (it == graphs.end()) unresolved("style bound to unknown graph '" + id + "'", id);
        check_binding(it->second, ElementKind::Node, gs.node_color_attr, true, "node color");
        check_binding(it->second, ElementKind::Node, gs.node_size_attr, true, "node size");
        check_binding(it->second, ElementKind::Edge, gs.edge_color_attr, true, "edge color");
        check_binding(it->second, ElementKind::Edge, gs.edge_width_attr, true, "edge width");
        check_binding(it->second, ElementKind::Node, gs.sector_attr, false, "sector");
    }
}

void Session::validate() const {
    workspace.validate();
    auto graph = [&](const std::string& id, const char* what) -> const Graph& {
        auto it = workspace.graphs.find(id);
        if (it == workspace.graphs.end()) unresolved(std::string(what) + " refers to unknown graph '" + id + "'", id);
        return it->second;
    };

    for (const auto& [id, layout] : layouts) {
        const Graph& g = graph(id, "layout");
        if (layout.graph != id) unresolved("layout stored under '" + id + "' is for graph '" + layout.graph + "'", layout.graph);
        for (const auto& [node, p] : layout.positions)
            if (!g.has_node(node)) unresolved("layout of '" + id + "' positions unknown node '" + node + "'", node);
    }
    for (const auto& [id, specs] : filters) {
        const Graph& g = graph(id, "filter");
        for (const auto& spec : specs) {
            try {
                validate_filter(g, spec);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::UnknownAttr)
                    unresolved("filter on '" + id + "': " + e.what(), e.detail());
                throw;
            }
        }
    }
    auto check_selection = [&](const Selection& s, const char* what) {
        graph(s.graph, what);
        try {
            validate_selection(workspace.graphs, s);
        } catch (const Error& e) {
            unresolved(std::string(what) + ": " + e.what(), e.detail());
        }
    };
    if (selection) check_selection(*selection, "selection");
    if (highlight) {
        check_selection(highlight->source, "highlight source");
        for (const auto& [id, nodes] : highlight->reactions) {
            const Graph& g = graph(id, "highlight");
            for (const auto& n : nodes)
                if (!g.has_node(n)) unresolved("highlight on '" + id + "' names unknown node '" + n + "'", n);
        }
    }
    for (const auto& [id, l] : lens) {
        graph(id, "lens");
        validate_lens(l.spec);
    }
}

ViewMask Session::mask(const std::string& id) const {
    const Graph& g = workspace.graph(id);
    auto it = filters.find(id);
    if (it == filters.end()) return ViewMask::all_visible(g);
    return apply_filters(g, it->second);
}

Workspace parse_workspace(const std::string& text, const std::string& source) {
    auto j = json_io::parse_text(text, source);
    try {
        Workspace ws = json_io::workspace_from_json(j);
        ws.validate();
        return ws;
    } catch (const Error& e) {
        throw Error(e.code(), source + ": " + e.what(), e.detail());
    }
}

Session parse_session(const std::string& text, const std::string& source) {
    auto j = json_io::parse_text(text, source);
    try {
        return json_io::session_from_json(j);
    } catch (const Error& e) {
        throw Error(e.code(), source + ": " + e.what(), e.detail());
    }
}

std::string dump_workspace(const Workspace& workspace) { return json_io::to_json(workspace).dump(2) + "\n"; }

std::string dump_session(const Session& session) { return json_io::to_json(session).dump(2) + "\n"; }

Workspace load_workspace(const std::filesystem::path& path) { return parse_workspace(read_text_file(path), path.string()); }

void save_workspace(const Workspace& workspace, const std::filesystem::path& path) {
    workspace.validate();
    write_text_file(path, dump_workspace(workspace));
}

Session load_session(const std::filesystem::path& path) { return parse_session(read_text_file(path), path.string()); }

void save_session(const Session& session, const std::filesystem::path& path) {
    session.validate();
    write_text_file(path, dump_session(session));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IoError, "error reading '" + path.string() + "'", path.string());
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    // Write beside the target, then rename.
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing", path.string());
        out << text;
        out.flush();
        if (!out) throw Error(ErrorCode::IoError, "error writing '" + path.string() + "'", path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot replace '" + path.string() + "'", path.string());
    }
}

} // namespace duplex
