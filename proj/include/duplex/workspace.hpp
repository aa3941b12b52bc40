#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duplex/coupling.hpp"
#include "duplex/graph.hpp"
#include "duplex/layout.hpp"
#include "duplex/style.hpp"
#include "duplex/viewfilter.hpp"

namespace duplex {

inline constexpr int kFormatVersion = 1;

/// Graphs, the couplings between them and the style configuration.
struct Workspace {
    GraphMap graphs;
    std::vector<Coupling> couplings;
    StyleConfig styles;

    const Graph& graph(const std::string& id) const;
    Graph& graph(const std::string& id);
    void add_graph(Graph graph);

    /// Validates and stores the coupling; returns its id.
    const std::string& define_coupling(Coupling coupling);
    const Coupling& coupling(const std::string& id) const;

    void validate() const;

    bool operator==(const Workspace&) const = default;
};

struct LensState {
    bool enabled = false;
    LensSpec spec;
    bool operator==(const LensState&) const = default;
};

/// Interactive state over a workspace.
struct Session {
    Workspace workspace;
    std::map<std::string, LayoutResult> layouts;
    std::map<std::string, std::vector<FilterSpec>> filters;
    std::optional<Selection> selection;
    std::optional<HighlightState> highlight;
    std::map<std::string, LensState> lens;

    /// Throws UnresolvedReference when a graph, node or edge is missing.
    void validate() const;

    /// Mask from the graph's active filters (all visible when none).
    ViewMask mask(const std::string& graph) const;

    bool operator==(const Session&) const = default;
};

// Files are UTF-8 JSON with a `version` field. Loading validates the whole
// document before returning; on failure nothing is returned.
Workspace load_workspace(const std::filesystem::path& path);
void save_workspace(const Workspace& workspace, const std::filesystem::path& path);
Session load_session(const std::filesystem::path& path);
void save_session(const Session& session, const std::filesystem::path& path);

Workspace parse_workspace(const std::string& text, const std::string& source = "<memory>");
Session parse_session(const std::string& text, const std::string& source = "<memory>");
std::string dump_workspace(const Workspace& workspace);
std::string dump_session(const Session& session);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace duplex
