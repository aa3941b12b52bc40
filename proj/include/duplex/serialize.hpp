#pragma once

#include <string>

#include "json.hpp"

#include "duplex/coupling.hpp"
#include "duplex/graph.hpp"
#include "duplex/layout.hpp"
#include "duplex/style.hpp"
#include "duplex/viewfilter.hpp"
#include "duplex/workspace.hpp"

// JSON mapping for every persisted or transported type. Readers throw
// Error{ParseError} with the JSON pointer of the offending field in
// `detail`; `path` is the pointer of the value being read.
namespace duplex::json_io {

using nlohmann::json;

json to_json(const AttrValue& value);
AttrValue attr_from_json(const json& j, ValueKind kind, const std::string& path);

json to_json(const Graph& graph);
Graph graph_from_json(const json& j, const std::string& path);

json to_json(const Coupling& coupling);
Coupling coupling_from_json(const json& j, const std::string& path);

json to_json(const StyleConfig& style);
// Fields absent from `j` keep the values from `base`.
StyleConfig style_from_json(const json& j, const std::string& path, const StyleConfig& base = {});

json to_json(const FilterSpec& spec);
FilterSpec filter_from_json(const json& j, const std::string& path);

json to_json(const Selection& selection);
Selection selection_from_json(const json& j, const std::string& path);

json to_json(const HighlightState& state);
HighlightState highlight_from_json(const json& j, const std::string& path);

json to_json(const LayoutResult& layout);
LayoutResult layout_from_json(const json& j, const std::string& path);

json to_json(const LensState& lens);
LensState lens_from_json(const json& j, const std::string& path);

json to_json(const Workspace& workspace);
Workspace workspace_from_json(const json& j, const std::string& path = "");

json to_json(const Session& session);
Session session_from_json(const json& j, const std::string& path = "");

/// Parses text, reporting syntax errors with line and column.
json parse_text(const std::string& text, const std::string& source);

} // namespace duplex::json_io
