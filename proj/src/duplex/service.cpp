#include "duplex/service.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>
#include <set>
#include <shared_mutex>
#include <thread>
#include <vector>

#include "httplib.h"

#include "duplex/error.hpp"
#include "duplex/serialize.hpp"

namespace duplex {

namespace {

using json_io::json;

constexpr int kMaxIterations = 100000;

// Failures that are not library errors: routing and revision conflicts.
struct HttpError {
    int status;
    std::string code;
    std::string message;
    std::string detail;
};

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownGraph:
        case ErrorCode::UnknownNode:
        case ErrorCode::UnknownEdge:
        case ErrorCode::UnknownCoupling: return 404;
        default: return 422;
    }
}

HttpResponse json_response(int status, const json& body) {
    HttpResponse r;
    r.status = status;
    r.body = body.dump();
    return r;
}

HttpResponse error_response(int status, const std::string& code, const std::string& message,
                            const std::string& detail) {
    return json_response(status, json{{"code", code}, {"message", message}, {"detail", detail}});
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    std::string p = path.substr(0, path.find('?'));
    std::size_t i = 0;
    while (i < p.size()) {
        std::size_t j = p.find('/', i);
        if (j == std::string::npos) j = p.size();
        if (j > i) out.push_back(httplib::detail::decode_url(p.substr(i, j - i), false));
        i = j + 1;
    }
    return out;
}

json parse_body(const std::string& body) {
    if (body.empty()) return json::object();
    try {
        json j = json::parse(body);
        if (!j.is_object()) throw HttpError{400, "ParseError", "request body must be a JSON object", "/"};
        return j;
    } catch (const json::parse_error& e) {
        throw HttpError{400, "ParseError", "malformed JSON body", e.what()};
    }
}

json id_list(const IdSet& ids) { return json(std::vector<std::string>(ids.begin(), ids.end())); }

json rgb_json(Rgb c) { return to_hex(c); }

Point point_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorCode::ParseError, path + ": expected [x, y]", path);
    Point p{j[0].get<double>(), j[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw Error(ErrorCode::InvalidArgument, path + ": coordinates must be finite", path);
    return p;
}

} // namespace

struct Service::Impl {
    struct Entry {
        mutable std::shared_mutex mu;
        Session session;
        std::uint64_t revision = 0;
        std::map<std::string, std::string> layout_ids;
    };

    mutable std::shared_mutex mu;
    std::map<std::string, std::shared_ptr<Entry>> sessions;
    std::mt19937_64 ids{std::random_device{}()};

    std::shared_ptr<Entry> find(const std::string& id) const {
        std::shared_lock lock(mu);
        auto it = sessions.find(id);
        if (it == sessions.end()) throw HttpError{404, "UnknownSession", "unknown session '" + id + "'", id};
        return it->second;
    }

    std::string add(Session s) {
        auto e = std::make_shared<Entry>();
        e->session = std::move(s);
        std::unique_lock lock(mu);
        std::string id;
        do {
            char buf[17];
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ids()));
            id = buf;
        } while (sessions.count(id));
        sessions.emplace(id, std::move(e));
        return id;
    }

    static void check_if_match(const HttpRequest& req, const Entry& e) {
        for (const auto& [name, value] : req.headers) {
            if (lower(name) != "if-match") continue;
            std::string v = value;
            if (v.rfind("W/", 0) == 0) v = v.substr(2);
            if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
            if (v == "*") return;
            if (v != std::to_string(e.revision))
                throw HttpError{409, "StaleRevision",
                                "revision " + v + " is stale; current revision is " + std::to_string(e.revision),
                                std::to_string(e.revision)};
        }
    }

    static const Graph& graph_of(const Entry& e, const std::string& g) { return e.session.workspace.graph(g); }

    static Positions view_positions(const Entry& e, const std::string& g, const ViewMask& mask, Canvas* canvas,
                                    std::string* source) {
        const Graph& graph = graph_of(e, g);
        auto it = e.session.layouts.find(g);
        if (it != e.session.layouts.end()) {
            bool complete = true;
            for (std::size_t n = 0; n < graph.node_count() && complete; ++n)
                if (mask.node_visible(n) && !it->second.positions.count(graph.nodes()[n].id)) complete = false;
            if (complete) {
                *canvas = it->second.canvas;
                *source = "stored";
                return it->second.positions;
            }
        }
        *canvas = it != e.session.layouts.end() ? it->second.canvas : Canvas{};
        *source = "fallback";
        return layout_circular(graph, mask, *canvas).positions;
    }

    static json highlight_json(const Entry& e) {
        json out{{"revision", e.revision}};
        if (!e.session.highlight) {
            out["source"] = nullptr;
            out["reactions"] = json::object();
            out["visible_reactions"] = json::object();
            out["counts"] = json::object();
            return out;
        }
        const HighlightState& h = *e.session.highlight;
        out["source"] = json_io::to_json(h.source);
        json reactions = json::object();
        json visible = json::object();
        json counts = json::object();
        for (const auto& [g, ids] : h.reactions) {
            const Graph& graph = graph_of(e, g);
            ViewMask mask = e.session.mask(g);
            IdSet shown;
            for (const auto& id : ids)
                if (auto n = graph.node_index(id); n && mask.node_visible(*n)) shown.insert(id);
            reactions[g] = id_list(ids);
            visible[g] = id_list(shown);
            counts[g] = json{{"pre_mask", ids.size()}, {"post_mask", shown.size()}};
        }
        out["reactions"] = std::move(reactions);
        out["visible_reactions"] = std::move(visible);
        out["counts"] = std::move(counts);
        return out;
    }

    static json graph_summary(const Entry& e, const Graph& g) {
        ViewMask mask = e.session.mask(g.id());
        json filters = json::array();
        if (auto it = e.session.filters.find(g.id()); it != e.session.filters.end())
            for (const auto& f : it->second) filters.push_back(json_io::to_json(f));
        json full = json_io::to_json(g);
        return json{{"id", g.id()},
                    {"directed", g.directed()},
                    {"nodes", g.node_count()},
                    {"edges", g.edge_count()},
                    {"visible_nodes", mask.visible_node_count()},
                    {"visible_edges", mask.visible_edge_count()},
                    {"node_schema", full.at("node_schema")},
                    {"edge_schema", full.at("edge_schema")},
                    {"filters", std::move(filters)},
                    {"has_layout", e.session.layouts.count(g.id()) > 0}};
    }

    static json view_json(const Entry& e, const std::string& g) {
        const Graph& graph = graph_of(e, g);
        ViewMask mask = e.session.mask(g);
        Canvas canvas;
        std::string source;
        Positions positions = view_positions(e, g, mask, &canvas, &source);
        const HighlightState* h = e.session.highlight ? &*e.session.highlight : nullptr;
        Scene scene = build_scene(graph, mask, canvas, positions, e.session.workspace.styles, h);

        json nodes = json::array();
        for (const auto& n : scene.nodes) {
            json sectors = json::array();
            for (const auto& s : n.sectors)
                sectors.push_back(json{{"term", s.term},
                                       {"count", s.count},
                                       {"start", s.start},
                                       {"sweep", s.sweep},
                                       {"color", rgb_json(s.color)}});
            nodes.push_back(json{{"id", n.node},
                                 {"label", n.label},
                                 {"x", n.center.x},
                                 {"y", n.center.y},
                                 {"radius", n.radius},
                                 {"fill", rgb_json(n.fill)},
                                 {"sectors", std::move(sectors)},
                                 {"selected", n.selected},
                                 {"reaction", n.reaction},
                                 {"show_label", n.show_label}});
        }
        json edges = json::array();
        for (const auto& ed : scene.edges)
            edges.push_back(json{{"id", ed.edge},
                                 {"u", ed.u},
                                 {"v", ed.v},
                                 {"width", ed.width},
                                 {"color", rgb_json(ed.color)},
                                 {"selected", ed.selected}});
        const StyleConfig& st = e.session.workspace.styles;
        json out{{"revision", e.revision},
                 {"graph", g},
                 {"canvas", json::array({canvas.width, canvas.height})},
                 {"positions_source", source},
                 {"visible_nodes", scene.nodes.size()},
                 {"visible_edges", scene.edges.size()},
                 {"nodes", std::move(nodes)},
                 {"edges", std::move(edges)},
                 {"style",
                  json{{"selection_color", rgb_json(st.selection_color)},
                       {"reaction_marker", json{{"shape", to_string(st.reaction_shape)},
                                                {"color", rgb_json(st.reaction_color)},
                                                {"factor", Scene::kMarkerFactor}}}}}};
        auto lens = e.session.lens.find(g);
        out["lens"] = lens == e.session.lens.end() ? json(nullptr) : json_io::to_json(lens->second);
        return out;
    }

    // Routing -------------------------------------------------------------

    HttpResponse route(const HttpRequest& req) {
        const auto seg = split_path(req.path);
        const std::string& m = req.method;
        if (seg.empty() || seg[0] != "sessions") throw HttpError{404, "NotFound", "no such route", req.path};

        if (seg.size() == 1) {
            if (m == "POST") return create(parse_body(req.body));
            if (m == "GET") {
                std::shared_lock lock(mu);
                json ids = json::array();
                for (const auto& [id, e] : sessions) ids.push_back(id);
                return json_response(200, json{{"sessions", ids}});
            }
            throw method_not_allowed(req);
        }

        const std::string& sid = seg[1];
        auto entry = find(sid);
        Entry& e = *entry;

        if (seg.size() == 2) {
            if (m == "GET") {
                std::shared_lock lock(e.mu);
                return with_etag(json_response(200, json{{"id", sid}, {"revision", e.revision}}), e);
            }
            if (m == "DELETE") {
                std::unique_lock lock(mu);
                sessions.erase(sid);
                HttpResponse r;
                r.status = 204;
                return r;
            }
            throw method_not_allowed(req);
        }

        const std::string& what = seg[2];
        if (seg.size() == 3) {
            if (what == "graphs" && m == "GET") {
                std::shared_lock lock(e.mu);
                json graphs = json::array();
                for (const auto& [id, g] : e.session.workspace.graphs) graphs.push_back(graph_summary(e, g));
                json couplings = json::array();
                for (const auto& c : e.session.workspace.couplings) couplings.push_back(json_io::to_json(c));
                return with_etag(json_response(200, json{{"revision", e.revision},
                                                         {"graphs", std::move(graphs)},
                                                         {"couplings", std::move(couplings)}}),
                                 e);
            }
            if (what == "selection" && m == "PUT") return put_selection(req, e);
            if (what == "selection" && m == "GET") {
                std::shared_lock lock(e.mu);
                return with_etag(json_response(200, json{{"revision", e.revision},
                                                         {"selection", e.session.selection
                                                                           ? json_io::to_json(*e.session.selection)
                                                                           : json(nullptr)}}),
                                 e);
            }
            if (what == "highlight" && m == "GET") {
                std::shared_lock lock(e.mu);
                return with_etag(json_response(200, highlight_json(e)), e);
            }
            if (what == "styles" && m == "PUT") return put_styles(req, e);
            if (what == "styles" && m == "GET") {
                std::shared_lock lock(e.mu);
                return with_etag(json_response(200, json_io::to_json(e.session.workspace.styles)), e);
            }
            if (what == "session.json" && m == "GET") {
                std::shared_lock lock(e.mu);
                return with_etag(json_response(200, json_io::to_json(e.session)), e);
            }
            if (what == "save" && m == "POST") return save(req, e);
            static const std::set<std::string> known{"graphs", "selection", "highlight", "styles", "session.json", "save"};
            if (known.count(what)) throw method_not_allowed(req);
            throw HttpError{404, "NotFound", "no such route", req.path};
        }

        if (what != "graphs" || seg.size() != 5) throw HttpError{404, "NotFound", "no such route", req.path};
        const std::string& g = seg[3];
        const std::string& leaf = seg[4];
        {
            std::shared_lock lock(e.mu);
            graph_of(e, g);
        }
        if (leaf == "filters" && m == "PUT") return put_filters(req, e, g);
        if (leaf == "filters" && m == "GET") {
            std::shared_lock lock(e.mu);
            return with_etag(json_response(200, graph_summary(e, graph_of(e, g))), e);
        }
        if (leaf == "layout" && m == "POST") return post_layout(req, e, g);
        if (leaf == "layout" && m == "GET") {
            std::shared_lock lock(e.mu);
            auto it = e.session.layouts.find(g);
            if (it == e.session.layouts.end()) throw HttpError{404, "NoLayout", "graph '" + g + "' has no layout", g};
            json out = json_io::to_json(it->second);
            out["revision"] = e.revision;
            auto lid = e.layout_ids.find(g);
            out["layout_id"] = lid == e.layout_ids.end() ? std::string("loaded") : lid->second;
            return with_etag(json_response(200, out), e);
        }
        if (leaf == "positions" && m == "PUT") return put_positions(req, e, g);
        if (leaf == "lens" && m == "PUT") return put_lens(req, e, g);
        if (leaf == "view" && m == "GET") {
            std::shared_lock lock(e.mu);
            return with_etag(json_response(200, view_json(e, g)), e);
        }
        if (leaf == "export.svg" && m == "GET") {
            std::shared_lock lock(e.mu);
            const Graph& graph = graph_of(e, g);
            ViewMask mask = e.session.mask(g);
            LayoutResult layout;
            layout.graph = g;
            std::string source;
            layout.positions = view_positions(e, g, mask, &layout.canvas, &source);
            if (auto lens = e.session.lens.find(g); lens != e.session.lens.end() && lens->second.enabled)
                layout.positions = lens_transform(layout.positions, lens->second.spec);
            const HighlightState* h = e.session.highlight ? &*e.session.highlight : nullptr;
            HttpResponse r;
            r.content_type = "image/svg+xml";
            r.body = render_svg(graph, mask, layout, e.session.workspace.styles, h);
            return with_etag(std::move(r), e);
        }
        static const std::set<std::string> leaves{"filters", "layout", "positions", "lens", "view", "export.svg"};
        if (leaves.count(leaf)) throw method_not_allowed(req);
        throw HttpError{404, "NotFound", "no such route", req.path};
    }

    static HttpError method_not_allowed(const HttpRequest& req) {
        return HttpError{405, "MethodNotAllowed", req.method + " is not allowed on " + req.path, req.method};
    }

    static HttpResponse with_etag(HttpResponse r, const Entry& e) {
        r.headers["ETag"] = "\"" + std::to_string(e.revision) + "\"";
        return r;
    }

    static HttpResponse mutated(Entry& e, json body) {
        ++e.revision;
        body["revision"] = e.revision;
        return with_etag(json_response(200, body), e);
    }

    // Handlers ------------------------------------------------------------

    HttpResponse create(const json& body) {
        Session s;
        if (body.contains("workspace_path")) {
            s.workspace = load_workspace(body["workspace_path"].get<std::string>());
        } else if (body.contains("workspace")) {
            s.workspace = json_io::workspace_from_json(body["workspace"], "/workspace");
            s.workspace.validate();
        } else if (body.contains("session_path")) {
            s = load_session(body["session_path"].get<std::string>());
        } else if (body.contains("session")) {
            s = json_io::session_from_json(body["session"], "/session");
        } else {
            throw HttpError{422, "InvalidArgument", "expected workspace_path, workspace, session_path or session",
                            "/"};
        }
        if (s.selection && !s.highlight)
            s.highlight = build_highlight(s.workspace.graphs, s.workspace.couplings, *s.selection);
        const std::string id = add(std::move(s));
        json graphs = json::array();
        auto e = find(id);
        for (const auto& [gid, g] : e->session.workspace.graphs) graphs.push_back(gid);
        HttpResponse r = json_response(201, json{{"id", id}, {"revision", 0}, {"graphs", std::move(graphs)}});
        r.headers["Location"] = "/sessions/" + id;
        return with_etag(std::move(r), *e);
    }

    HttpResponse put_filters(const HttpRequest& req, Entry& e, const std::string& g) {
        json body = parse_body(req.body);
        std::vector<FilterSpec> specs;
        if (body.contains("filters")) {
            const json& arr = body["filters"];
            if (!arr.is_array()) throw Error(ErrorCode::ParseError, "filters must be an array", "/filters");
            for (std::size_t i = 0; i < arr.size(); ++i)
                specs.push_back(json_io::filter_from_json(arr[i], "/filters/" + std::to_string(i)));
        }
        std::unique_lock lock(e.mu);
        check_if_match(req, e);
        const Graph& graph = graph_of(e, g);
        for (const auto& s : specs) validate_filter(graph, s);
        ViewMask mask = apply_filters(graph, specs);
        if (specs.empty())
            e.session.filters.erase(g);
        else
            e.session.filters[g] = std::move(specs);
        return mutated(e, json{{"graph", g},
                               {"visible_nodes", mask.visible_node_count()},
                               {"visible_edges", mask.visible_edge_count()}});
    }

    HttpResponse put_selection(const HttpRequest& req, Entry& e) {
        json body = parse_body(req.body);
        std::unique_lock lock(e.mu);
        check_if_match(req, e);
        if (!body.contains("graph") || body["graph"].is_null() || body["graph"] == "") {
            e.session.selection.reset();
            e.session.highlight.reset();
        } else {
            Selection s = json_io::selection_from_json(body, "");
            e.session.workspace.graph(s.graph);
            HighlightState h = build_highlight(e.session.workspace.graphs, e.session.workspace.couplings, s);
            e.session.selection = std::move(s);
            e.session.highlight = std::move(h);
        }
        ++e.revision;
        return with_etag(json_response(200, highlight_json(e)), e);
    }

    HttpResponse post_layout(const HttpRequest& req, Entry& e, const std::string& g) {
        json body = parse_body(req.body);
        LayoutParams p;
        Canvas canvas;
        {
            auto algo_name = body.value("algo", std::string(to_string(p.algorithm)));
            auto algo = parse_algorithm(algo_name);
            if (!algo)
                throw HttpError{422, "InvalidArgument",
                                "unknown layout algorithm '" + algo_name + "'; valid: " + algorithm_names(),
                                algorithm_names()};
            p.algorithm = *algo;
        }
        auto number_field = [&](const char* key) -> const json* {
            if (!body.contains(key) || body[key].is_null()) return nullptr;
            if (!body[key].is_number()) throw Error(ErrorCode::ParseError, std::string(key) + " must be a number", key);
            return &body[key];
        };
        if (const json* s = number_field("seed")) {
            if (!s->is_number_unsigned()) throw Error(ErrorCode::InvalidArgument, "seed must be a non-negative integer", "seed");
            p.seed = s->get<std::uint64_t>();
        }
        if (const json* it = number_field("iterations")) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 0 || it->get<std::int64_t>() > kMaxIterations)
                throw Error(ErrorCode::InvalidArgument,
                            "iterations must be an integer in [0, " + std::to_string(kMaxIterations) + "]",
                            "iterations");
            p.iterations = it->get<int>();
        }
        if (const json* c = number_field("cooling")) p.cooling = c->get<double>();
        if (body.contains("ordering")) {
            const std::string o = body["ordering"].get<std::string>();
            if (o == "id")
                p.ordering = CircularOrder::Id;
            else if (o == "degree")
                p.ordering = CircularOrder::Degree;
            else
                throw Error(ErrorCode::InvalidArgument, "ordering must be 'id' or 'degree'", "ordering");
        }
        if (body.contains("canvas")) {
            Canvas c;
            const json& cj = body["canvas"];
            if (!cj.is_array() || cj.size() != 2 || !cj[0].is_number() || !cj[1].is_number())
                throw Error(ErrorCode::ParseError, "canvas must be [width, height]", "canvas");
            c.width = cj[0].get<double>();
            c.height = cj[1].get<double>();
            canvas = c;
        }

        std::unique_lock lock(e.mu);
        check_if_match(req, e);
        const Graph& graph = graph_of(e, g);
        LayoutResult result = compute_layout(graph, e.session.mask(g), canvas, p);
        char id[96];
        std::snprintf(id, sizeof id, "%s/%s/%llu/r%llu", g.c_str(), std::string(to_string(p.algorithm)).c_str(),
                      static_cast<unsigned long long>(p.seed), static_cast<unsigned long long>(e.revision + 1));
        e.session.layouts[g] = std::move(result);
        e.layout_ids[g] = id;
        return mutated(e, json{{"graph", g}, {"layout_id", id}, {"positions", json_io::to_json(e.session.layouts[g])["positions"]}});
    }

    HttpResponse put_positions(const HttpRequest& req, Entry& e, const std::string& g) {
        json body = parse_body(req.body);
        std::unique_lock lock(e.mu);
        check_if_match(req, e);
        const Graph& graph = graph_of(e, g);
        auto it = e.session.layouts.find(g);
        if (it == e.session.layouts.end())
            throw HttpError{404, "NoLayout", "graph '" + g + "' has no layout to edit", g};
        LayoutResult updated = it->second;
        if (body.contains("pan")) {
            updated.positions = pan(updated.positions, updated.canvas, point_from(body["pan"], "/pan"));
        }
        if (body.contains("positions")) {
            const json& pj = body["positions"];
            if (!pj.is_object()) throw Error(ErrorCode::ParseError, "positions must be an object", "/positions");
            for (const auto& [id, xy] : pj.items()) {
                if (!graph.has_node(id)) throw Error(ErrorCode::UnknownNode, "unknown node '" + id + "'", id);
                updated.positions[id] = clamp_to(point_from(xy, "/positions/" + id), updated.canvas);
            }
        }
        updated.provenance.params["edited"] = 1.0;
        it->second = std::move(updated);
        return mutated(e, json{{"graph", g}, {"positions", it->second.positions.size()}});
    }

    HttpResponse put_lens(const HttpRequest& req, Entry& e, const std::string& g) {
        json body = parse_body(req.body);
        LensState l = json_io::lens_from_json(body, "");
        std::unique_lock lock(e.mu);
        check_if_match(req, e);
        e.session.lens[g] = l;
        return mutated(e, json{{"graph", g}, {"lens", json_io::to_json(l)}});
    }

    HttpResponse put_styles(const HttpRequest& req, Entry& e) {
        json body = parse_body(req.body);
        std::unique_lock lock(e.mu);
        check_if_match(req, e);
        Workspace candidate = e.session.workspace;
        candidate.styles = json_io::style_from_json(body, "", candidate.styles);
        candidate.validate();
        e.session.workspace.styles = std::move(candidate.styles);
        return mutated(e, json{{"styles", json_io::to_json(e.session.workspace.styles)}});
    }

    HttpResponse save(const HttpRequest& req, Entry& e) {
        json body = parse_body(req.body);
        if (!body.contains("path") || !body["path"].is_string())
            throw Error(ErrorCode::InvalidArgument, "save needs a string 'path'", "path");
        std::shared_lock lock(e.mu);
        const std::string path = body["path"].get<std::string>();
        save_session(e.session, path);
        return with_etag(json_response(200, json{{"revision", e.revision}, {"path", path}}), e);
    }
};

Service::Service() : impl_(std::make_unique<Impl>()) {}
Service::~Service() = default;

std::size_t Service::session_count() const {
    std::shared_lock lock(impl_->mu);
    return impl_->sessions.size();
}

HttpResponse Service::handle(const HttpRequest& request) {
    try {
        return impl_->route(request);
    } catch (const HttpError& e) {
        return error_response(e.status, e.code, e.message, e.detail);
    } catch (const Error& e) {
        return error_response(status_for(e.code()), std::string(to_string(e.code())), e.what(), e.detail());
    } catch (const json::exception& e) {
        return error_response(422, "ParseError", e.what(), "");
    } catch (const std::exception& e) {
        return error_response(500, "Internal", e.what(), "");
    }
}

// HTTP transport ------------------------------------------------------------

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;
    std::thread thread;

    explicit Impl(Service& s) : service(s) {
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            HttpRequest r;
            r.method = req.method;
            r.path = req.path;
            r.body = req.body;
            for (const auto& [k, v] : req.headers) r.headers[k] = v;
            HttpResponse out = service.handle(r);
            res.status = out.status;
            for (const auto& [k, v] : out.headers) res.set_header(k, v);
            res.set_content(out.body, out.content_type);
        };
        server.Get(".*", forward);
        server.Post(".*", forward);
        server.Put(".*", forward);
        server.Delete(".*", forward);
        server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"},
                                    {"Access-Control-Allow-Headers", "Content-Type, If-Match"},
                                    {"Access-Control-Expose-Headers", "ETag"}});
    }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port), host);
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void HttpServer::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

std::pair<std::string, int> parse_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == address.size())
        throw Error(ErrorCode::InvalidArgument, "address must be HOST:PORT, got '" + address + "'", address);
    std::string host = address.substr(0, colon);
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    int port = 0;
    const std::string p = address.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), port);
    if (ec != std::errc() || ptr != p.data() + p.size() || port < 0 || port > 65535)
        throw Error(ErrorCode::InvalidArgument, "invalid port '" + p + "'", address);
    return {host, port};
}

} // namespace duplex
