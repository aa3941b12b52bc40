#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "duplex/error.hpp"
#include "duplex/ingest.hpp"
#include "duplex/serialize.hpp"
#include "duplex/service.hpp"
#include "duplex/workspace.hpp"

namespace duplex::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_f(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    return s == "-0.000000" ? "0.000000" : s;
}

std::pair<std::string, std::string> split_pair(const std::string& text, char sep, const char* flag) {
    const auto at = text.find(sep);
    if (at == std::string::npos || at == 0 || at + 1 == text.size())
        throw UsageError(std::string(flag) + " expects A" + sep + "B, got '" + text + "'");
    return {text.substr(0, at), text.substr(at + 1)};
}

// --node-attr/--edge-attr, each followed by --min or --max; plus term filters.
struct FilterOptions {
    CLI::Option* node_attr = nullptr;
    CLI::Option* edge_attr = nullptr;
    CLI::Option* min = nullptr;
    CLI::Option* max = nullptr;
    std::vector<std::string> term_nodes;
    std::vector<std::string> shared_terms;

    void add_to(CLI::App* app) {
        node_attr = app->add_option("--node-attr", "Scalar node attribute for the next --min/--max")->expected(1);
        edge_attr = app->add_option("--edge-attr", "Scalar edge attribute for the next --min/--max")->expected(1);
        min = app->add_option("--min", "Keep elements whose attribute is >= value")->expected(1);
        max = app->add_option("--max", "Keep elements whose attribute is <= value")->expected(1);
        app->add_option("--term-node", term_nodes, "Keep nodes whose TermSet ATTR contains TERM (ATTR=TERM)");
        app->add_option("--shared-term", shared_terms,
                        "Keep edges whose endpoints both carry TERM in ATTR (ATTR=TERM)");
        for (auto* o : {node_attr, edge_attr, min, max}) o->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    }

    std::vector<FilterSpec> specs(const CLI::App* app) const {
        std::vector<FilterSpec> out;
        std::size_t ni = 0, ei = 0, mini = 0, maxi = 0;
        std::optional<std::pair<bool, std::string>> pending;  // (is_node, attr)
        auto value = [](const CLI::Option* o, std::size_t i) {
            const std::string& s = o->results().at(i);
            char* end = nullptr;
            double v = std::strtod(s.c_str(), &end);
            if (s.empty() || *end != '\0') throw UsageError(o->get_name() + " expects a number, got '" + s + "'");
            return v;
        };
        for (const CLI::Option* o : app->parse_order()) {
            if (o == node_attr || o == edge_attr) {
                if (pending) throw UsageError(pending->second + " has no --min or --max");
                pending.emplace(o == node_attr, o == node_attr ? node_attr->results().at(ni++)
                                                               : edge_attr->results().at(ei++));
            } else if (o == min || o == max) {
                if (!pending) throw UsageError(o->get_name() + " must follow --node-attr or --edge-attr");
                Comparator cmp = o == min ? Comparator::AtLeast : Comparator::AtMost;
                double v = o == min ? value(min, mini++) : value(max, maxi++);
                if (pending->first)
                    out.push_back(NodeThreshold{pending->second, cmp, v});
                else
                    out.push_back(EdgeThreshold{pending->second, cmp, v});
                pending.reset();
            }
        }
        if (pending) throw UsageError(pending->second + " has no --min or --max");
        for (const auto& t : term_nodes) {
            auto [attr, term] = split_pair(t, '=', "--term-node");
            out.push_back(TermNode{attr, term});
        }
        for (const auto& t : shared_terms) {
            auto [attr, term] = split_pair(t, '=', "--shared-term");
            out.push_back(SharedTermEdge{attr, term});
        }
        return out;
    }
};

struct LayoutOptions {
    std::string algo = "fr";
    std::uint64_t seed = 42;
    int iterations = 500;
    double cooling = 0.1;
    std::string ordering = "id";
    std::string canvas = "1000x1000";

    void add_to(CLI::App* app) {
        app->add_option("--algo", algo, "Layout algorithm (" + algorithm_names() + ")")->capture_default_str();
        app->add_option("--seed", seed, "RNG seed")->capture_default_str();
        app->add_option("--iters", iterations, "Iterations")->capture_default_str()->check(CLI::NonNegativeNumber);
        app->add_option("--cooling", cooling, "Initial FR temperature as a fraction of the canvas")
            ->capture_default_str();
        app->add_option("--ordering", ordering, "Circular ordering (id or degree)")
            ->capture_default_str()
            ->check(CLI::IsMember({"id", "degree"}));
        app->add_option("--canvas", canvas, "Canvas size WxH")->capture_default_str();
    }

    LayoutParams params() const {
        LayoutParams p;
        auto a = parse_algorithm(algo);
        if (!a) throw UsageError("unknown algorithm '" + algo + "'; valid: " + algorithm_names());
        p.algorithm = *a;
        p.seed = seed;
        p.iterations = iterations;
        p.cooling = cooling;
        p.ordering = ordering == "degree" ? CircularOrder::Degree : CircularOrder::Id;
        return p;
    }

    Canvas size() const {
        auto [w, h] = split_pair(canvas, 'x', "--canvas");
        char* end1 = nullptr;
        char* end2 = nullptr;
        Canvas c{std::strtod(w.c_str(), &end1), std::strtod(h.c_str(), &end2)};
        if (*end1 != '\0' || *end2 != '\0' || !(c.width > 0) || !(c.height > 0))
            throw UsageError("--canvas expects positive WxH, got '" + canvas + "'");
        return c;
    }
};

Selection parse_selection(const std::vector<std::string>& nodes, const std::vector<std::string>& edges) {
    Selection s;
    auto add = [&](const std::string& item, IdSet& into, const char* flag) {
        auto [g, id] = split_pair(item, ':', flag);
        if (!s.graph.empty() && s.graph != g) throw UsageError("all selections must be in one graph");
        s.graph = g;
        into.insert(id);
    };
    for (const auto& n : nodes) add(n, s.nodes, "--select");
    for (const auto& e : edges) add(e, s.edges, "--select-edge");
    return s;
}

void print_ids(std::ostream& out, const std::vector<std::string>& ids) {
    for (const auto& id : ids) out << id << '\n';
}

// Subcommands -----------------------------------------------------------

void cmd_build_agreement(const std::string& votes, const std::string& output, const std::string& graph_id,
                         std::ostream& out) {
    auto records = read_votes_csv(votes);
    Graph g = build_agreement_graph(records, graph_id);
    Workspace ws;
    GraphStyle style;
    style.node_color_attr = style.node_size_attr = "votes";
    style.edge_color_attr = style.edge_width_attr = "agreement";
    ws.styles.graphs[g.id()] = style;
    out << g.id() << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    ws.add_graph(std::move(g));
    save_workspace(ws, output);
}

void cmd_build_lexical(const std::string& terms, int min_df, const std::string& social,
                       const std::string& social_graph, const std::string& reference, const std::string& graph_id,
                       const std::string& output, std::ostream& out) {
    auto records = read_terms_csv(terms);
    std::vector<std::string> refs;
    if (!reference.empty()) refs = read_term_list(reference);
    LexicalBuild lex = build_lexical_graph(records, min_df, refs, graph_id);
    Workspace ws;
    if (social.empty()) {
        GraphStyle style;
        style.node_color_attr = style.node_size_attr = "df";
        ws.styles.graphs[lex.terms.id()] = style;
        ws.add_graph(lex.terms);
    } else {
        Workspace base = load_workspace(social);
        std::string sid = social_graph;
        if (sid.empty()) {
            if (base.graphs.size() != 1) throw UsageError("--social-graph is required when the workspace has several graphs");
            sid = base.graphs.begin()->first;
        }
        Graph s = base.graph(sid);
        ws = build_coupled_workspace(std::move(s), lex);
        if (auto it = base.styles.graphs.find(sid); it != base.styles.graphs.end()) {
            GraphStyle merged = it->second;
            if (!refs.empty()) merged.sector_attr = "profile";
            ws.styles.graphs[sid] = merged;
        } else if (!refs.empty()) {
            ws.styles.graphs[sid].sector_attr = "profile";
        }
    }
    out << lex.terms.id() << ": " << lex.terms.node_count() << " nodes\n";
    save_workspace(ws, output);
}

void cmd_stats(const std::string& path, std::ostream& out) {
    Workspace ws = load_workspace(path);
    for (const auto& [id, g] : ws.graphs) {
        out << "graph: " << id << '\n';
        out << "nodes: " << g.node_count() << '\n';
        out << "edges: " << g.edge_count() << '\n';
        out << "components: " << connected_components(g).size() << '\n';
        auto ranges = [&](const Schema& schema, ElementKind kind) {
            for (const auto& [attr, vk] : schema) {
                if (vk != ValueKind::Scalar) continue;
                try {
                    ScalarRange r = attr_range(g, kind, attr);
                    out << attr << ": " << fmt_g(r.min) << ".." << fmt_g(r.max) << '\n';
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::EmptySelection) throw;
                    out << attr << ": none\n";
                }
            }
        };
        ranges(g.node_schema(), ElementKind::Node);
        ranges(g.edge_schema(), ElementKind::Edge);
    }
    for (const auto& c : ws.couplings)
        out << "coupling: " << c.id << ' ' << c.graph_a << '.' << c.a_attr << ' ' << to_string(c.op) << ' '
            << c.graph_b << '.' << c.b_attr << '\n';
}

ViewMask filtered(const Graph& g, const std::vector<FilterSpec>& specs) {
    for (const auto& s : specs) validate_filter(g, s);
    return apply_filters(g, specs);
}

void cmd_filter(const std::string& path, const std::string& graph, const std::vector<FilterSpec>& specs,
                std::ostream& out) {
    Workspace ws = load_workspace(path);
    const Graph& g = ws.graph(graph);
    ViewMask mask = filtered(g, specs);
    auto nodes = mask.visible_nodes(g);
    auto edges = mask.visible_edges(g);
    out << "nodes: " << nodes.size() << '\n';
    print_ids(out, nodes);
    out << "edges: " << edges.size() << '\n';
    print_ids(out, edges);
}

void cmd_couple(const std::string& path, const Selection& selection, const std::string& coupling,
                std::ostream& out) {
    Workspace ws = load_workspace(path);
    std::map<std::string, IdSet> reactions;
    if (coupling.empty()) {
        reactions = build_highlight(ws.graphs, ws.couplings, selection).reactions;
    } else {
        const Coupling& c = ws.coupling(coupling);
        std::vector<Coupling> one{c};
        validate_selection(ws.graphs, selection);
        if (!c.touches(selection.graph))
            throw Error(ErrorCode::CouplingMismatch,
                        "coupling '" + c.id + "' does not involve graph '" + selection.graph + "'", c.id);
        reactions = build_highlight(ws.graphs, one, selection).reactions;
    }
    if (reactions.size() == 1) {
        const IdSet& ids = reactions.begin()->second;
        print_ids(out, std::vector<std::string>(ids.begin(), ids.end()));
        return;
    }
    for (const auto& [g, ids] : reactions)
        for (const auto& id : ids) out << g << ':' << id << '\n';
}

void cmd_layout(const std::string& path, const std::string& graph, const LayoutOptions& lo,
                const std::vector<FilterSpec>& specs, const std::string& output, std::ostream& out) {
    LayoutParams p = lo.params();
    Canvas canvas = lo.size();
    Workspace ws = load_workspace(path);
    const Graph& g = ws.graph(graph);
    LayoutResult r = compute_layout(g, filtered(g, specs), canvas, p);
    if (!output.empty()) {
        write_text_file(output, json_io::to_json(r).dump(2) + "\n");
        out << graph << ": " << r.positions.size() << " positions (" << r.provenance.algorithm << ", seed "
            << r.provenance.seed << ")\n";
        return;
    }
    for (const auto& [id, pt] : r.positions) out << id << ' ' << fmt_f(pt.x) << ' ' << fmt_f(pt.y) << '\n';
}

void cmd_export(const std::string& path, const std::string& graph, const LayoutOptions& lo,
                const std::vector<FilterSpec>& specs, const Selection& selection, const std::string& layout_file,
                const std::string& output, std::ostream& out) {
    LayoutParams p = lo.params();
    Canvas canvas = lo.size();
    Workspace ws = load_workspace(path);
    const Graph& g = ws.graph(graph);
    ViewMask mask = filtered(g, specs);
    LayoutResult layout;
    if (!layout_file.empty()) {
        layout = json_io::layout_from_json(json_io::parse_text(read_text_file(layout_file), layout_file), "");
        if (layout.graph != graph)
            throw Error(ErrorCode::GraphMismatch, "layout is for graph '" + layout.graph + "'", layout.graph);
    } else {
        layout = compute_layout(g, mask, canvas, p);
    }
    std::optional<HighlightState> h;
    if (!selection.graph.empty()) h = build_highlight(ws.graphs, ws.couplings, selection);
    std::string svg = render_svg(g, mask, layout, ws.styles, h ? &*h : nullptr);
    write_text_file(output, svg);
    out << output << ": " << mask.visible_node_count() << " nodes, " << mask.visible_edge_count() << " edges\n";
}

int cmd_serve(std::string addr, std::ostream& out) {
    if (addr.empty()) {
        const char* env = std::getenv("DUPLEX_ADDR");
        addr = env && *env ? env : "127.0.0.1:8080";
    }
    auto [host, port] = parse_address(addr);
    Service service;
    HttpServer server(service);
    int bound = server.start(host, port);
    out << "listening on " << host << ':' << bound << std::endl;
    server.wait();
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coupled-network workbench: build, filter, couple, lay out and export graphs", "duplex"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "duplex 1.0");

    std::string input, output, graph, agreement_id, lexical_id, social, social_graph, reference, coupling, layout_file, addr;
    int min_df = 10;
    std::vector<std::string> select, select_edges;
    FilterOptions filter_opts;
    LayoutOptions layout_opts;

    auto* build_agreement = app.add_subcommand("build-agreement", "Agreement graph from votes.csv");
    build_agreement->add_option("votes", input, "CSV with header arbiter,proposal,vote")->required();
    build_agreement->add_option("-o,--output", output, "Workspace file to write")->required();
    build_agreement->add_option("--graph-id", agreement_id, "Graph id")->default_val("arbiters");

    auto* build_lexical = app.add_subcommand("build-lexical", "Lexical graph from terms.csv");
    build_lexical->add_option("terms", input, "CSV with header person,term,count")->required();
    build_lexical->add_option("--min-df", min_df, "Minimum document frequency")->required()->check(CLI::PositiveNumber);
    build_lexical->add_option("--social", social, "Workspace whose social graph is coupled to the terms");
    build_lexical->add_option("--social-graph", social_graph, "Graph in --social to couple");
    build_lexical->add_option("--reference-terms", reference, "One reference term per line, for sector glyphs");
    build_lexical->add_option("--graph-id", lexical_id, "Graph id")->default_val("terms");
    build_lexical->add_option("-o,--output", output, "Workspace file to write")->required();

    auto* stats = app.add_subcommand("stats", "Counts, components and scalar attribute ranges");
    stats->add_option("workspace", input)->required();

    auto* filter = app.add_subcommand("filter", "Visible nodes and edges after filters");
    filter->add_option("workspace", input)->required();
    filter->add_option("--graph", graph)->required();
    filter_opts.add_to(filter);

    auto* couple = app.add_subcommand("couple", "Ids reached through couplings from a selection");
    couple->add_option("workspace", input)->required();
    couple->add_option("--select", select, "GRAPH:NODE, repeatable");
    couple->add_option("--select-edge", select_edges, "GRAPH:EDGE, repeatable");
    couple->add_option("--coupling", coupling, "Restrict to one coupling");

    auto* layout = app.add_subcommand("layout", "Compute node positions");
    layout->add_option("workspace", input)->required();
    layout->add_option("--graph", graph)->required();
    layout->add_option("-o,--output", output, "Write the layout as JSON instead of printing it");
    layout_opts.add_to(layout);
    FilterOptions layout_filters;
    layout_filters.add_to(layout);

    auto* exp = app.add_subcommand("export", "Render a graph view to SVG");
    exp->add_option("workspace", input)->required();
    exp->add_option("--graph", graph)->required();
    exp->add_option("-o,--output", output, "SVG file to write")->required();
    exp->add_option("--select", select, "GRAPH:NODE, repeatable");
    exp->add_option("--select-edge", select_edges, "GRAPH:EDGE, repeatable");
    exp->add_option("--layout", layout_file, "Use positions from a layout JSON file");
    LayoutOptions export_layout;
    export_layout.add_to(exp);
    FilterOptions export_filters;
    export_filters.add_to(exp);

    auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
    serve->add_option("--addr", addr, "HOST:PORT (default $DUPLEX_ADDR or 127.0.0.1:8080)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("duplex");

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return 2;
    }

    try {
        if (build_agreement->parsed()) {
            cmd_build_agreement(input, output, agreement_id, out);
        } else if (build_lexical->parsed()) {
            cmd_build_lexical(input, min_df, social, social_graph, reference, lexical_id, output, out);
        } else if (stats->parsed()) {
            cmd_stats(input, out);
        } else if (filter->parsed()) {
            cmd_filter(input, graph, filter_opts.specs(filter), out);
        } else if (couple->parsed()) {
            if (select.empty() && select_edges.empty()) throw UsageError("couple needs --select or --select-edge");
            cmd_couple(input, parse_selection(select, select_edges), coupling, out);
        } else if (layout->parsed()) {
            cmd_layout(input, graph, layout_opts, layout_filters.specs(layout), output, out);
        } else if (exp->parsed()) {
            cmd_export(input, graph, export_layout, export_filters.specs(exp), parse_selection(select, select_edges),
                       layout_file, output, out);
        } else if (serve->parsed()) {
            return cmd_serve(addr, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace duplex::cli
