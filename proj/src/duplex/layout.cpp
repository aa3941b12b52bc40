#include "duplex/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "duplex/error.hpp"

namespace duplex {

std::string_view to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::Circular: return "circular";
        case Algorithm::Random: return "random";
        case Algorithm::FruchtermanReingold: return "fr";
        case Algorithm::Stress: return "stress";
        case Algorithm::Grid: return "grid";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (auto a : {Algorithm::Circular, Algorithm::Random, Algorithm::FruchtermanReingold, Algorithm::Stress,
                   Algorithm::Grid})
        if (to_string(a) == name) return a;
    return std::nullopt;
}

std::string algorithm_names() { return "circular, random, fr, stress, grid"; }

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// The visible part of a graph with dense local indices in id order.
struct View {
    std::vector<std::size_t> nodes;             // graph node index per local index
    std::vector<std::vector<std::size_t>> adj;  // local adjacency, sorted, no duplicates
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

View make_view(const Graph& graph, const ViewMask& mask) {
    if (mask.graph() != graph.id() || mask.node_slots() != graph.node_count() ||
        mask.edge_slots() != graph.edge_count())
        throw Error(ErrorCode::GraphMismatch, "mask does not address graph '" + graph.id() + "'", mask.graph());
    View v;
    for (std::size_t n = 0; n < graph.node_count(); ++n)
        if (mask.node_visible(n)) v.nodes.push_back(n);
    std::sort(v.nodes.begin(), v.nodes.end(),
              [&](std::size_t a, std::size_t b) { return graph.nodes()[a].id < graph.nodes()[b].id; });
    std::vector<std::size_t> local(graph.node_count(), kNone);
    for (std::size_t i = 0; i < v.nodes.size(); ++i) local[v.nodes[i]] = i;
    v.adj.resize(v.nodes.size());
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        if (!mask.edge_visible(e)) continue;
        auto [a, b] = graph.endpoints(e);
        std::size_t la = local[a];
        std::size_t lb = local[b];
        if (la == kNone || lb == kNone || la == lb) continue;
        v.edges.emplace_back(la, lb);
        v.adj[la].push_back(lb);
        v.adj[lb].push_back(la);
    }
    for (auto& nb : v.adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return v;
}

LayoutResult start(const Graph& graph, Canvas canvas, std::string algo, std::uint64_t seed) {
    if (!(canvas.width > 0.0) || !(canvas.height > 0.0) || !std::isfinite(canvas.width) ||
        !std::isfinite(canvas.height))
        throw Error(ErrorCode::InvalidArgument, "canvas must have positive finite size");
    LayoutResult r;
    r.graph = graph.id();
    r.canvas = canvas;
    r.provenance.algorithm = std::move(algo);
    r.provenance.seed = seed;
    return r;
}

std::vector<Point> random_points(std::size_t n, double width, double height, std::uint64_t seed) {
    Lcg64 rng(seed);
    std::vector<Point> pts(n);
    for (auto& p : pts) {
        p.x = unit_interval(rng) * width;
        p.y = unit_interval(rng) * height;
    }
    return pts;
}

void store(LayoutResult& r, const Graph& graph, const View& v, const std::vector<Point>& pts) {
    for (std::size_t i = 0; i < v.nodes.size(); ++i)
        r.positions.emplace(graph.nodes()[v.nodes[i]].id, clamp_to(pts[i], r.canvas));
}

// Hop distances from `src` within its component; kNone when unreachable.
std::vector<std::size_t> bfs(const View& v, std::size_t src) {
    std::vector<std::size_t> dist(v.nodes.size(), kNone);
    std::queue<std::size_t> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        std::size_t cur = q.front();
        q.pop();
        for (std::size_t nb : v.adj[cur])
            if (dist[nb] == kNone) {
                dist[nb] = dist[cur] + 1;
                q.push(nb);
            }
    }
    return dist;
}

} // namespace

LayoutResult layout_circular(const Graph& graph, const ViewMask& view, Canvas canvas, CircularOrder ordering) {
    LayoutResult r = start(graph, canvas, "circular", 0);
    r.provenance.params["ordering"] = ordering == CircularOrder::Degree ? 1.0 : 0.0;
    View v = make_view(graph, view);
    const std::size_t n = v.nodes.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (ordering == CircularOrder::Degree)
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return v.adj[a].size() > v.adj[b].size(); });

    const double cx = canvas.width / 2.0;
    const double cy = canvas.height / 2.0;
    const double radius = 0.4 * canvas.min_side();
    std::vector<Point> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        pts[order[k]] = Point{cx + radius * std::cos(angle), cy + radius * std::sin(angle)};
    }
    store(r, graph, v, pts);
    return r;
}

LayoutResult layout_random(const Graph& graph, const ViewMask& view, Canvas canvas, std::uint64_t seed) {
    LayoutResult r = start(graph, canvas, "random", seed);
    View v = make_view(graph, view);
    store(r, graph, v, random_points(v.nodes.size(), canvas.width, canvas.height, seed));
    return r;
}

LayoutResult layout_fruchterman_reingold(const Graph& graph, const ViewMask& view, Canvas canvas,
                                         std::uint64_t seed, int iterations, double cooling) {
    if (iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
    if (!(cooling >= 0.0) || !std::isfinite(cooling))
        throw Error(ErrorCode::InvalidArgument, "cooling must be a finite non-negative fraction");
    LayoutResult r = start(graph, canvas, "fr", seed);
    r.provenance.params["iterations"] = iterations;
    r.provenance.params["cooling"] = cooling;
    View v = make_view(graph, view);
    const std::size_t n = v.nodes.size();
    if (n == 0) return r;

    std::vector<Point> pos = random_points(n, canvas.width, canvas.height, seed);
    const double k = std::sqrt(canvas.width * canvas.height / static_cast<double>(n));
    const double k2 = k * k;
    const double t0 = cooling * canvas.min_side();
    constexpr double kMinDist = 1e-9;

    std::vector<Point> disp(n);
    for (int it = 0; it < iterations; ++it) {
        const double temp = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
        std::fill(disp.begin(), disp.end(), Point{});

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double dx = pos[i].x - pos[j].x;
                double dy = pos[i].y - pos[j].y;
                double d = std::hypot(dx, dy);
                if (d < kMinDist) {
                    // Coincident nodes: push apart along a fixed, index-derived direction.
                    const double a = 2.399963229728653 * static_cast<double>(i * n + j);
                    dx = std::cos(a) * kMinDist;
                    dy = std::sin(a) * kMinDist;
                    d = kMinDist;
                }
                const double f = k2 / d;
                disp[i].x += dx / d * f;
                disp[i].y += dy / d * f;
                disp[j].x -= dx / d * f;
                disp[j].y -= dy / d * f;
            }
        }
        for (auto [a, b] : v.edges) {
            const double dx = pos[a].x - pos[b].x;
            const double dy = pos[a].y - pos[b].y;
            const double d = std::hypot(dx, dy);
            if (d < kMinDist) continue;
            const double f = d * d / k;
            disp[a].x -= dx / d * f;
            disp[a].y -= dy / d * f;
            disp[b].x += dx / d * f;
            disp[b].y += dy / d * f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double len = std::hypot(disp[i].x, disp[i].y);
            if (len > 0.0) {
                const double step = std::min(len, temp);
                pos[i].x += disp[i].x / len * step;
                pos[i].y += disp[i].y / len * step;
            }
            pos[i] = clamp_to(pos[i], canvas);
        }
    }
    store(r, graph, v, pos);
    return r;
}

namespace {

struct StressComponent {
    std::vector<std::size_t> members;              // local view indices, ascending
    std::vector<std::vector<double>> hops;         // pairwise hop distances
    std::vector<Point> pos;
    bool active = true;
};

double component_stress(const StressComponent& c, double unit) {
    double s = 0.0;
    const std::size_t m = c.members.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = c.hops[i][j];
            const double dist = std::hypot(c.pos[i].x - c.pos[j].x, c.pos[i].y - c.pos[j].y);
            const double diff = dist - unit * d;
            s += diff * diff / (d * d);
        }
    return s;
}

// One Gauss-Seidel sweep of the majorization update. Each node moves to the
// minimizer of the quadratic majorant with the others fixed, so stress never
// increases in exact arithmetic.
void majorize_sweep(StressComponent& c, double unit) {
    const std::size_t m = c.members.size();
    for (std::size_t i = 0; i < m; ++i) {
        double nx = 0.0;
        double ny = 0.0;
        double wsum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const double d = c.hops[i][j];
            const double w = 1.0 / (d * d);
            const double dx = c.pos[i].x - c.pos[j].x;
            const double dy = c.pos[i].y - c.pos[j].y;
            const double dist = std::hypot(dx, dy);
            double tx = c.pos[j].x;
            double ty = c.pos[j].y;
            if (dist > 0.0) {
                tx += unit * d * dx / dist;
                ty += unit * d * dy / dist;
            }
            nx += w * tx;
            ny += w * ty;
            wsum += w;
        }
        c.pos[i] = Point{nx / wsum, ny / wsum};
    }
}

} // namespace

LayoutResult layout_stress(const Graph& graph, const ViewMask& view, Canvas canvas, int iterations,
                           std::uint64_t seed) {
    if (iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
    LayoutResult r = start(graph, canvas, "stress", seed);
    r.provenance.params["iterations"] = iterations;
    View v = make_view(graph, view);
    const std::size_t n = v.nodes.size();
    if (n == 0) return r;

    // Components in order of their smallest id.
    std::vector<StressComponent> comps;
    std::vector<std::size_t> comp_of(n, kNone);
    std::size_t diameter = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp_of[s] != kNone) continue;
        auto dist = bfs(v, s);
        StressComponent c;
        for (std::size_t i = 0; i < n; ++i)
            if (dist[i] != kNone) {
                comp_of[i] = comps.size();
                c.members.push_back(i);
            }
        const std::size_t m = c.members.size();
        c.hops.assign(m, std::vector<double>(m, 0.0));
        for (std::size_t a = 0; a < m; ++a) {
            auto da = bfs(v, c.members[a]);
            for (std::size_t b = 0; b < m; ++b) {
                c.hops[a][b] = static_cast<double>(da[c.members[b]]);
                diameter = std::max(diameter, da[c.members[b]]);
            }
        }
        comps.push_back(std::move(c));
    }

    const double unit = 0.8 * canvas.min_side() / static_cast<double>(std::max<std::size_t>(diameter, 1));
    r.provenance.params["unit_length"] = unit;

    Lcg64 rng(seed);
    for (auto& c : comps) {
        double span = 0.0;
        for (const auto& row : c.hops)
            for (double d : row) span = std::max(span, d);
        const double side = unit * std::max(span, 1.0);
        c.pos.resize(c.members.size());
        for (auto& p : c.pos) {
            p.x = unit_interval(rng) * side;
            p.y = unit_interval(rng) * side;
        }
        c.active = c.members.size() > 1;
    }

    auto total = [&] {
        double s = 0.0;
        for (const auto& c : comps) s += component_stress(c, unit);
        return s;
    };
    r.stress_trace.push_back(total());
    for (int it = 0; it < iterations; ++it) {
        bool any = false;
        for (auto& c : comps) {
            if (!c.active) continue;
            const double before = component_stress(c, unit);
            const auto saved = c.pos;
            majorize_sweep(c, unit);
            const double after = component_stress(c, unit);
            if (!(after < before)) {
                // Converged to rounding level; keep the better configuration.
                if (after > before) c.pos = saved;
                c.active = false;
            } else {
                any = true;
            }
        }
        r.stress_trace.push_back(total());
        if (!any) break;
    }

    // Pack component boxes left to right, vertically centred.
    struct Box {
        double minx, miny, w, h;
    };
    std::vector<std::size_t> order(comps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return comps[a].members.size() > comps[b].members.size();
    });
    std::vector<Box> boxes(comps.size());
    double total_w = 0.0;
    double max_h = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        double x0 = std::numeric_limits<double>::max(), y0 = x0;
        double x1 = std::numeric_limits<double>::lowest(), y1 = x1;
        for (const auto& p : comps[i].pos) {
            x0 = std::min(x0, p.x);
            y0 = std::min(y0, p.y);
            x1 = std::max(x1, p.x);
            y1 = std::max(y1, p.y);
        }
        boxes[i] = Box{x0, y0, x1 - x0, y1 - y0};
        total_w += boxes[i].w;
        max_h = std::max(max_h, boxes[i].h);
    }
    const double slots = static_cast<double>(comps.size() + 1);
    double gap = 0.05 * canvas.width;
    if (gap * slots > 0.5 * canvas.width) gap = 0.5 * canvas.width / slots;
    double scale = 1.0;
    if (total_w > 0.0) scale = std::min(scale, (canvas.width - gap * slots) / total_w);
    if (max_h > 0.0) scale = std::min(scale, 0.9 * canvas.height / max_h);
    r.provenance.params["scale"] = scale;

    const double used = total_w * scale + gap * static_cast<double>(comps.size() - 1);
    double cursor = (canvas.width - used) / 2.0;
    std::vector<Point> pts(n);
    for (std::size_t oi : order) {
        const auto& c = comps[oi];
        const Box& b = boxes[oi];
        const double top = canvas.height / 2.0 - b.h * scale / 2.0;
        for (std::size_t i = 0; i < c.members.size(); ++i)
            pts[c.members[i]] = Point{cursor + (c.pos[i].x - b.minx) * scale, top + (c.pos[i].y - b.miny) * scale};
        cursor += b.w * scale + gap;
    }
    store(r, graph, v, pts);
    return r;
}

LayoutResult layout_grid(const Graph& graph, const ViewMask& view, Canvas canvas) {
    LayoutResult r = start(graph, canvas, "grid", 0);
    View v = make_view(graph, view);
    const std::size_t n = v.nodes.size();
    if (n == 0) return r;
    std::size_t cols = 1;
    while (cols * cols < n) ++cols;
    const std::size_t rows = (n + cols - 1) / cols;
    const double margin = 0.05 * canvas.min_side();
    const double cw = (canvas.width - 2.0 * margin) / static_cast<double>(cols);
    const double ch = (canvas.height - 2.0 * margin) / static_cast<double>(rows);
    std::vector<Point> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double c = static_cast<double>(k % cols);
        const double row = static_cast<double>(k / cols);
        pts[k] = Point{margin + (c + 0.5) * cw, margin + (row + 0.5) * ch};
    }
    r.provenance.params["columns"] = static_cast<double>(cols);
    r.provenance.params["rows"] = static_cast<double>(rows);
    store(r, graph, v, pts);
    return r;
}

LayoutResult compute_layout(const Graph& graph, const ViewMask& view, Canvas canvas, const LayoutParams& params) {
    switch (params.algorithm) {
        case Algorithm::Circular: return layout_circular(graph, view, canvas, params.ordering);
        case Algorithm::Random: return layout_random(graph, view, canvas, params.seed);
        case Algorithm::FruchtermanReingold:
            return layout_fruchterman_reingold(graph, view, canvas, params.seed, params.iterations, params.cooling);
        case Algorithm::Stress: return layout_stress(graph, view, canvas, params.iterations, params.seed);
        case Algorithm::Grid: return layout_grid(graph, view, canvas);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown layout algorithm");
}

double layout_stress_value(const Graph& graph, const ViewMask& view, const Positions& positions,
                           double unit_length) {
    View v = make_view(graph, view);
    double s = 0.0;
    for (std::size_t i = 0; i < v.nodes.size(); ++i) {
        auto dist = bfs(v, i);
        const Point& pi = positions.at(graph.nodes()[v.nodes[i]].id);
        for (std::size_t j = i + 1; j < v.nodes.size(); ++j) {
            if (dist[j] == kNone) continue;
            const Point& pj = positions.at(graph.nodes()[v.nodes[j]].id);
            const double d = static_cast<double>(dist[j]);
            const double diff = std::hypot(pi.x - pj.x, pi.y - pj.y) - unit_length * d;
            s += diff * diff / (d * d);
        }
    }
    return s;
}

void validate_lens(const LensSpec& lens) {
    if (!(lens.radius > 0.0) || !std::isfinite(lens.radius))
        throw Error(ErrorCode::InvalidArgument, "lens radius must be > 0", "radius");
    if (!(lens.magnification >= 1.0) || !std::isfinite(lens.magnification))
        throw Error(ErrorCode::InvalidArgument, "lens magnification must be >= 1", "magnification");
    if (!std::isfinite(lens.focus.x) || !std::isfinite(lens.focus.y))
        throw Error(ErrorCode::InvalidArgument, "lens focus must be finite", "focus");
}

Point lens_point(Point p, const LensSpec& lens) {
    const double dx = p.x - lens.focus.x;
    const double dy = p.y - lens.focus.y;
    const double r = std::hypot(dx, dy);
    if (r == 0.0 || r >= lens.radius) return p;
    const double u = r / lens.radius;
    const double m = lens.magnification;
    const double r2 = lens.radius * (m * u) / (1.0 + (m - 1.0) * u);
    const double s = r2 / r;
    return Point{lens.focus.x + dx * s, lens.focus.y + dy * s};
}

Positions lens_transform(const Positions& positions, const LensSpec& lens) {
    validate_lens(lens);
    Positions out;
    for (const auto& [id, p] : positions) out.emplace(id, lens_point(p, lens));
    return out;
}

Point clamp_to(Point p, Canvas canvas) {
    return Point{std::clamp(p.x, 0.0, canvas.width), std::clamp(p.y, 0.0, canvas.height)};
}

Positions move_node(const Positions& positions, Canvas canvas, const std::string& node, Point delta) {
    auto it = positions.find(node);
    if (it == positions.end()) throw Error(ErrorCode::UnknownNode, "no position for node '" + node + "'", node);
    Positions out = positions;
    out[node] = clamp_to(Point{it->second.x + delta.x, it->second.y + delta.y}, canvas);
    return out;
}

Positions pan(const Positions& positions, Canvas canvas, Point delta) {
    Positions out;
    for (const auto& [id, p] : positions) out.emplace(id, clamp_to(Point{p.x + delta.x, p.y + delta.y}, canvas));
    return out;
}

} // namespace duplex
