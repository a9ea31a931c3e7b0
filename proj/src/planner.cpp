#include "rcs/planner.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <sstream>

namespace rcs {

namespace {

struct QueueItem {
    double dist;
    EdgeId id;
    bool operator>(const QueueItem& o) const {
        return dist > o.dist || (dist == o.dist && id > o.id);
    }
};

using MinQueue =
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

PathResult reconstruct(const PlannerGraph& g, EdgeId last) {
    PathResult result;
    for (EdgeId e = last; e != kNoEdge; e = g.edge(e).pred)
        result.edges.push_back(e);
    std::reverse(result.edges.begin(), result.edges.end());
    result.length = g.edge(last).dist;
    for (EdgeId id : result.edges) {
        RegularChain chain = g.chain_geometry(id);
        std::vector<Point2>& verts = chain.vertices;
        if (!g.edge(id).from_start) std::reverse(verts.begin(), verts.end());
        for (const Point2& p : verts) {
            if (!result.polyline.empty() &&
                distance(result.polyline.back(), p) < kAnchorEps)
                continue;
            result.polyline.push_back(p);
        }
    }
    return result;
}

std::optional<PathResult> run_search(PlannerGraph& g, NodeId s, NodeId t,
                                     const AngularInterval* arrival,
                                     PlanStats* stats) {
    if (s == t) throw std::invalid_argument("source and target must differ");
    g.begin_run();

    PlanStats local;
    PlanStats& st = stats ? *stats : local;
    st = PlanStats{};
    std::vector<std::uint8_t> inserts(g.edges().size(), 0);
    double last_extracted = 0.0;

    MinQueue queue;
    auto push = [&](EdgeId id) {
        ++st.inserted;
        inserts[id] = static_cast<std::uint8_t>(
            std::min<unsigned>(255, inserts[id] + 1));
        st.max_inserts_per_edge =
            std::max<std::size_t>(st.max_inserts_per_edge, inserts[id]);
        queue.push({g.edge(id).dist, id});
    };

    std::vector<EdgeId> seed;
    g.edges_out(s).collect_all(seed);
    for (EdgeId id : seed) {
        g.remove_out_edge(id);
        g.edge(id).dist = g.edge(id).w;
        g.edge(id).pred = kNoEdge;
        push(id);
    }

    while (!queue.empty()) {
        const auto [dist, id] = queue.top();
        queue.pop();
        ++st.extracted;
        if (dist < last_extracted) st.monotone_extraction = false;
        last_extracted = dist;

        const ChainEdge& e = g.edge(id);
        if (e.v == t) {
            if (!arrival || arrival->contains(e.arr)) return reconstruct(g, id);
            continue;  // wrong approach direction; t has no successors
        }
        for (EdgeId next : g.valid_successors(id)) {
            g.remove_out_edge(next);
            ChainEdge& en = g.edge(next);
            en.dist = dist + en.w;
            en.pred = id;
            push(next);
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<PathResult> plan(PlannerGraph& g, NodeId s, NodeId t,
                               PlanStats* stats) {
    return run_search(g, s, t, nullptr, stats);
}

std::optional<PathResult> plan_directional(PlannerGraph& g, NodeId s, NodeId t,
                                           const AngularInterval& arrival,
                                           PlanStats* stats) {
    return run_search(g, s, t, &arrival, stats);
}

std::string to_string(const Violation& v) {
    std::ostringstream out;
    switch (v.kind) {
        case ViolationKind::LegTooShort:
            out << "leg " << v.index << " shorter than l (" << v.value << ")";
            break;
        case ViolationKind::MaxTurnExceeded:
            out << "turn at junction " << v.index << " exceeds alpha ("
                << v.value << " rad)";
            break;
        case ViolationKind::Disconnected:
            out << "polyline degenerate at index " << v.index;
            break;
        case ViolationKind::LegBlocked:
            out << "leg " << v.index << " crosses an obstacle";
            break;
        case ViolationKind::EndpointMismatch:
            out << (v.index == 0 ? "start" : "end")
                << " point is off by " << v.value;
            break;
    }
    return out.str();
}

std::vector<Violation> check_path(const Scene& scene, const PathResult& path,
                                  const CheckOptions& opts) {
    std::vector<Violation> out;
    const std::vector<Point2>& pts = path.polyline;
    if (pts.size() < 2) {
        out.push_back({ViolationKind::Disconnected, 0, 0.0});
        return out;
    }

    const double d0 = distance(pts.front(), scene.source);
    if (d0 > opts.endpoint_tol)
        out.push_back({ViolationKind::EndpointMismatch, 0, d0});
    if (scene.target) {
        const double d1 = distance(pts.back(), *scene.target);
        if (d1 > opts.endpoint_tol)
            out.push_back({ViolationKind::EndpointMismatch, 1, d1});
    }

    const SegmentSet obstacles = obstacle_segments(scene);
    std::vector<Point2> obstacle_vertices;
    for (const auto& poly : scene.obstacles)
        for (const Point2& v : poly) obstacle_vertices.push_back(v);

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Point2 a = pts[i];
        const Point2 b = pts[i + 1];
        const double len = distance(a, b);
        if (len < kAnchorEps) {
            out.push_back({ViolationKind::Disconnected, i, len});
            continue;
        }
        if (len < scene.min_leg - opts.leg_slack)
            out.push_back({ViolationKind::LegTooShort, i, len});

        // A leg may touch obstacles only at endpoints that sit on obstacle
        // vertices (chain anchors).
        std::vector<Point2> ignore;
        for (Point2 end : {a, b})
            for (const Point2& v : obstacle_vertices)
                if (distance(end, v) <= kContactEps) {
                    ignore.push_back(end);
                    break;
                }
        if (blocked_linear(obstacles, a, b, ignore))
            out.push_back({ViolationKind::LegBlocked, i, 0.0});
    }

    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const Point2 prev = pts[i] - pts[i - 1];
        const Point2 next = pts[i + 1] - pts[i];
        if (norm(prev) < kAnchorEps || norm(next) < kAnchorEps) continue;
        const double turn = std::abs(
            angle_diff(std::atan2(next.y, next.x), std::atan2(prev.y, prev.x)));
        if (turn > scene.alpha + opts.turn_slack)
            out.push_back({ViolationKind::MaxTurnExceeded, i, turn});
    }

    return out;
}

}  // namespace rcs
