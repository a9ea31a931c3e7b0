#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcs/graph.hpp"
#include "rcs/scene.hpp"

namespace rcs {

/// A planned route: flattened chain vertices with junction duplicates
/// removed, its total length, and the graph edges it was stitched from.
struct PathResult {
    std::vector<Point2> polyline;
    double length = 0.0;
    std::vector<EdgeId> edges;
};

/// Run instrumentation: queue discipline counters and the extraction
/// monotonicity witness.
struct PlanStats {
    std::size_t extracted = 0;
    std::size_t inserted = 0;
    std::size_t max_inserts_per_edge = 0;
    bool monotone_extraction = true;
};

/// Shortest path from s to t whose legs are regular-chain traversals and
/// whose junction turns respect the graph's per-turn angle. Consumes the
/// graph's planning state (begin_run resets it when reused).
std::optional<PathResult> plan(PlannerGraph& g, NodeId s, NodeId t,
                               PlanStats* stats = nullptr);

/// Same search, but a route is accepted only when its final segment enters
/// t with a direction inside `arrival`; other arrivals at t are dropped.
std::optional<PathResult> plan_directional(PlannerGraph& g, NodeId s, NodeId t,
                                           const AngularInterval& arrival,
                                           PlanStats* stats = nullptr);

enum class ViolationKind {
    LegTooShort,
    MaxTurnExceeded,
    Disconnected,
    LegBlocked,
    EndpointMismatch,
};

struct Violation {
    ViolationKind kind;
    std::size_t index = 0;  // leg or junction index
    double value = 0.0;     // offending measurement
};

std::string to_string(const Violation& v);

/// Slack knobs for verifying discretized planners; the defaults verify the
/// exact contract.
struct CheckOptions {
    double leg_slack = 1e-9;      // legs must be >= l - leg_slack
    double turn_slack = 1e-9;     // turns must be <= alpha + turn_slack
    double endpoint_tol = 1e-9;   // max distance of ends from source/target
};

/// Independent verifier: leg lengths, connectedness, per-turn angles,
/// endpoint agreement, and blocking via a fresh linear scan over the
/// obstacle edges. Empty result means the path satisfies the requirements.
std::vector<Violation> check_path(const Scene& scene, const PathResult& path,
                                  const CheckOptions& opts = {});

}  // namespace rcs
