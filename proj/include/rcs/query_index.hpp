#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcs/graph.hpp"
#include "rcs/planner.hpp"
#include "rcs/scene.hpp"

namespace rcs {

class IndexError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One finalized predecessor range at a node: departures with direction in
/// [start, end] continue cheapest through pred_edge. Ranges never wrap;
/// intervals crossing zero are stored as two pieces.
struct PredRange {
    double start = 0.0;
    double end = 0.0;
    EdgeId pred_edge = kNoEdge;
    double base_dist = 0.0;
};

/// Bookkeeping for range insertions. The uncovered remainder of a leave
/// range is usually one circular piece; fragmented remainders are legal but
/// worth noticing, so we count them.
struct PredsAudit {
    std::size_t insertions = 0;
    std::size_t fragmented_insertions = 0;
    std::size_t max_pieces = 1;
};

/// Disjoint angular ranges around one node, each mapped to the cheapest
/// finalized incoming edge allowing departures in that range. First writer
/// wins: insertion order follows non-decreasing edge distance.
class PredsMap {
public:
    void insert(const AngularInterval& range, EdgeId edge, double base_dist,
                PredsAudit& audit);

    /// Cheapest range containing the direction (within eps at boundaries),
    /// or nullptr when the direction is uncovered.
    const PredRange* lookup(double angle, double eps = kAngleEps) const;

    const std::map<double, PredRange>& ranges() const { return by_start_; }
    bool empty() const { return by_start_.empty(); }

private:
    std::map<double, PredRange> by_start_;  // keyed by range start
};

/// Preprocessed single-source planning state: the chain graph with all edge
/// distances finalized plus per-node predecessor range lists; answers
/// target queries without replanning. Immutable once built.
struct PlannerIndex {
    Scene scene;  // target-less
    PlannerGraph graph;
    std::vector<PredsMap> preds;  // one per node
    std::uint64_t fingerprint = 0;
    double preprocess_ms = 0.0;
    PredsAudit audit;
};

/// Build the index: a full edge sweep from the scene's source (no early
/// exit), registering each finalized edge's leave range at its entry node.
/// `trace`, when given, receives the edge extraction order.
PlannerIndex preprocess(const Scene& scene, const OcclusionIndex& occlusion,
                        std::vector<EdgeId>* trace = nullptr);

/// Cheapest admissible route from the index's source to a free-space target
/// point: every node is tried as the last junction before t, using the
/// node's predecessor ranges. `arrival`, when given, restricts the
/// direction in which t is approached. The index is not mutated.
std::optional<PathResult> query(const PlannerIndex& index, Point2 target,
                                const OcclusionIndex& occlusion,
                                const AngularInterval* arrival = nullptr);

/// Versioned, fingerprinted persistence. load_index throws IndexError on
/// unreadable, corrupt or mismatching files.
void save_index(const PlannerIndex& index, const std::string& path);
PlannerIndex load_index(const std::string& path);

}  // namespace rcs
