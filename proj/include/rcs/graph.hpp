#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "rcs/geometry.hpp"
#include "rcs/occlusion.hpp"
#include "rcs/scene.hpp"

namespace rcs {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using ChainId = std::uint32_t;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();
inline constexpr double kInfDist = std::numeric_limits<double>::infinity();

/// Compact record of one undirected chain between two nodes; full geometry
/// is rebuilt on demand from (u, v, k, curvature).
struct StoredChain {
    NodeId u = 0;
    NodeId v = 0;
    std::int32_t k = 0;
    std::int32_t curvature = +1;
    double length = 0.0;
};

/// One traversal direction of a stored chain.
struct ChainEdge {
    EdgeId id = kNoEdge;
    NodeId u = 0;  // head: node the edge leaves
    NodeId v = 0;  // tail: node the edge enters
    ChainId chain = 0;
    bool from_start = true;
    double w = 0.0;    // chain length
    double dep = 0.0;  // direction of the first traversed segment, at u
    double arr = 0.0;  // direction of the last traversed segment, into v
    double dist = kInfDist;
    EdgeId pred = kNoEdge;
};

/// Outgoing edges of one node ordered counter-clockwise by departure angle,
/// with logarithmic search, circular range collection and removal. Ties on
/// the angle break by (w, id) ascending.
class OutEdgeSet {
public:
    struct Key {
        double dep;
        double w;
        EdgeId id;
        auto operator<=>(const Key&) const = default;
    };

    void insert(const Key& k) { keys_.insert(k); }
    bool erase(const Key& k) { return keys_.erase(k) > 0; }
    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }
    void clear() { keys_.clear(); }

    /// Append ids of all keys whose dep lies in the counter-clockwise range
    /// [lo, hi] (inclusive, wraparound-aware).
    void collect_range(double lo, double hi, std::vector<EdgeId>& out) const;

    void collect_all(std::vector<EdgeId>& out) const;

private:
    std::set<Key> keys_;
};

/// Weighted directed multigraph whose edges are valid regular-chain
/// traversals between scene nodes (obstacle vertices plus source and,
/// when present, target).
class PlannerGraph {
public:
    std::size_t node_count() const { return nodes_.size(); }
    Point2 node_pos(NodeId v) const { return nodes_[v]; }
    NodeId source_node() const { return source_; }
    bool has_target() const { return has_target_; }
    NodeId target_node() const { return target_; }
    double alpha() const { return alpha_; }
    double min_leg() const { return min_leg_; }

    const std::vector<StoredChain>& chains() const { return chains_; }
    const std::vector<ChainEdge>& edges() const { return edges_; }
    ChainEdge& edge(EdgeId id) { return edges_[id]; }
    const ChainEdge& edge(EdgeId id) const { return edges_[id]; }

    /// Rebuild the full chain geometry backing an edge.
    RegularChain chain_geometry(EdgeId id) const;

    const OutEdgeSet& edges_out(NodeId v) const { return out_[v]; }
    std::size_t out_degree(NodeId v) const { return out_[v].size(); }
    void remove_out_edge(EdgeId id);

    /// Outgoing edges of e's tail still present in the ordered structure
    /// whose departure direction lies within e's valid leave range.
    std::vector<EdgeId> valid_successors(EdgeId id) const;

    /// Restore edges_out, dist and pred to their post-construction state.
    void reset();

    /// Lazily reset before a run that mutates planning state.
    void begin_run();

    /// Assemble a graph from already-validated chains. Node order and chain
    /// order fully determine edge ids: chain m yields edges 2m (u->v) and
    /// 2m+1 (v->u).
    static PlannerGraph assemble(std::vector<Point2> nodes, NodeId source,
                                 bool has_target, NodeId target, double alpha,
                                 double min_leg, std::vector<StoredChain> chains);

private:
    std::vector<Point2> nodes_;
    NodeId source_ = 0;
    NodeId target_ = 0;
    bool has_target_ = false;
    double alpha_ = 0.0;
    double min_leg_ = 0.0;
    std::vector<StoredChain> chains_;
    std::vector<ChainEdge> edges_;
    std::vector<OutEdgeSet> out_;
    bool consumed_ = false;
};

/// True when every leg of the chain is unblocked; the anchors are ignored
/// at their own endpoints only (first leg at the start anchor, last leg at
/// the end anchor).
bool validate_chain(const RegularChain& chain, const OcclusionIndex& index);

/// Build the chain multigraph for a scene: for every node pair, every
/// unblocked regular chain contributes one edge per traversal direction.
/// Throws SceneError when source or target lies inside an obstacle.
PlannerGraph build_graph(const Scene& scene, const OcclusionIndex& index);

/// Free-function form of PlannerGraph::valid_successors.
inline std::vector<EdgeId> vs(const PlannerGraph& g, EdgeId e) {
    return g.valid_successors(e);
}

}  // namespace rcs
