#include "rcs/graph.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <stdexcept>
#include <thread>

namespace rcs {

void OutEdgeSet::collect_range(double lo, double hi,
                               std::vector<EdgeId>& out) const {
    const double low = std::numeric_limits<double>::lowest();
    auto emit = [&](double a, double b) {
        for (auto it = keys_.lower_bound({a, low, 0});
             it != keys_.end() && it->dep <= b; ++it)
            out.push_back(it->id);
    };
    if (lo <= hi) {
        emit(lo, hi);
    } else {
        emit(lo, std::numeric_limits<double>::max());
        emit(0.0, hi);
    }
}

void OutEdgeSet::collect_all(std::vector<EdgeId>& out) const {
    for (const Key& k : keys_) out.push_back(k.id);
}

RegularChain PlannerGraph::chain_geometry(EdgeId id) const {
    const ChainEdge& e = edges_[id];
    const StoredChain& c = chains_[e.chain];
    auto chain = build_chain(nodes_[c.u], nodes_[c.v], c.k, alpha_, c.curvature);
    assert(chain.has_value());
    return std::move(*chain);
}

void PlannerGraph::remove_out_edge(EdgeId id) {
    const ChainEdge& e = edges_[id];
    out_[e.u].erase({e.dep, e.w, e.id});
}

std::vector<EdgeId> PlannerGraph::valid_successors(EdgeId id) const {
    const ChainEdge& e = edges_[id];
    const AngularInterval range = AngularInterval::centered(e.arr, alpha_);
    std::vector<EdgeId> out;
    if (range.width + 2 * kAngleEps >= kTwoPi) {
        out_[e.v].collect_all(out);
        return out;
    }
    const double lo = normalize_angle(range.start - kAngleEps);
    const double hi = normalize_angle(range.start + range.width + kAngleEps);
    out_[e.v].collect_range(lo, hi, out);
    // The scan window is padded by eps on both sides; confirm membership.
    std::erase_if(out, [&](EdgeId cand) {
        return !range.contains(edges_[cand].dep);
    });
    return out;
}

void PlannerGraph::reset() {
    for (OutEdgeSet& set : out_) set.clear();
    for (ChainEdge& e : edges_) {
        e.dist = kInfDist;
        e.pred = kNoEdge;
        out_[e.u].insert({e.dep, e.w, e.id});
    }
    consumed_ = false;
}

void PlannerGraph::begin_run() {
    if (consumed_) reset();
    consumed_ = true;
}

PlannerGraph PlannerGraph::assemble(std::vector<Point2> nodes, NodeId source,
                                    bool has_target, NodeId target,
                                    double alpha, double min_leg,
                                    std::vector<StoredChain> chains) {
    PlannerGraph g;
    g.nodes_ = std::move(nodes);
    g.source_ = source;
    g.target_ = target;
    g.has_target_ = has_target;
    g.alpha_ = alpha;
    g.min_leg_ = min_leg;
    g.chains_ = std::move(chains);
    g.edges_.reserve(2 * g.chains_.size());
    for (ChainId ci = 0; ci < g.chains_.size(); ++ci) {
        const StoredChain& sc = g.chains_[ci];
        auto geom = build_chain(g.nodes_[sc.u], g.nodes_[sc.v], sc.k, alpha,
                                sc.curvature);
        if (!geom) throw std::logic_error("stored chain failed to rebuild");
        for (bool from_start : {true, false}) {
            ChainEdge e;
            e.id = static_cast<EdgeId>(g.edges_.size());
            e.u = from_start ? sc.u : sc.v;
            e.v = from_start ? sc.v : sc.u;
            e.chain = ci;
            e.from_start = from_start;
            e.w = sc.length;
            e.dep = departure_angle(*geom, from_start);
            e.arr = arrival_angle(*geom, from_start);
            g.edges_.push_back(e);
        }
    }
    g.out_.assign(g.nodes_.size(), {});
    for (const ChainEdge& e : g.edges_) g.out_[e.u].insert({e.dep, e.w, e.id});
    return g;
}

bool validate_chain(const RegularChain& chain, const OcclusionIndex& index) {
    const std::size_t legs = chain.vertices.size() - 1;
    for (std::size_t i = 0; i < legs; ++i) {
        std::array<Point2, 2> ignore;
        std::size_t n_ignore = 0;
        if (i == 0) ignore[n_ignore++] = chain.start;
        if (i == legs - 1) ignore[n_ignore++] = chain.end;
        if (index.blocked(chain.vertices[i], chain.vertices[i + 1],
                          {ignore.data(), n_ignore}))
            return false;
    }
    return true;
}

namespace {

struct PairTask {
    NodeId u;
    NodeId v;
};

}  // namespace

PlannerGraph build_graph(const Scene& scene, const OcclusionIndex& index) {
    validate_scene(scene);

    std::vector<Point2> nodes;
    nodes.reserve(scene.vertex_count() + 2);
    for (const auto& poly : scene.obstacles)
        for (const Point2& v : poly) nodes.push_back(v);
    const NodeId source = static_cast<NodeId>(nodes.size());
    nodes.push_back(scene.source);
    NodeId target = 0;
    const bool has_target = scene.target.has_value();
    if (has_target) {
        target = static_cast<NodeId>(nodes.size());
        nodes.push_back(*scene.target);
    }

    std::vector<PairTask> pairs;
    pairs.reserve(nodes.size() * (nodes.size() - 1) / 2);
    for (NodeId i = 0; i < nodes.size(); ++i)
        for (NodeId j = i + 1; j < nodes.size(); ++j)
            if (distance(nodes[i], nodes[j]) >= kAnchorEps)
                pairs.push_back({i, j});

    // Per-pair validation is independent; workers take contiguous pair
    // ranges so concatenating their outputs reproduces the serial order.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(hw, pairs.size() ? pairs.size() : 1));
    std::vector<std::vector<StoredChain>> found(workers);

    auto run_range = [&](unsigned w, std::size_t begin, std::size_t end) {
        std::vector<StoredChain>& sink = found[w];
        for (std::size_t p = begin; p < end; ++p) {
            const auto [u, v] = pairs[p];
            for (const RegularChain& c :
                 enumerate_chains(nodes[u], nodes[v], scene.alpha, scene.min_leg)) {
                if (!validate_chain(c, index)) continue;
                sink.push_back({u, v, c.k, c.curvature, c.total_length});
            }
        }
    };

    if (workers <= 1) {
        run_range(0, 0, pairs.size());
    } else {
        std::vector<std::thread> threads;
        const std::size_t per = (pairs.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(pairs.size(), w * per);
            const std::size_t end = std::min(pairs.size(), begin + per);
            threads.emplace_back(run_range, w, begin, end);
        }
        for (std::thread& t : threads) t.join();
    }

    std::vector<StoredChain> chains;
    for (const auto& part : found)
        chains.insert(chains.end(), part.begin(), part.end());

    return PlannerGraph::assemble(std::move(nodes), source, has_target, target,
                                  scene.alpha, scene.min_leg, std::move(chains));
}

}  // namespace rcs
