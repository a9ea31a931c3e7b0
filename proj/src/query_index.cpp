#include "rcs/query_index.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace rcs {

namespace {

using nlohmann::json;

struct QueueItem {
    double dist;
    EdgeId id;
    bool operator>(const QueueItem& o) const {
        return dist > o.dist || (dist == o.dist && id > o.id);
    }
};

// Non-wrapping sub-pieces of a circular interval, split at zero.
std::vector<std::pair<double, double>> unroll(const AngularInterval& range) {
    std::vector<std::pair<double, double>> pieces;
    if (range.width >= kTwoPi) {
        pieces.emplace_back(0.0, kTwoPi);
        return pieces;
    }
    const double hi = range.start + range.width;
    if (hi <= kTwoPi) {
        pieces.emplace_back(range.start, hi);
    } else {
        pieces.emplace_back(range.start, kTwoPi);
        pieces.emplace_back(0.0, hi - kTwoPi);
    }
    return pieces;
}

}  // namespace

void PredsMap::insert(const AngularInterval& range, EdgeId edge,
                      double base_dist, PredsAudit& audit) {
    ++audit.insertions;
    std::vector<std::pair<double, double>> gaps;
    for (auto [lo, hi] : unroll(range)) {
        double cursor = lo;
        auto it = by_start_.upper_bound(lo);
        if (it != by_start_.begin()) {
            auto prev = std::prev(it);
            if (prev->second.end > cursor) cursor = prev->second.end;
        }
        for (; cursor < hi && it != by_start_.end() && it->first < hi; ++it) {
            if (it->first > cursor) gaps.emplace_back(cursor, it->first);
            cursor = std::max(cursor, it->second.end);
        }
        if (cursor < hi) gaps.emplace_back(cursor, hi);
    }
    std::erase_if(gaps, [](const auto& g) { return g.second - g.first < 1e-12; });
    for (auto [lo, hi] : gaps)
        by_start_[lo] = PredRange{lo, hi, edge, base_dist};

    // Pieces meeting across zero are one circular run.
    std::size_t logical = gaps.size();
    if (gaps.size() >= 2 && gaps.front().first <= 1e-12 &&
        gaps.back().second >= kTwoPi - 1e-12)
        --logical;
    audit.max_pieces = std::max(audit.max_pieces, logical);
    if (logical > 1) ++audit.fragmented_insertions;
}

const PredRange* PredsMap::lookup(double angle, double eps) const {
    if (by_start_.empty()) return nullptr;
    const double a = normalize_angle(angle);

    const PredRange* best = nullptr;
    auto offer = [&](const PredRange& r) {
        for (double cand : {a, a - kTwoPi, a + kTwoPi})
            if (cand >= r.start - eps && cand <= r.end + eps) {
                if (!best || r.base_dist < best->base_dist) best = &r;
                return;
            }
    };

    // Ranges starting just past the angle.
    for (auto it = by_start_.upper_bound(a);
         it != by_start_.end() && it->first <= a + eps; ++it)
        offer(it->second);
    // Ranges at or before the angle; ends decrease going backwards, so stop
    // at the first one that ends clear of the eps window.
    for (auto it = by_start_.upper_bound(a); it != by_start_.begin();) {
        --it;
        offer(it->second);
        if (it->second.end < a - eps) break;
    }
    // Wraparound neighbors.
    offer(by_start_.begin()->second);
    offer(by_start_.rbegin()->second);
    return best;
}

PlannerIndex preprocess(const Scene& scene, const OcclusionIndex& occlusion,
                        std::vector<EdgeId>* trace) {
    Scene no_target = scene;
    no_target.target.reset();

    const auto t0 = std::chrono::steady_clock::now();

    PlannerIndex index;
    index.scene = std::move(no_target);
    index.graph = build_graph(index.scene, occlusion);
    index.fingerprint = scene_fingerprint(index.scene);

    PlannerGraph& g = index.graph;
    index.preds.assign(g.node_count(), {});
    g.begin_run();

    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
    const NodeId s = g.source_node();
    std::vector<EdgeId> seed;
    g.edges_out(s).collect_all(seed);
    for (EdgeId id : seed) {
        g.remove_out_edge(id);
        g.edge(id).dist = g.edge(id).w;
        g.edge(id).pred = kNoEdge;
        queue.push({g.edge(id).dist, id});
    }

    while (!queue.empty()) {
        const auto [dist, id] = queue.top();
        queue.pop();
        if (trace) trace->push_back(id);
        const ChainEdge& e = g.edge(id);
        index.preds[e.v].insert(AngularInterval::centered(e.arr, g.alpha()), id,
                                dist, index.audit);
        for (EdgeId next : g.valid_successors(id)) {
            g.remove_out_edge(next);
            ChainEdge& en = g.edge(next);
            en.dist = dist + en.w;
            en.pred = id;
            queue.push({en.dist, next});
        }
    }

    const auto t1 = std::chrono::steady_clock::now();
    index.preprocess_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    return index;
}

namespace {

PathResult stitch(const PlannerGraph& g, EdgeId last_graph_edge,
                  const RegularChain& final_chain, double total) {
    PathResult result;
    for (EdgeId e = last_graph_edge; e != kNoEdge; e = g.edge(e).pred)
        result.edges.push_back(e);
    std::reverse(result.edges.begin(), result.edges.end());
    result.length = total;

    auto append = [&](const std::vector<Point2>& verts) {
        for (const Point2& p : verts) {
            if (!result.polyline.empty() &&
                distance(result.polyline.back(), p) < kAnchorEps)
                continue;
            result.polyline.push_back(p);
        }
    };
    for (EdgeId id : result.edges) {
        RegularChain chain = g.chain_geometry(id);
        if (!g.edge(id).from_start)
            std::reverse(chain.vertices.begin(), chain.vertices.end());
        append(chain.vertices);
    }
    append(final_chain.vertices);
    return result;
}

}  // namespace

std::optional<PathResult> query(const PlannerIndex& index, Point2 target,
                                const OcclusionIndex& occlusion,
                                const AngularInterval* arrival) {
    if (point_in_any_obstacle(index.scene, target))
        throw SceneError("target lies inside an obstacle");

    const PlannerGraph& g = index.graph;
    const NodeId s = g.source_node();

    bool found = false;
    double best = kInfDist;
    EdgeId best_pred = kNoEdge;
    RegularChain best_chain;

    for (NodeId v = 0; v < g.node_count(); ++v) {
        const Point2 from = g.node_pos(v);
        if (distance(from, target) < kAnchorEps) continue;
        for (RegularChain& c :
             enumerate_chains(from, target, g.alpha(), g.min_leg())) {
            if (arrival && !arrival->contains(arrival_angle(c, true))) continue;
            if (!validate_chain(c, occlusion)) continue;
            double cand;
            EdgeId pred = kNoEdge;
            if (v == s) {
                cand = c.total_length;
            } else {
                const PredRange* range =
                    index.preds[v].lookup(departure_angle(c, true));
                if (!range) continue;
                cand = range->base_dist + c.total_length;
                pred = range->pred_edge;
            }
            if (!found || cand < best) {
                found = true;
                best = cand;
                best_pred = pred;
                best_chain = std::move(c);
            }
        }
    }
    if (!found) return std::nullopt;
    return stitch(g, best_pred, best_chain, best);
}

namespace {

constexpr int kIndexFormatVersion = 1;

std::string hex64(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << v;
    return out.str();
}

std::uint64_t parse_hex64(const std::string& s) {
    return std::stoull(s, nullptr, 16);
}

}  // namespace

void save_index(const PlannerIndex& index, const std::string& path) {
    json doc;
    doc["format"] = "rcs-index";
    doc["version"] = kIndexFormatVersion;
    doc["fingerprint"] = hex64(index.fingerprint);
    doc["preprocess_ms"] = index.preprocess_ms;
    doc["scene"] = json::parse(serialize_scene(index.scene));

    json jchains = json::array();
    for (const StoredChain& c : index.graph.chains())
        jchains.push_back({c.u, c.v, c.k, c.curvature, c.length});
    doc["chains"] = std::move(jchains);

    json jedges = json::array();
    for (const ChainEdge& e : index.graph.edges()) {
        json je;
        je["dist"] = std::isfinite(e.dist) ? json(e.dist) : json(nullptr);
        je["pred"] = e.pred == kNoEdge ? json(nullptr) : json(e.pred);
        jedges.push_back(std::move(je));
    }
    doc["edges"] = std::move(jedges);

    json jpreds = json::array();
    for (NodeId v = 0; v < index.preds.size(); ++v)
        for (const auto& [start, r] : index.preds[v].ranges())
            jpreds.push_back({v, r.start, r.end, r.pred_edge, r.base_dist});
    doc["preds"] = std::move(jpreds);

    std::ofstream out(path);
    if (!out) throw IndexError("cannot write index file: " + path);
    out << doc.dump() << "\n";
}

PlannerIndex load_index(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IndexError("cannot open index file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& ex) {
        throw IndexError(std::string("corrupt index file: ") + ex.what());
    }

    try {
        if (doc.value("format", "") != "rcs-index")
            throw IndexError("not an rcs index file");
        if (doc.value("version", -1) != kIndexFormatVersion)
            throw IndexError("unsupported index version");

        PlannerIndex index;
        index.scene = parse_scene(doc.at("scene").dump());
        index.fingerprint = parse_hex64(doc.at("fingerprint").get<std::string>());
        if (index.fingerprint != scene_fingerprint(index.scene))
            throw IndexError("index fingerprint does not match its scene");
        index.preprocess_ms = doc.value("preprocess_ms", 0.0);

        std::vector<Point2> nodes;
        for (const auto& poly : index.scene.obstacles)
            for (const Point2& v : poly) nodes.push_back(v);
        const NodeId source = static_cast<NodeId>(nodes.size());
        nodes.push_back(index.scene.source);

        std::vector<StoredChain> chains;
        for (const auto& jc : doc.at("chains")) {
            StoredChain c;
            c.u = jc.at(0).get<NodeId>();
            c.v = jc.at(1).get<NodeId>();
            c.k = jc.at(2).get<std::int32_t>();
            c.curvature = jc.at(3).get<std::int32_t>();
            c.length = jc.at(4).get<double>();
            if (c.u >= nodes.size() || c.v >= nodes.size())
                throw IndexError("chain references unknown node");
            chains.push_back(c);
        }
        index.graph = PlannerGraph::assemble(std::move(nodes), source, false, 0,
                                             index.scene.alpha,
                                             index.scene.min_leg,
                                             std::move(chains));

        const auto& jedges = doc.at("edges");
        if (jedges.size() != index.graph.edges().size())
            throw IndexError("edge table size mismatch");
        for (EdgeId id = 0; id < jedges.size(); ++id) {
            ChainEdge& e = index.graph.edge(id);
            const auto& je = jedges[id];
            e.dist = je.at("dist").is_null() ? kInfDist
                                             : je.at("dist").get<double>();
            e.pred = je.at("pred").is_null() ? kNoEdge
                                             : je.at("pred").get<EdgeId>();
            if (e.pred != kNoEdge && e.pred >= index.graph.edges().size())
                throw IndexError("edge predecessor out of range");
        }

        index.preds.assign(index.graph.node_count(), {});
        PredsAudit scratch;
        for (const auto& jr : doc.at("preds")) {
            const NodeId v = jr.at(0).get<NodeId>();
            const double start = jr.at(1).get<double>();
            const double end = jr.at(2).get<double>();
            const EdgeId edge = jr.at(3).get<EdgeId>();
            const double dist = jr.at(4).get<double>();
            if (v >= index.preds.size() || edge >= index.graph.edges().size() ||
                !(start <= end))
                throw IndexError("invalid predecessor range");
            index.preds[v].insert(AngularInterval{start, end - start}, edge,
                                  dist, scratch);
        }
        return index;
    } catch (const json::exception& ex) {
        throw IndexError(std::string("corrupt index file: ") + ex.what());
    } catch (const SceneError& ex) {
        throw IndexError(std::string("corrupt index file: ") + ex.what());
    } catch (const std::logic_error& ex) {
        throw IndexError(std::string("corrupt index file: ") + ex.what());
    }
}

}  // namespace rcs
