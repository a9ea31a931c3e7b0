#include "rcs/scene.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rcs {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        hash ^= (value >> (8 * i)) & 0xffu;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::uint64_t fnv1a(std::uint64_t hash, double value) {
    return fnv1a(hash, std::bit_cast<std::uint64_t>(value));
}

bool polygon_is_simple(const std::vector<Point2>& poly) {
    const std::size_t m = poly.size();
    if (m < 3) return false;
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % m];
        if (distance(a, b) < kAnchorEps) return false;
        for (std::size_t j = i + 1; j < m; ++j) {
            const Point2 c = poly[j];
            const Point2 d = poly[(j + 1) % m];
            const bool adjacent = j == i + 1 || (i == 0 && j == m - 1);
            if (adjacent) {
                // Shared endpoint is fine; a zero-area spike is not.
                const Point2 shared = j == i + 1 ? b : a;
                const Point2 e1 = (j == i + 1 ? a : b) - shared;
                const Point2 e2 = (j == i + 1 ? d : c) - shared;
                if (std::abs(cross(e1, e2)) < kAnchorEps && dot(e1, e2) > 0)
                    return false;
                continue;
            }
            if (segment_contact(a, b, c, d, {})) return false;
        }
    }
    return true;
}

bool polygons_disjoint(const std::vector<Point2>& p,
                       const std::vector<Point2>& q) {
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            if (segment_contact(p[i], p[(i + 1) % p.size()], q[j],
                                q[(j + 1) % q.size()], {}))
                return false;
    // No edge contact: nesting is the only remaining overlap.
    if (point_in_polygon(q, p[0])) return false;
    if (point_in_polygon(p, q[0])) return false;
    return true;
}

Point2 parse_point(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SceneError(std::string(what) + " must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::size_t Scene::vertex_count() const {
    std::size_t n = 0;
    for (const auto& poly : obstacles) n += poly.size();
    return n;
}

bool point_in_polygon(const std::vector<Point2>& polygon, Point2 p) {
    const std::size_t m = polygon.size();
    bool inside = false;
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const Point2 a = polygon[j];
        const Point2 b = polygon[i];
        // Boundary counts as inside.
        const double orient = cross(b - a, p - a);
        if (orient == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
            std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y))
            return true;
        if ((b.y > p.y) != (a.y > p.y)) {
            const double t = (p.y - b.y) / (a.y - b.y);
            const double xc = b.x + t * (a.x - b.x);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

bool point_in_any_obstacle(const Scene& scene, Point2 p) {
    for (const auto& poly : scene.obstacles)
        if (point_in_polygon(poly, p)) return true;
    return false;
}

SegmentSet obstacle_segments(const Scene& scene) {
    SegmentSet set;
    for (const auto& poly : scene.obstacles)
        for (std::size_t i = 0; i < poly.size(); ++i)
            set.segments.push_back({poly[i], poly[(i + 1) % poly.size()]});
    return set;
}

void validate_scene(const Scene& scene) {
    if (!(scene.min_leg > 0.0)) throw SceneError("l must be positive");
    if (!(scene.alpha > 0.0 && scene.alpha < kPi))
        throw SceneError("alpha must be in (0, 180) degrees exclusive");
    if (!std::isfinite(scene.source.x) || !std::isfinite(scene.source.y))
        throw SceneError("source coordinates must be finite");
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        const auto& poly = scene.obstacles[i];
        if (poly.size() < 3)
            throw SceneError("obstacle " + std::to_string(i) +
                             " needs at least 3 vertices");
        for (const Point2& v : poly)
            if (!std::isfinite(v.x) || !std::isfinite(v.y))
                throw SceneError("obstacle coordinates must be finite");
        if (!polygon_is_simple(poly))
            throw SceneError("obstacle " + std::to_string(i) +
                             " is not a simple polygon");
        for (std::size_t j = 0; j < i; ++j)
            if (!polygons_disjoint(poly, scene.obstacles[j]))
                throw SceneError("obstacles " + std::to_string(j) + " and " +
                                 std::to_string(i) + " are not disjoint");
    }
    if (point_in_any_obstacle(scene, scene.source))
        throw SceneError("source lies inside an obstacle");
    if (scene.target && point_in_any_obstacle(scene, *scene.target))
        throw SceneError("target lies inside an obstacle");
}

std::uint64_t scene_fingerprint(const Scene& scene) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    h = fnv1a(h, static_cast<std::uint64_t>(scene.obstacles.size()));
    for (const auto& poly : scene.obstacles) {
        h = fnv1a(h, static_cast<std::uint64_t>(poly.size()));
        for (const Point2& v : poly) {
            h = fnv1a(h, v.x);
            h = fnv1a(h, v.y);
        }
    }
    h = fnv1a(h, scene.source.x);
    h = fnv1a(h, scene.source.y);
    h = fnv1a(h, scene.min_leg);
    h = fnv1a(h, scene.alpha);
    return h;
}

Scene parse_scene(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& ex) {
        throw SceneError(std::string("scene parse failed: ") + ex.what());
    }
    if (!doc.is_object()) throw SceneError("scene document must be an object");

    Scene scene;
    try {
        if (!doc.contains("l") || !doc["l"].is_number())
            throw SceneError("missing numeric field 'l'");
        scene.min_leg = doc["l"].get<double>();
        if (!doc.contains("alpha_degrees") || !doc["alpha_degrees"].is_number())
            throw SceneError("missing numeric field 'alpha_degrees'");
        scene.alpha = doc["alpha_degrees"].get<double>() * kPi / 180.0;
        if (!doc.contains("source")) throw SceneError("missing field 'source'");
        scene.source = parse_point(doc["source"], "source");
        if (doc.contains("target") && !doc["target"].is_null())
            scene.target = parse_point(doc["target"], "target");
        if (doc.contains("obstacles")) {
            if (!doc["obstacles"].is_array())
                throw SceneError("'obstacles' must be an array of polygons");
            for (const auto& jpoly : doc["obstacles"]) {
                std::vector<Point2> poly;
                for (const auto& jv : jpoly)
                    poly.push_back(parse_point(jv, "obstacle vertex"));
                scene.obstacles.push_back(std::move(poly));
            }
        }
    } catch (const json::exception& ex) {
        throw SceneError(std::string("scene parse failed: ") + ex.what());
    }
    validate_scene(scene);
    return scene;
}

std::string serialize_scene(const Scene& scene) {
    json doc;
    doc["units"] = "scene units";
    doc["l"] = scene.min_leg;
    doc["alpha_degrees"] = scene.alpha * 180.0 / kPi;
    doc["source"] = {scene.source.x, scene.source.y};
    if (scene.target) doc["target"] = {scene.target->x, scene.target->y};
    doc["obstacles"] = json::array();
    for (const auto& poly : scene.obstacles) {
        json jpoly = json::array();
        for (const Point2& v : poly) jpoly.push_back({v.x, v.y});
        doc["obstacles"].push_back(std::move(jpoly));
    }
    return doc.dump(2) + "\n";
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SceneError("cannot open scene file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scene(buffer.str());
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SceneError("cannot write scene file: " + path);
    out << serialize_scene(scene);
}

}  // namespace rcs
