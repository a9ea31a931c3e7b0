#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcs/geometry.hpp"
#include "rcs/occlusion.hpp"

namespace rcs {

class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A planning instance: disjoint simple polygon obstacles, a source point,
/// an optional target, the minimum leg length l and the maximum per-turn
/// angle alpha (radians).
struct Scene {
    std::vector<std::vector<Point2>> obstacles;
    Point2 source;
    std::optional<Point2> target;
    double min_leg = 1.0;
    double alpha = kPi / 6.0;

    std::size_t vertex_count() const;
};

/// Even-odd test; points exactly on the boundary count as inside.
bool point_in_polygon(const std::vector<Point2>& polygon, Point2 p);

bool point_in_any_obstacle(const Scene& scene, Point2 p);

/// All obstacle edges of the scene.
SegmentSet obstacle_segments(const Scene& scene);

/// Checks polygon simplicity, pairwise disjointness, parameter ranges and
/// that source/target lie in free space. Throws SceneError on violation.
void validate_scene(const Scene& scene);

/// Order-sensitive hash of the scene's numeric content; used to pair
/// persisted planner indexes with the scene they were built from.
std::uint64_t scene_fingerprint(const Scene& scene);

/// Parse a scene document (JSON text). Throws SceneError on malformed input
/// or validation failure.
Scene parse_scene(const std::string& text);

/// Serialize so that parse_scene(serialize_scene(s)) reproduces every
/// numeric field exactly.
std::string serialize_scene(const Scene& scene);

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

}  // namespace rcs
