#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rcs/geometry.hpp"

namespace rcs {

struct Segment {
    Point2 a;
    Point2 b;
};

/// Obstacle edges the planner must not cross. No zero-length segments.
struct SegmentSet {
    std::vector<Segment> segments;

    std::size_t count() const { return segments.size(); }
};

/// True when segment pq touches or crosses segment ab anywhere except at a
/// contact point lying within kContactEps of one of the ignore points.
/// Grazing contact and collinear overlap count as touching.
bool segment_contact(Point2 p, Point2 q, Point2 a, Point2 b,
                     std::span<const Point2> ignore);

/// Reference blocking test: scans every segment of the set.
bool blocked_linear(const SegmentSet& set, Point2 p, Point2 q,
                    std::span<const Point2> ignore = {});

/// Preprocessed blocking oracle over a fixed segment set. Answers exactly
/// like blocked_linear on every query; immutable after construction, so
/// concurrent queries are safe.
class OcclusionIndex {
public:
    OcclusionIndex() = default;
    explicit OcclusionIndex(const SegmentSet& set);

    /// Does segment pq touch any indexed segment, apart from contacts at
    /// the ignore points?
    bool blocked(Point2 p, Point2 q, std::span<const Point2> ignore = {}) const;

    std::size_t segment_count() const { return segments_.size(); }

private:
    struct Box {
        double min_x, min_y, max_x, max_y;
    };
    struct Node {
        Box box;
        std::int32_t left = -1;   // child index, -1 for leaves
        std::int32_t right = -1;
        std::uint32_t first = 0;  // leaf range into segments_
        std::uint32_t count = 0;
    };

    std::int32_t build(std::uint32_t first, std::uint32_t count);

    std::vector<Segment> segments_;  // leaf-ordered
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

/// Builds the preprocessed blocking oracle for a segment set.
inline OcclusionIndex build_index(const SegmentSet& set) {
    return OcclusionIndex(set);
}

}  // namespace rcs
