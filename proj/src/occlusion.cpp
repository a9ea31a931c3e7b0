#include "rcs/occlusion.hpp"

#include <algorithm>
#include <cmath>

namespace rcs {

namespace {

bool near_ignore(Point2 x, std::span<const Point2> ignore) {
    for (const Point2& g : ignore)
        if (distance(x, g) <= kContactEps) return true;
    return false;
}

// For collinear a,b,x: is x within the closed axis-aligned range of ab?
bool within_span(Point2 a, Point2 b, Point2 x) {
    return std::min(a.x, b.x) <= x.x && x.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= x.y && x.y <= std::max(a.y, b.y);
}

}  // namespace

bool segment_contact(Point2 p, Point2 q, Point2 a, Point2 b,
                     std::span<const Point2> ignore) {
    const Point2 pq = q - p;
    const Point2 ab = b - a;
    const double d1 = cross(pq, a - p);
    const double d2 = cross(pq, b - p);
    const double d3 = cross(ab, p - a);
    const double d4 = cross(ab, q - a);

    if ((d1 > 0 && d2 > 0) || (d1 < 0 && d2 < 0)) return false;
    if ((d3 > 0 && d4 > 0) || (d3 < 0 && d4 < 0)) return false;

    if (d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0) {
        // Proper interior crossing.
        const double t = d3 / (d3 - d4);  // along pq
        const Point2 x = p + t * pq;
        return !near_ignore(x, ignore);
    }

    if (d1 == 0 && d2 == 0) {
        // Collinear. Project onto the dominant axis and intersect ranges.
        const bool use_x = std::abs(pq.x) >= std::abs(pq.y);
        auto coord = [use_x](Point2 r) { return use_x ? r.x : r.y; };
        double plo = coord(p), phi = coord(q);
        if (plo > phi) std::swap(plo, phi);
        double alo = coord(a), ahi = coord(b);
        if (alo > ahi) std::swap(alo, ahi);
        const double lo = std::max(plo, alo);
        const double hi = std::min(phi, ahi);
        if (lo > hi) return false;
        auto at = [&](double c) -> Point2 {
            const double denom = coord(q) - coord(p);
            const double t = denom == 0 ? 0.0 : (c - coord(p)) / denom;
            return p + t * pq;
        };
        const Point2 c0 = at(lo);
        const Point2 c1 = at(hi);
        if (distance(c0, c1) <= kContactEps)
            return !(near_ignore(c0, ignore) && near_ignore(c1, ignore));
        return true;  // positive-length overlap is always a contact
    }

    // Endpoint touch: some orientation vanished without full collinearity.
    auto contact_at = [&](Point2 x) { return !near_ignore(x, ignore); };
    if (d1 == 0 && within_span(p, q, a) && contact_at(a)) return true;
    if (d2 == 0 && within_span(p, q, b) && contact_at(b)) return true;
    if (d3 == 0 && within_span(a, b, p) && contact_at(p)) return true;
    if (d4 == 0 && within_span(a, b, q) && contact_at(q)) return true;
    return false;
}

bool blocked_linear(const SegmentSet& set, Point2 p, Point2 q,
                    std::span<const Point2> ignore) {
    for (const Segment& s : set.segments)
        if (segment_contact(p, q, s.a, s.b, ignore)) return true;
    return false;
}

OcclusionIndex::OcclusionIndex(const SegmentSet& set)
    : segments_(set.segments) {
    if (!segments_.empty()) {
        nodes_.reserve(2 * segments_.size());
        root_ = build(0, static_cast<std::uint32_t>(segments_.size()));
    }
}

std::int32_t OcclusionIndex::build(std::uint32_t first, std::uint32_t count) {
    Node node;
    node.box = {segments_[first].a.x, segments_[first].a.y,
                segments_[first].a.x, segments_[first].a.y};
    for (std::uint32_t i = first; i < first + count; ++i) {
        for (Point2 pt : {segments_[i].a, segments_[i].b}) {
            node.box.min_x = std::min(node.box.min_x, pt.x);
            node.box.min_y = std::min(node.box.min_y, pt.y);
            node.box.max_x = std::max(node.box.max_x, pt.x);
            node.box.max_y = std::max(node.box.max_y, pt.y);
        }
    }
    if (count <= 4) {
        node.first = first;
        node.count = count;
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size()) - 1;
    }
    const bool split_x =
        node.box.max_x - node.box.min_x >= node.box.max_y - node.box.min_y;
    auto mid = segments_.begin() + first + count / 2;
    std::nth_element(segments_.begin() + first, mid,
                     segments_.begin() + first + count,
                     [split_x](const Segment& s, const Segment& t) {
                         const double cs = split_x ? s.a.x + s.b.x : s.a.y + s.b.y;
                         const double ct = split_x ? t.a.x + t.b.x : t.a.y + t.b.y;
                         return cs < ct;
                     });
    const std::int32_t self = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    const std::int32_t left = build(first, count / 2);
    const std::int32_t right = build(first + count / 2, count - count / 2);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

bool OcclusionIndex::blocked(Point2 p, Point2 q,
                             std::span<const Point2> ignore) const {
    if (root_ < 0) return false;
    const Box qbox{std::min(p.x, q.x), std::min(p.y, q.y), std::max(p.x, q.x),
                   std::max(p.y, q.y)};
    const Point2 pq = q - p;

    std::int32_t stack[64];
    int top = 0;
    stack[top++] = root_;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        const Box& b = node.box;
        if (b.min_x > qbox.max_x || b.max_x < qbox.min_x ||
            b.min_y > qbox.max_y || b.max_y < qbox.min_y)
            continue;
        // All four box corners strictly on one side of line pq: no contact.
        const double c1 = cross(pq, Point2{b.min_x, b.min_y} - p);
        const double c2 = cross(pq, Point2{b.min_x, b.max_y} - p);
        const double c3 = cross(pq, Point2{b.max_x, b.min_y} - p);
        const double c4 = cross(pq, Point2{b.max_x, b.max_y} - p);
        if ((c1 > 0 && c2 > 0 && c3 > 0 && c4 > 0) ||
            (c1 < 0 && c2 < 0 && c3 < 0 && c4 < 0))
            continue;
        if (node.left < 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
                if (segment_contact(p, q, segments_[i].a, segments_[i].b, ignore))
                    return true;
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    return false;
}

}  // namespace rcs
