#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace rcs {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angle comparison tolerance (radians).
inline constexpr double kAngleEps = 1e-9;

/// Points closer than this are treated as coincident anchors.
inline constexpr double kAnchorEps = 1e-12;

/// Contact radius used when ignoring endpoint touches (scene units).
inline constexpr double kContactEps = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Wrap an angle to [0, 2pi).
double normalize_angle(double a);

/// Signed difference a - b wrapped to (-pi, pi].
double angle_diff(double a, double b);

/// Direction range on the circle. Covers [start, start + width] going
/// counter-clockwise; the covered arc may cross zero. width is in [0, 2pi].
struct AngularInterval {
    double start = 0.0;
    double width = 0.0;

    static AngularInterval full() { return {0.0, kTwoPi}; }
    static AngularInterval centered(double center, double half_width);

    /// Interval sweeping counter-clockwise from lo to hi. Spans of 2pi or
    /// more collapse to the full circle; lo == hi is a single direction.
    static AngularInterval from_bounds(double lo, double hi);

    bool contains(double angle, double eps = kAngleEps) const;
    double end() const { return normalize_angle(start + width); }
};

/// Polyline whose k interior turns all equal alpha to one side and whose
/// legs all have the same length e: a fragment of a regular polygon walked
/// from start to end.
struct RegularChain {
    Point2 start;
    Point2 end;
    int k = 0;                    // interior turning points
    int curvature = +1;           // +1 counter-clockwise turns, -1 clockwise
    double alpha = 0.0;           // per-turn angle (radians)
    double e = 0.0;               // leg length
    double beta = 0.0;            // entry-extension angle at start
    double total_length = 0.0;    // (k+1) * e
    std::vector<Point2> vertices; // k+2 points, vertices[0]==start
};

/// Largest admissible number of interior turning points for a given alpha:
/// the chain plus its closing chord must stay a sub-polygon of the regular
/// polygon with exterior angle alpha.
int max_turning_points(double alpha);

/// Construct the regular chain from u to v with k turning points, per-turn
/// angle alpha and the given bending side. Returns nullopt when no such
/// chain exists (turn budget exceeded or degenerate leg length). Throws
/// std::invalid_argument for coincident anchors or alpha outside (0, pi).
std::optional<RegularChain> build_chain(Point2 u, Point2 v, int k, double alpha,
                                        int curvature);

/// All regular chains from u to v with legs no shorter than min_leg, in
/// increasing k; for k >= 1 both bending sides are produced. Each bending
/// side stops at the first k whose leg length drops below min_leg.
std::vector<RegularChain> enumerate_chains(Point2 u, Point2 v, double alpha,
                                           double min_leg);

/// Direction of the first segment walked when traversing the chain,
/// normalized to [0, 2pi).
double departure_angle(const RegularChain& c, bool from_start);

/// Direction of the last segment walked when traversing the chain.
double arrival_angle(const RegularChain& c, bool from_start);

/// Admissible departure directions after arriving along the chain: the
/// arrival direction widened by alpha on both sides.
AngularInterval vlr(const RegularChain& c, bool from_start, double alpha);

}  // namespace rcs
