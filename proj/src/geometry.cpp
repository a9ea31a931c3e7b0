#include "rcs/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace rcs {

double normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double angle_diff(double a, double b) {
    double d = std::remainder(a - b, kTwoPi);
    return d <= -kPi ? d + kTwoPi : d;
}

AngularInterval AngularInterval::centered(double center, double half_width) {
    return {normalize_angle(center - half_width),
            std::min(2.0 * half_width, kTwoPi)};
}

AngularInterval AngularInterval::from_bounds(double lo, double hi) {
    const double span = hi - lo;
    if (span >= kTwoPi - kAngleEps) return full();
    return {normalize_angle(lo), normalize_angle(span)};
}

bool AngularInterval::contains(double angle, double eps) const {
    if (width >= kTwoPi) return true;
    const double delta = normalize_angle(angle - start);
    return delta <= width + eps || delta >= kTwoPi - eps;
}

int max_turning_points(double alpha) {
    return static_cast<int>(std::ceil(kTwoPi / alpha - kAngleEps)) - 2;
}

std::optional<RegularChain> build_chain(Point2 u, Point2 v, int k, double alpha,
                                        int curvature) {
    if (!(alpha > 0.0 && alpha < kPi))
        throw std::invalid_argument("per-turn angle must be in (0, pi)");
    if (k < 0) throw std::invalid_argument("turning-point count must be >= 0");
    if (curvature != 1 && curvature != -1)
        throw std::invalid_argument("curvature must be +1 or -1");
    const double span = distance(u, v);
    if (span < kAnchorEps) throw std::invalid_argument("coincident anchors");

    if (k > max_turning_points(alpha)) return std::nullopt;

    const double a = curvature * alpha;  // signed per-turn angle
    const double gamma = std::atan2(v.y - u.y, v.x - u.x);
    const double theta = 0.5 * k * a;
    const double beta = gamma - (a + theta);

    double sum_cos = 0.0;
    double sum_sin = 0.0;
    for (int i = 1; i <= k + 1; ++i) {
        const double phi = i * a + beta;
        sum_cos += std::cos(phi);
        sum_sin += std::sin(phi);
    }
    if (std::abs(sum_cos) < 1e-12 && std::abs(sum_sin) < 1e-12)
        return std::nullopt;
    const double e = std::abs(sum_cos) >= std::abs(sum_sin)
                         ? (v.x - u.x) / sum_cos
                         : (v.y - u.y) / sum_sin;
    if (!(e > 0.0) || !std::isfinite(e)) return std::nullopt;

    RegularChain c;
    c.start = u;
    c.end = v;
    c.k = k;
    c.curvature = curvature;
    c.alpha = alpha;
    c.e = e;
    c.beta = beta;
    c.total_length = (k + 1) * e;
    c.vertices.reserve(static_cast<std::size_t>(k) + 2);
    c.vertices.push_back(u);
    Point2 p = u;
    for (int i = 1; i <= k + 1; ++i) {
        const double phi = i * a + beta;
        p = p + e * Point2{std::cos(phi), std::sin(phi)};
        c.vertices.push_back(p);
    }
    if (distance(c.vertices.back(), v) > 1e-6 * span) return std::nullopt;
    c.vertices.back() = v;  // forward walk lands within tolerance; pin exactly
    return c;
}

std::vector<RegularChain> enumerate_chains(Point2 u, Point2 v, double alpha,
                                           double min_leg) {
    if (!(min_leg > 0.0)) throw std::invalid_argument("min_leg must be > 0");
    std::vector<RegularChain> out;
    const double span = distance(u, v);
    if (span < kAnchorEps) return out;

    if (span >= min_leg) {
        if (auto c = build_chain(u, v, 0, alpha, +1)) out.push_back(std::move(*c));
    }
    const int cap = max_turning_points(alpha);
    bool open_ccw = true;
    bool open_cw = true;
    for (int k = 1; k <= cap && (open_ccw || open_cw); ++k) {
        for (int curvature : {+1, -1}) {
            bool& open = curvature > 0 ? open_ccw : open_cw;
            if (!open) continue;
            auto c = build_chain(u, v, k, alpha, curvature);
            if (!c || c->e < min_leg) {
                open = false;
                continue;
            }
            out.push_back(std::move(*c));
        }
    }
    return out;
}

double departure_angle(const RegularChain& c, bool from_start) {
    const double a = c.curvature * c.alpha;
    return from_start ? normalize_angle(a + c.beta)
                      : normalize_angle((c.k + 1) * a + c.beta + kPi);
}

double arrival_angle(const RegularChain& c, bool from_start) {
    const double a = c.curvature * c.alpha;
    return from_start ? normalize_angle((c.k + 1) * a + c.beta)
                      : normalize_angle(a + c.beta + kPi);
}

AngularInterval vlr(const RegularChain& c, bool from_start, double alpha) {
    return AngularInterval::centered(arrival_angle(c, from_start), alpha);
}

}  // namespace rcs
