#include "demoswarm/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace demoswarm {

Vec2 closest_point_on_segment(Vec2 p, const Segment& s) {
    const Vec2 ab = s.b - s.a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return s.a;
    const double t = std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0);
    return s.a + ab * t;
}

double distance_to_segment(Vec2 p, const Segment& s) {
    return distance(p, closest_point_on_segment(p, s));
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment(Vec2 p, const Segment& s) {
    return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
           std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

}  // namespace

bool segments_intersect(const Segment& s, const Segment& t) {
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(t.a, s)) return true;
    if (o2 == 0 && on_segment(t.b, s)) return true;
    if (o3 == 0 && on_segment(s.a, t)) return true;
    if (o4 == 0 && on_segment(s.b, t)) return true;
    return false;
}

std::optional<double> ray_circle(Vec2 origin, Vec2 dir, Vec2 center, double radius) {
    const Vec2 oc = origin - center;
    const double b = dot(oc, dir);
    const double c = dot(oc, oc) - radius * radius;
    if (c <= 0.0) return 0.0;  // origin inside
    const double disc = b * b - c;
    if (disc < 0.0) return std::nullopt;
    const double t = -b - std::sqrt(disc);
    if (t < 0.0) return std::nullopt;
    return t;
}

std::optional<double> ray_segment(Vec2 origin, Vec2 dir, const Segment& s) {
    const Vec2 e = s.b - s.a;
    const double denom = cross(dir, e);
    const Vec2 ao = s.a - origin;
    if (denom == 0.0) return std::nullopt;  // parallel; grazing hits ignored
    const double t = cross(ao, e) / denom;
    const double u = cross(ao, dir) / denom;
    if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return t;
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> ccw_vertices) : vertices_(std::move(ccw_vertices)) {
    if (vertices_.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices_[i];
        const Vec2 b = vertices_[(i + 1) % n];
        const Vec2 e = b - a;
        const double len = norm(e);
        if (len == 0.0) throw std::invalid_argument("polygon has a zero-length edge");
        const Vec2 inward{-e.y / len, e.x / len};
        normals_.push_back(inward);
        offsets_.push_back(dot(inward, a));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (dot(normals_[i], vertices_[j]) - offsets_[i] < -1e-12)
                throw std::invalid_argument("polygon is not convex counter-clockwise");
        }
    }
}

ConvexPolygon ConvexPolygon::regular(int sides, double circumradius) {
    if (sides < 3) throw std::invalid_argument("regular polygon needs >= 3 sides");
    if (!(circumradius > 0.0)) throw std::invalid_argument("circumradius must be positive");
    std::vector<Vec2> v;
    v.reserve(static_cast<std::size_t>(sides));
    for (int k = 0; k < sides; ++k) {
        const double a = 2.0 * std::numbers::pi * k / sides;
        v.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
    }
    return ConvexPolygon(std::move(v));
}

std::vector<Segment> ConvexPolygon::edges() const {
    std::vector<Segment> out;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back({vertices_[i], vertices_[(i + 1) % n]});
    return out;
}

bool ConvexPolygon::contains(Vec2 p) const { return signed_clearance(p) >= 0.0; }

double ConvexPolygon::signed_clearance(Vec2 p) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < normals_.size(); ++i) m = std::min(m, dot(normals_[i], p) - offsets_[i]);
    return m;
}

double ConvexPolygon::area() const {
    double a = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) a += cross(vertices_[i], vertices_[(i + 1) % n]);
    return 0.5 * a;
}

std::pair<Vec2, Vec2> ConvexPolygon::bounds() const {
    Vec2 lo = vertices_.front(), hi = vertices_.front();
    for (const Vec2 v : vertices_) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
    return {lo, hi};
}

}  // namespace demoswarm
