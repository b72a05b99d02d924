#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace demoswarm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::sqrt(dot(v, v)); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Rotates v by angle (counter-clockwise).
inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wraps an angle to [-pi, pi).
inline double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = a - two_pi * std::floor((a + std::numbers::pi) / two_pi);
    if (r >= std::numbers::pi) r -= two_pi;
    if (r < -std::numbers::pi) r += two_pi;
    return r;
}

struct Segment {
    Vec2 a;
    Vec2 b;
    bool operator==(const Segment&) const = default;
};

Vec2 closest_point_on_segment(Vec2 p, const Segment& s);
double distance_to_segment(Vec2 p, const Segment& s);

/// Inclusive intersection test: touching endpoints and collinear overlap count.
bool segments_intersect(const Segment& s, const Segment& t);

/// Smallest t >= 0 with |origin + t*dir - center| = radius, dir unit length.
std::optional<double> ray_circle(Vec2 origin, Vec2 dir, Vec2 center, double radius);
/// Smallest t >= 0 where the ray hits the segment.
std::optional<double> ray_segment(Vec2 origin, Vec2 dir, const Segment& s);

/// Convex polygon with counter-clockwise vertices.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Vec2> ccw_vertices);

    static ConvexPolygon regular(int sides, double circumradius);

    std::span<const Vec2> vertices() const { return vertices_; }
    std::vector<Segment> edges() const;
    bool contains(Vec2 p) const;
    /// Minimum distance from an interior point to the boundary (negative outside).
    double signed_clearance(Vec2 p) const;
    double area() const;
    /// Axis-aligned bounds: min corner, max corner.
    std::pair<Vec2, Vec2> bounds() const;

private:
    std::vector<Vec2> vertices_;
    // Inward unit normals and offsets: n.p - c >= 0 inside.
    std::vector<Vec2> normals_;
    std::vector<double> offsets_;
};

}  // namespace demoswarm
