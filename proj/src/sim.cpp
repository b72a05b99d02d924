#include "demoswarm/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "demoswarm/errors.hpp"

namespace demoswarm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::array<Vec2, kProximitySensors> kSensorDirections = [] {
    std::array<Vec2, kProximitySensors> d{};
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = unit(sensor_angle(i));
    return d;
}();
// Ground sensor positions in the robot frame (front of the body).
constexpr std::array<Vec2, kGroundSensors> kGroundOffsets{{{0.02, 0.01}, {0.02, 0.0}, {0.02, -0.01}}};

// Backoff after a truncated move so the robot stays strictly clear.
constexpr double kContactBackoff = 1e-9;

Vec2 to_rect_frame(const RectShape& r, Vec2 p) { return rotate(p - r.center, -r.orientation); }

FloorColor color_at(const Arena& arena, Vec2 p) {
    FloorColor c = FloorColor::gray;
    for (const RegionSpec& region : arena.regions())
        if (region.contains(p)) c = region.color;
    return c;
}

// Earliest t in [0, 1] at which p0 + t*d enters the closed disc, if any.
std::optional<double> disc_entry(Vec2 p0, Vec2 d, Vec2 center, double radius) {
    const Vec2 rel = p0 - center;
    const double a = dot(d, d);
    const double b = dot(d, rel);
    if (a == 0.0 || b >= 0.0) return std::nullopt;  // not approaching
    const double c = dot(rel, rel) - radius * radius;
    if (c <= 0.0) return 0.0;
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double t = (-b - std::sqrt(disc)) / a;
    if (t > 1.0) return std::nullopt;
    return std::max(t, 0.0);
}

// Earliest entry into the capsule of radius r around segment s.
std::optional<double> capsule_entry(Vec2 p0, Vec2 d, const Segment& s, double r) {
    std::optional<double> best;
    auto take = [&](std::optional<double> t) {
        if (t && (!best || *t < *best)) best = t;
    };
    take(disc_entry(p0, d, s.a, r));
    take(disc_entry(p0, d, s.b, r));

    const Vec2 e = s.b - s.a;
    const double len = norm(e);
    if (len > 0.0) {
        const Vec2 u = e * (1.0 / len);
        const Vec2 v{-u.y, u.x};
        const Vec2 rel = p0 - s.a;
        if (dot(rel, v) * dot(d, v) >= 0.0) return best;  // not approaching the wall line
        // Slab intersection over t in [0, 1] for 0 <= u.p <= len and |v.p| <= r.
        double t_enter = 0.0, t_exit = 1.0;
        auto slab = [&](double pos, double vel, double lo, double hi) {
            if (vel == 0.0) {
                if (pos < lo || pos > hi) t_enter = kInf;
                return;
            }
            double t0 = (lo - pos) / vel, t1 = (hi - pos) / vel;
            if (t0 > t1) std::swap(t0, t1);
            t_enter = std::max(t_enter, t0);
            t_exit = std::min(t_exit, t1);
        };
        slab(dot(rel, u), dot(d, u), 0.0, len);
        slab(dot(rel, v), dot(d, v), -r, r);
        if (t_enter <= t_exit) take(t_enter);
    }
    return best;
}

}  // namespace

bool RegionSpec::contains(Vec2 p) const {
    if (const auto* c = std::get_if<CircleShape>(&shape)) {
        const Vec2 rel = p - c->center;
        return dot(rel, rel) <= c->radius * c->radius;
    }
    const auto& r = std::get<RectShape>(shape);
    const Vec2 local = to_rect_frame(r, p);
    return std::abs(local.x) <= 0.5 * r.width && std::abs(local.y) <= 0.5 * r.height;
}

Vec2 RegionSpec::nearest_point(Vec2 p) const {
    if (contains(p)) return p;
    if (const auto* c = std::get_if<CircleShape>(&shape)) {
        const Vec2 rel = p - c->center;
        return c->center + rel * (c->radius / norm(rel));
    }
    const auto& r = std::get<RectShape>(shape);
    const Vec2 local = to_rect_frame(r, p);
    const Vec2 clamped{std::clamp(local.x, -0.5 * r.width, 0.5 * r.width),
                       std::clamp(local.y, -0.5 * r.height, 0.5 * r.height)};
    return r.center + rotate(clamped, r.orientation);
}

Arena::Arena(ArenaSpec spec) : spec_(std::move(spec)) {
    if (spec_.sides < 3) throw InvalidArgument("arena needs at least 3 sides");
    if (!(spec_.circumradius > 0.0)) throw InvalidArgument("arena circumradius must be positive");
    boundary_ = ConvexPolygon::regular(spec_.sides, spec_.circumradius);
    edges_ = boundary_.edges();

    for (const RegionSpec& region : spec_.regions) {
        if (region.color == FloorColor::gray) throw InvalidArgument("regions must be black or white");
        if (const auto* c = std::get_if<CircleShape>(&region.shape)) {
            if (!(c->radius > 0.0)) throw InvalidArgument("region radius must be positive");
            if (boundary_.signed_clearance(c->center) < c->radius)
                throw InvalidArgument("circular region extends outside the arena");
        } else {
            const auto& r = std::get<RectShape>(region.shape);
            if (!(r.width > 0.0) || !(r.height > 0.0)) throw InvalidArgument("region extent must be positive");
            for (double sx : {-0.5, 0.5})
                for (double sy : {-0.5, 0.5})
                    if (!boundary_.contains(r.center + rotate({sx * r.width, sy * r.height}, r.orientation)))
                        throw InvalidArgument("rectangular region extends outside the arena");
        }
    }
    for (const Segment& w : spec_.walls)
        if (!boundary_.contains(w.a) || !boundary_.contains(w.b)) throw InvalidArgument("wall outside the arena");
    if (spec_.light && boundary_.contains(spec_.light->position))
        throw InvalidArgument("light source must be outside the arena");
}

double Arena::clearance(Vec2 p) const {
    double c = boundary_.signed_clearance(p);
    for (const Segment& w : spec_.walls) c = std::min(c, distance_to_segment(p, w));
    return c;
}

FloorColor floor_color(const Arena& arena, Vec2 p) {
    if (!arena.contains(p)) throw OutsideArena("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    return color_at(arena, p);
}

void SimParams::validate() const {
    if (!(dt > 0.0) || !(v_max > 0.0) || !(robot_diameter > 0.0) || !(axle_length > 0.0) ||
        !(proximity_range > 0.0) || !(rab_range > 0.0) || !(noise >= 0.0))
        throw InvalidArgument("simulation parameters must be positive (noise non-negative)");
}

FloorColor Rm11Reading::floor() const {
    for (FloorColor c : {FloorColor::black, FloorColor::white, FloorColor::gray}) {
        const auto votes = std::count(ground.begin(), ground.end(), c);
        if (votes >= 2) return c;
    }
    return FloorColor::gray;
}

Rm11Reading sense(const Arena& arena, const SimParams& params, const SwarmState& swarm,
                  std::size_t index, Rng& rng, std::span<const double> sq_dist_row) {
    const RobotState& self = swarm.robots.at(index);
    const std::size_t n = swarm.size();
    const double r = params.robot_radius();

    std::vector<double> own_row;
    if (sq_dist_row.empty()) {
        own_row.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = swarm.robots[j].position.x - self.position.x;
            const double dy = swarm.robots[j].position.y - self.position.y;
            own_row[j] = dx * dx + dy * dy;
        }
        sq_dist_row = own_row;
    }

    Rm11Reading out;
    const Vec2 heading = unit(self.heading);
    auto to_world = [&](Vec2 v) { return Vec2{heading.x * v.x - heading.y * v.y, heading.y * v.x + heading.x * v.y}; };

    // Proximity: distance from the body edge along each sensor ray.
    const double reach = 2.0 * r + params.proximity_range;
    // anything farther than this reads 0 on every sensor
    const double seg_reach = r + params.proximity_range;
    thread_local std::vector<const Segment*> near_segments;
    near_segments.clear();
    auto collect = [&](std::span<const Segment> segs) {
        for (const Segment& e : segs)
            if (distance_to_segment(self.position, e) <= seg_reach) near_segments.push_back(&e);
    };
    collect(arena.boundary_edges());
    collect(arena.walls());
    bool peers_near = false;
    for (std::size_t j = 0; j < n; ++j) peers_near = peers_near || (j != index && sq_dist_row[j] < reach * reach);
    for (std::size_t s = 0; s < kProximitySensors && (!near_segments.empty() || peers_near); ++s) {
        const Vec2 dir = to_world(kSensorDirections[s]);
        double hit = kInf;
        for (const Segment* e : near_segments)
            if (auto t = ray_segment(self.position, dir, *e)) hit = std::min(hit, *t);
        for (std::size_t j = 0; j < n && peers_near; ++j) {
            if (j == index || sq_dist_row[j] >= reach * reach) continue;
            if (auto t = ray_circle(self.position, dir, swarm.robots[j].position, r)) hit = std::min(hit, *t);
        }
        const double gap = std::max(0.0, hit - r);
        out.proximity[s] = std::clamp(1.0 - gap / params.proximity_range, 0.0, 1.0);
    }

    if (arena.light_on()) {
        const Vec2 rel = arena.spec().light->position - self.position;
        const double d2 = dot(rel, rel);
        const double intensity = std::min(1.0, 1.0 / d2);
        const double bearing = std::atan2(rel.y, rel.x) - self.heading;
        for (std::size_t s = 0; s < kLightSensors; ++s)
            out.light[s] = intensity * std::max(0.0, std::cos(bearing - sensor_angle(s)));
    }

    if (params.noise > 0.0) {
        auto perturb = [&](double& v) {
            if (v > 0.0) v = std::clamp(v + rng.uniform(-params.noise, params.noise), 0.0, 1.0);
        };
        for (double& v : out.proximity) perturb(v);
        for (double& v : out.light) perturb(v);
    }

    for (std::size_t g = 0; g < kGroundSensors; ++g)
        out.ground[g] = color_at(arena, self.position + to_world(kGroundOffsets[g]));

    Vec2 sum;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == index || sq_dist_row[j] >= params.rab_range * params.rab_range) continue;
        sum += swarm.robots[j].position - self.position;
        ++out.neighbor_count;
    }
    sum = Vec2{heading.x * sum.x + heading.y * sum.y, -heading.y * sum.x + heading.x * sum.y};
    if (out.neighbor_count > 0) out.neighbor_vector = sum * (1.0 / (out.neighbor_count * params.rab_range));
    return out;
}

RobotState apply_actuation(const RobotState& robot, WheelSpeeds wheels, const SimParams& params) {
    const double left = std::clamp(wheels.left, -params.v_max, params.v_max);
    const double right = std::clamp(wheels.right, -params.v_max, params.v_max);
    const double v = 0.5 * (left + right);
    const double omega = (right - left) / params.axle_length;
    const double dtheta = omega * params.dt;

    RobotState out = robot;
    if (v != 0.0) {
        if (std::abs(dtheta) < 1e-12) {
            out.position += unit(robot.heading) * (v * params.dt);
        } else {
            const double radius = v / omega;
            out.position.x += radius * (std::sin(robot.heading + dtheta) - std::sin(robot.heading));
            out.position.y -= radius * (std::cos(robot.heading + dtheta) - std::cos(robot.heading));
        }
    }
    if (dtheta != 0.0) out.heading = wrap_angle(robot.heading + dtheta);
    return out;
}

bool is_clear(const Arena& arena, const SimParams& params, const SwarmState& swarm, double tolerance) {
    const double r = params.robot_radius();
    const double d = params.robot_diameter;
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        const Vec2 p = swarm.robots[i].position;
        if (arena.clearance(p) < r - tolerance) return false;
        for (std::size_t j = i + 1; j < swarm.size(); ++j)
            if (distance(p, swarm.robots[j].position) < d - tolerance) return false;
    }
    return true;
}

SwarmState resolve_collisions(const Arena& arena, const SimParams& params,
                              const SwarmState& previous, const SwarmState& proposed) {
    if (previous.size() != proposed.size()) throw SizeMismatch("previous/proposed swarm sizes differ");
    const double r = params.robot_radius();
    const double d = params.robot_diameter;
    SwarmState out = proposed;
    // Robots not yet processed still sit at their previous positions.
    for (std::size_t i = 0; i < out.size(); ++i) out.robots[i].position = previous.robots[i].position;

    for (std::size_t i = 0; i < out.size(); ++i) {
        const Vec2 p0 = previous.robots[i].position;
        const Vec2 step = proposed.robots[i].position - p0;
        if (step == Vec2{}) continue;

        double t = 1.0;
        auto limit = [&](std::optional<double> entry) {
            if (entry) t = std::min(t, *entry);
        };
        const Vec2 p1 = p0 + step;
        const bool free_wall = arena.clearance(p1) >= r;
        bool free_peer = true;
        for (std::size_t j = 0; j < out.size() && free_peer; ++j)
            if (j != i && distance(p1, out.robots[j].position) < d) free_peer = false;
        if (free_wall && free_peer) {
            out.robots[i].position = p1;
            continue;
        }

        for (const Segment& e : arena.boundary_edges()) limit(capsule_entry(p0, step, e, r));
        for (const Segment& w : arena.walls()) limit(capsule_entry(p0, step, w, r));
        for (std::size_t j = 0; j < out.size(); ++j)
            if (j != i) limit(disc_entry(p0, step, out.robots[j].position, d));

        const double len = norm(step);
        const double frac = std::max(0.0, t - kContactBackoff / len);
        Vec2 candidate = p0 + step * frac;
        bool ok = arena.clearance(candidate) >= r - 1e-12;
        for (std::size_t j = 0; j < out.size() && ok; ++j)
            if (j != i && distance(candidate, out.robots[j].position) < d - 1e-12) ok = false;
        out.robots[i].position = ok ? candidate : p0;
    }
    return out;
}

SwarmState resolve_collisions(const Arena& arena, const SimParams& params, const SwarmState& swarm) {
    const double r = params.robot_radius();
    const double d = params.robot_diameter;
    SwarmState out = swarm;
    for (int pass = 0; pass < 200; ++pass) {
        bool moved = false;
        for (RobotState& robot : out.robots) {
            Vec2& p = robot.position;
            for (int k = 0; k < 8; ++k) {
                // Boundary: push along the inward normal of the closest edge.
                double worst = kInf;
                Vec2 push;
                for (const Segment& e : arena.boundary_edges()) {
                    const Vec2 ev = e.b - e.a;
                    const Vec2 inward = Vec2{-ev.y, ev.x} * (1.0 / norm(ev));
                    const double c = dot(inward, p - e.a);
                    if (c < worst) {
                        worst = c;
                        push = inward;
                    }
                }
                if (worst < r) {
                    p += push * (r - worst);
                    moved = true;
                    continue;
                }
                bool pushed = false;
                for (const Segment& w : arena.walls()) {
                    const Vec2 q = closest_point_on_segment(p, w);
                    const double dist = distance(p, q);
                    if (dist >= r) continue;
                    Vec2 n = p - q;
                    if (dist == 0.0) {
                        const Vec2 ev = w.b - w.a;
                        n = Vec2{-ev.y, ev.x};
                    }
                    p = q + n * (r / norm(n));
                    pushed = moved = true;
                }
                if (!pushed) break;
            }
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (std::size_t j = i + 1; j < out.size(); ++j) {
                Vec2& a = out.robots[i].position;
                Vec2& b = out.robots[j].position;
                Vec2 axis = b - a;
                double dist = norm(axis);
                if (dist >= d) continue;
                if (dist == 0.0) {
                    axis = {1.0, 0.0};
                    dist = 0.0;
                } else {
                    axis = axis * (1.0 / dist);
                }
                const Vec2 mid = (a + b) * 0.5;
                a = mid - axis * (0.5 * d);
                b = mid + axis * (0.5 * d);
                moved = true;
            }
        }
        if (!moved) break;
    }
    return out;
}

SwarmState sample_initial_state(const Arena& arena, const SimParams& params, std::size_t n, Rng& rng) {
    constexpr int kMaxSamples = 100000;
    const auto [lo, hi] = arena.boundary().bounds();
    const double r = params.robot_radius();
    const double d2 = params.robot_diameter * params.robot_diameter;
    SwarmState s;
    s.robots.reserve(n);
    int samples = 0;
    while (s.size() < n) {
        if (++samples > kMaxSamples)
            throw InitializationFailure("could not place " + std::to_string(n) + " robots in " +
                                        std::to_string(kMaxSamples) + " samples");
        const Vec2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        const double heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
        if (arena.clearance(p) < r) continue;
        bool overlap = false;
        for (const RobotState& other : s.robots) {
            const Vec2 rel = other.position - p;
            if (dot(rel, rel) < d2) {
                overlap = true;
                break;
            }
        }
        if (!overlap) s.robots.push_back({p, heading});
    }
    return s;
}

std::size_t trace_length(double duration, double dt) {
    if (!(duration > 0.0) || !(dt > 0.0)) throw InvalidArgument("duration and dt must be positive");
    return static_cast<std::size_t>(std::floor(duration / dt + 1e-9)) + 1;
}

std::uint64_t trace_hash(const Trace& trace) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](double v) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        for (int k = 0; k < 8; ++k) {
            h ^= (bits >> (8 * k)) & 0xFF;
            h *= 0x100000001b3ULL;
        }
    };
    for (const SwarmState& s : trace.states)
        for (const RobotState& r : s.robots) {
            feed(r.position.x);
            feed(r.position.y);
            feed(r.heading);
        }
    return h;
}

}  // namespace demoswarm
