#pragma once

// Discrete-time kinematic simulation of differential-drive robots with
// RM1.1-style sensing inside a convex polygonal arena.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "demoswarm/geometry.hpp"
#include "demoswarm/rng.hpp"

namespace demoswarm {

enum class FloorColor { black, gray, white };

struct CircleShape {
    Vec2 center;
    double radius = 0.0;
    bool operator==(const CircleShape&) const = default;
};

/// Oriented rectangle; orientation rotates the width axis counter-clockwise from +x.
struct RectShape {
    Vec2 center;
    double width = 0.0;
    double height = 0.0;
    double orientation = 0.0;
    bool operator==(const RectShape&) const = default;
};

struct RegionSpec {
    std::variant<CircleShape, RectShape> shape;
    FloorColor color = FloorColor::black;

    bool contains(Vec2 p) const;
    /// p itself when inside, otherwise the closest boundary point.
    Vec2 nearest_point(Vec2 p) const;
    bool operator==(const RegionSpec&) const = default;
};

struct LightSpec {
    Vec2 position;
    bool on = false;
    bool operator==(const LightSpec&) const = default;
};

/// Raw arena description, as read from a mission file.
struct ArenaSpec {
    int sides = 12;
    double circumradius = 1.29;
    std::vector<RegionSpec> regions;  // later entries drawn on top
    std::vector<Segment> walls;       // internal walls
    std::optional<LightSpec> light;
    bool operator==(const ArenaSpec&) const = default;
};

/// Validated arena with cached boundary geometry.
class Arena {
public:
    explicit Arena(ArenaSpec spec);

    const ArenaSpec& spec() const { return spec_; }
    const ConvexPolygon& boundary() const { return boundary_; }
    std::span<const Segment> boundary_edges() const { return edges_; }
    std::span<const Segment> walls() const { return spec_.walls; }
    std::span<const RegionSpec> regions() const { return spec_.regions; }
    /// Vertex-to-vertex diameter, the d of the distance scaling.
    double diameter() const { return 2.0 * spec_.circumradius; }
    bool light_on() const { return spec_.light && spec_.light->on; }

    bool contains(Vec2 p) const { return boundary_.contains(p); }
    /// Distance from p to the nearest boundary edge or internal wall.
    double clearance(Vec2 p) const;

private:
    ArenaSpec spec_;
    ConvexPolygon boundary_;
    std::vector<Segment> edges_;
};

/// Throws OutsideArena when p is not inside the boundary.
FloorColor floor_color(const Arena& arena, Vec2 p);

struct SimParams {
    double dt = 0.1;
    double v_max = 0.12;
    double robot_diameter = 0.07;
    double axle_length = 0.053;
    double proximity_range = 0.03;
    double rab_range = 0.50;
    double noise = 0.05;

    double robot_radius() const { return 0.5 * robot_diameter; }
    void validate() const;
    bool operator==(const SimParams&) const = default;
};

struct RobotState {
    Vec2 position;
    double heading = 0.0;
    bool operator==(const RobotState&) const = default;
};

struct SwarmState {
    std::vector<RobotState> robots;
    std::size_t size() const { return robots.size(); }
    bool operator==(const SwarmState&) const = default;
};

inline constexpr std::size_t kProximitySensors = 8;
inline constexpr std::size_t kLightSensors = 8;
inline constexpr std::size_t kGroundSensors = 3;

/// Sensor bearing in the robot frame; sensor 0 looks straight ahead.
inline double sensor_angle(std::size_t i) { return static_cast<double>(i) * std::numbers::pi / 4.0; }

struct Rm11Reading {
    std::array<double, kProximitySensors> proximity{};
    std::array<double, kLightSensors> light{};
    std::array<FloorColor, kGroundSensors> ground{FloorColor::gray, FloorColor::gray, FloorColor::gray};
    int neighbor_count = 0;
    Vec2 neighbor_vector;  // robot frame, |v| <= 1

    /// Majority vote over the ground sensors; gray when all three disagree.
    FloorColor floor() const;
    bool operator==(const Rm11Reading&) const = default;
};

struct WheelSpeeds {
    double left = 0.0;
    double right = 0.0;
    bool operator==(const WheelSpeeds&) const = default;
};

/// One control-step reading for robot `index`. `sq_dist_row`, when given, is the
/// robot's row of the pairwise squared-distance matrix for `swarm`.
Rm11Reading sense(const Arena& arena, const SimParams& params, const SwarmState& swarm,
                  std::size_t index, Rng& rng, std::span<const double> sq_dist_row = {});

/// Differential-drive kinematics, integrated exactly along the arc.
RobotState apply_actuation(const RobotState& robot, WheelSpeeds wheels, const SimParams& params);

/// True when every robot keeps a radius of clearance from the boundary and
/// walls and a diameter from every peer (up to `tolerance`).
bool is_clear(const Arena& arena, const SimParams& params, const SwarmState& swarm, double tolerance = 1e-9);

/// Stepping variant: `proposed` is `previous` after actuation. Each robot, in
/// index order, is moved back along its displacement to the first contact.
/// Requires `previous` to be clear.
SwarmState resolve_collisions(const Arena& arena, const SimParams& params,
                              const SwarmState& previous, const SwarmState& proposed);

/// History-free variant for arbitrary states: pushes robots out of walls along
/// the wall normal and separates overlapping pairs symmetrically.
SwarmState resolve_collisions(const Arena& arena, const SimParams& params, const SwarmState& swarm);

/// Uniform rejection sampling of non-overlapping robots; throws
/// InitializationFailure after 1e5 rejected samples.
SwarmState sample_initial_state(const Arena& arena, const SimParams& params, std::size_t n, Rng& rng);

struct Trace {
    std::vector<SwarmState> states;
    std::uint64_t seed = 0;
    double step_duration = 0.1;
    bool operator==(const Trace&) const = default;
};

/// floor(duration / dt) + 1, tolerant to representation error in the ratio.
std::size_t trace_length(double duration, double dt);

/// FNV-1a over the bit patterns of every state.
std::uint64_t trace_hash(const Trace& trace);

}  // namespace demoswarm
