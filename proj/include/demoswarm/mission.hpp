#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "demoswarm/sim.hpp"

namespace demoswarm {

enum class MissionKind { homing, aac, sac, cfa };

std::string_view mission_name(MissionKind k);
/// Case-insensitive; throws UnknownMission.
MissionKind parse_mission_name(std::string_view name);

struct Landmark {
    enum class Kind { region, nearest_peer };
    Kind kind = Kind::nearest_peer;
    std::size_t region = 0;  // index into the arena's regions, for Kind::region
    std::string label;       // "black0", "white0", "peer"
    bool operator==(const Landmark&) const = default;
};

struct MissionSpec {
    MissionKind kind = MissionKind::homing;
    Arena arena{ArenaSpec{}};
    std::size_t swarm_size = 20;
    double duration = 180.0;
    SimParams sim;

    /// Black regions in mission-file order, then white regions, then the nearest peer.
    std::vector<Landmark> landmarks() const;
    std::size_t feature_dimension() const { return landmarks().size() * swarm_size; }
    std::size_t steps() const { return trace_length(duration, sim.dt); }
    void validate() const;
    std::string_view name() const { return mission_name(kind); }
};

/// Canonical layout of one of the four benchmark missions.
MissionSpec build_mission(MissionKind kind);
MissionSpec build_mission(std::string_view name);

/// The regions that define success for each mission's objective: the home
/// area (Homing), the black target (AAC), the white shelter floor (SAC), the
/// forbidden areas (CFA).
std::vector<std::size_t> objective_regions(const MissionSpec& mission);

struct ObjectiveResult {
    double value = 0.0;
    std::vector<int> counts;  // N(t) for t = 1..T seconds; empty for CFA
};

ObjectiveResult objective(const MissionSpec& mission, const Trace& trace);

/// Number of robots whose center lies inside any of `regions`.
int count_inside(const MissionSpec& mission, const SwarmState& state, const std::vector<std::size_t>& regions);

/// Centers of the 0.02 m grid cells lying inside the arena.
struct CoverageGrid {
    std::vector<double> xs;
    std::vector<double> ys;
};
CoverageGrid coverage_grid(const Arena& arena, double pitch = 0.02);

/// Mean distance (cm) from a grid point to the closest robot not on a
/// forbidden area; 250 when no robot qualifies, capped at 250.
double estimate_coverage(const MissionSpec& mission, const SwarmState& final_state);

inline constexpr double kCoverageCap = 250.0;

}  // namespace demoswarm
