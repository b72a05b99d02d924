#pragma once

// Landmark-distance features of a swarm configuration and their empirical
// expectations.

#include <span>
#include <vector>

#include "demoswarm/mission.hpp"
#include "demoswarm/sim.hpp"

namespace demoswarm {

/// Grouped by landmark (mission landmark order), each group sorted descending.
using FeatureVector = std::vector<double>;

struct FeatureExpectation {
    std::vector<double> mu;
    std::size_t sample_count = 0;
    bool operator==(const FeatureExpectation&) const = default;
};

/// A desired final configuration: one point per robot, in meters.
struct Demonstration {
    std::vector<Vec2> positions;
    bool operator==(const Demonstration&) const = default;
};

/// 10^(-2x/d). Throws NonpositiveDiameter when d <= 0.
double scale_distance(double x, double d);

/// True iff the segment p-q touches any internal wall.
bool path_obstructed(const Arena& arena, Vec2 p, Vec2 q);

/// Throws SizeMismatch when the state's robot count differs from the mission's.
FeatureVector phi(const MissionSpec& mission, const SwarmState& state);

/// Component-wise mean. Throws EmptySample / SizeMismatch.
FeatureExpectation feature_expectation(std::span<const FeatureVector> vectors);

/// SizeMismatch on a wrong point count; InvalidDemonstration when a point is
/// outside the arena or two points are closer than a robot diameter.
void validate_demonstration(const MissionSpec& mission, const Demonstration& demo);

FeatureVector demo_to_features(const MissionSpec& mission, const Demonstration& demo);

}  // namespace demoswarm
