#include "demoswarm/features.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "demoswarm/errors.hpp"
#include "demoswarm/kernels.hpp"

namespace demoswarm {

double scale_distance(double x, double d) {
    if (!(d > 0.0)) throw NonpositiveDiameter("arena diameter must be positive");
    if (x < 0.0) throw InvalidArgument("distance must be non-negative");
    return std::pow(10.0, -2.0 * x / d);
}

bool path_obstructed(const Arena& arena, Vec2 p, Vec2 q) {
    if (p == q) return false;
    const Segment path{p, q};
    for (const Segment& w : arena.walls())
        if (segments_intersect(path, w)) return true;
    return false;
}

FeatureVector phi(const MissionSpec& mission, const SwarmState& state) {
    const std::size_t n = mission.swarm_size;
    if (state.size() != n)
        throw SizeMismatch("state has " + std::to_string(state.size()) + " robots, mission expects " + std::to_string(n));
    const double d = mission.arena.diameter();
    const auto landmarks = mission.landmarks();
    const auto regions = mission.arena.regions();

    FeatureVector out;
    out.reserve(landmarks.size() * n);
    std::vector<double> group(n);
    for (const Landmark& lm : landmarks) {
        if (lm.kind == Landmark::Kind::region) {
            const RegionSpec& region = regions[lm.region];
            for (std::size_t i = 0; i < n; ++i) {
                const Vec2 p = state.robots[i].position;
                const Vec2 q = region.nearest_point(p);
                group[i] = path_obstructed(mission.arena, p, q) ? 0.0 : scale_distance(distance(p, q), d);
            }
        } else {
            std::vector<double> xs(n), ys(n), nearest(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = state.robots[i].position.x;
                ys[i] = state.robots[i].position.y;
            }
            kernels::nearest_sq_dist(xs, ys, nearest);
            for (std::size_t i = 0; i < n; ++i) group[i] = scale_distance(std::sqrt(nearest[i]), d);
        }
        std::sort(group.begin(), group.end(), std::greater<>());
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

FeatureExpectation feature_expectation(std::span<const FeatureVector> vectors) {
    if (vectors.empty()) throw EmptySample("feature expectation needs at least one vector");
    const std::size_t k = vectors.front().size();
    FeatureExpectation e{std::vector<double>(k, 0.0), vectors.size()};
    for (const FeatureVector& v : vectors) {
        if (v.size() != k) throw SizeMismatch("feature vectors differ in length");
        for (std::size_t i = 0; i < k; ++i) e.mu[i] += v[i];
    }
    const double inv = 1.0 / static_cast<double>(vectors.size());
    for (double& m : e.mu) m *= inv;
    return e;
}

void validate_demonstration(const MissionSpec& mission, const Demonstration& demo) {
    if (demo.positions.size() != mission.swarm_size)
        throw SizeMismatch("demonstration has " + std::to_string(demo.positions.size()) + " points, mission expects " +
                           std::to_string(mission.swarm_size));
    const double d = mission.sim.robot_diameter;
    for (std::size_t i = 0; i < demo.positions.size(); ++i) {
        if (!mission.arena.contains(demo.positions[i]))
            throw InvalidDemonstration("point " + std::to_string(i) + " lies outside the arena");
        for (std::size_t j = i + 1; j < demo.positions.size(); ++j)
            if (distance(demo.positions[i], demo.positions[j]) < d)
                throw InvalidDemonstration("points " + std::to_string(i) + " and " + std::to_string(j) +
                                           " are closer than a robot diameter");
    }
}

FeatureVector demo_to_features(const MissionSpec& mission, const Demonstration& demo) {
    validate_demonstration(mission, demo);
    SwarmState s;
    s.robots.reserve(demo.positions.size());
    for (const Vec2 p : demo.positions) s.robots.push_back({p, 0.0});
    return phi(mission, s);
}

}  // namespace demoswarm
