// Regenerates the shipped mission files and example demonstrations.
// usage: make_assets <repo-root>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <string>

#include "demoswarm/features.hpp"
#include "demoswarm/io.hpp"
#include "demoswarm/rng.hpp"

using namespace demoswarm;
namespace fs = std::filesystem;

namespace {

bool fits(const MissionSpec& m, const std::vector<Vec2>& placed, Vec2 p) {
    const double r = m.sim.robot_radius();
    if (!m.arena.contains(p) || m.arena.clearance(p) < r + 0.005) return false;
    for (Vec2 q : placed)
        if (distance(p, q) < m.sim.robot_diameter + 0.005) return false;
    return true;
}

// Rejection sampling inside `target`, falling back to `fallback` once the
// target is full.
Demonstration fill(const MissionSpec& m, Rng& rng, const std::function<bool(Vec2)>& target,
                   const std::function<bool(Vec2)>& fallback) {
    std::vector<Vec2> pts;
    const double R = m.arena.spec().circumradius;
    int misses = 0;
    while (pts.size() < m.swarm_size) {
        const Vec2 p{rng.uniform(-R, R), rng.uniform(-R, R)};
        const bool in_target = misses < 20000 ? target(p) : fallback(p);
        if (in_target && fits(m, pts, p)) {
            pts.push_back(p);
            misses = 0;
        } else if (in_target) {
            ++misses;
        }
    }
    return {pts};
}

// Greedy farthest-point spread away from the forbidden areas.
Demonstration spread(const MissionSpec& m, Rng& rng) {
    std::vector<Vec2> candidates;
    const double R = m.arena.spec().circumradius;
    while (candidates.size() < 4000) {
        const Vec2 p{rng.uniform(-R, R), rng.uniform(-R, R)};
        bool forbidden = false;
        for (const auto& reg : m.arena.regions()) forbidden = forbidden || reg.contains(p);
        if (!forbidden && fits(m, {}, p)) candidates.push_back(p);
    }
    std::vector<Vec2> pts{candidates.front()};
    while (pts.size() < m.swarm_size) {
        double best = -1.0;
        Vec2 pick{};
        for (Vec2 c : candidates) {
            double nearest = std::numeric_limits<double>::infinity();
            for (Vec2 q : pts) nearest = std::min(nearest, distance(c, q));
            for (const Segment& e : m.arena.boundary_edges()) nearest = std::min(nearest, 2.0 * distance_to_segment(c, e));
            if (nearest > best) best = nearest, pick = c;
        }
        pts.push_back(pick);
    }
    return {pts};
}

void save(const fs::path& p, const MissionSpec& m, const Demonstration& d) {
    validate_demonstration(m, d);
    io::save_demonstration(p, d);
    std::cout << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path root = argc > 1 ? argv[1] : ".";
    fs::create_directories(root / "missions");
    fs::create_directories(root / "demos");
    for (MissionKind k : {MissionKind::homing, MissionKind::aac, MissionKind::sac, MissionKind::cfa}) {
        const MissionSpec m = build_mission(k);
        std::string name(m.name());
        for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        io::save_mission(root / "missions" / (name + ".json"), m);
    }

    Rng rng(20240);
    MissionSpec homing = build_mission(MissionKind::homing);
    const auto& home = homing.arena.regions()[objective_regions(homing)[0]];
    auto in_home = [&](Vec2 p) { return home.contains(p); };
    for (std::size_t n : {10u, 20u}) {
        homing.swarm_size = n;
        for (int i = 0; i < 5; ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "homing_%zu_%d.txt", n, i);
            save(root / "demos" / name, homing, fill(homing, rng, in_home, in_home));
        }
    }

    const MissionSpec aac = build_mission(MissionKind::aac);
    const auto& black = aac.arena.regions()[objective_regions(aac)[0]];
    for (int i = 0; i < 5; ++i) {
        auto in_black = [&](Vec2 p) { return black.contains(p); };
        save(root / "demos" / ("aac_20_" + std::to_string(i) + ".txt"), aac, fill(aac, rng, in_black, in_black));
    }

    const MissionSpec sac = build_mission(MissionKind::sac);
    const auto& shelter = sac.arena.regions()[objective_regions(sac)[0]];
    for (int i = 0; i < 5; ++i) {
        auto in_shelter = [&](Vec2 p) { return shelter.contains(p); };
        // overflow gathers just in front of the opening
        auto near_opening = [&](Vec2 p) { return p.y < 0.12 && p.y > -0.35 && std::abs(p.x) < 0.35; };
        save(root / "demos" / ("sac_20_" + std::to_string(i) + ".txt"), sac, fill(sac, rng, in_shelter, near_opening));
    }

    const MissionSpec cfa = build_mission(MissionKind::cfa);
    for (int i = 0; i < 5; ++i) save(root / "demos" / ("cfa_20_" + std::to_string(i) + ".txt"), cfa, spread(cfa, rng));
    return 0;
}
