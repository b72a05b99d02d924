#include "demoswarm/mission.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "demoswarm/errors.hpp"
#include "demoswarm/kernels.hpp"

namespace demoswarm {

namespace {

constexpr double kArenaCircumradius = 1.29;
constexpr double kRegionRadius = 0.30;

RegionSpec circle(Vec2 c, double r, FloorColor color) { return {CircleShape{c, r}, color}; }
RegionSpec rect(Vec2 c, double w, double h, FloorColor color) { return {RectShape{c, w, h, 0.0}, color}; }

ArenaSpec base_arena() {
    ArenaSpec a;
    a.sides = 12;
    a.circumradius = kArenaCircumradius;
    return a;
}

}  // namespace

std::string_view mission_name(MissionKind k) {
    switch (k) {
        case MissionKind::homing: return "Homing";
        case MissionKind::aac: return "AAC";
        case MissionKind::sac: return "SAC";
        case MissionKind::cfa: return "CFA";
    }
    return "?";
}

MissionKind parse_mission_name(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "homing") return MissionKind::homing;
    if (lower == "aac") return MissionKind::aac;
    if (lower == "sac") return MissionKind::sac;
    if (lower == "cfa") return MissionKind::cfa;
    throw UnknownMission(std::string(name));
}

std::vector<Landmark> MissionSpec::landmarks() const {
    std::vector<Landmark> out;
    int blacks = 0, whites = 0;
    const auto regions = arena.regions();
    for (std::size_t i = 0; i < regions.size(); ++i)
        if (regions[i].color == FloorColor::black)
            out.push_back({Landmark::Kind::region, i, "black" + std::to_string(blacks++)});
    for (std::size_t i = 0; i < regions.size(); ++i)
        if (regions[i].color == FloorColor::white)
            out.push_back({Landmark::Kind::region, i, "white" + std::to_string(whites++)});
    out.push_back({Landmark::Kind::nearest_peer, 0, "peer"});
    return out;
}

void MissionSpec::validate() const {
    if (swarm_size < 1) throw InvalidArgument("swarm_size must be >= 1");
    if (!(duration > 0.0)) throw InvalidArgument("duration must be positive");
    sim.validate();
}

MissionSpec build_mission(MissionKind kind) {
    ArenaSpec a = base_arena();
    switch (kind) {
        case MissionKind::homing:
            a.regions = {circle({0.0, 0.6}, kRegionRadius, FloorColor::black)};
            break;
        case MissionKind::aac:
            a.regions = {circle({0.0, 0.6}, kRegionRadius, FloorColor::black),
                         circle({0.0, -0.6}, kRegionRadius, FloorColor::white)};
            a.light = LightSpec{{0.0, 1.8}, true};
            break;
        case MissionKind::sac: {
            // Shelter: 0.25 x 0.15 white floor, walled on three sides, open toward -y
            // where the light is. Black floor wraps the back and both sides.
            const Vec2 c{0.0, 0.2};
            const double hw = 0.125, hh = 0.075;
            a.regions = {rect({c.x, c.y + hh + 0.15}, 0.55, 0.30, FloorColor::black),
                         rect({c.x - hw - 0.075, c.y}, 0.15, 0.15, FloorColor::black),
                         rect({c.x + hw + 0.075, c.y}, 0.15, 0.15, FloorColor::black),
                         rect(c, 2 * hw, 2 * hh, FloorColor::white)};
            a.walls = {{{c.x - hw, c.y + hh}, {c.x + hw, c.y + hh}},
                       {{c.x - hw, c.y - hh}, {c.x - hw, c.y + hh}},
                       {{c.x + hw, c.y - hh}, {c.x + hw, c.y + hh}}};
            a.light = LightSpec{{0.0, -1.8}, true};
            break;
        }
        case MissionKind::cfa: {
            for (double deg : {90.0, 210.0, 330.0}) {
                const double rad = deg * std::numbers::pi / 180.0;
                a.regions.push_back(circle({0.65 * std::cos(rad), 0.65 * std::sin(rad)}, kRegionRadius, FloorColor::black));
            }
            break;
        }
    }
    MissionSpec m{kind, Arena(std::move(a)), 20, 180.0, SimParams{}};
    m.validate();
    return m;
}

MissionSpec build_mission(std::string_view name) { return build_mission(parse_mission_name(name)); }

std::vector<std::size_t> objective_regions(const MissionSpec& mission) {
    std::vector<std::size_t> out;
    const auto regions = mission.arena.regions();
    const FloorColor wanted = mission.kind == MissionKind::sac ? FloorColor::white : FloorColor::black;
    for (std::size_t i = 0; i < regions.size(); ++i)
        if (regions[i].color == wanted) out.push_back(i);
    // Homing and AAC score only the first black region (home / target area).
    if ((mission.kind == MissionKind::homing || mission.kind == MissionKind::aac) && out.size() > 1) out.resize(1);
    return out;
}

int count_inside(const MissionSpec& mission, const SwarmState& state, const std::vector<std::size_t>& regions) {
    const auto all = mission.arena.regions();
    int n = 0;
    for (const RobotState& r : state.robots)
        if (std::any_of(regions.begin(), regions.end(), [&](std::size_t i) { return all[i].contains(r.position); })) ++n;
    return n;
}

ObjectiveResult objective(const MissionSpec& mission, const Trace& trace) {
    if (trace.states.size() != mission.steps())
        throw TraceMismatch("trace has " + std::to_string(trace.states.size()) + " states, mission expects " +
                            std::to_string(mission.steps()));
    for (const SwarmState& s : trace.states)
        if (s.size() != mission.swarm_size) throw TraceMismatch("trace swarm size differs from mission swarm size");

    ObjectiveResult out;
    if (mission.kind == MissionKind::cfa) {
        out.value = kCoverageCap - estimate_coverage(mission, trace.states.back());
        return out;
    }
    const auto regions = objective_regions(mission);
    const auto seconds = static_cast<int>(std::floor(mission.duration + 1e-9));
    out.counts.reserve(static_cast<std::size_t>(seconds));
    for (int t = 1; t <= seconds; ++t) {
        const auto idx = std::min(static_cast<std::size_t>(std::llround(t / mission.sim.dt)), trace.states.size() - 1);
        out.counts.push_back(count_inside(mission, trace.states[idx], regions));
    }
    if (mission.kind == MissionKind::homing) {
        out.value = count_inside(mission, trace.states.back(), regions);
    } else {
        double sum = 0.0;
        for (int c : out.counts) sum += c;
        out.value = sum;
    }
    return out;
}

CoverageGrid coverage_grid(const Arena& arena, double pitch) {
    if (!(pitch > 0.0)) throw InvalidArgument("grid pitch must be positive");
    const auto [lo, hi] = arena.boundary().bounds();
    CoverageGrid g;
    const auto nx = static_cast<std::size_t>(std::ceil((hi.x - lo.x) / pitch));
    const auto ny = static_cast<std::size_t>(std::ceil((hi.y - lo.y) / pitch));
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const Vec2 p{lo.x + (static_cast<double>(i) + 0.5) * pitch, lo.y + (static_cast<double>(j) + 0.5) * pitch};
            if (arena.contains(p)) {
                g.xs.push_back(p.x);
                g.ys.push_back(p.y);
            }
        }
    }
    return g;
}

double estimate_coverage(const MissionSpec& mission, const SwarmState& final_state) {
    std::vector<double> rx, ry;
    const auto forbidden = objective_regions(mission);
    const auto regions = mission.arena.regions();
    for (const RobotState& r : final_state.robots) {
        const bool on_forbidden = std::any_of(forbidden.begin(), forbidden.end(),
                                              [&](std::size_t i) { return regions[i].contains(r.position); });
        if (!on_forbidden) {
            rx.push_back(r.position.x);
            ry.push_back(r.position.y);
        }
    }
    if (rx.empty()) return kCoverageCap;
    const CoverageGrid grid = coverage_grid(mission.arena);
    const double mean_m = kernels::coverage_sum(grid.xs, grid.ys, rx, ry) / static_cast<double>(grid.xs.size());
    return std::min(kCoverageCap, 100.0 * mean_m);
}

}  // namespace demoswarm
