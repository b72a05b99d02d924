#pragma once

#include <cstdint>
#include <functional>

#include "demoswarm/controller.hpp"
#include "demoswarm/mission.hpp"
#include "demoswarm/sim.hpp"

namespace demoswarm {

/// Called once per recorded state, including the initial one (step 0).
using StepObserver = std::function<void(std::size_t step, const SwarmState&)>;

/// Core loop: place robots from `seed`, then per control step
/// sense -> controller step -> actuate -> resolve collisions.
/// Returns the final state. Pure in (mission, controller, seed).
SwarmState simulate(const MissionSpec& mission, const PfsmController& controller, std::uint64_t seed,
                    const StepObserver& observer = {});

/// Full trace of `simulate`.
Trace run_episode(const MissionSpec& mission, const PfsmController& controller, std::uint64_t seed);

}  // namespace demoswarm
