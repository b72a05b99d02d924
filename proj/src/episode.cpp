#include "demoswarm/episode.hpp"

#include <vector>

#include "demoswarm/kernels.hpp"

namespace demoswarm {

SwarmState simulate(const MissionSpec& mission, const PfsmController& controller, std::uint64_t seed,
                    const StepObserver& observer) {
    controller.validate();
    mission.validate();
    Rng rng(seed);
    const std::size_t n = mission.swarm_size;
    SwarmState state = sample_initial_state(mission.arena, mission.sim, n, rng);
    if (observer) observer(0, state);

    std::vector<ControllerRuntime> runtimes(n, ControllerRuntime::start(controller));
    std::vector<double> xs(n), ys(n), sq(n * n);
    SwarmState proposed = state;
    const std::size_t steps = mission.steps();
    for (std::size_t step = 1; step < steps; ++step) {
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = state.robots[i].position.x;
            ys[i] = state.robots[i].position.y;
        }
        kernels::pairwise_sq_dist(xs, ys, sq);
        for (std::size_t i = 0; i < n; ++i) {
            const Rm11Reading reading =
                sense(mission.arena, mission.sim, state, i, rng, std::span<const double>(sq).subspan(i * n, n));
            const StepResult r = controller_step(controller, runtimes[i], reading, mission.sim, rng);
            runtimes[i] = r.runtime;
            proposed.robots[i] = apply_actuation(state.robots[i], r.wheels, mission.sim);
        }
        state = resolve_collisions(mission.arena, mission.sim, state, proposed);
        if (observer) observer(step, state);
    }
    return state;
}

Trace run_episode(const MissionSpec& mission, const PfsmController& controller, std::uint64_t seed) {
    Trace trace;
    trace.seed = seed;
    trace.step_duration = mission.sim.dt;
    trace.states.reserve(mission.steps());
    simulate(mission, controller, seed, [&trace](std::size_t, const SwarmState& s) { trace.states.push_back(s); });
    return trace;
}

}  // namespace demoswarm
