#pragma once

// Probabilistic finite-state machines built from mission-agnostic behavioral
// and conditional modules (Chocolate module catalogue).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "demoswarm/rng.hpp"
#include "demoswarm/sim.hpp"

namespace demoswarm {

enum class BehaviorKind { exploration, stop, phototaxis, anti_phototaxis, attraction, repulsion };
enum class ConditionKind { black_floor, gray_floor, white_floor, neighbor_count, inverted_neighbor_count, fixed_probability };

inline constexpr int kBehaviorKinds = 6;
inline constexpr int kConditionKinds = 6;
inline constexpr std::size_t kMaxStates = 4;
inline constexpr std::size_t kMaxTransitions = 4;

// Parameter ranges.
inline constexpr int kTurnStepsMin = 1, kTurnStepsMax = 100;
inline constexpr double kGainMin = 1.0, kGainMax = 5.0;
inline constexpr int kThresholdMin = 0, kThresholdMax = 10;
inline constexpr double kSteepnessMin = 0.0, kSteepnessMax = 20.0;
/// Weight of the obstacle-avoidance vector in the steering behaviors.
inline constexpr double kObstacleWeight = 5.0;

std::string_view to_string(BehaviorKind k);
std::string_view to_string(ConditionKind k);
std::optional<BehaviorKind> parse_behavior(std::string_view s);
std::optional<ConditionKind> parse_condition(std::string_view s);

/// Parameters that do not apply to `kind` are held at 0.
struct BehaviorInstance {
    BehaviorKind kind = BehaviorKind::stop;
    int turn_steps = 0;  // exploration: tau
    double gain = 0.0;   // attraction / repulsion: alpha

    bool valid() const;
    bool operator==(const BehaviorInstance&) const = default;
};

struct ConditionInstance {
    ConditionKind kind = ConditionKind::fixed_probability;
    double probability = 0.0;  // floor and fixed-probability conditions: beta
    int threshold = 0;         // neighbor conditions: xi
    double steepness = 0.0;    // neighbor conditions: eta

    bool valid() const;
    /// Probability of firing for this reading.
    double firing_probability(const Rm11Reading& reading) const;
    bool operator==(const ConditionInstance&) const = default;
};

struct Transition {
    ConditionInstance condition;
    std::size_t target = 0;
    bool operator==(const Transition&) const = default;
};

struct ControllerState {
    BehaviorInstance behavior;
    std::vector<Transition> transitions;
    bool operator==(const ControllerState&) const = default;
};

struct PfsmController {
    std::vector<ControllerState> states;
    std::size_t initial_state = 0;

    /// 1..4 states, 0..4 transitions each, targets valid and not self, params in range.
    bool valid() const;
    /// Throws InvalidArgument naming the first violated invariant.
    void validate() const;
    bool operator==(const PfsmController&) const = default;

    static PfsmController stop();
};

struct ControllerRuntime {
    std::size_t current_state = 0;
    int turn_countdown = 0;
    int turn_direction = 1;  // +1 counter-clockwise

    static ControllerRuntime start(const PfsmController& ctrl) { return {ctrl.initial_state, 0, 1}; }
    bool operator==(const ControllerRuntime&) const = default;
};

struct StepResult {
    WheelSpeeds wheels;
    ControllerRuntime runtime;
};

/// Evaluates the current state's outgoing conditions in order (first to fire
/// wins), then lets the active behavior map the reading to wheel speeds.
StepResult controller_step(const PfsmController& ctrl, const ControllerRuntime& rt,
                           const Rm11Reading& reading, const SimParams& params, Rng& rng);

BehaviorInstance random_behavior(Rng& rng);
ConditionInstance random_condition(Rng& rng);
PfsmController random_controller(Rng& rng);

enum class MutationKind {
    perturb_parameter,
    swap_behavior,
    swap_condition,
    add_state,
    remove_state,
    add_transition,
    remove_transition,
    retarget_transition,
};

std::vector<MutationKind> applicable_mutations(const PfsmController& ctrl);
/// Applies exactly one edit drawn uniformly from the applicable ones.
PfsmController mutate(const PfsmController& ctrl, Rng& rng);
/// Applies one specific edit; `kind` must be applicable.
PfsmController mutate(const PfsmController& ctrl, MutationKind kind, Rng& rng);

}  // namespace demoswarm
