#include "demoswarm/controller.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "demoswarm/errors.hpp"

namespace demoswarm {

namespace {

constexpr std::array<std::string_view, kBehaviorKinds> kBehaviorNames{
    "exploration", "stop", "phototaxis", "anti-phototaxis", "attraction", "repulsion"};
constexpr std::array<std::string_view, kConditionKinds> kConditionNames{
    "black-floor", "gray-floor", "white-floor", "neighbor-count", "inverted-neighbor-count", "fixed-probability"};

constexpr double kFrontObstacleThreshold = 0.1;

bool is_neighbor_condition(ConditionKind k) {
    return k == ConditionKind::neighbor_count || k == ConditionKind::inverted_neighbor_count;
}

Vec2 sensor_vector(const std::array<double, 8>& values) {
    Vec2 v;
    for (std::size_t s = 0; s < values.size(); ++s) v += unit(sensor_angle(s)) * values[s];
    return v;
}

// Maps a desired direction in the robot frame to wheel speeds: rotate in place
// when the target is behind, otherwise blend forward motion and turning.
WheelSpeeds steer(Vec2 direction, double v_max) {
    if (dot(direction, direction) < 1e-24) return {v_max, v_max};
    const double angle = std::atan2(direction.y, direction.x);
    if (std::abs(angle) > std::numbers::pi / 2.0) {
        const double s = angle > 0.0 ? v_max : -v_max;
        return {-s, s};
    }
    const double c = std::cos(angle), s = std::sin(angle);
    return {v_max * std::clamp(c - s, -1.0, 1.0), v_max * std::clamp(c + s, -1.0, 1.0)};
}

Vec2 normalized(Vec2 v) {
    const double n = norm(v);
    return n > 0.0 ? v * (1.0 / n) : v;
}

BehaviorInstance fresh_behavior(BehaviorKind kind, Rng& rng) {
    BehaviorInstance b{kind, 0, 0.0};
    if (kind == BehaviorKind::exploration) b.turn_steps = static_cast<int>(rng.uniform_int(kTurnStepsMin, kTurnStepsMax));
    if (kind == BehaviorKind::attraction || kind == BehaviorKind::repulsion) b.gain = rng.uniform(kGainMin, kGainMax);
    return b;
}

ConditionInstance fresh_condition(ConditionKind kind, Rng& rng) {
    ConditionInstance c{kind, 0.0, 0, 0.0};
    if (is_neighbor_condition(kind)) {
        c.threshold = static_cast<int>(rng.uniform_int(kThresholdMin, kThresholdMax));
        c.steepness = rng.uniform(kSteepnessMin, kSteepnessMax);
    } else {
        c.probability = rng.uniform();
    }
    return c;
}

std::size_t random_target(std::size_t source, std::size_t n_states, Rng& rng) {
    const std::size_t t = rng.index(n_states - 1);
    return t >= source ? t + 1 : t;
}

std::size_t transition_count(const PfsmController& c) {
    std::size_t n = 0;
    for (const auto& s : c.states) n += s.transitions.size();
    return n;
}

// Picks the k-th transition across all states, in state order.
std::pair<std::size_t, std::size_t> nth_transition(const PfsmController& c, std::size_t k) {
    for (std::size_t s = 0; s < c.states.size(); ++s) {
        if (k < c.states[s].transitions.size()) return {s, k};
        k -= c.states[s].transitions.size();
    }
    throw InvalidArgument("transition index out of range");
}

double perturbed(double value, double lo, double hi, Rng& rng) {
    return std::clamp(value + rng.uniform(-0.1, 0.1) * (hi - lo), lo, hi);
}

int perturbed(int value, int lo, int hi, Rng& rng) {
    const double v = value + rng.uniform(-0.1, 0.1) * (hi - lo);
    return std::clamp(static_cast<int>(std::lround(v)), lo, hi);
}

// Location of one tunable parameter inside a controller.
struct ParamSlot {
    enum class Kind { turn_steps, gain, probability, threshold, steepness } kind;
    std::size_t state;
    std::optional<std::size_t> transition;
};

std::vector<ParamSlot> parameter_slots(const PfsmController& c) {
    std::vector<ParamSlot> slots;
    for (std::size_t s = 0; s < c.states.size(); ++s) {
        const auto& b = c.states[s].behavior;
        if (b.kind == BehaviorKind::exploration) slots.push_back({ParamSlot::Kind::turn_steps, s, std::nullopt});
        if (b.kind == BehaviorKind::attraction || b.kind == BehaviorKind::repulsion)
            slots.push_back({ParamSlot::Kind::gain, s, std::nullopt});
        for (std::size_t t = 0; t < c.states[s].transitions.size(); ++t) {
            const auto kind = c.states[s].transitions[t].condition.kind;
            if (is_neighbor_condition(kind)) {
                slots.push_back({ParamSlot::Kind::threshold, s, t});
                slots.push_back({ParamSlot::Kind::steepness, s, t});
            } else {
                slots.push_back({ParamSlot::Kind::probability, s, t});
            }
        }
    }
    return slots;
}

}  // namespace

std::string_view to_string(BehaviorKind k) { return kBehaviorNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(ConditionKind k) { return kConditionNames[static_cast<std::size_t>(k)]; }

std::optional<BehaviorKind> parse_behavior(std::string_view s) {
    for (std::size_t i = 0; i < kBehaviorNames.size(); ++i)
        if (kBehaviorNames[i] == s) return static_cast<BehaviorKind>(i);
    return std::nullopt;
}

std::optional<ConditionKind> parse_condition(std::string_view s) {
    for (std::size_t i = 0; i < kConditionNames.size(); ++i)
        if (kConditionNames[i] == s) return static_cast<ConditionKind>(i);
    return std::nullopt;
}

bool BehaviorInstance::valid() const {
    switch (kind) {
        case BehaviorKind::exploration:
            return turn_steps >= kTurnStepsMin && turn_steps <= kTurnStepsMax && gain == 0.0;
        case BehaviorKind::attraction:
        case BehaviorKind::repulsion:
            return gain >= kGainMin && gain <= kGainMax && turn_steps == 0;
        default:
            return turn_steps == 0 && gain == 0.0;
    }
}

bool ConditionInstance::valid() const {
    if (is_neighbor_condition(kind))
        return probability == 0.0 && threshold >= kThresholdMin && threshold <= kThresholdMax &&
               steepness >= kSteepnessMin && steepness <= kSteepnessMax;
    return probability >= 0.0 && probability <= 1.0 && threshold == 0 && steepness == 0.0;
}

double ConditionInstance::firing_probability(const Rm11Reading& reading) const {
    switch (kind) {
        case ConditionKind::black_floor: return reading.floor() == FloorColor::black ? probability : 0.0;
        case ConditionKind::gray_floor: return reading.floor() == FloorColor::gray ? probability : 0.0;
        case ConditionKind::white_floor: return reading.floor() == FloorColor::white ? probability : 0.0;
        case ConditionKind::neighbor_count:
        case ConditionKind::inverted_neighbor_count: {
            const double z = 1.0 / (1.0 + std::exp(steepness * (threshold - reading.neighbor_count)));
            return kind == ConditionKind::neighbor_count ? z : 1.0 - z;
        }
        case ConditionKind::fixed_probability: return probability;
    }
    return 0.0;
}

bool PfsmController::valid() const {
    try {
        validate();
        return true;
    } catch (const Error&) {
        return false;
    }
}

void PfsmController::validate() const {
    if (states.empty() || states.size() > kMaxStates) throw InvalidArgument("controller needs 1-4 states");
    if (initial_state >= states.size()) throw InvalidArgument("initial state out of range");
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (!states[s].behavior.valid()) throw InvalidArgument("state " + std::to_string(s) + ": behavior parameters out of range");
        if (states[s].transitions.size() > kMaxTransitions)
            throw InvalidArgument("state " + std::to_string(s) + ": more than 4 transitions");
        for (const Transition& t : states[s].transitions) {
            if (t.target >= states.size() || t.target == s)
                throw InvalidArgument("state " + std::to_string(s) + ": invalid transition target");
            if (!t.condition.valid()) throw InvalidArgument("state " + std::to_string(s) + ": condition parameters out of range");
        }
    }
}

PfsmController PfsmController::stop() { return {{ControllerState{{BehaviorKind::stop, 0, 0.0}, {}}}, 0}; }

StepResult controller_step(const PfsmController& ctrl, const ControllerRuntime& rt,
                           const Rm11Reading& reading, const SimParams& params, Rng& rng) {
    ControllerRuntime next = rt;
    for (const Transition& t : ctrl.states[rt.current_state].transitions) {
        const double p = t.condition.firing_probability(reading);
        if (rng.uniform() < p) {
            next.current_state = t.target;
            next.turn_countdown = 0;
            break;
        }
    }

    const BehaviorInstance& b = ctrl.states[next.current_state].behavior;
    const double v = params.v_max;
    const Vec2 obstacle = sensor_vector(reading.proximity);
    WheelSpeeds w;
    switch (b.kind) {
        case BehaviorKind::stop:
            break;
        case BehaviorKind::exploration: {
            if (next.turn_countdown == 0) {
                const double front = std::max({reading.proximity[0], reading.proximity[1], reading.proximity[7]});
                if (front > kFrontObstacleThreshold) {
                    next.turn_countdown = static_cast<int>(rng.uniform_int(1, b.turn_steps));
                    next.turn_direction = rng.bernoulli(0.5) ? 1 : -1;
                }
            }
            if (next.turn_countdown > 0) {
                --next.turn_countdown;
                w = {-next.turn_direction * v, next.turn_direction * v};
            } else {
                w = {v, v};
            }
            break;
        }
        case BehaviorKind::phototaxis:
        case BehaviorKind::anti_phototaxis: {
            const double sign = b.kind == BehaviorKind::phototaxis ? 1.0 : -1.0;
            w = steer(normalized(sensor_vector(reading.light)) * sign - obstacle * kObstacleWeight, v);
            break;
        }
        case BehaviorKind::attraction:
        case BehaviorKind::repulsion: {
            const double sign = b.kind == BehaviorKind::attraction ? 1.0 : -1.0;
            w = steer(reading.neighbor_vector * (sign * b.gain) - obstacle * kObstacleWeight, v);
            break;
        }
    }
    return {w, next};
}

BehaviorInstance random_behavior(Rng& rng) {
    return fresh_behavior(static_cast<BehaviorKind>(rng.uniform_int(0, kBehaviorKinds - 1)), rng);
}

ConditionInstance random_condition(Rng& rng) {
    return fresh_condition(static_cast<ConditionKind>(rng.uniform_int(0, kConditionKinds - 1)), rng);
}

PfsmController random_controller(Rng& rng) {
    PfsmController c;
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, kMaxStates));
    c.states.resize(n);
    if (n == 1) {
        // a lone state has no transitions; keep it tunable
        constexpr BehaviorKind tunable[] = {BehaviorKind::exploration, BehaviorKind::attraction, BehaviorKind::repulsion};
        c.states[0].behavior = fresh_behavior(tunable[rng.index(3)], rng);
    } else {
        for (auto& s : c.states) s.behavior = random_behavior(rng);
        for (std::size_t s = 0; s < n; ++s) {
            const auto k = static_cast<std::size_t>(rng.uniform_int(0, kMaxTransitions));
            for (std::size_t t = 0; t < k; ++t) c.states[s].transitions.push_back({random_condition(rng), random_target(s, n, rng)});
        }
    }
    return c;
}

std::vector<MutationKind> applicable_mutations(const PfsmController& c) {
    std::vector<MutationKind> out;
    const std::size_t n = c.states.size();
    const std::size_t transitions = transition_count(c);
    if (!parameter_slots(c).empty()) out.push_back(MutationKind::perturb_parameter);
    out.push_back(MutationKind::swap_behavior);
    if (transitions > 0) out.push_back(MutationKind::swap_condition);
    if (n < kMaxStates) out.push_back(MutationKind::add_state);
    if (n > 1) out.push_back(MutationKind::remove_state);
    if (n > 1 && std::any_of(c.states.begin(), c.states.end(), [](const auto& s) { return s.transitions.size() < kMaxTransitions; }))
        out.push_back(MutationKind::add_transition);
    if (transitions > 0) out.push_back(MutationKind::remove_transition);
    if (transitions > 0 && n > 2) out.push_back(MutationKind::retarget_transition);
    return out;
}

PfsmController mutate(const PfsmController& ctrl, Rng& rng) {
    const auto kinds = applicable_mutations(ctrl);
    return mutate(ctrl, kinds[rng.index(kinds.size())], rng);
}

PfsmController mutate(const PfsmController& ctrl, MutationKind kind, Rng& rng) {
    PfsmController c = ctrl;
    const std::size_t n = c.states.size();
    switch (kind) {
        case MutationKind::perturb_parameter: {
            const auto slots = parameter_slots(c);
            if (slots.empty()) throw InvalidArgument("no parameter to perturb");
            const ParamSlot& slot = slots[rng.index(slots.size())];
            auto& state = c.states[slot.state];
            switch (slot.kind) {
                case ParamSlot::Kind::turn_steps:
                    state.behavior.turn_steps = perturbed(state.behavior.turn_steps, kTurnStepsMin, kTurnStepsMax, rng);
                    break;
                case ParamSlot::Kind::gain:
                    state.behavior.gain = perturbed(state.behavior.gain, kGainMin, kGainMax, rng);
                    break;
                case ParamSlot::Kind::probability: {
                    auto& cond = state.transitions[*slot.transition].condition;
                    cond.probability = perturbed(cond.probability, 0.0, 1.0, rng);
                    break;
                }
                case ParamSlot::Kind::threshold: {
                    auto& cond = state.transitions[*slot.transition].condition;
                    cond.threshold = perturbed(cond.threshold, kThresholdMin, kThresholdMax, rng);
                    break;
                }
                case ParamSlot::Kind::steepness: {
                    auto& cond = state.transitions[*slot.transition].condition;
                    cond.steepness = perturbed(cond.steepness, kSteepnessMin, kSteepnessMax, rng);
                    break;
                }
            }
            break;
        }
        case MutationKind::swap_behavior: {
            auto& b = c.states[rng.index(n)].behavior;
            auto k = static_cast<int>(rng.uniform_int(0, kBehaviorKinds - 2));
            if (k >= static_cast<int>(b.kind)) ++k;
            b = fresh_behavior(static_cast<BehaviorKind>(k), rng);
            break;
        }
        case MutationKind::swap_condition: {
            const auto [s, t] = nth_transition(c, rng.index(transition_count(c)));
            auto& cond = c.states[s].transitions[t].condition;
            auto k = static_cast<int>(rng.uniform_int(0, kConditionKinds - 2));
            if (k >= static_cast<int>(cond.kind)) ++k;
            cond = fresh_condition(static_cast<ConditionKind>(k), rng);
            break;
        }
        case MutationKind::add_state: {
            if (n >= kMaxStates) throw InvalidArgument("controller already has 4 states");
            c.states.push_back({random_behavior(rng), {}});
            // Wire one incoming edge so the new state is reachable.
            std::vector<std::size_t> open;
            for (std::size_t s = 0; s < n; ++s)
                if (c.states[s].transitions.size() < kMaxTransitions) open.push_back(s);
            if (!open.empty()) c.states[open[rng.index(open.size())]].transitions.push_back({random_condition(rng), n});
            break;
        }
        case MutationKind::remove_state: {
            if (n <= 1) throw InvalidArgument("cannot remove the only state");
            const std::size_t victim = rng.index(n);
            c.states.erase(c.states.begin() + static_cast<std::ptrdiff_t>(victim));
            for (auto& s : c.states) {
                std::erase_if(s.transitions, [victim](const Transition& t) { return t.target == victim; });
                for (auto& t : s.transitions)
                    if (t.target > victim) --t.target;
            }
            if (c.initial_state == victim) c.initial_state = 0;
            else if (c.initial_state > victim) --c.initial_state;
            break;
        }
        case MutationKind::add_transition: {
            std::vector<std::size_t> open;
            for (std::size_t s = 0; s < n; ++s)
                if (c.states[s].transitions.size() < kMaxTransitions) open.push_back(s);
            if (n < 2 || open.empty()) throw InvalidArgument("no room for a transition");
            const std::size_t s = open[rng.index(open.size())];
            c.states[s].transitions.push_back({random_condition(rng), random_target(s, n, rng)});
            break;
        }
        case MutationKind::remove_transition: {
            const auto [s, t] = nth_transition(c, rng.index(transition_count(c)));
            c.states[s].transitions.erase(c.states[s].transitions.begin() + static_cast<std::ptrdiff_t>(t));
            break;
        }
        case MutationKind::retarget_transition: {
            if (n <= 2) throw InvalidArgument("retargeting needs at least 3 states");
            const auto [s, t] = nth_transition(c, rng.index(transition_count(c)));
            auto& tr = c.states[s].transitions[t];
            std::vector<std::size_t> options;
            for (std::size_t k = 0; k < n; ++k)
                if (k != s && k != tr.target) options.push_back(k);
            tr.target = options[rng.index(options.size())];
            break;
        }
    }
    return c;
}

}  // namespace demoswarm
