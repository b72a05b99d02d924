#pragma once

// Inner controller designer: iterated local search over PFSM controllers under
// a fixed simulation budget.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "demoswarm/controller.hpp"
#include "demoswarm/features.hpp"
#include "demoswarm/mission.hpp"
#include "demoswarm/rng.hpp"

namespace demoswarm {

struct RewardWeights {
    std::vector<double> w;
    double norm() const;
    bool operator==(const RewardWeights&) const = default;
};

struct DesignBudget {
    std::size_t max_simulations = 500;
    std::size_t seeds_per_evaluation = 10;
    void validate() const;
};

/// Score of one episode of `controller` started from `seed`.
using EpisodeScore = std::function<double(const PfsmController& controller, std::uint64_t seed)>;

/// w . phi(final state).
EpisodeScore reward_score(const MissionSpec& mission, const RewardWeights& w);
/// The mission's own objective on the full trace.
EpisodeScore objective_score(const MissionSpec& mission);

/// Mean over seeds, episodes evaluated in parallel and summed in seed order.
double mean_score(const EpisodeScore& score, const PfsmController& controller, std::span<const std::uint64_t> seeds);

double evaluate_reward(const MissionSpec& mission, const PfsmController& controller, const RewardWeights& w,
                       std::span<const std::uint64_t> seeds);

struct Acceptance {
    double challenger_mean;
    double incumbent_mean;  // displaced incumbent, same seeds
};

struct OptimizeLog {
    std::size_t simulations = 0;
    std::size_t candidates = 0;  // initial samples + challengers
    std::size_t restarts = 0;
    std::vector<Acceptance> acceptances;
};

inline constexpr std::size_t kInitialSamples = 10;
inline constexpr std::size_t kRestartAfterRejections = 20;

/// Samples 10 random controllers and keeps the best, then repeatedly mutates
/// the incumbent and compares challenger and incumbent on the same fresh
/// seeds, accepting strictly better challengers. Restarts from a random
/// controller after 20 consecutive rejections. Never runs more than
/// budget.max_simulations episodes.
PfsmController optimize(const EpisodeScore& score, const DesignBudget& budget, Rng& rng, OptimizeLog* log = nullptr);

PfsmController optimize(const MissionSpec& mission, const RewardWeights& w, const DesignBudget& budget, Rng& rng,
                        OptimizeLog* log = nullptr);

}  // namespace demoswarm
