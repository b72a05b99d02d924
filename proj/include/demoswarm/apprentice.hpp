#pragma once

// Apprenticeship-learning outer loop: max-margin reward fitting against the
// demonstrations' feature expectation, alternated with controller design.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "demoswarm/controller.hpp"
#include "demoswarm/designer.hpp"
#include "demoswarm/features.hpp"
#include "demoswarm/mission.hpp"
#include "demoswarm/rng.hpp"

namespace demoswarm {

struct MarginOptions {
    double c = 1e3;              // soft-margin penalty
    double kkt_tolerance = 1e-6; // max projected-gradient magnitude at exit
    std::size_t max_sweeps = 200000;
    double coincidence = 1e-9;   // |mu_E - mu_i| below this is a match
};

struct MarginFit {
    RewardWeights w;     // unit norm
    double margin = 0.0; // w.mu_E - max_i w.mu_i
    std::size_t sweeps = 0;
};

/// Separates mu_E from every mu_i with maximal margin. Solves the bias-free
/// soft-margin SVM dual on the differences mu_E - mu_i by coordinate descent
/// and normalizes the primal weights. Throws DegenerateMargin when mu_E
/// coincides with some mu_i or no separating direction remains.
MarginFit fit_max_margin(std::span<const double> mu_expert, std::span<const std::vector<double>> mus,
                         const MarginOptions& options = {});

struct IrlIteration {
    std::size_t index = 0;
    RewardWeights w;  // zeros for the initial random policy
    PfsmController controller;
    FeatureExpectation mu;
    double margin = 0.0;
    double distance_to_demo = 0.0;
};

struct IrlRun {
    std::string mission;
    std::size_t swarm_size = 0;
    std::vector<std::string> landmarks;
    std::size_t demonstrations = 0;
    std::vector<double> mu_expert;
    std::vector<IrlIteration> iterations;
    std::size_t selected = 0;
    bool stopped_early = false;

    /// Last fitted weights; zeros when no fit happened.
    RewardWeights w_star() const;
    const PfsmController& selected_controller() const { return iterations.at(selected).controller; }
};

/// Called after each completed iteration (including the initial policy).
using IterationCallback = std::function<void(const IrlIteration&)>;

/// Full loop: mu_E from the demonstrations, random pi_0, then `iterations`
/// rounds of fit -> optimize -> estimate mu. Stops early on DegenerateMargin.
/// Throws InvalidDemonstration when the demonstrations do not fit the mission.
IrlRun run_demo_cho(const MissionSpec& mission, std::span<const Demonstration> demos, std::size_t iterations,
                    const DesignBudget& budget, Rng& rng, const IterationCallback& on_iteration = {});

/// Empirical feature expectation of `controller` from one episode per seed.
FeatureExpectation estimate_mu(const MissionSpec& mission, const PfsmController& controller,
                               std::span<const std::uint64_t> seeds);

struct MarginRow {
    std::size_t index;
    double margin;
    double distance_to_demo;
    std::vector<double> w;
};

std::vector<MarginRow> margin_report(const IrlRun& run);

/// Component-wise mean of w* over runs of the same mission and dimension.
std::vector<double> average_weights(std::span<const IrlRun> runs);

}  // namespace demoswarm
