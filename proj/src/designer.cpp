#include "demoswarm/designer.hpp"

#include <cmath>

#include "demoswarm/episode.hpp"
#include "demoswarm/errors.hpp"
#include "demoswarm/kernels.hpp"
#include "demoswarm/parallel.hpp"

namespace demoswarm {

double RewardWeights::norm() const { return std::sqrt(kernels::dot(w, w)); }

void DesignBudget::validate() const {
    if (max_simulations < 1 || seeds_per_evaluation < 1) throw InvalidArgument("design budget values must be >= 1");
    if (seeds_per_evaluation > max_simulations)
        throw InvalidArgument("seeds_per_evaluation exceeds max_simulations");
}

EpisodeScore reward_score(const MissionSpec& mission, const RewardWeights& w) {
    if (w.w.size() != mission.feature_dimension())
        throw SizeMismatch("reward has " + std::to_string(w.w.size()) + " weights, mission has " +
                           std::to_string(mission.feature_dimension()) + " features");
    return [mission, w](const PfsmController& c, std::uint64_t seed) {
        const FeatureVector f = phi(mission, simulate(mission, c, seed));
        return kernels::dot(w.w, f);
    };
}

EpisodeScore objective_score(const MissionSpec& mission) {
    return [mission](const PfsmController& c, std::uint64_t seed) {
        return objective(mission, run_episode(mission, c, seed)).value;
    };
}

double mean_score(const EpisodeScore& score, const PfsmController& controller, std::span<const std::uint64_t> seeds) {
    if (seeds.empty()) throw InvalidArgument("at least one seed is required");
    std::vector<double> values(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) { values[i] = score(controller, seeds[i]); });
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(seeds.size());
}

double evaluate_reward(const MissionSpec& mission, const PfsmController& controller, const RewardWeights& w,
                       std::span<const std::uint64_t> seeds) {
    return mean_score(reward_score(mission, w), controller, seeds);
}

namespace {

struct Scored {
    PfsmController controller;
    double sum = 0.0;
    std::size_t count = 0;
    double mean() const { return sum / static_cast<double>(count); }
    void add(double m, std::size_t n) {
        sum += m * static_cast<double>(n);
        count += n;
    }
};

}  // namespace

PfsmController optimize(const EpisodeScore& score, const DesignBudget& budget, Rng& rng, OptimizeLog* log) {
    budget.validate();
    OptimizeLog local;
    OptimizeLog& out = log ? *log : local;
    out = {};
    const std::size_t s = budget.seeds_per_evaluation;
    std::vector<std::uint64_t> seeds(s);
    auto draw_seeds = [&] {
        for (auto& seed : seeds) seed = rng.next_u64();
    };
    auto evaluate = [&](const PfsmController& c) {
        out.simulations += s;
        return mean_score(score, c, seeds);
    };

    std::optional<Scored> incumbent;
    for (std::size_t k = 0; k < kInitialSamples && out.simulations + s <= budget.max_simulations; ++k) {
        PfsmController c = random_controller(rng);
        draw_seeds();
        const double m = evaluate(c);
        ++out.candidates;
        if (!incumbent || m > incumbent->mean()) {
            incumbent = Scored{std::move(c), 0.0, 0};
            incumbent->add(m, s);
        }
    }

    std::vector<Scored> archive;
    std::size_t rejections = 0;
    while (out.simulations + 2 * s <= budget.max_simulations) {
        if (rejections >= kRestartAfterRejections) {
            archive.push_back(std::move(*incumbent));
            incumbent = Scored{random_controller(rng), 0.0, 0};
            rejections = 0;
            ++out.restarts;
        }
        PfsmController challenger = mutate(incumbent->controller, rng);
        draw_seeds();
        const double cm = evaluate(challenger);
        const double im = evaluate(incumbent->controller);
        ++out.candidates;
        if (cm > im) {
            out.acceptances.push_back({cm, im});
            incumbent = Scored{std::move(challenger), 0.0, 0};
            incumbent->add(cm, s);
            rejections = 0;
        } else {
            incumbent->add(im, s);
            ++rejections;
        }
    }

    // Earliest entry wins ties.
    archive.push_back(std::move(*incumbent));
    const Scored* best = nullptr;
    for (const Scored& e : archive)
        if (e.count > 0 && (!best || e.mean() > best->mean())) best = &e;
    return best ? best->controller : archive.back().controller;
}

PfsmController optimize(const MissionSpec& mission, const RewardWeights& w, const DesignBudget& budget, Rng& rng,
                        OptimizeLog* log) {
    return optimize(reward_score(mission, w), budget, rng, log);
}

}  // namespace demoswarm
