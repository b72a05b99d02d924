#include "demoswarm/apprentice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "demoswarm/episode.hpp"
#include "demoswarm/errors.hpp"
#include "demoswarm/kernels.hpp"
#include "demoswarm/parallel.hpp"

namespace demoswarm {

MarginFit fit_max_margin(std::span<const double> mu_expert, std::span<const std::vector<double>> mus,
                         const MarginOptions& options) {
    if (mus.empty()) throw InvalidArgument("fit_max_margin needs at least one policy expectation");
    const std::size_t k = mu_expert.size();
    const std::size_t m = mus.size();

    // Rows d_i = mu_E - mu_i, all labeled +1.
    std::vector<double> diffs(m * k);
    std::vector<double> q(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (mus[i].size() != k) throw SizeMismatch("feature expectations differ in length");
        std::span<double> row(diffs.data() + i * k, k);
        for (std::size_t j = 0; j < k; ++j) row[j] = mu_expert[j] - mus[i][j];
        q[i] = kernels::dot(row, row);
        if (std::sqrt(q[i]) <= options.coincidence)
            throw DegenerateMargin("demonstration expectation coincides with policy " + std::to_string(i));
    }

    std::vector<double> alpha(m, 0.0);
    std::vector<double> w(k, 0.0);
    std::size_t sweep = 0;
    for (; sweep < options.max_sweeps; ++sweep) {
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::span<const double> row(diffs.data() + i * k, k);
            const double g = kernels::dot(w, row) - 1.0;
            double pg = g;
            if (alpha[i] <= 0.0) pg = std::min(g, 0.0);
            else if (alpha[i] >= options.c) pg = std::max(g, 0.0);
            worst = std::max(worst, std::abs(pg));
            if (pg == 0.0) continue;
            const double updated = std::clamp(alpha[i] - g / q[i], 0.0, options.c);
            const double delta = updated - alpha[i];
            alpha[i] = updated;
            for (std::size_t j = 0; j < k; ++j) w[j] += delta * row[j];
        }
        if (worst < options.kkt_tolerance) break;
    }

    const double n = std::sqrt(kernels::dot(w, w));
    if (!(n > 1e-12)) throw DegenerateMargin("no separating direction");
    for (double& v : w) v /= n;

    MarginFit fit;
    fit.w.w = std::move(w);
    fit.sweeps = sweep;
    double worst_policy = -std::numeric_limits<double>::infinity();
    for (const auto& mu : mus) worst_policy = std::max(worst_policy, kernels::dot(fit.w.w, mu));
    fit.margin = kernels::dot(fit.w.w, mu_expert) - worst_policy;
    return fit;
}

RewardWeights IrlRun::w_star() const {
    for (auto it = iterations.rbegin(); it != iterations.rend(); ++it)
        if (it->index > 0) return it->w;
    return RewardWeights{std::vector<double>(mu_expert.size(), 0.0)};
}

FeatureExpectation estimate_mu(const MissionSpec& mission, const PfsmController& controller,
                               std::span<const std::uint64_t> seeds) {
    std::vector<FeatureVector> finals(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) { finals[i] = phi(mission, simulate(mission, controller, seeds[i])); });
    return feature_expectation(finals);
}

namespace {

double l2_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::vector<std::uint64_t> draw_seeds(Rng& rng, std::size_t n) {
    std::vector<std::uint64_t> seeds(n);
    for (auto& s : seeds) s = rng.next_u64();
    return seeds;
}

}  // namespace

IrlRun run_demo_cho(const MissionSpec& mission, std::span<const Demonstration> demos, std::size_t iterations,
                    const DesignBudget& budget, Rng& rng, const IterationCallback& on_iteration) {
    if (demos.empty()) throw InvalidDemonstration("at least one demonstration is required");
    budget.validate();

    std::vector<FeatureVector> demo_features;
    for (const Demonstration& d : demos) {
        try {
            demo_features.push_back(demo_to_features(mission, d));
        } catch (const SizeMismatch& e) {
            throw InvalidDemonstration(e.what());
        }
    }

    IrlRun run;
    run.mission = std::string(mission.name());
    run.swarm_size = mission.swarm_size;
    for (const Landmark& l : mission.landmarks()) run.landmarks.push_back(l.label);
    run.demonstrations = demos.size();
    run.mu_expert = feature_expectation(demo_features).mu;

    auto record = [&](IrlIteration it) {
        it.distance_to_demo = l2_distance(run.mu_expert, it.mu.mu);
        run.iterations.push_back(std::move(it));
        if (on_iteration) on_iteration(run.iterations.back());
    };

    {
        IrlIteration first;
        first.index = 0;
        first.w.w.assign(run.mu_expert.size(), 0.0);
        first.controller = random_controller(rng);
        first.mu = estimate_mu(mission, first.controller, draw_seeds(rng, budget.seeds_per_evaluation));
        record(std::move(first));
    }

    std::vector<std::vector<double>> mus{run.iterations.front().mu.mu};
    for (std::size_t i = 0; i < iterations; ++i) {
        MarginFit fit;
        try {
            fit = fit_max_margin(run.mu_expert, mus);
        } catch (const DegenerateMargin&) {
            run.stopped_early = true;
            break;
        }
        IrlIteration it;
        it.index = i + 1;
        it.w = fit.w;
        it.margin = fit.margin;
        it.controller = optimize(mission, fit.w, budget, rng);
        it.mu = estimate_mu(mission, it.controller, draw_seeds(rng, budget.seeds_per_evaluation));
        mus.push_back(it.mu.mu);
        record(std::move(it));
    }

    run.selected = 0;
    for (std::size_t i = 1; i < run.iterations.size(); ++i)
        if (run.iterations[i].distance_to_demo < run.iterations[run.selected].distance_to_demo) run.selected = i;
    return run;
}

std::vector<MarginRow> margin_report(const IrlRun& run) {
    std::vector<MarginRow> rows;
    rows.reserve(run.iterations.size());
    for (const IrlIteration& it : run.iterations) rows.push_back({it.index, it.margin, it.distance_to_demo, it.w.w});
    return rows;
}

std::vector<double> average_weights(std::span<const IrlRun> runs) {
    if (runs.empty()) throw EmptySample("no runs to average");
    const std::vector<double> first = runs.front().w_star().w;
    std::vector<double> mean(first.size(), 0.0);
    for (const IrlRun& r : runs) {
        if (r.mission != runs.front().mission) throw InvalidArgument("runs come from different missions");
        const auto w = r.w_star().w;
        if (w.size() != mean.size()) throw SizeMismatch("runs differ in feature dimension");
        for (std::size_t i = 0; i < w.size(); ++i) mean[i] += w[i];
    }
    for (double& v : mean) v /= static_cast<double>(runs.size());
    return mean;
}

}  // namespace demoswarm
