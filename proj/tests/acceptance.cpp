// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion;
// pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "demoswarm/apprentice.hpp"
#include "demoswarm/episode.hpp"
#include "demoswarm/errors.hpp"
#include "demoswarm/harness.hpp"
#include "demoswarm/io.hpp"
#include "oracles.hpp"

using namespace demoswarm;
namespace hs = demoswarm::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = DEMOSWARM_SOURCE_DIR;
const fs::path kWork = fs::current_path() / "acceptance_out";
constexpr MissionKind kAllMissions[] = {MissionKind::homing, MissionKind::aac, MissionKind::sac, MissionKind::cfa};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

double median(std::vector<double> v) { return hs::quantile(std::move(v), 0.5); }

hs::ExperimentConfig desk_design(const fs::path& out, std::size_t repeats) {
    const hs::Profile desk = hs::profile("desk");
    hs::ExperimentConfig c;
    c.mission = kRoot / "missions/homing.json";
    for (int i = 0; i < 5; ++i) c.demos.push_back(kRoot / ("demos/homing_10_" + std::to_string(i) + ".txt"));
    c.iterations = desk.iterations;
    c.budget = {desk.budget, 10};
    c.repeats = repeats;
    c.base_seed = 1;
    c.swarm_size = desk.swarm_size;
    c.out = out;
    return c;
}

// Desk-profile Homing runs shared by criteria 5, 6 and 9.
const std::vector<IrlRun>& homing_runs() {
    static std::vector<IrlRun> runs = [] {
        const fs::path out = kWork / "homing_desk";
        fs::remove_all(out);
        std::ostringstream log;
        if (hs::cmd_design(desk_design(out, 5), log, std::cerr) != 0) throw Error("desk design failed");
        std::vector<IrlRun> r;
        for (int i = 0; i < 5; ++i) r.push_back(io::load_run(out / ("run_" + std::to_string(i) + ".json")));
        return r;
    }();
    return runs;
}

MissionSpec desk_homing() {
    MissionSpec m = io::load_mission(kRoot / "missions/homing.json");
    m.swarm_size = *hs::profile("desk").swarm_size;
    return m;
}

std::vector<double> objective_values(const MissionSpec& m, const PfsmController& c, std::uint64_t first,
                                     std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = objective(m, run_episode(m, c, first + i)).value;
    return v;
}

Outcome criterion1() {
    const double d = build_mission(MissionKind::homing).arena.diameter();
    const double a = scale_distance(0, d), b = scale_distance(d, d), c = scale_distance(d / 2, d);
    const bool ok = std::abs(a - 1.0) <= 1e-12 && std::abs(b - 0.01) <= 1e-12 && std::abs(c - 0.1) <= 1e-12;
    return {ok, "f(0)=" + fmt(a, 17) + " f(d)=" + fmt(b, 17) + " f(d/2)=" + fmt(c, 17)};
}

Outcome criterion2() {
    std::size_t states = 0, mismatches = 0;
    for (MissionKind k : kAllMissions) {
        const MissionSpec m = build_mission(k);
        Rng rng(1000 + static_cast<std::uint64_t>(k));
        for (int i = 0; i < 1000; ++i) {
            SwarmState s = sample_initial_state(m.arena, m.sim, m.swarm_size, rng);
            for (auto& r : s.robots) r.heading = rng.uniform(-3.14159, 3.14159);
            const FeatureVector f = phi(m, s);
            for (std::size_t j = s.size(); j > 1; --j) std::swap(s.robots[j - 1], s.robots[rng.index(j)]);
            const FeatureVector g = phi(m, s);
            mismatches += std::memcmp(f.data(), g.data(), f.size() * sizeof(double)) != 0;
            ++states;
        }
    }
    return {mismatches == 0, std::to_string(states) + " states, " + std::to_string(mismatches) + " mismatches"};
}

Outcome criterion3() {
    Rng rng(2024);
    std::size_t nondegenerate = 0, direction_fail = 0, feasibility_fail = 0, degenerate = 0;
    double worst_angle = 0.0;
    std::string infeasible;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng.index(3);
        const std::size_t m = 1 + rng.index(5);
        std::vector<double> mu_e(k);
        for (double& v : mu_e) v = rng.uniform();
        std::vector<std::vector<double>> mus(m, std::vector<double>(k));
        for (auto& mu : mus)
            for (double& v : mu) v = rng.uniform();
        const oracle::Direction hard = oracle::max_margin_direction(mu_e, mus);
        if (!(hard.margin > 0.0)) {
            ++degenerate;
            continue;
        }
        ++nondegenerate;
        MarginFit f;
        try {
            f = fit_max_margin(mu_e, mus);
        } catch (const DegenerateMargin&) {
            ++feasibility_fail;
            continue;
        }
        double worst = -INFINITY, expert = 0.0;
        for (std::size_t j = 0; j < k; ++j) expert += f.w.w[j] * mu_e[j];
        for (const auto& mu : mus) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += f.w.w[j] * mu[j];
            worst = std::max(worst, s);
        }
        if (!(expert > worst)) {
            ++feasibility_fail;
            infeasible += " " + fmt(hard.margin);
        }
        const double angle = oracle::angle_between(oracle::soft_margin_direction(mu_e, mus).w, f.w.w);
        worst_angle = std::max(worst_angle, angle);
        direction_fail += angle > 1e-2;
    }
    return {direction_fail == 0 && feasibility_fail == 0 && nondegenerate > 0,
            std::to_string(nondegenerate) + " non-degenerate (" + std::to_string(degenerate) +
                " inseparable skipped), worst angle " + fmt(worst_angle) + " rad, " +
                std::to_string(feasibility_fail) + " infeasible" +
                (infeasible.empty() ? "" : " (hard margins" + infeasible + ")")};
}

Outcome criterion4() {
    const fs::path a = kWork / "determinism_a", b = kWork / "determinism_b";
    fs::remove_all(a);
    fs::remove_all(b);
    std::ostringstream log;
    if (hs::cmd_design(desk_design(a, 1), log, std::cerr) != 0 || hs::cmd_design(desk_design(b, 1), log, std::cerr) != 0)
        return {false, "cmd_design failed"};
    const bool records = slurp(a / "run_0.json") == slurp(b / "run_0.json") && !slurp(a / "run_0.json").empty();
    const bool controllers = slurp(a / "controller_0.json") == slurp(b / "controller_0.json");
    bool hashes = true;
    Rng rng(4);
    for (MissionKind k : kAllMissions) {
        const MissionSpec m = build_mission(k);
        const PfsmController c = random_controller(rng);
        hashes = hashes && trace_hash(run_episode(m, c, 77)) == trace_hash(run_episode(m, c, 77));
    }
    return {records && controllers && hashes, std::string("run records ") + (records ? "identical" : "DIFFER") +
                                                  ", controllers " + (controllers ? "identical" : "DIFFER") +
                                                  ", trace hashes " + (hashes ? "identical" : "DIFFER")};
}

Outcome criterion5() {
    const auto& runs = homing_runs();
    int good = 0;
    std::string ratios;
    for (const IrlRun& r : runs) {
        double best = INFINITY;
        for (const auto& it : r.iterations) best = std::min(best, it.distance_to_demo);
        const double ratio = best / r.iterations.front().distance_to_demo;
        good += ratio <= 0.5;
        ratios += (ratios.empty() ? "" : " ") + fmt(ratio, 3);
    }
    return {good >= 4, std::to_string(good) + "/5 repeats reach ratio <= 0.5 (ratios " + ratios + ")"};
}

Outcome criterion6() {
    const auto& runs = homing_runs();
    const MissionSpec m = desk_homing();
    // deliverable: the selected controller closest to the demonstrations across repeats
    const IrlRun* pick = &runs.front();
    for (const IrlRun& r : runs)
        if (r.iterations[r.selected].distance_to_demo < pick->iterations[pick->selected].distance_to_demo) pick = &r;
    const double demo = median(objective_values(m, pick->selected_controller(), 1, 30));

    Rng rng(606);
    std::vector<double> random_medians;
    for (int i = 0; i < 10; ++i) random_medians.push_back(median(objective_values(m, random_controller(rng), 1, 30)));
    const double random_median = median(random_medians);

    const hs::Profile desk = hs::profile("desk");
    const DesignBudget total{desk.iterations * desk.budget, 10};
    Rng choc_rng(1);
    const PfsmController direct = optimize(objective_score(m), total, choc_rng);
    const double direct_median = median(objective_values(m, direct, 1, 30));

    const bool ok = demo >= 3.0 * random_median && demo >= 0.6 * direct_median;
    return {ok, "demo median " + fmt(demo) + ", random median " + fmt(random_median) + " (x3 = " +
                    fmt(3 * random_median) + "), direct-objective median " + fmt(direct_median) + " (x0.6 = " +
                    fmt(0.6 * direct_median) + ")"};
}

Outcome criterion7() {
    const MissionSpec m = build_mission(MissionKind::cfa);
    const auto forbidden = objective_regions(m);
    Rng rng(707);
    double worst = 0.0;
    bool bounds = true;
    for (int i = 0; i < 20; ++i) {
        const SwarmState final = simulate(m, random_controller(rng), 7000 + i);
        std::vector<Vec2> eligible;
        for (const auto& r : final.robots) {
            bool on = false;
            for (auto f : forbidden) on = on || m.arena.regions()[f].contains(r.position);
            if (!on) eligible.push_back(r.position);
        }
        const double grid = estimate_coverage(m, final);
        const double mc = eligible.empty() ? kCoverageCap
                                           : std::min(kCoverageCap, oracle::monte_carlo_coverage(m, eligible, 1'000'000, 70 + i));
        worst = std::max(worst, std::abs(grid - mc));
        const double f = kCoverageCap - grid;
        bounds = bounds && f >= 0.0 && f <= 250.0;
    }
    return {worst <= 0.5 && bounds, "worst |grid - Monte Carlo| = " + fmt(worst) + " cm over 20 states, F_CFA " +
                                        (bounds ? "within" : "OUTSIDE") + " [0, 250]"};
}

Outcome criterion8() {
    std::size_t episodes = 0, violations = 0;
    Rng rng(808);
    for (int i = 0; i < 100; ++i) {
        const PfsmController c = random_controller(rng);
        for (MissionKind k : kAllMissions) {
            const MissionSpec m = build_mission(k);
            const ObjectiveResult r = objective(m, run_episode(m, c, 8000 + i));
            const double n = static_cast<double>(m.swarm_size);
            bool ok = std::isfinite(r.value);
            switch (k) {
                case MissionKind::homing: ok = ok && r.value >= 0 && r.value <= n; break;
                case MissionKind::aac:
                case MissionKind::sac: ok = ok && r.value >= 0 && r.value <= n * 180.0; break;
                case MissionKind::cfa: ok = ok && r.value >= 0 && r.value <= 250.0; break;
            }
            if (k != MissionKind::cfa) {
                ok = ok && r.counts.size() == 180;
                for (int cnt : r.counts) ok = ok && cnt >= 0 && cnt <= static_cast<int>(m.swarm_size);
            }
            violations += !ok;
            ++episodes;
        }
    }
    return {violations == 0, std::to_string(episodes) + " episodes, " + std::to_string(violations) + " violations"};
}

Outcome criterion9() {
    homing_runs();
    std::vector<fs::path> paths;
    for (int i = 0; i < 5; ++i) paths.push_back(kWork / "homing_desk" / ("run_" + std::to_string(i) + ".json"));
    std::ostringstream csv;
    if (hs::cmd_export_weights(paths, csv, std::cerr) != 0) return {false, "export-weights failed"};
    std::ofstream(kWork / "homing_weights.csv") << csv.str();

    // group mean |w| and mean w straight from the exported CSV
    std::map<std::string, std::pair<double, double>> sums;  // label -> (sum |w|, sum w)
    std::map<std::string, int> counts;
    std::vector<std::string> order;
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string idx, label, rank, w;
        std::getline(ls, idx, ',');
        std::getline(ls, label, ',');
        std::getline(ls, rank, ',');
        std::getline(ls, w, ',');
        if (!counts.count(label)) order.push_back(label);
        sums[label].first += std::abs(std::stod(w));
        sums[label].second += std::stod(w);
        ++counts[label];
    }
    std::string top;
    double top_abs = -1.0;
    std::string detail;
    for (const auto& label : order) {
        const double abs_mean = sums[label].first / counts[label];
        detail += label + " mean|w| " + fmt(abs_mean) + " mean w " + fmt(sums[label].second / counts[label]) + "; ";
        if (abs_mean > top_abs) top_abs = abs_mean, top = label;
    }
    const bool ok = top.rfind("black", 0) == 0 && sums[top].second > 0.0;
    return {ok, detail + "top group " + top};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"feature scaling exactness", criterion1},
        {"permutation invariance of phi", criterion2},
        {"max-margin oracle equivalence", criterion3},
        {"determinism of design runs and traces", criterion4},
        {"convergence toward the demonstrations", criterion5},
        {"end-to-end usefulness on Homing", criterion6},
        {"coverage estimator accuracy", criterion7},
        {"objective bounds fuzz", criterion8},
        {"weight structure favours the black region", criterion9},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    fs::create_directories(kWork);

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " -- "
                  << o.detail << " [" << fmt(secs, 3) << " s]" << std::endl;
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
