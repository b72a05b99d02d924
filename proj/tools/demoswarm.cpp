#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "demoswarm/harness.hpp"

namespace hs = demoswarm::harness;

namespace {

// Writes to a file when a path was given, stdout otherwise.
int with_output(const std::string& path, const auto& run) {
    if (path.empty()) return run(std::cout);
    std::ofstream file(path);
    if (!file) {
        std::cerr << "cannot open " << path << " for writing\n";
        return 1;
    }
    return run(file);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"demoswarm: swarm controller design from demonstrations"};
    app.require_subcommand(1);

    std::string profile_name = "desk";
    std::string mission;
    std::vector<std::string> demos;
    std::optional<std::size_t> iterations, budget, repeats, swarm_size, seeds_per_eval;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    auto* design = app.add_subcommand("design", "infer a reward from demonstrations and design controllers");
    design->add_option("--mission", mission, "mission file")->required()->check(CLI::ExistingFile);
    design->add_option("--demos", demos, "demonstration file (repeatable)")->required()->check(CLI::ExistingFile);
    design->add_option("--iterations", iterations, "apprenticeship iterations");
    design->add_option("--budget", budget, "simulations per design call");
    design->add_option("--repeats", repeats, "independent repetitions");
    design->add_option("--seed", seed, "base seed");
    design->add_option("--out", out_dir, "output directory");
    design->add_option("--profile", profile_name, "default sizes")->check(CLI::IsMember({"desk", "paper"}));
    design->add_option("--swarm-size", swarm_size, "override the number of robots");
    design->add_option("--eval-seeds", seeds_per_eval, "seeds per controller evaluation");

    std::string controller, seeds_text = "1:30", csv_out, trace_dir;
    std::string eval_profile = "desk";
    auto* evaluate = app.add_subcommand("evaluate", "score a controller on the mission objective");
    evaluate->add_option("--mission", mission, "mission file")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--controller", controller, "controller file")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--seeds", seeds_text, "N or FIRST:LAST");
    evaluate->add_option("--swarm-size", swarm_size, "override the number of robots");
    evaluate->add_option("--profile", eval_profile, "desk uses 10 robots")->check(CLI::IsMember({"desk", "paper"}));
    evaluate->add_option("--out", csv_out, "CSV file (default stdout)");
    evaluate->add_option("--trace-dir", trace_dir, "write one trace per seed here");

    std::string trace, format = "text", replay_out, replay_mission;
    auto* replay = app.add_subcommand("replay", "render a recorded trace");
    replay->add_option("trace", trace, "trace file")->required();
    replay->add_option("--format", format, "text or svg")->check(CLI::IsMember({"text", "svg"}));
    replay->add_option("--out", replay_out, "output directory (svg) or file (text)");
    replay->add_option("--mission", replay_mission, "mission file for arena drawing")->check(CLI::ExistingFile);

    std::vector<std::string> runs;
    std::string weights_out;
    auto* export_weights = app.add_subcommand("export-weights", "average inferred weights across runs");
    export_weights->add_option("runs", runs, "run records")->required()->check(CLI::ExistingFile);
    export_weights->add_option("--out", weights_out, "CSV file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*design) {
            const hs::Profile p = hs::profile(profile_name);
            hs::ExperimentConfig cfg;
            cfg.mission = mission;
            cfg.demos.assign(demos.begin(), demos.end());
            cfg.iterations = iterations.value_or(p.iterations);
            cfg.budget.max_simulations = budget.value_or(p.budget);
            if (seeds_per_eval) cfg.budget.seeds_per_evaluation = *seeds_per_eval;
            cfg.repeats = repeats.value_or(p.repeats);
            cfg.base_seed = seed;
            cfg.out = out_dir;
            cfg.swarm_size = swarm_size ? swarm_size : p.swarm_size;
            return hs::cmd_design(cfg, std::cerr, std::cerr);
        }
        if (*evaluate) {
            hs::EvaluateOptions opt;
            opt.mission = mission;
            opt.controller = controller;
            opt.seeds = hs::parse_seed_range(seeds_text);
            opt.swarm_size = swarm_size ? swarm_size : hs::profile(eval_profile).swarm_size;
            if (!trace_dir.empty()) opt.trace_dir = trace_dir;
            return with_output(csv_out, [&](std::ostream& o) { return hs::cmd_evaluate(opt, o, std::cerr); });
        }
        if (*replay) {
            hs::ReplayOptions opt;
            opt.trace = trace;
            opt.format = format;
            if (!replay_mission.empty()) opt.mission = replay_mission;
            if (format == "svg") {
                if (!replay_out.empty()) opt.out_dir = replay_out;
                return hs::cmd_replay(opt, std::cout, std::cerr);
            }
            return with_output(replay_out, [&](std::ostream& o) { return hs::cmd_replay(opt, o, std::cerr); });
        }
        if (*export_weights) {
            std::vector<hs::fs::path> paths(runs.begin(), runs.end());
            return with_output(weights_out, [&](std::ostream& o) { return hs::cmd_export_weights(paths, o, std::cerr); });
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 1;
}
