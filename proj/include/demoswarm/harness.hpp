#pragma once

// Experiment orchestration behind the command-line front end. Every command
// validates all of its inputs before writing anything and returns a process
// exit code (0 success, 1 failure with a diagnostic on `err`).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "demoswarm/designer.hpp"

namespace demoswarm::harness {

namespace fs = std::filesystem;

struct Profile {
    std::string name;
    std::optional<std::size_t> swarm_size;  // overrides the mission file when set
    std::size_t iterations;
    std::size_t budget;
    std::size_t repeats;
};

/// "desk": 10 robots, 10 iterations, 500 simulations per iteration, 1 repeat.
/// "paper": mission swarm size, 50 iterations, 10000 simulations, 10 repeats.
Profile profile(const std::string& name);

struct ExperimentConfig {
    fs::path mission;
    std::vector<fs::path> demos;
    std::size_t iterations = 10;
    DesignBudget budget{500, 10};
    std::size_t repeats = 1;
    std::uint64_t base_seed = 1;
    fs::path out = "out";
    std::optional<std::size_t> swarm_size;
};

/// Runs the apprenticeship loop `repeats` times with seeds base_seed + r and
/// writes run_<r>.json, controller_<r>.json and margins_<r>.csv into `out`.
int cmd_design(const ExperimentConfig& config, std::ostream& log, std::ostream& err);

struct SeedRange {
    std::uint64_t first = 1;
    std::uint64_t last = 30;  // inclusive
    std::size_t count() const { return static_cast<std::size_t>(last - first + 1); }
};
/// "A:B" (inclusive) or "N" (1..N).
SeedRange parse_seed_range(const std::string& text);

struct EvaluateOptions {
    fs::path mission;
    fs::path controller;
    SeedRange seeds;
    std::optional<std::size_t> swarm_size;
    std::optional<fs::path> trace_dir;  // writes trace_<seed>.txt when set
};

/// CSV: header "seed,value[,N_1..N_T]", one row per seed, then
/// "summary,<median>,<q1>,<q3>".
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);

struct ReplayOptions {
    fs::path trace;
    std::string format = "text";              // text | svg
    std::optional<fs::path> out_dir;          // svg frames go here
    std::optional<fs::path> mission;          // draws the arena in svg frames
};

int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err);

/// CSV: "feature,landmark,rank,mean_w", one row per feature.
int cmd_export_weights(const std::vector<fs::path>& runs, std::ostream& out, std::ostream& err);

/// Mean |w| per landmark group, in landmark order.
std::vector<double> group_mean_abs(const std::vector<double>& w, std::size_t groups, std::size_t swarm_size);

/// Linear-interpolation quantile of a sample (q in [0, 1]).
double quantile(std::vector<double> values, double q);

}  // namespace demoswarm::harness
