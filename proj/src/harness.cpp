#include "demoswarm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "demoswarm/apprentice.hpp"
#include "demoswarm/episode.hpp"
#include "demoswarm/errors.hpp"
#include "demoswarm/io.hpp"

namespace demoswarm::harness {

Profile profile(const std::string& name) {
    if (name == "desk") return {"desk", 10, 10, 500, 1};
    if (name == "paper") return {"paper", std::nullopt, 50, 10000, 10};
    throw InvalidArgument("unknown profile '" + name + "' (expected desk or paper)");
}

namespace {

MissionSpec load_mission_for(const fs::path& path, std::optional<std::size_t> swarm_size) {
    MissionSpec m = io::load_mission(path);
    if (swarm_size) {
        if (*swarm_size < 1) throw InvalidArgument("swarm size must be >= 1");
        m.swarm_size = *swarm_size;
    }
    return m;
}

std::string margins_csv(const IrlRun& run) {
    std::ostringstream out;
    out << "index,margin,distance_to_demo";
    const std::size_t k = run.mu_expert.size();
    for (std::size_t i = 0; i < k; ++i) out << ",w_" << i;
    out << "\n";
    for (const MarginRow& row : margin_report(run)) {
        out << row.index << "," << io::csv_number(row.margin) << "," << io::csv_number(row.distance_to_demo);
        for (double v : row.w) out << "," << io::csv_number(v);
        out << "\n";
    }
    return out.str();
}

}  // namespace

int cmd_design(const ExperimentConfig& config, std::ostream& log, std::ostream& err) {
    MissionSpec mission;
    std::vector<Demonstration> demos;
    try {
        if (config.repeats < 1) throw InvalidArgument("repeats must be >= 1");
        if (config.demos.empty()) throw InvalidArgument("at least one --demos file is required");
        config.budget.validate();
        mission = load_mission_for(config.mission, config.swarm_size);
        for (const fs::path& p : config.demos) {
            Demonstration d = io::load_demonstration(p);
            try {
                validate_demonstration(mission, d);
            } catch (const Error& e) {
                throw InvalidDemonstration(p.string() + ": " + e.what());
            }
            demos.push_back(std::move(d));
        }
        fs::create_directories(config.out);
    } catch (const std::exception& e) {
        err << "design: " << e.what() << "\n";
        return 1;
    }

    try {
        for (std::size_t r = 0; r < config.repeats; ++r) {
            const std::uint64_t seed = config.base_seed + r;
            Rng rng(seed);
            log << "repeat " << r << " (seed " << seed << ")\n";
            IrlRun run = run_demo_cho(mission, demos, config.iterations, config.budget, rng, [&](const IrlIteration& it) {
                log << "  iteration " << it.index << "  margin " << io::csv_number(it.margin) << "  distance "
                    << io::csv_number(it.distance_to_demo) << "\n";
            });
            const std::string controller_name = "controller_" + std::to_string(r) + ".json";
            io::json record = io::run_to_json(run);
            record["seed"] = seed;
            record["controller_file"] = controller_name;
            record["budget"] = {{"max_simulations", config.budget.max_simulations},
                                {"seeds_per_evaluation", config.budget.seeds_per_evaluation}};
            io::save_controller(config.out / controller_name,
                                {run.selected_controller(), std::string(mission.name())});
            io::write_atomically(config.out / ("margins_" + std::to_string(r) + ".csv"), margins_csv(run));
            io::write_atomically(config.out / ("run_" + std::to_string(r) + ".json"), record.dump(2) + "\n");
            log << "  selected iteration " << run.selected << "\n";
        }
    } catch (const std::exception& e) {
        err << "design: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

SeedRange parse_seed_range(const std::string& text) {
    try {
        const auto colon = text.find(':');
        std::size_t used = 0;
        if (colon == std::string::npos) {
            const auto n = std::stoull(text, &used);
            if (used != text.size() || n < 1) throw InvalidArgument("bad seed count");
            return {1, n};
        }
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        const auto first = std::stoull(a, &used);
        if (used != a.size()) throw InvalidArgument("bad seed range");
        const auto last = std::stoull(b, &used);
        if (used != b.size() || last < first) throw InvalidArgument("bad seed range");
        return {first, last};
    } catch (const std::logic_error&) {
        throw InvalidArgument("seeds must be 'N' or 'FIRST:LAST', got '" + text + "'");
    }
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw EmptySample("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err) {
    MissionSpec mission;
    PfsmController controller;
    try {
        mission = load_mission_for(options.mission, options.swarm_size);
        const io::ControllerDocument doc = io::load_controller(options.controller);
        if (doc.mission && parse_mission_name(*doc.mission) != mission.kind)
            throw InvalidArgument("controller was designed for " + *doc.mission + ", mission is " +
                                  std::string(mission.name()));
        controller = doc.controller;
        if (options.trace_dir) fs::create_directories(*options.trace_dir);
    } catch (const std::exception& e) {
        err << "evaluate: " << e.what() << "\n";
        return 1;
    }

    try {
        const bool has_counts = mission.kind != MissionKind::cfa;
        const auto seconds = static_cast<int>(std::floor(mission.duration + 1e-9));
        std::ostringstream csv;
        csv << "seed,value";
        if (has_counts)
            for (int t = 1; t <= seconds; ++t) csv << ",N_" << t;
        csv << "\n";
        std::vector<double> values;
        for (std::uint64_t seed = options.seeds.first; seed <= options.seeds.last; ++seed) {
            const Trace trace = run_episode(mission, controller, seed);
            const ObjectiveResult r = objective(mission, trace);
            values.push_back(r.value);
            csv << seed << "," << io::csv_number(r.value);
            for (int c : r.counts) csv << "," << c;
            csv << "\n";
            if (options.trace_dir) {
                std::ostringstream t;
                io::write_trace(t, trace);
                io::write_atomically(*options.trace_dir / ("trace_" + std::to_string(seed) + ".txt"), t.str());
            }
        }
        csv << "summary," << io::csv_number(quantile(values, 0.5)) << "," << io::csv_number(quantile(values, 0.25))
            << "," << io::csv_number(quantile(values, 0.75)) << "\n";
        out << csv.str();
    } catch (const std::exception& e) {
        err << "evaluate: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

namespace {

constexpr double kPixelsPerMeter = 200.0;

std::string svg_frame(const Trace& trace, std::size_t index, const std::optional<MissionSpec>& mission,
                      double half_extent, double robot_radius) {
    std::ostringstream s;
    const double size = 2.0 * half_extent * kPixelsPerMeter;
    auto px = [&](Vec2 p) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", (p.x + half_extent) * kPixelsPerMeter,
                      (half_extent - p.y) * kPixelsPerMeter);
        return std::string(buf);
    };
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (mission) {
        s << "<polygon fill=\"#bbbbbb\" stroke=\"black\" points=\"";
        for (const Vec2 v : mission->arena.boundary().vertices()) s << px(v) << " ";
        s << "\"/>\n";
        for (const RegionSpec& r : mission->arena.regions()) {
            const char* fill = r.color == FloorColor::black ? "black" : "white";
            if (const auto* c = std::get_if<CircleShape>(&r.shape)) {
                const std::string center = px(c->center);
                const auto comma = center.find(',');
                s << "<circle cx=\"" << center.substr(0, comma) << "\" cy=\"" << center.substr(comma + 1) << "\" r=\""
                  << c->radius * kPixelsPerMeter << "\" fill=\"" << fill << "\"/>\n";
            } else {
                const auto& rc = std::get<RectShape>(r.shape);
                s << "<polygon fill=\"" << fill << "\" points=\"";
                const Vec2 corners[4] = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
                for (const Vec2 k : corners)
                    s << px(rc.center + rotate({k.x * rc.width, k.y * rc.height}, rc.orientation)) << " ";
                s << "\"/>\n";
            }
        }
        for (const Segment& w : mission->arena.walls()) {
            const std::string a = px(w.a), b = px(w.b);
            s << "<line x1=\"" << a.substr(0, a.find(',')) << "\" y1=\"" << a.substr(a.find(',') + 1) << "\" x2=\""
              << b.substr(0, b.find(',')) << "\" y2=\"" << b.substr(b.find(',') + 1)
              << "\" stroke=\"#8b4513\" stroke-width=\"3\"/>\n";
        }
    }
    for (const RobotState& r : trace.states[index].robots) {
        const std::string c = px(r.position);
        const std::string tip = px(r.position + unit(r.heading) * robot_radius);
        const auto comma = c.find(',');
        char pos[96];
        std::snprintf(pos, sizeof pos, "%.6f %.6f %.6f", r.position.x, r.position.y, r.heading);
        s << "<g data-state=\"" << pos << "\"><circle cx=\"" << c.substr(0, comma) << "\" cy=\"" << c.substr(comma + 1)
          << "\" r=\"" << robot_radius * kPixelsPerMeter << "\" fill=\"#1f77b4\"/>";
        s << "<line x1=\"" << c.substr(0, comma) << "\" y1=\"" << c.substr(comma + 1) << "\" x2=\""
          << tip.substr(0, tip.find(',')) << "\" y2=\"" << tip.substr(tip.find(',') + 1)
          << "\" stroke=\"white\"/></g>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace

int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err) {
    Trace trace;
    std::optional<MissionSpec> mission;
    try {
        if (options.format != "text" && options.format != "svg")
            throw InvalidArgument("format must be text or svg");
        if (options.format == "svg" && !options.out_dir) throw InvalidArgument("svg output needs --out");
        trace = io::load_trace(options.trace);
        if (options.mission) mission = io::load_mission(*options.mission);
        if (options.out_dir) fs::create_directories(*options.out_dir);
    } catch (const std::exception& e) {
        err << "replay: " << e.what() << "\n";
        return 1;
    }

    try {
        if (options.format == "text") {
            char buf[96];
            for (std::size_t i = 0; i < trace.states.size(); ++i) {
                std::snprintf(buf, sizeof buf, "frame %zu t=%.6f\n", i, static_cast<double>(i) * trace.step_duration);
                out << buf;
                for (const RobotState& r : trace.states[i].robots) {
                    std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f\n", r.position.x, r.position.y, r.heading);
                    out << buf;
                }
            }
        } else {
            const double half = mission ? mission->arena.spec().circumradius + 0.05 : 1.5;
            const double radius = mission ? mission->sim.robot_radius() : SimParams{}.robot_radius();
            for (std::size_t i = 0; i < trace.states.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "frame_%05zu.svg", i);
                io::write_atomically(*options.out_dir / name, svg_frame(trace, i, mission, half, radius));
            }
            out << trace.states.size() << " frames written to " << options.out_dir->string() << "\n";
        }
    } catch (const std::exception& e) {
        err << "replay: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

std::vector<double> group_mean_abs(const std::vector<double>& w, std::size_t groups, std::size_t swarm_size) {
    if (w.size() != groups * swarm_size) throw SizeMismatch("weight vector does not match groups x swarm size");
    std::vector<double> out(groups, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
        for (std::size_t i = 0; i < swarm_size; ++i) out[g] += std::abs(w[g * swarm_size + i]);
        out[g] /= static_cast<double>(swarm_size);
    }
    return out;
}

int cmd_export_weights(const std::vector<fs::path>& paths, std::ostream& out, std::ostream& err) {
    std::vector<IrlRun> runs;
    try {
        if (paths.empty()) throw InvalidArgument("at least one run record is required");
        for (const fs::path& p : paths) runs.push_back(io::load_run(p));
        for (const IrlRun& r : runs) {
            if (r.mission != runs.front().mission)
                throw InvalidArgument("run records mix missions (" + runs.front().mission + ", " + r.mission + ")");
            if (r.swarm_size != runs.front().swarm_size || r.landmarks != runs.front().landmarks)
                throw InvalidArgument("run records differ in feature layout");
        }
    } catch (const std::exception& e) {
        err << "export-weights: " << e.what() << "\n";
        return 1;
    }
    try {
        const std::vector<double> mean = average_weights(runs);
        const IrlRun& first = runs.front();
        std::ostringstream csv;
        csv << "feature,landmark,rank,mean_w\n";
        for (std::size_t i = 0; i < mean.size(); ++i) {
            csv << i << "," << first.landmarks[i / first.swarm_size] << "," << (i % first.swarm_size + 1) << ","
                << io::csv_number(mean[i]) << "\n";
        }
        out << csv.str();
    } catch (const std::exception& e) {
        err << "export-weights: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace demoswarm::harness
