#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "demoswarm/episode.hpp"
#include "demoswarm/errors.hpp"
#include "demoswarm/harness.hpp"
#include "demoswarm/io.hpp"

using namespace demoswarm;
namespace hs = demoswarm::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = DEMOSWARM_SOURCE_DIR;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("demoswarm_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string f; std::getline(in, f, sep);) out.push_back(f);
    return out;
}

hs::ExperimentConfig small_config(const fs::path& out) {
    hs::ExperimentConfig c;
    c.mission = kRoot / "missions/homing.json";
    c.demos = {kRoot / "demos/homing_10_0.txt", kRoot / "demos/homing_10_1.txt"};
    c.iterations = 1;
    c.budget = {24, 2};
    c.repeats = 1;
    c.swarm_size = 10;
    c.out = out;
    return c;
}

IrlRun synthetic_run(const std::string& mission, std::size_t n, std::vector<std::string> landmarks, double sign) {
    IrlRun r;
    r.mission = mission;
    r.swarm_size = n;
    r.landmarks = std::move(landmarks);
    r.mu_expert.assign(n * r.landmarks.size(), 0.5);
    IrlIteration first;
    first.w.w.assign(r.mu_expert.size(), 0.0);
    first.controller = PfsmController::stop();
    first.mu.mu = r.mu_expert;
    first.mu.sample_count = 1;
    IrlIteration second = first;
    second.index = 1;
    for (std::size_t i = 0; i < second.w.w.size(); ++i) second.w.w[i] = sign * (0.125 + 0.0625 * static_cast<double>(i % 4));
    r.iterations = {first, second};
    return r;
}

void write_run(const fs::path& p, const IrlRun& r) { io::write_atomically(p, io::run_to_json(r).dump(2)); }

}  // namespace

TEST_CASE("io: mission, controller and demonstration round trips") {
    const fs::path dir = scratch("io");
    fs::create_directories(dir);
    for (MissionKind k : {MissionKind::homing, MissionKind::aac, MissionKind::sac, MissionKind::cfa}) {
        const MissionSpec m = build_mission(k);
        io::save_mission(dir / "m.json", m);
        const MissionSpec back = io::load_mission(dir / "m.json");
        CHECK(back.arena.spec() == m.arena.spec());
        CHECK(back.kind == m.kind);
    }
    Rng rng(1);
    const PfsmController c = random_controller(rng);
    io::save_controller(dir / "c.json", {c, std::string("Homing")});
    const io::ControllerDocument doc = io::load_controller(dir / "c.json");
    CHECK(doc.controller == c);
    CHECK(doc.mission == std::optional<std::string>("Homing"));

    std::istringstream text("# demo\n0.1 0.2\n\n-0.3   0.4  # trailing\n");
    const Demonstration d = io::parse_demonstration(text);
    CHECK(d.positions == std::vector<Vec2>{{0.1, 0.2}, {-0.3, 0.4}});
    std::istringstream bad("0.1 zebra\n");
    CHECK_THROWS_AS(io::parse_demonstration(bad), ParseError);
    CHECK_THROWS(io::load_demonstration(dir / "missing.txt"));
    std::ofstream(dir / "broken.json") << "{\"arena\": 3}";
    CHECK_THROWS(io::load_mission(dir / "broken.json"));
}

TEST_CASE("io: trace text is stable") {
    MissionSpec m = build_mission(MissionKind::aac);
    m.swarm_size = 4;
    m.duration = 2.0;
    Rng rng(2);
    const Trace t = run_episode(m, random_controller(rng), 3);
    std::ostringstream first;
    io::write_trace(first, t);
    std::istringstream in(first.str());
    const Trace back = io::parse_trace(in);
    CHECK(back.seed == 3);
    CHECK(back.step_duration == 0.1);
    REQUIRE(back.states.size() == t.states.size());
    for (std::size_t i = 0; i < t.states.size(); ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(std::abs(back.states[i].robots[j].position.x - t.states[i].robots[j].position.x) <= 5e-7);
    std::ostringstream second;
    io::write_trace(second, back);
    CHECK(second.str() == first.str());

    std::istringstream empty("");
    CHECK_THROWS_AS(io::parse_trace(empty), ParseError);
    std::istringstream ragged("1 2 3\n1 2 3 4 5 6\n");
    CHECK_THROWS_AS(io::parse_trace(ragged), ParseError);
}

TEST_CASE("csv numbers and quantiles") {
    CHECK(io::csv_number(0.0) == "0");
    CHECK(io::csv_number(20.0) == "20");
    CHECK(io::csv_number(1.0 / 3.0) == "0.333333");
    CHECK(io::csv_number(1234.5678) == "1234.57");
    CHECK(io::csv_number(-0.01) == "-0.01");
    CHECK(hs::quantile({3, 1, 2}, 0.5) == 2.0);
    CHECK(hs::quantile({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(hs::quantile({1, 2, 3, 4}, 0.25) == 1.75);
    CHECK_THROWS_AS(hs::quantile({}, 0.5), EmptySample);
    CHECK(hs::parse_seed_range("30").count() == 30);
    CHECK(hs::parse_seed_range("5:9").first == 5);
    CHECK(hs::parse_seed_range("5:9").count() == 5);
    CHECK_THROWS(hs::parse_seed_range("9:5"));
    CHECK_THROWS(hs::parse_seed_range("x"));
    CHECK(hs::profile("desk").iterations == 10);
    CHECK(hs::profile("paper").iterations == 50);
    CHECK(hs::profile("paper").budget == 10000);
    CHECK(hs::profile("paper").repeats == 10);
    CHECK_THROWS(hs::profile("lab"));
}

TEST_CASE("design: zero iterations writes one record with the initial policy") {
    const fs::path out = scratch("design0");
    hs::ExperimentConfig c = small_config(out);
    c.iterations = 0;
    std::ostringstream log, err;
    REQUIRE(hs::cmd_design(c, log, err) == 0);
    const IrlRun r = io::load_run(out / "run_0.json");
    CHECK(r.iterations.size() == 1);
    CHECK(r.selected == 0);
    CHECK(fs::exists(out / "controller_0.json"));
    CHECK(fs::exists(out / "margins_0.csv"));
    CHECK(lines(slurp(out / "margins_0.csv")).size() == 2);
}

TEST_CASE("design: missing inputs fail before writing anything") {
    const fs::path out = scratch("design_missing");
    hs::ExperimentConfig c = small_config(out);
    c.demos.push_back(kRoot / "demos/does_not_exist.txt");
    std::ostringstream log, err;
    CHECK(hs::cmd_design(c, log, err) == 1);
    CHECK_FALSE(fs::exists(out));
    CHECK(err.str().find("does_not_exist") != std::string::npos);

    hs::ExperimentConfig wrong = small_config(out);
    wrong.swarm_size = 20;  // demos hold 10 robots
    CHECK(hs::cmd_design(wrong, log, err) == 1);
    CHECK_FALSE(fs::exists(out));
    hs::ExperimentConfig none = small_config(out);
    none.repeats = 0;
    CHECK(hs::cmd_design(none, log, err) == 1);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("design: identical configs give byte-identical records") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    std::ostringstream log, err;
    hs::ExperimentConfig ca = small_config(a), cb = small_config(b);
    ca.repeats = cb.repeats = 2;
    REQUIRE(hs::cmd_design(ca, log, err) == 0);
    REQUIRE(hs::cmd_design(cb, log, err) == 0);
    for (const char* f : {"run_0.json", "run_1.json", "controller_0.json", "margins_1.csv"})
        CHECK(slurp(a / f) == slurp(b / f));
    CHECK(slurp(a / "run_0.json") != slurp(a / "run_1.json"));
}

TEST_CASE("evaluate: rows, summary and bounds") {
    const fs::path dir = scratch("eval");
    fs::create_directories(dir);
    io::save_controller(dir / "stop.json", {PfsmController::stop(), std::string("Homing")});
    hs::EvaluateOptions opt;
    opt.mission = kRoot / "missions/homing.json";
    opt.controller = dir / "stop.json";
    opt.seeds = {1, 30};
    opt.trace_dir = dir / "traces";
    std::ostringstream out, err;
    REQUIRE(hs::cmd_evaluate(opt, out, err) == 0);
    const auto rows = lines(out.str());
    REQUIRE(rows.size() == 32);
    CHECK(split(rows[0]).size() == 182);
    CHECK(split(rows[0])[1] == "value");
    CHECK(split(rows.back())[0] == "summary");
    CHECK(split(rows.back()).size() == 4);
    const MissionSpec m = io::load_mission(opt.mission);
    for (std::size_t i = 1; i <= 30; ++i) {
        const auto f = split(rows[i]);
        const Trace t = io::load_trace(dir / "traces" / ("trace_" + f[0] + ".txt"));
        // stop controller: final count equals the initial count
        CHECK(std::stod(f[1]) == count_inside(m, t.states.front(), objective_regions(m)));
        CHECK(std::stod(f[1]) <= 20.0);
    }

    opt.mission = kRoot / "missions/cfa.json";
    opt.trace_dir.reset();
    Rng rng(5);
    io::save_controller(dir / "rand.json", {random_controller(rng), std::string("CFA")});
    opt.controller = dir / "rand.json";
    opt.seeds = {1, 5};
    std::ostringstream cfa;
    REQUIRE(hs::cmd_evaluate(opt, cfa, err) == 0);
    const auto cfa_rows = lines(cfa.str());
    CHECK(cfa_rows[0] == "seed,value");
    for (std::size_t i = 1; i <= 5; ++i) {
        const double v = std::stod(split(cfa_rows[i])[1]);
        CHECK(v >= 0.0);
        CHECK(v <= 250.0);
    }
}

TEST_CASE("evaluate: mission mismatch fails") {
    const fs::path dir = scratch("eval_mismatch");
    fs::create_directories(dir);
    io::save_controller(dir / "c.json", {PfsmController::stop(), std::string("CFA")});
    hs::EvaluateOptions opt;
    opt.mission = kRoot / "missions/homing.json";
    opt.controller = dir / "c.json";
    opt.seeds = {1, 2};
    std::ostringstream out, err;
    CHECK(hs::cmd_evaluate(opt, out, err) == 1);
    CHECK(out.str().empty());
}

TEST_CASE("replay: frames, losslessness and errors") {
    const fs::path dir = scratch("replay");
    fs::create_directories(dir);
    MissionSpec m = build_mission(MissionKind::sac);
    Rng rng(7);
    const Trace t = run_episode(m, random_controller(rng), 11);
    {
        std::ofstream f(dir / "t.txt");
        io::write_trace(f, t);
    }
    const Trace recorded = io::load_trace(dir / "t.txt");
    hs::ReplayOptions opt;
    opt.trace = dir / "t.txt";
    std::ostringstream out, err;
    REQUIRE(hs::cmd_replay(opt, out, err) == 0);
    const auto text = lines(out.str());
    std::size_t frames = 0;
    std::size_t robot = 0;
    for (const std::string& l : text) {
        if (l.rfind("frame ", 0) == 0) {
            ++frames;
            robot = 0;
            continue;
        }
        const auto f = split(l, ' ');
        REQUIRE(f.size() == 3);
        const RobotState& r = recorded.states[frames - 1].robots[robot++];
        CHECK(std::stod(f[0]) == r.position.x);
        CHECK(std::stod(f[1]) == r.position.y);
        CHECK(std::stod(f[2]) == r.heading);
    }
    CHECK(frames == 1801);

    opt.format = "svg";
    opt.out_dir = dir / "svg";
    opt.mission = kRoot / "missions/sac.json";
    std::ostringstream svg;
    REQUIRE(hs::cmd_replay(opt, svg, err) == 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir / "svg")) files += e.path().extension() == ".svg";
    CHECK(files == 1801);
    CHECK(slurp(dir / "svg" / "frame_00000.svg").find("<svg") == 0);

    std::ofstream(dir / "empty.txt").close();
    hs::ReplayOptions empty;
    empty.trace = dir / "empty.txt";
    CHECK(hs::cmd_replay(empty, out, err) == 1);
    std::ofstream(dir / "junk.txt") << "1 2 banana\n";
    empty.trace = dir / "junk.txt";
    CHECK(hs::cmd_replay(empty, out, err) == 1);
}

TEST_CASE("export-weights") {
    const fs::path dir = scratch("weights");
    fs::create_directories(dir);
    const IrlRun plus = synthetic_run("Homing", 20, {"black0", "peer"}, 1.0);
    const IrlRun minus = synthetic_run("Homing", 20, {"black0", "peer"}, -1.0);
    write_run(dir / "plus.json", plus);
    write_run(dir / "minus.json", minus);
    std::ostringstream out, err;
    REQUIRE(hs::cmd_export_weights({dir / "plus.json"}, out, err) == 0);
    auto rows = lines(out.str());
    REQUIRE(rows.size() == 41);
    CHECK(rows[0] == "feature,landmark,rank,mean_w");
    for (std::size_t i = 0; i < 40; ++i) {
        const auto f = split(rows[i + 1]);
        CHECK(std::stoul(f[0]) == i);
        CHECK(f[1] == (i < 20 ? "black0" : "peer"));
        CHECK(std::stoul(f[2]) == i % 20 + 1);
        CHECK(std::stod(f[3]) == plus.w_star().w[i]);
    }

    std::ostringstream zero;
    REQUIRE(hs::cmd_export_weights({dir / "plus.json", dir / "minus.json"}, zero, err) == 0);
    for (std::size_t i = 1; i < lines(zero.str()).size(); ++i) CHECK(split(lines(zero.str())[i])[3] == "0");

    std::vector<fs::path> ten;
    for (int i = 0; i < 10; ++i) {
        ten.push_back(dir / ("r" + std::to_string(i) + ".json"));
        write_run(ten.back(), plus);
    }
    std::ostringstream many;
    REQUIRE(hs::cmd_export_weights(ten, many, err) == 0);
    CHECK(lines(many.str()).size() == 41);

    write_run(dir / "cfa.json", synthetic_run("CFA", 20, {"black0", "black1", "black2", "peer"}, 1.0));
    std::ostringstream mixed;
    CHECK(hs::cmd_export_weights({dir / "plus.json", dir / "cfa.json"}, mixed, err) == 1);
    CHECK(mixed.str().empty());

    const auto groups = hs::group_mean_abs(plus.w_star().w, 2, 20);
    CHECK(groups.size() == 2);
    CHECK(groups[0] == doctest::Approx((0.125 + 0.1875 + 0.25 + 0.3125) / 4));
}
