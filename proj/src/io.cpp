#include "demoswarm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "demoswarm/errors.hpp"

namespace demoswarm::io {

namespace {

std::string color_name(FloorColor c) {
    switch (c) {
        case FloorColor::black: return "black";
        case FloorColor::white: return "white";
        case FloorColor::gray: return "gray";
    }
    return "gray";
}

FloorColor parse_color(const std::string& s) {
    if (s == "black") return FloorColor::black;
    if (s == "white") return FloorColor::white;
    throw ParseError("region color must be black or white, got '" + s + "'");
}

json point(Vec2 p) { return json::array({p.x, p.y}); }

Vec2 parse_point(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a point [x, y]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

template <class F>
auto with_parse_errors(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

}  // namespace

json mission_to_json(const MissionSpec& m) {
    const ArenaSpec& a = m.arena.spec();
    json regions = json::array();
    for (const RegionSpec& r : a.regions) {
        json jr;
        if (const auto* c = std::get_if<CircleShape>(&r.shape)) {
            jr = {{"shape", "circle"}, {"center", point(c->center)}, {"radius", c->radius}};
        } else {
            const auto& rc = std::get<RectShape>(r.shape);
            jr = {{"shape", "rectangle"}, {"center", point(rc.center)}, {"width", rc.width},
                  {"height", rc.height}, {"orientation", rc.orientation}};
        }
        jr["color"] = color_name(r.color);
        regions.push_back(jr);
    }
    json walls = json::array();
    for (const Segment& w : a.walls) walls.push_back(json::array({point(w.a), point(w.b)}));

    json arena = {{"boundary", {{"sides", a.sides}, {"circumradius", a.circumradius}}},
                  {"regions", regions},
                  {"walls", walls}};
    if (a.light) arena["light"] = {{"position", point(a.light->position)}, {"on", a.light->on}};

    const SimParams& s = m.sim;
    return {{"name", std::string(m.name())},
            {"arena", arena},
            {"swarm_size", m.swarm_size},
            {"duration", m.duration},
            {"sim",
             {{"dt", s.dt}, {"v_max", s.v_max}, {"robot_diameter", s.robot_diameter}, {"axle_length", s.axle_length},
              {"proximity_range", s.proximity_range}, {"rab_range", s.rab_range}, {"noise", s.noise}}}};
}

MissionSpec mission_from_json(const json& j) {
    return with_parse_errors("mission", [&] {
        ArenaSpec a;
        const json& ja = j.at("arena");
        a.sides = ja.at("boundary").at("sides").get<int>();
        a.circumradius = ja.at("boundary").at("circumradius").get<double>();
        for (const json& jr : ja.value("regions", json::array())) {
            RegionSpec r;
            const std::string shape = jr.at("shape").get<std::string>();
            if (shape == "circle") {
                r.shape = CircleShape{parse_point(jr.at("center")), jr.at("radius").get<double>()};
            } else if (shape == "rectangle") {
                r.shape = RectShape{parse_point(jr.at("center")), jr.at("width").get<double>(),
                                    jr.at("height").get<double>(), jr.value("orientation", 0.0)};
            } else {
                throw ParseError("unknown region shape '" + shape + "'");
            }
            r.color = parse_color(jr.at("color").get<std::string>());
            a.regions.push_back(r);
        }
        for (const json& jw : ja.value("walls", json::array())) {
            if (!jw.is_array() || jw.size() != 2) throw ParseError("wall must be [[x, y], [x, y]]");
            a.walls.push_back({parse_point(jw.at(0)), parse_point(jw.at(1))});
        }
        if (ja.contains("light")) a.light = LightSpec{parse_point(ja["light"].at("position")), ja["light"].at("on").get<bool>()};

        SimParams s;
        if (j.contains("sim")) {
            const json& js = j["sim"];
            s.dt = js.value("dt", s.dt);
            s.v_max = js.value("v_max", s.v_max);
            s.robot_diameter = js.value("robot_diameter", s.robot_diameter);
            s.axle_length = js.value("axle_length", s.axle_length);
            s.proximity_range = js.value("proximity_range", s.proximity_range);
            s.rab_range = js.value("rab_range", s.rab_range);
            s.noise = js.value("noise", s.noise);
        }
        const auto swarm = j.at("swarm_size").get<long long>();
        if (swarm < 1) throw InvalidArgument("swarm_size must be >= 1");
        MissionSpec m{parse_mission_name(j.at("name").get<std::string>()), Arena(std::move(a)),
                      static_cast<std::size_t>(swarm), j.at("duration").get<double>(), s};
        m.validate();
        return m;
    });
}

MissionSpec load_mission(const fs::path& path) { return mission_from_json(read_json(path)); }

void save_mission(const fs::path& path, const MissionSpec& mission) {
    write_atomically(path, mission_to_json(mission).dump(2) + "\n");
}

json controller_to_json(const PfsmController& c) {
    json states = json::array();
    for (const ControllerState& s : c.states) {
        json js = {{"behavior", std::string(to_string(s.behavior.kind))}};
        if (s.behavior.kind == BehaviorKind::exploration) js["turn_steps"] = s.behavior.turn_steps;
        if (s.behavior.kind == BehaviorKind::attraction || s.behavior.kind == BehaviorKind::repulsion)
            js["gain"] = s.behavior.gain;
        json transitions = json::array();
        for (const Transition& t : s.transitions) {
            json jt = {{"condition", std::string(to_string(t.condition.kind))}, {"target", t.target}};
            if (t.condition.kind == ConditionKind::neighbor_count ||
                t.condition.kind == ConditionKind::inverted_neighbor_count) {
                jt["threshold"] = t.condition.threshold;
                jt["steepness"] = t.condition.steepness;
            } else {
                jt["probability"] = t.condition.probability;
            }
            transitions.push_back(jt);
        }
        js["transitions"] = transitions;
        states.push_back(js);
    }
    return {{"initial_state", c.initial_state}, {"states", states}};
}

PfsmController controller_from_json(const json& j) {
    return with_parse_errors("controller", [&] {
        PfsmController c;
        c.initial_state = j.value("initial_state", std::size_t{0});
        for (const json& js : j.at("states")) {
            ControllerState s;
            const std::string b = js.at("behavior").get<std::string>();
            const auto kind = parse_behavior(b);
            if (!kind) throw ParseError("unknown behavior '" + b + "'");
            s.behavior.kind = *kind;
            s.behavior.turn_steps = js.value("turn_steps", 0);
            s.behavior.gain = js.value("gain", 0.0);
            for (const json& jt : js.value("transitions", json::array())) {
                Transition t;
                const std::string cname = jt.at("condition").get<std::string>();
                const auto ck = parse_condition(cname);
                if (!ck) throw ParseError("unknown condition '" + cname + "'");
                t.condition.kind = *ck;
                t.condition.probability = jt.value("probability", 0.0);
                t.condition.threshold = jt.value("threshold", 0);
                t.condition.steepness = jt.value("steepness", 0.0);
                t.target = jt.at("target").get<std::size_t>();
                s.transitions.push_back(t);
            }
            c.states.push_back(std::move(s));
        }
        c.validate();
        return c;
    });
}

void save_controller(const fs::path& path, const ControllerDocument& doc) {
    json j = {{"controller", controller_to_json(doc.controller)}};
    if (doc.mission) j["mission"] = *doc.mission;
    write_atomically(path, j.dump(2) + "\n");
}

ControllerDocument load_controller(const fs::path& path) {
    const json j = read_json(path);
    return with_parse_errors(path.string(), [&] {
        ControllerDocument doc{controller_from_json(j.at("controller")), std::nullopt};
        if (j.contains("mission")) doc.mission = j["mission"].get<std::string>();
        return doc;
    });
}

Demonstration parse_demonstration(std::istream& in) {
    Demonstration d;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, y;
        if (!(ls >> x)) continue;
        if (!(ls >> y)) throw ParseError("demonstration line " + std::to_string(lineno) + ": expected 'x y'");
        std::string extra;
        if (ls >> extra) throw ParseError("demonstration line " + std::to_string(lineno) + ": trailing data");
        d.positions.push_back({x, y});
    }
    if (d.positions.empty()) throw ParseError("demonstration has no points");
    return d;
}

Demonstration load_demonstration(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return parse_demonstration(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_demonstration(const fs::path& path, const Demonstration& demo) {
    std::ostringstream out;
    char buf[64];
    for (const Vec2 p : demo.positions) {
        std::snprintf(buf, sizeof buf, "%.6f %.6f\n", p.x, p.y);
        out << buf;
    }
    write_atomically(path, out.str());
}

void write_trace(std::ostream& out, const Trace& trace) {
    out << "# seed " << trace.seed << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "# dt %.6f\n", trace.step_duration);
    out << buf;
    for (const SwarmState& s : trace.states) {
        bool first = true;
        for (const RobotState& r : s.robots) {
            std::snprintf(buf, sizeof buf, "%s%.6f %.6f %.6f", first ? "" : " ", r.position.x, r.position.y, r.heading);
            out << buf;
            first = false;
        }
        out << "\n";
    }
}

Trace parse_trace(std::istream& in) {
    Trace t;
    std::string line;
    std::size_t robots = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "seed" && !(ls >> t.seed)) throw ParseError("trace: bad seed header");
            if (key == "dt" && !(ls >> t.step_duration)) throw ParseError("trace: bad dt header");
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> values;
        double v;
        while (ls >> v) values.push_back(v);
        if (!ls.eof()) throw ParseError("trace line " + std::to_string(lineno) + ": non-numeric data");
        if (values.empty() || values.size() % 3 != 0)
            throw ParseError("trace line " + std::to_string(lineno) + ": expected x y theta triples");
        if (robots == 0) robots = values.size() / 3;
        if (values.size() / 3 != robots) throw ParseError("trace line " + std::to_string(lineno) + ": robot count changed");
        SwarmState s;
        for (std::size_t i = 0; i < robots; ++i) s.robots.push_back({{values[3 * i], values[3 * i + 1]}, values[3 * i + 2]});
        t.states.push_back(std::move(s));
    }
    if (t.states.empty()) throw ParseError("trace has no states");
    return t;
}

Trace load_trace(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return parse_trace(in);
}

json run_to_json(const IrlRun& run) {
    json iterations = json::array();
    for (const IrlIteration& it : run.iterations) {
        iterations.push_back({{"index", it.index},
                              {"w", it.w.w},
                              {"mu", it.mu.mu},
                              {"samples", it.mu.sample_count},
                              {"margin", it.margin},
                              {"distance_to_demo", it.distance_to_demo},
                              {"controller", controller_to_json(it.controller)}});
    }
    return {{"format", "demoswarm-run/1"},
            {"mission", run.mission},
            {"swarm_size", run.swarm_size},
            {"landmarks", run.landmarks},
            {"demonstrations", run.demonstrations},
            {"mu_expert", run.mu_expert},
            {"iterations", iterations},
            {"selected", run.selected},
            {"stopped_early", run.stopped_early},
            {"w_star", run.w_star().w}};
}

IrlRun run_from_json(const json& j) {
    return with_parse_errors("run record", [&] {
        IrlRun run;
        run.mission = j.at("mission").get<std::string>();
        run.swarm_size = j.at("swarm_size").get<std::size_t>();
        run.landmarks = j.at("landmarks").get<std::vector<std::string>>();
        run.demonstrations = j.at("demonstrations").get<std::size_t>();
        run.mu_expert = j.at("mu_expert").get<std::vector<double>>();
        for (const json& ji : j.at("iterations")) {
            IrlIteration it;
            it.index = ji.at("index").get<std::size_t>();
            it.w.w = ji.at("w").get<std::vector<double>>();
            it.mu.mu = ji.at("mu").get<std::vector<double>>();
            it.mu.sample_count = ji.at("samples").get<std::size_t>();
            it.margin = ji.at("margin").get<double>();
            it.distance_to_demo = ji.at("distance_to_demo").get<double>();
            it.controller = controller_from_json(ji.at("controller"));
            run.iterations.push_back(std::move(it));
        }
        run.selected = j.at("selected").get<std::size_t>();
        run.stopped_early = j.at("stopped_early").get<bool>();
        if (run.iterations.empty() || run.selected >= run.iterations.size())
            throw ParseError("run record has no iterations or an invalid selection");
        return run;
    });
}

IrlRun load_run(const fs::path& path) {
    try {
        return run_from_json(read_json(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_atomically(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string csv_number(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    if (v == 0.0) return "0";
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(v))));
    const int decimals = std::clamp(5 - exponent, 0, 17);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

}  // namespace demoswarm::io
