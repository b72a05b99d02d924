#pragma once

// File formats: JSON mission / controller / run-record documents, plain-text
// demonstrations and traces.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "demoswarm/apprentice.hpp"
#include "demoswarm/controller.hpp"
#include "demoswarm/features.hpp"
#include "demoswarm/mission.hpp"
#include "demoswarm/sim.hpp"

namespace demoswarm::io {

using nlohmann::json;
namespace fs = std::filesystem;

json mission_to_json(const MissionSpec& mission);
MissionSpec mission_from_json(const json& j);
MissionSpec load_mission(const fs::path& path);
void save_mission(const fs::path& path, const MissionSpec& mission);

json controller_to_json(const PfsmController& c);
PfsmController controller_from_json(const json& j);

/// Controller file: {"controller": {...}, "mission": "<name>"?}.
struct ControllerDocument {
    PfsmController controller;
    std::optional<std::string> mission;
};
void save_controller(const fs::path& path, const ControllerDocument& doc);
ControllerDocument load_controller(const fs::path& path);

/// One "x y" pair per line; blank lines and '#' comments ignored.
Demonstration parse_demonstration(std::istream& in);
Demonstration load_demonstration(const fs::path& path);
void save_demonstration(const fs::path& path, const Demonstration& demo);

/// "# seed <n>" and "# dt <s>" header lines, then one line per step holding
/// N triples "x y theta" in fixed 6-decimal notation.
void write_trace(std::ostream& out, const Trace& trace);
Trace parse_trace(std::istream& in);
Trace load_trace(const fs::path& path);

json run_to_json(const IrlRun& run);
IrlRun run_from_json(const json& j);
IrlRun load_run(const fs::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomically(const fs::path& path, const std::string& contents);

/// Fixed six-significant-digit formatting used in CSV output.
std::string csv_number(double v);

}  // namespace demoswarm::io
