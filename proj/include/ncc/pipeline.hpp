#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ncc/config.hpp"

namespace ncc {

inline constexpr std::string_view kToolVersion = "ncc 0.1.0";

// Declaration order is execution order.
enum class Stage { Solve, Simulate, Shock, Irf, Report };

Stage parse_stage(std::string_view name);
std::string_view stage_name(Stage stage);

struct ArtifactRecord {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunManifest {
    nlohmann::json config;
    std::vector<std::string> stages;
    std::vector<ArtifactRecord> artifacts;
    std::vector<StageTiming> timings;
    std::string tool_version{kToolVersion};
    bool complete = false;
    std::string error;

    nlohmann::json to_json() const;
};

// Adds prerequisites: simulate with a solved policy needs solve, irf needs
// shock unless lp.shock_file is set, report needs irf.
std::set<Stage> with_dependencies(const std::set<Stage>& stages, const RunConfig& config);

// Runs the stages in dependency order, writes every artifact atomically under
// config.output_dir and finishes with manifest.json. On a stage failure the
// manifest is written with complete = false and the exception is rethrown.
RunManifest run_pipeline(const RunConfig& config, const std::set<Stage>& stages);

std::string sha256_hex(std::string_view bytes);

}  // namespace ncc
