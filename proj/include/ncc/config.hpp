#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ncc/model.hpp"
#include "ncc/quarter.hpp"
#include "ncc/simulation.hpp"
#include "ncc/solver.hpp"

namespace ncc {

struct SimulationConfig {
    int t_max = 200;
    int n_paths = 1000;
    std::uint64_t base_seed = 20160519;
    std::string policy = "solved";  // "solved" or "fixed"
    double fixed_p = 0.8;
    double fixed_m = 0.5;
    InitialState initial;
    std::optional<double> fixed_kappa;
};

struct ShockConfig {
    std::filesystem::path data_dir = "data/minute";
    std::vector<std::string> indices{"CSI300", "ChiNext", "50ETF"};
    std::string preclose_date = "2016-05-19";
    std::string postopen_date = "2016-05-20";
    int k = 10;
    bool absolute = false;
    Quarter base_quarter{2016, 2};
    std::vector<std::pair<Quarter, double>> reinforcements{{Quarter(2017, 4), 0.0001},
                                                           {Quarter(2022, 4), 0.0001}};
    QuarterRange range{Quarter(2016, 1), Quarter(2023, 4)};
};

struct LpConfig {
    std::filesystem::path panel = "data/macro_panel.csv";
    std::filesystem::path shock_file;  // empty: use the shock stage output
    std::vector<std::string> dep_vars;
    std::vector<std::string> controls;
    int max_horizon = 12;
    std::optional<int> hac_lag;  // empty: h + 1
    double confidence_level = 0.95;
    bool t_distribution = false;
    Quarter trend_origin{2016, 1};
};

struct RunConfig {
    ModelParams model;
    GridSpec grid;
    SimulationConfig simulation;
    ShockConfig shock;
    LpConfig lp;
    std::filesystem::path output_dir = "out";

    // Numeric domains of every section; throws ValidationError naming the key.
    void validate() const;
};

// Relative paths inside the document resolve against base_dir. Unknown
// sections or keys are a ValidationError.
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const RunConfig& config);

nlohmann::json read_config_document(const std::filesystem::path& path);

// Applies "section.key=value" (value parsed as JSON, else taken as a string).
void apply_override(nlohmann::json& doc, const std::string& assignment);

ModelParams model_params_from_json(const nlohmann::json& obj);
nlohmann::json model_params_to_json(const ModelParams& params);

}  // namespace ncc
