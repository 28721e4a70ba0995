#pragma once

// On-disk fixtures shared by the pipeline tests and the acceptance suite.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncc/csv.hpp"
#include "ncc/local_projection.hpp"
#include "ncc/shock.hpp"

namespace ncc::fixtures {

namespace fs = std::filesystem;

// Per-index opening gaps whose equal-weight mean is the reported aggregate.
inline const std::vector<std::pair<std::string, double>> kIndexGaps{
    {"CSI300", 0.001721}, {"ChiNext", 0.002463}, {"50ETF", 0.000435}};

// Fresh empty directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("ncc_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// 30 pre-close bars ending 14:59 and 30 post-open bars from 09:30. The last
// k = 10 pre-close prices average `level`; the first 10 post-open prices
// average level * (1 + gap). Prices outside those windows are decoys.
inline void write_minute_session_pair(const fs::path& dir, const std::string& index, double gap,
                                      double level = 100.0) {
    MinuteBarSeries pre{index + " preclose", {}};
    const auto t_pre = parse_minute_timestamp("2016-05-19T14:30");
    for (int i = 0; i < 30; ++i) {
        const double wiggle = (i % 2 == 0 ? 0.02 : -0.02);
        pre.bars.push_back({t_pre + i, i < 20 ? level * 0.97 + 0.01 * i : level + wiggle});
    }
    MinuteBarSeries post{index + " postopen", {}};
    const auto t_post = parse_minute_timestamp("2016-05-20T09:30");
    const double open = level * (1.0 + gap);
    for (int i = 0; i < 30; ++i) {
        const double wiggle = (i % 2 == 0 ? 0.03 : -0.03);
        post.bars.push_back({t_post + i, i < 10 ? open + wiggle : open * 1.01 + 0.01 * i});
    }
    std::ofstream a(minute_bar_path(dir, index, "2016-05-19", SessionKind::PreClose));
    write_minute_bars(a, pre);
    std::ofstream b(minute_bar_path(dir, index, "2016-05-20", SessionKind::PostOpen));
    write_minute_bars(b, post);
}

inline void write_minute_fixture(const fs::path& dir) {
    fs::create_directories(dir);
    double level = 100.0;
    for (const auto& [index, gap] : kIndexGaps) {
        write_minute_session_pair(dir, index, gap, level);
        level *= 17.0;
    }
}

inline const std::vector<std::string> kDepVars{"gdp", "labor_productivity", "tech_expenditure",
                                               "mfg_fai_growth", "gov_consumption_gdp",
                                               "industry_va_gdp"};
inline const std::vector<std::string> kControls{"shibor_3m", "m2_growth", "dollar_index", "usdcny"};

// Synthetic 2016Q1-2023Q4 panel: random-walk controls and dependent
// variables that load on the 2016Q2 shock dummy.
inline MacroPanel synthetic_panel(std::uint64_t seed = 20160519) {
    const QuarterRange range{Quarter(2016, 1), Quarter(2023, 4)};
    const int n = range.size();
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;
    const std::vector<double> starts{2.8, 2.0, 6.5, 94.0, 6.6};
    for (std::size_t j = 0; j < kControls.size(); ++j) {
        std::vector<double> c(n);
        c[0] = starts[j];
        for (int t = 1; t < n; ++t) c[t] = c[t - 1] + 0.1 * z(gen);
        names.push_back(kControls[j]);
        cols.push_back(std::move(c));
    }
    for (std::size_t j = 0; j < kDepVars.size(); ++j) {
        std::vector<double> y(n);
        y[0] = 5.0 + j;
        for (int t = 1; t < n; ++t) {
            const double bump = (t >= 2 && t <= 5) ? 40.0 * (j + 1) * 0.0015 : 0.0;
            y[t] = y[t - 1] + 0.02 + bump + 0.05 * z(gen);
        }
        names.push_back(kDepVars[j]);
        cols.push_back(std::move(y));
    }
    return MacroPanel(range, names, cols);
}

inline void write_panel(const fs::path& path, const MacroPanel& panel) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    panel.write_csv(out);
}

// Small but complete run configuration rooted at `dir`.
inline nlohmann::json small_config(const fs::path& dir) {
    using nlohmann::json;
    return json{
        {"grid", {{"n_theta", 3}, {"n_ltilde", 3}, {"n_omega", 3}, {"n_p", 3}, {"n_m", 3}, {"quad_nodes", 3}}},
        {"simulation", {{"t_max", 20}, {"n_paths", 25}, {"base_seed", 7}}},
        {"shock", {{"data_dir", (dir / "minute").string()}}},
        {"lp",
         {{"panel", (dir / "macro_panel.csv").string()},
          {"controls", {"shibor_3m", "m2_growth"}},
          {"dep_vars", {"gdp", "tech_expenditure"}},
          {"max_horizon", 6}}},
        {"output_dir", (dir / "out").string()}};
}

inline void write_json(const fs::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
}

}  // namespace ncc::fixtures
