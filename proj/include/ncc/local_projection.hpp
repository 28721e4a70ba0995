#pragma once

// Local projections: for each horizon h, regress Y_{t+h} - Y_t on the shock
// at t, one-quarter-lagged controls, a linear trend and the pandemic dummy;
// IRF(h) is the shock coefficient. Inference uses Newey-West (Bartlett)
// HAC standard errors.

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ncc/quarter.hpp"
#include "ncc/shock.hpp"

namespace ncc {

// Quarter-indexed table of macro series; contiguous, no missing values.
class MacroPanel {
public:
    MacroPanel(QuarterRange range, std::vector<std::string> names,
               std::vector<std::vector<double>> columns);

    static MacroPanel read_csv(const std::filesystem::path& path);
    static MacroPanel parse_csv(std::string_view text, std::string_view source);
    void write_csv(std::ostream& os) const;

    const QuarterRange& range() const noexcept { return range_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    bool has(std::string_view name) const noexcept;
    const std::vector<double>& column(std::string_view name) const;

private:
    QuarterRange range_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
};

struct LpSpec {
    std::vector<std::string> controls;
    Quarter trend_origin{2016, 1};  // trend = 1 here, +1 per quarter
};

// 1 at trend_origin, increasing by one per quarter.
double trend_value(const Quarter& q, const Quarter& origin) noexcept;
// 2 for 2020Q2-2020Q4, 1 for 2021Q1-2022Q4, 0 otherwise.
double covid_dummy(const Quarter& q) noexcept;

// Columns: intercept, shock, lagged controls (in LpSpec order), trend, covid.
struct LpDesign {
    int horizon = 0;
    std::vector<std::string> column_names;
    std::vector<Quarter> quarters;  // t of each row
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    int rows() const noexcept { return static_cast<int>(y.size()); }
    int cols() const noexcept { return static_cast<int>(x.cols()); }
    static constexpr int kShockColumn = 1;
};

LpDesign build_lp_dataset(const MacroPanel& panel, const ShockSeries& shocks,
                          std::string_view dep_var, int h, const LpSpec& spec = {});

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd residuals;
    Eigen::VectorXd fitted;
};

// Column-pivoted QR least squares. Throws SingularDesignError naming the
// columns that fall outside the numerical rank.
OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
           std::span<const std::string> column_names = {});
OlsFit ols(const LpDesign& design);

double bartlett_weight(int lag, int bandwidth) noexcept;

// S = G_0 + sum_{l=1..L} w_l (G_l + G_l'), G_l = sum_t x_t e_t e_{t-l} x_{t-l}'.
Eigen::MatrixXd hac_meat(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals, int lag);

// (X'X)^-1 S (X'X)^-1, symmetrized.
Eigen::MatrixXd newey_west_cov(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals, int lag);
Eigen::MatrixXd newey_west_cov(const LpDesign& design, const Eigen::VectorXd& residuals, int lag);

struct IrfConfig {
    LpSpec spec;
    std::optional<int> hac_lag;  // default h + 1
    double confidence_level = 0.95;
    bool t_distribution = false;  // n - k degrees of freedom instead of normal
};

struct HorizonEstimate {
    int horizon = 0;
    double beta = 0.0;
    double se = 0.0;
    double t_stat = 0.0;
    double pvalue = 1.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    int n = 0;
};

struct IrfResult {
    std::string dep_var;
    double confidence_level = 0.95;
    std::vector<HorizonEstimate> horizons;
    std::vector<int> absent;  // horizons without enough rows
};

IrfResult estimate_irf(const MacroPanel& panel, const ShockSeries& shocks, std::string_view dep_var,
                       int max_horizon, const IrfConfig& config = {});

enum class Significance { Strong, Weak, None };  // p < 0.01, p < 0.10, otherwise
Significance classify_significance(double pvalue) noexcept;

void write_irf_csv(std::ostream& os, const IrfResult& result);

// Dependent variables as rows, horizons as columns. Strong entries are
// rendered **bold**, weak entries plain, the rest as a dash.
std::string render_significance_table(std::span<const IrfResult> results, int max_horizon);
void write_significance_csv(std::ostream& os, std::span<const IrfResult> results);

}  // namespace ncc
