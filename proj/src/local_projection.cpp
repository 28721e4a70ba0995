#include "ncc/local_projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "ncc/csv.hpp"
#include "ncc/errors.hpp"

namespace ncc {

MacroPanel::MacroPanel(QuarterRange range, std::vector<std::string> names,
                       std::vector<std::vector<double>> columns)
    : range_(range), names_(std::move(names)), columns_(std::move(columns)) {
    if (names_.size() != columns_.size()) throw DomainError("panel names/columns mismatch");
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (static_cast<int>(columns_[i].size()) != range_.size())
            throw DomainError("panel column '" + names_[i] + "' does not span the quarter range");
        for (double v : columns_[i])
            if (!std::isfinite(v)) throw ValidationError("panel column '" + names_[i] + "' has a missing value");
    }
}

MacroPanel MacroPanel::parse_csv(std::string_view text, std::string_view source) {
    const auto table = csv::parse(text, source);
    const std::string src(source);
    const std::size_t qc = table.column("quarter", source);
    if (table.rows.empty()) throw ValidationError(src + ": no data rows");
    std::vector<std::string> names;
    std::vector<std::size_t> idx;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == qc) continue;
        if (std::find(names.begin(), names.end(), table.header[c]) != names.end())
            throw ValidationError(src + ": duplicate column '" + table.header[c] + "'");
        names.push_back(table.header[c]);
        idx.push_back(c);
    }
    const Quarter first = Quarter::parse(table.rows.front()[qc]);
    std::vector<std::vector<double>> columns(names.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const Quarter q = Quarter::parse(row[qc]);
        if (q != first + static_cast<int>(r))
            throw ValidationError(src + ": quarters not contiguous at " + q.str());
        for (std::size_t j = 0; j < idx.size(); ++j)
            columns[j].push_back(csv::parse_double(row[idx[j]], src + " " + q.str() + " " + names[j]));
    }
    return MacroPanel({first, first + (static_cast<int>(table.rows.size()) - 1)}, std::move(names),
                      std::move(columns));
}

MacroPanel MacroPanel::read_csv(const std::filesystem::path& path) {
    return parse_csv(csv::read_text(path), path.string());
}

void MacroPanel::write_csv(std::ostream& os) const {
    os << "quarter";
    for (const auto& n : names_) os << ',' << n;
    os << '\n';
    for (int r = 0; r < range_.size(); ++r) {
        os << (range_.first + r).str();
        for (const auto& col : columns_) os << ',' << csv::fmt(col[r]);
        os << '\n';
    }
}

bool MacroPanel::has(std::string_view name) const noexcept {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& MacroPanel::column(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw DomainError("panel has no variable '" + std::string(name) + "'");
    return columns_[static_cast<std::size_t>(it - names_.begin())];
}

double trend_value(const Quarter& q, const Quarter& origin) noexcept {
    return static_cast<double>(q - origin + 1);
}

double covid_dummy(const Quarter& q) noexcept {
    if (q >= Quarter(2020, 2) && q <= Quarter(2020, 4)) return 2.0;
    if (q >= Quarter(2021, 1) && q <= Quarter(2022, 4)) return 1.0;
    return 0.0;
}

LpDesign build_lp_dataset(const MacroPanel& panel, const ShockSeries& shocks,
                          std::string_view dep_var, int h, const LpSpec& spec) {
    if (h < 1) throw DomainError("horizon must be >= 1");
    const auto& y = panel.column(dep_var);
    std::vector<const std::vector<double>*> controls;
    for (const auto& c : spec.controls) controls.push_back(&panel.column(c));

    LpDesign d;
    d.horizon = h;
    d.column_names = {"intercept", "shock"};
    for (const auto& c : spec.controls) d.column_names.push_back(c + "_lag1");
    d.column_names.push_back("trend");
    d.column_names.push_back("covid");

    const int size = panel.range().size();
    const int first = 1;          // needs t-1
    const int last = size - 1 - h;  // needs t+h
    const int n = std::max(last - first + 1, 0);
    const int k = static_cast<int>(d.column_names.size());
    if (n < k) {
        throw InsufficientDataError("horizon " + std::to_string(h) + ": " + std::to_string(n) +
                                    " usable rows for " + std::to_string(k) + " columns");
    }
    d.x.resize(n, k);
    d.y.resize(n);
    d.quarters.reserve(n);
    for (int r = 0; r < n; ++r) {
        const int t = first + r;
        const Quarter q = panel.range().first + t;
        d.quarters.push_back(q);
        d.y(r) = y[t + h] - y[t];
        int c = 0;
        d.x(r, c++) = 1.0;
        d.x(r, c++) = shocks.at(q);
        for (const auto* col : controls) d.x(r, c++) = (*col)[t - 1];
        d.x(r, c++) = trend_value(q, spec.trend_origin);
        d.x(r, c++) = covid_dummy(q);
    }
    return d;
}

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const std::string> names) {
    if (x.rows() != y.size()) throw DomainError("design rows and response length differ");
    if (x.rows() < x.cols()) throw InsufficientDataError("fewer rows than columns");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) {
        std::vector<std::string> bad;
        const auto& perm = qr.colsPermutation().indices();
        std::string msg = "singular design; collinear columns:";
        for (Eigen::Index i = qr.rank(); i < x.cols(); ++i) {
            const auto col = static_cast<std::size_t>(perm(i));
            bad.push_back(col < names.size() ? names[col] : "column " + std::to_string(col));
            msg += " " + bad.back();
        }
        throw SingularDesignError(msg, std::move(bad));
    }
    OlsFit fit;
    fit.coefficients = qr.solve(y);
    fit.fitted = x * fit.coefficients;
    fit.residuals = y - fit.fitted;
    return fit;
}

OlsFit ols(const LpDesign& design) { return ols(design.x, design.y, design.column_names); }

double bartlett_weight(int lag, int bandwidth) noexcept {
    return 1.0 - static_cast<double>(lag) / (bandwidth + 1);
}

Eigen::MatrixXd hac_meat(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals, int lag) {
    const Eigen::Index n = x.rows();
    if (lag < 0) throw DomainError("HAC lag must be >= 0");
    if (lag >= n) throw DomainError("HAC lag must be smaller than the sample size");
    // scores u_t = x_t e_t
    const Eigen::MatrixXd u = x.array().colwise() * residuals.array();
    Eigen::MatrixXd s = u.transpose() * u;
    for (int l = 1; l <= lag; ++l) {
        const Eigen::MatrixXd g = u.bottomRows(n - l).transpose() * u.topRows(n - l);
        s += bartlett_weight(l, lag) * (g + g.transpose());
    }
    return s;
}

Eigen::MatrixXd newey_west_cov(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals, int lag) {
    const Eigen::MatrixXd s = hac_meat(x, residuals, lag);
    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::MatrixXd bread = xtx.ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
    Eigen::MatrixXd cov = bread * s * bread;
    return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd newey_west_cov(const LpDesign& design, const Eigen::VectorXd& residuals, int lag) {
    return newey_west_cov(design.x, residuals, lag);
}

IrfResult estimate_irf(const MacroPanel& panel, const ShockSeries& shocks, std::string_view dep_var,
                       int max_horizon, const IrfConfig& config) {
    if (max_horizon < 1) throw DomainError("max horizon must be >= 1");
    if (!panel.has(dep_var))
        throw DomainError("panel has no variable '" + std::string(dep_var) + "'");
    if (!(config.confidence_level > 0.0 && config.confidence_level < 1.0))
        throw DomainError("confidence level must lie in (0,1)");

    IrfResult result;
    result.dep_var = dep_var;
    result.confidence_level = config.confidence_level;
    const double tail = 0.5 * (1.0 - config.confidence_level);
    for (int h = 1; h <= max_horizon; ++h) {
        LpDesign design;
        try {
            design = build_lp_dataset(panel, shocks, dep_var, h, config.spec);
        } catch (const InsufficientDataError&) {
            result.absent.push_back(h);
            continue;
        }
        const int lag = config.hac_lag.value_or(h + 1);
        if (lag >= design.rows()) {
            result.absent.push_back(h);
            continue;
        }
        const OlsFit fit = ols(design);
        const Eigen::MatrixXd cov = newey_west_cov(design, fit.residuals, lag);

        HorizonEstimate est;
        est.horizon = h;
        est.n = design.rows();
        est.beta = fit.coefficients(LpDesign::kShockColumn);
        est.se = std::sqrt(std::max(cov(LpDesign::kShockColumn, LpDesign::kShockColumn), 0.0));
        est.t_stat = est.se > 0.0 ? est.beta / est.se : 0.0;
        double crit = 0.0;
        const int df = design.rows() - design.cols();
        if (config.t_distribution && df > 0) {
            const boost::math::students_t dist(df);
            est.pvalue = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(est.t_stat)));
            crit = boost::math::quantile(boost::math::complement(dist, tail));
        } else {
            const boost::math::normal dist;
            est.pvalue = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(est.t_stat)));
            crit = boost::math::quantile(boost::math::complement(dist, tail));
        }
        est.ci_lo = est.beta - crit * est.se;
        est.ci_hi = est.beta + crit * est.se;
        result.horizons.push_back(est);
    }
    return result;
}

Significance classify_significance(double pvalue) noexcept {
    if (pvalue < 0.01) return Significance::Strong;
    if (pvalue < 0.10) return Significance::Weak;
    return Significance::None;
}

void write_irf_csv(std::ostream& os, const IrfResult& result) {
    using csv::fmt;
    os << "horizon,beta,se,pvalue,ci_lo,ci_hi,n\n";
    for (const auto& e : result.horizons) {
        os << e.horizon << ',' << fmt(e.beta) << ',' << fmt(e.se) << ',' << fmt(e.pvalue) << ','
           << fmt(e.ci_lo) << ',' << fmt(e.ci_hi) << ',' << e.n << '\n';
    }
}

namespace {

std::string cell_text(const HorizonEstimate* e) {
    if (e == nullptr) return "-";
    const auto sig = classify_significance(e->pvalue);
    if (sig == Significance::None) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", e->beta);
    return sig == Significance::Strong ? std::string("**") + buf + "**" : std::string(buf);
}

const HorizonEstimate* find_horizon(const IrfResult& r, int h) {
    for (const auto& e : r.horizons)
        if (e.horizon == h) return &e;
    return nullptr;
}

}  // namespace

std::string render_significance_table(std::span<const IrfResult> results, int max_horizon) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"variable"};
    for (int h = 1; h <= max_horizon; ++h) header.push_back("h=" + std::to_string(h));
    cells.push_back(header);
    for (const auto& r : results) {
        std::vector<std::string> row{r.dep_var};
        for (int h = 1; h <= max_horizon; ++h) row.push_back(cell_text(find_horizon(r, h)));
        cells.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c == 0)
                os << std::left << std::setw(static_cast<int>(width[c])) << row[c];
            else
                os << "  " << std::right << std::setw(static_cast<int>(width[c])) << row[c];
        }
        os << '\n';
    }
    os << "** p < 0.01; plain p < 0.10; - not significant\n";
    return os.str();
}

void write_significance_csv(std::ostream& os, std::span<const IrfResult> results) {
    os << "variable,horizon,beta,pvalue,significance\n";
    for (const auto& r : results) {
        for (const auto& e : r.horizons) {
            const auto sig = classify_significance(e.pvalue);
            os << r.dep_var << ',' << e.horizon << ',' << csv::fmt(e.beta) << ',' << csv::fmt(e.pvalue)
               << ',' << (sig == Significance::Strong ? "strong" : sig == Significance::Weak ? "weak" : "none")
               << '\n';
        }
    }
}

}  // namespace ncc
