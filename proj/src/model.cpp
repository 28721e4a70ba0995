#include "ncc/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncc/errors.hpp"

namespace ncc {

namespace {

void require(bool ok, const char* field, const char* rule) {
    if (!ok) throw DomainError(std::string("model.") + field + ": must satisfy " + rule);
}

bool finite(double x) { return std::isfinite(x); }

void check_action(const PolicyAction& a) {
    if (!(a.p >= 0.0 && a.p <= 1.0)) throw DomainError("action.p outside [0,1]");
    if (!(a.m >= 0.0 && a.m <= 1.0)) throw DomainError("action.m outside [0,1]");
}

// Effective penalty curvature: d/dc of (beta0+m)(c-p)^2 contributes 2(beta0+m).
double penalty_slope(const ModelParams& params, const PolicyAction& action) {
    return 2.0 * (params.beta0 + action.m);
}

}  // namespace

void ModelParams::validate() const {
    require(finite(lambda) && lambda > 0.0, "lambda", "lambda > 0");
    require(finite(gamma) && gamma >= 0.0, "gamma", "gamma >= 0");
    require(finite(psi) && psi >= 0.0, "psi", "psi >= 0");
    require(delta > 0.0 && delta < 1.0, "delta", "0 < delta < 1");
    require(finite(xi) && xi >= 0.0, "xi", "xi >= 0");
    require(finite(beta0) && beta0 >= 0.0, "beta0", "beta0 >= 0");
    require(eta > 0.0 && eta <= 1.0, "eta", "0 < eta <= 1");
    require(finite(n_s) && n_s > 0.0, "n_s", "n_s > 0");
    require(finite(phi) && phi > 0.0, "phi", "phi > 0");
    require(alpha >= 0.0 && alpha < 1.0, "alpha", "0 <= alpha < 1");
    require(finite(k_b) && k_b > 0.0, "k_b", "k_b > 0");
    require(finite(k_r) && k_r > 0.0, "k_r", "k_r > 0");
    require(finite(k_s) && k_s > 0.0, "k_s", "k_s > 0");
    require(theta_bar >= 0.0 && theta_bar <= 1.0, "theta_bar", "0 <= theta_bar <= 1");
    require(finite(kappa_lo) && kappa_lo > 0.0, "kappa_lo", "kappa_lo > 0");
    require(finite(kappa_hi) && kappa_hi > kappa_lo, "kappa_hi", "kappa_hi > kappa_lo");
    require(finite(sigma_eps) && sigma_eps >= 0.0, "sigma_eps", "sigma_eps >= 0");
    require(finite(sigma_nu) && sigma_nu >= 0.0, "sigma_nu", "sigma_nu >= 0");
    require(finite(theta_threshold) && theta_threshold >= 0.0, "theta_threshold",
            "theta_threshold >= 0");
    require(finite(l_threshold) && l_threshold >= 0.0, "l_threshold", "l_threshold >= 0");
    require(c_min >= 0.0 && c_min <= 1.0, "c_min", "0 <= c_min <= 1");
    require(finite(cost_p) && cost_p >= 0.0, "cost_p", "cost_p >= 0");
    require(finite(cost_m) && cost_m >= 0.0, "cost_m", "cost_m >= 0");
}

double compactify(double l) noexcept {
    if (std::isinf(l)) return 1.0;
    return l / (1.0 + l);
}

double clamp_unit(double x) noexcept { return std::clamp(x, 0.0, 1.0); }

EconState::EconState(double theta, double l, double omega) {
    set_theta(theta);
    set_l(l);
    set_omega(omega);
}

void EconState::set_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvariantError("theta outside [0,1]");
    theta_ = theta;
}

void EconState::set_l(double l) {
    if (!(l >= 0.0) || std::isnan(l)) throw InvariantError("institutionalization level negative");
    l_ = l;
    l_tilde_ = compactify(l);
}

void EconState::set_omega(double omega) {
    if (!(omega >= 0.0 && omega <= 1.0)) throw InvariantError("skeptic share outside [0,1]");
    omega_ = omega;
}

double local_best_response(const ModelParams& params, const PolicyAction& action, double kappa,
                           bool commitment_active) {
    if (!std::isfinite(kappa) || kappa <= 0.0)
        throw DomainError("kappa must be finite and positive");
    check_action(action);
    const double a = penalty_slope(params, action);
    const double ideal = a * action.p / (kappa + a);
    return commitment_active ? std::max(ideal, params.c_min) : ideal;
}

double expected_best_response(const ModelParams& params, const PolicyAction& action,
                              bool commitment_active) {
    check_action(action);
    const double a = penalty_slope(params, action);
    const double ap = a * action.p;
    const double lo = params.kappa_lo;
    const double hi = params.kappa_hi;
    const double width = hi - lo;
    // integral of ap/(k+a) over [x, y]
    auto segment = [&](double x, double y) { return ap * std::log((y + a) / (x + a)); };

    if (ap <= 0.0) return commitment_active ? params.c_min : 0.0;
    if (!commitment_active) return segment(lo, hi) / width;

    const double floor = params.c_min;
    if (floor <= 0.0) return segment(lo, hi) / width;
    // ap/(k+a) is decreasing in k; the floor binds for k above k_cross.
    const double k_cross = ap / floor - a;
    if (k_cross >= hi) return segment(lo, hi) / width;
    if (k_cross <= lo) return floor;
    return (segment(lo, k_cross) + floor * (hi - k_cross)) / width;
}

InvestmentBreakdown aggregate_investment(const EconState& state, const PolicyAction& action,
                                         const ModelParams& params) {
    const double rational_share = 1.0 - params.alpha - state.omega();
    if (rational_share < -1e-15)
        throw InvariantError("alpha + omega exceeds 1: rational share negative");
    InvestmentBreakdown inv;
    inv.i_b = params.alpha * params.k_b * action.p;
    inv.i_r = std::max(rational_share, 0.0) * params.k_r * state.theta();
    inv.i_s = state.omega() * params.k_s * params.theta_bar;
    inv.i_total = inv.i_b + inv.i_r + inv.i_s;
    return inv;
}

double update_belief(double theta, double c, const PolicyAction& action, const ModelParams& params,
                     double eps) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta outside [0,1]");
    if (!std::isfinite(eps)) throw DomainError("belief noise draw is not finite");
    return clamp_unit(theta + params.eta * (c * action.p - theta) + eps);
}

double update_skeptic_share(double omega, double c, const ModelParams& params) {
    // Repeated subtraction leaves round-off residue where the exact share is 0.
    constexpr double kResidue = 1e-12;
    const double next = omega - params.n_s * c;
    return next <= kResidue ? 0.0 : next;
}

double update_institutionalization(double l, double theta, const ModelParams& params) {
    if (theta >= params.theta_threshold) return l + params.phi * theta;
    return l;
}

double local_utility(double c, double theta, double kappa, const PolicyAction& action,
                     const ModelParams& params) {
    const double dev = c - action.p;
    return params.xi * theta - 0.5 * kappa * c * c - (params.beta0 + action.m) * dev * dev;
}

double transmitted_variance(double omega_next, double p, const ModelParams& params) {
    const double loading = (1.0 - params.alpha - omega_next) * params.k_r;
    const double eta_p = params.eta * p;
    return loading * loading *
           (eta_p * eta_p * params.sigma_nu * params.sigma_nu +
            params.sigma_eps * params.sigma_eps);
}

double investment_variance(const EconState& state, const PolicyAction& action,
                           const ModelParams& params, std::optional<double> kappa) {
    const bool active = state.committed(params);
    const double c = kappa ? local_best_response(params, action, *kappa, active)
                           : expected_best_response(params, action, active);
    const double omega_eff = std::min(state.omega(), 1.0 - params.alpha);
    return transmitted_variance(update_skeptic_share(omega_eff, c, params), action.p, params);
}

double central_cost(const PolicyAction& action, const ModelParams& params) noexcept {
    return 0.5 * params.cost_p * action.p * action.p + 0.5 * params.cost_m * action.m * action.m;
}

double central_utility_from_components(double expected_investment, double variance,
                                       const PolicyAction& action, double institutional_level,
                                       const ModelParams& params) noexcept {
    return params.lambda * expected_investment - params.gamma * variance -
           central_cost(action, params) - params.psi * institutional_level;
}

double central_period_utility(const EconState& state, const PolicyAction& action,
                              const ModelParams& params, std::optional<double> kappa) {
    const auto inv = aggregate_investment(state, action, params);
    const double var = investment_variance(state, action, params, kappa);
    return central_utility_from_components(inv.i_total, var, action, state.l(), params);
}

}  // namespace ncc
