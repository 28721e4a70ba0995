#pragma once

// Period-level equations of the narratives / construct / commitment game:
// local best response, market investment, belief, skeptic and
// institutionalization transitions, and the central period utility.
//
// Everything here is a pure function. Noise draws are passed in.

#include <optional>

namespace ncc {

struct ModelParams {
    double lambda = 1.0;      // growth weight
    double gamma = 0.5;       // variance aversion
    double psi = 0.05;        // institutional-order cost
    double delta = 0.9;       // discount factor
    double xi = 1.0;          // local credibility benefit
    double beta0 = 0.5;       // base deviation penalty
    double eta = 0.3;         // belief updating speed
    double n_s = 0.1;         // skeptic decay rate
    double phi = 0.2;         // institutionalization accrual
    double alpha = 0.2;       // believer share
    double k_b = 1.0;
    double k_r = 1.0;
    double k_s = 1.0;
    double theta_bar = 0.5;   // skeptic anchor belief
    double kappa_lo = 1.0;
    double kappa_hi = 2.0;
    double sigma_eps = 0.05;
    double sigma_nu = 0.05;
    double theta_threshold = 0.6;
    double l_threshold = 0.5;
    double c_min = 0.3;
    double cost_p = 0.1;
    double cost_m = 0.1;

    // Throws DomainError naming the first offending field.
    void validate() const;
};

struct PolicyAction {
    double p = 0.0;  // narrative precision
    double m = 0.0;  // monitoring intensity
};

// State triple (theta, L, omega) with the compactified level kept in sync.
class EconState {
public:
    EconState() = default;
    EconState(double theta, double l, double omega);

    double theta() const noexcept { return theta_; }
    double l() const noexcept { return l_; }
    double l_tilde() const noexcept { return l_tilde_; }
    double omega() const noexcept { return omega_; }

    void set_theta(double theta);
    void set_l(double l);
    void set_omega(double omega);

    bool committed(const ModelParams& params) const noexcept { return l_ >= params.l_threshold; }

private:
    double theta_ = 0.0;
    double l_ = 0.0;
    double l_tilde_ = 0.0;
    double omega_ = 0.0;
};

struct InvestmentBreakdown {
    double i_b = 0.0;
    double i_r = 0.0;
    double i_s = 0.0;
    double i_total = 0.0;
};

double compactify(double l) noexcept;
double clamp_unit(double x) noexcept;

// Maximizer of local_utility over c in [0,1]:
//   c* = 2(beta0+m)p / (kappa + 2(beta0+m)),
// floored at c_min when the commitment constraint is active.
double local_best_response(const ModelParams& params, const PolicyAction& action, double kappa,
                           bool commitment_active);

// E[c*] for kappa ~ U[kappa_lo, kappa_hi], closed form including the floor.
double expected_best_response(const ModelParams& params, const PolicyAction& action,
                              bool commitment_active);

InvestmentBreakdown aggregate_investment(const EconState& state, const PolicyAction& action,
                                         const ModelParams& params);

double update_belief(double theta, double c, const PolicyAction& action, const ModelParams& params,
                     double eps);
// max(omega - n_s c, 0); remainders at or below 1e-12 count as extinct.
double update_skeptic_share(double omega, double c, const ModelParams& params);
double update_institutionalization(double l, double theta, const ModelParams& params);

double local_utility(double c, double theta, double kappa, const PolicyAction& action,
                     const ModelParams& params);

// One-step-ahead conditional variance of I_total transmitted through theta'
// by (eps, nu), given next-period skeptic share omega_next.
double transmitted_variance(double omega_next, double p, const ModelParams& params);

// transmitted_variance with omega' = max(omega - n_s c*, 0). c* is the
// kappa-averaged ideal consistency unless a kappa is supplied.
double investment_variance(const EconState& state, const PolicyAction& action,
                           const ModelParams& params, std::optional<double> kappa = std::nullopt);

double central_cost(const PolicyAction& action, const ModelParams& params) noexcept;

double central_utility_from_components(double expected_investment, double variance,
                                       const PolicyAction& action, double institutional_level,
                                       const ModelParams& params) noexcept;

// lambda E[I_total] - gamma Var - C_central(p,m) - psi L.
double central_period_utility(const EconState& state, const PolicyAction& action,
                              const ModelParams& params,
                              std::optional<double> kappa = std::nullopt);

}  // namespace ncc
