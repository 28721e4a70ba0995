#include "ncc/simulation.hpp"

#include <algorithm>
#include <string>

#include "ncc/csv.hpp"
#include "ncc/errors.hpp"
#include "ncc/rng.hpp"

namespace ncc {

namespace {

PolicyAction lookup(const PolicySource& policy, const EconState& state) {
    if (const auto* fixed = std::get_if<PolicyAction>(&policy)) return *fixed;
    return std::get<std::reference_wrapper<const SolvedPolicy>>(policy).get().action_at(state);
}

// Welford accumulator updated in path order.
struct Moments {
    std::vector<double> mean, m2;
    explicit Moments(int t) : mean(t, 0.0), m2(t, 0.0) {}
    void add(int t, double x, int n) {
        const double d = x - mean[t];
        mean[t] += d / n;
        m2[t] += d * (x - mean[t]);
    }
    MomentSeries finish(int n) const {
        MomentSeries out{mean, m2};
        for (auto& v : out.variance) v = n > 1 ? std::max(v / (n - 1), 0.0) : 0.0;
        return out;
    }
};

}  // namespace

Trajectory simulate_path(const PolicySource& policy, const ModelParams& params,
                         const InitialState& init, int t_max, std::uint64_t seed,
                         const SimulationOptions& options, std::uint64_t path) {
    if (t_max < 1) throw DomainError("t_max must be >= 1");
    params.validate();
    if (init.omega0 > 1.0 - params.alpha)
        throw DomainError("initial skeptic share exceeds 1 - alpha");
    if (options.fixed_kappa && !(*options.fixed_kappa > 0.0))
        throw DomainError("fixed kappa must be positive");

    const CounterRng rng(seed);
    Trajectory traj;
    traj.seed = seed;
    traj.path = path;
    traj.initial = EconState(init.theta0, init.l0, init.omega0);
    traj.records.reserve(t_max);

    EconState state = traj.initial;
    for (int t = 1; t <= t_max; ++t) {
        PeriodRecord rec;
        rec.period = t;
        rec.action = lookup(policy, state);
        rec.kappa = options.fixed_kappa
                        ? *options.fixed_kappa
                        : params.kappa_lo + (params.kappa_hi - params.kappa_lo) *
                                                rng.uniform(path, t, DrawTag::Kappa);
        const bool active = state.committed(params);
        rec.c_ideal = local_best_response(params, rec.action, rec.kappa, active);
        const double nu = params.sigma_nu * rng.normal(path, t, DrawTag::Nu);
        const double eps = params.sigma_eps * rng.normal(path, t, DrawTag::Eps);
        rec.c_realized = clamp_unit(rec.c_ideal + nu);
        rec.investment = aggregate_investment(state, rec.action, params);
        rec.central_utility = central_period_utility(state, rec.action, params);

        const double theta = update_belief(state.theta(), rec.c_realized, rec.action, params, eps);
        const double omega = update_skeptic_share(state.omega(), rec.c_realized, params);
        const double l = update_institutionalization(state.l(), state.theta(), params);
        if (!(omega <= 1.0 - params.alpha + 1e-15))
            throw InvariantError("skeptic share left [0, 1-alpha] at period " + std::to_string(t));
        state = EconState(theta, l, omega);
        rec.state = state;
        rec.committed = state.committed(params);
        traj.records.push_back(rec);
    }
    return traj;
}

std::optional<int> detect_commitment_transition(const Trajectory& traj, const ModelParams& params) {
    if (traj.initial.committed(params)) return 1;
    for (const auto& rec : traj.records)
        if (rec.state.l() >= params.l_threshold) return rec.period;
    return std::nullopt;
}

EnsembleStats simulate_ensemble(const PolicySource& policy, const ModelParams& params,
                                const InitialState& init, int t_max, int n_paths,
                                std::uint64_t base_seed, const SimulationOptions& options) {
    if (n_paths < 1) throw DomainError("n_paths must be >= 1");
    Moments theta(t_max), omega(t_max), invest(t_max), level(t_max);
    std::vector<int> hits;
    for (int i = 0; i < n_paths; ++i) {
        Trajectory traj;
        try {
            traj = simulate_path(policy, params, init, t_max, base_seed, options,
                                 static_cast<std::uint64_t>(i));
        } catch (const std::exception& e) {
            throw std::runtime_error("path " + std::to_string(i) + ": " + e.what());
        }
        const int n = i + 1;
        for (int t = 0; t < t_max; ++t) {
            const auto& r = traj.records[t];
            theta.add(t, r.state.theta(), n);
            omega.add(t, r.state.omega(), n);
            invest.add(t, r.investment.i_total, n);
            level.add(t, r.state.l(), n);
        }
        if (auto hit = detect_commitment_transition(traj, params)) hits.push_back(*hit);
    }

    EnsembleStats stats;
    stats.t_max = t_max;
    stats.n_paths = n_paths;
    stats.base_seed = base_seed;
    stats.theta = theta.finish(n_paths);
    stats.omega = omega.finish(n_paths);
    stats.i_total = invest.finish(n_paths);
    stats.l = level.finish(n_paths);
    stats.transition.paths = n_paths;
    stats.transition.reached = static_cast<int>(hits.size());
    if (!hits.empty()) {
        std::sort(hits.begin(), hits.end());
        double sum = 0.0;
        for (int h : hits) sum += h;
        stats.transition.mean = sum / hits.size();
        const std::size_t mid = hits.size() / 2;
        stats.transition.median =
            hits.size() % 2 ? hits[mid] : 0.5 * (hits[mid - 1] + hits[mid]);
        stats.transition.min = hits.front();
        stats.transition.max = hits.back();
    }
    return stats;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    using csv::fmt;
    os << "period,theta,l,l_tilde,omega,p,m,kappa,c_ideal,c_realized,i_b,i_r,i_s,i_total,"
          "central_utility,committed\n";
    for (const auto& r : traj.records) {
        os << r.period << ',' << fmt(r.state.theta()) << ',' << fmt(r.state.l()) << ','
           << fmt(r.state.l_tilde()) << ',' << fmt(r.state.omega()) << ',' << fmt(r.action.p)
           << ',' << fmt(r.action.m) << ',' << fmt(r.kappa) << ',' << fmt(r.c_ideal) << ','
           << fmt(r.c_realized) << ',' << fmt(r.investment.i_b) << ',' << fmt(r.investment.i_r)
           << ',' << fmt(r.investment.i_s) << ',' << fmt(r.investment.i_total) << ','
           << fmt(r.central_utility) << ',' << (r.committed ? 1 : 0) << '\n';
    }
}

void write_ensemble_csv(std::ostream& os, const EnsembleStats& s) {
    using csv::fmt;
    os << "period,theta_mean,theta_var,omega_mean,omega_var,i_total_mean,i_total_var,l_mean,l_var\n";
    for (int t = 0; t < s.t_max; ++t) {
        os << (t + 1) << ',' << fmt(s.theta.mean[t]) << ',' << fmt(s.theta.variance[t]) << ','
           << fmt(s.omega.mean[t]) << ',' << fmt(s.omega.variance[t]) << ','
           << fmt(s.i_total.mean[t]) << ',' << fmt(s.i_total.variance[t]) << ','
           << fmt(s.l.mean[t]) << ',' << fmt(s.l.variance[t]) << '\n';
    }
}

}  // namespace ncc
