#include "ncc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ncc/errors.hpp"
#include "ncc/quadrature.hpp"

namespace ncc {

namespace {

double node(int i, int n) { return static_cast<double>(i) / (n - 1); }

// Lower cell index and fractional offset of x on a uniform n-point grid over [0,1].
void locate(double x, int n, int& lower, double& frac) {
    x = std::clamp(x, 0.0, 1.0);
    const double scaled = x * (n - 1);
    lower = std::min(static_cast<int>(std::floor(scaled)), n - 2);
    frac = scaled - lower;
}

double level_from_compact(double l_tilde) {
    if (l_tilde >= 1.0) return std::numeric_limits<double>::infinity();
    return l_tilde / (1.0 - l_tilde);
}

FocAxis classify(double q_minus, double q0, double q_plus, double h, FocKind kind) {
    FocAxis axis;
    axis.kind = kind;
    axis.step = h;
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max({1.0, std::abs(q0), std::abs(q_minus), std::abs(q_plus)}) / h;
    switch (kind) {
        case FocKind::Interior: {
            axis.derivative = (q_plus - q_minus) / (2.0 * h);
            axis.curvature = std::abs(q_plus - 2.0 * q0 + q_minus) / (h * h);
            axis.satisfied = std::abs(axis.derivative) <= axis.curvature * h + slack;
            break;
        }
        case FocKind::LowerBoundary:
            axis.derivative = (q_plus - q0) / h;
            axis.satisfied = axis.derivative <= slack;
            break;
        case FocKind::UpperBoundary:
            axis.derivative = (q0 - q_minus) / h;
            axis.satisfied = axis.derivative >= -slack;
            break;
    }
    return axis;
}

}  // namespace

void GridSpec::validate() const {
    auto need = [](bool ok, const char* key, const char* rule) {
        if (!ok) throw DomainError(std::string("grid.") + key + ": must satisfy " + rule);
    };
    need(n_theta >= 2, "n_theta", ">= 2");
    need(n_ltilde >= 2, "n_ltilde", ">= 2");
    need(n_omega >= 2, "n_omega", ">= 2");
    need(n_p >= 2, "n_p", ">= 2");
    need(n_m >= 2, "n_m", ">= 2");
    need(quad_nodes >= 1 && quad_nodes % 2 == 1, "quad_nodes", "odd and >= 1");
    need(tol > 0.0 && std::isfinite(tol), "tol", "> 0");
    need(max_iter >= 1, "max_iter", ">= 1");
    need(state_count() < std::numeric_limits<std::uint32_t>::max(), "n_theta", "grid too large");
}

std::array<double, 3> GridSpec::state_coords(std::size_t index) const noexcept {
    const int i_omega = static_cast<int>(index % n_omega);
    const std::size_t rest = index / n_omega;
    const int i_ltilde = static_cast<int>(rest % n_ltilde);
    const int i_theta = static_cast<int>(rest / n_ltilde);
    return {node(i_theta, n_theta), node(i_ltilde, n_ltilde), node(i_omega, n_omega)};
}

PolicyAction GridSpec::action_at(int i_p, int i_m) const noexcept {
    return {node(i_p, n_p), node(i_m, n_m)};
}

double interpolate(std::span<const double> table, const GridSpec& grid, double theta,
                   double l_tilde, double omega) {
    int it, il, io;
    double ft, fl, fo;
    locate(theta, grid.n_theta, it, ft);
    locate(l_tilde, grid.n_ltilde, il, fl);
    locate(omega, grid.n_omega, io, fo);
    double acc = 0.0;
    for (int dt = 0; dt < 2; ++dt) {
        const double wt = dt ? ft : 1.0 - ft;
        for (int dl = 0; dl < 2; ++dl) {
            const double wl = dl ? fl : 1.0 - fl;
            for (int d_o = 0; d_o < 2; ++d_o) {
                const double wo = d_o ? fo : 1.0 - fo;
                acc += wt * wl * wo * table[grid.state_index(it + dt, il + dl, io + d_o)];
            }
        }
    }
    return acc;
}

PolicyAction SolvedPolicy::action_at(const EconState& state) const {
    return {clamp_unit(interpolate(policy_p, grid, state.theta(), state.l_tilde(), state.omega())),
            clamp_unit(interpolate(policy_m, grid, state.theta(), state.l_tilde(), state.omega()))};
}

BellmanModel::BellmanModel(const GridSpec& grid, const ModelParams& params)
    : grid_(grid), params_(params) {
    grid_.validate();
    params_.validate();
    auto eps = gauss_hermite_normal(grid_.quad_nodes, params_.sigma_eps);
    auto nu = gauss_hermite_normal(grid_.quad_nodes, params_.sigma_nu);
    eps_nodes_ = std::move(eps.nodes);
    eps_weights_ = std::move(eps.weights);
    nu_nodes_ = std::move(nu.nodes);
    nu_weights_ = std::move(nu.weights);

    const std::size_t n_states = grid_.state_count();
    const std::size_t n_actions = grid_.action_count();
    utility_.resize(n_states * n_actions);
    offsets_.reserve(n_states * n_actions + 1);
    offsets_.push_back(0);
    std::vector<Entry> stencil;
    for (std::size_t s = 0; s < n_states; ++s) {
        for (int ip = 0; ip < grid_.n_p; ++ip) {
            for (int im = 0; im < grid_.n_m; ++im) {
                const std::size_t a = static_cast<std::size_t>(ip) * grid_.n_m + im;
                double u = 0.0;
                build_pair(s, grid_.action_at(ip, im), u, stencil);
                if (!std::isfinite(u)) {
                    throw NumericalError("non-finite period utility at state " + std::to_string(s) +
                                         ", action (" + std::to_string(ip) + "," +
                                         std::to_string(im) + ")");
                }
                utility_[s * n_actions + a] = u;
                utility_bound_ = std::max(utility_bound_, std::abs(u));
                entries_.insert(entries_.end(), stencil.begin(), stencil.end());
                offsets_.push_back(entries_.size());
            }
        }
    }
}

void BellmanModel::build_pair(std::size_t state, const PolicyAction& action, double& utility,
                              std::vector<Entry>& stencil) const {
    const auto [theta, l_tilde, omega_grid] = grid_.state_coords(state);
    const ModelParams& pr = params_;
    const double omega = std::min(omega_grid, 1.0 - pr.alpha);
    const double level = level_from_compact(l_tilde);
    const bool committed = l_tilde >= compactify(pr.l_threshold);

    const double c_bar = expected_best_response(pr, action, committed);
    const double investment = pr.alpha * pr.k_b * action.p +
                              (1.0 - pr.alpha - omega) * pr.k_r * theta +
                              omega * pr.k_s * pr.theta_bar;
    const double variance =
        transmitted_variance(update_skeptic_share(omega, c_bar, pr), action.p, pr);
    utility = central_utility_from_components(investment, variance, action, l_tilde, pr);

    const double next_level = update_institutionalization(level, theta, pr);
    const double next_l_tilde = compactify(next_level);

    stencil.clear();
    for (std::size_t k = 0; k < nu_nodes_.size(); ++k) {
        const double c = clamp_unit(c_bar + nu_nodes_[k]);
        const double next_omega = update_skeptic_share(omega, c, pr);
        for (std::size_t j = 0; j < eps_nodes_.size(); ++j) {
            const double w = nu_weights_[k] * eps_weights_[j];
            const double next_theta = update_belief(theta, c, action, pr, eps_nodes_[j]);
            int it, il, io;
            double ft, fl, fo;
            locate(next_theta, grid_.n_theta, it, ft);
            locate(next_l_tilde, grid_.n_ltilde, il, fl);
            locate(next_omega, grid_.n_omega, io, fo);
            for (int dt = 0; dt < 2; ++dt) {
                const double wt = dt ? ft : 1.0 - ft;
                for (int dl = 0; dl < 2; ++dl) {
                    const double wl = dl ? fl : 1.0 - fl;
                    for (int d_o = 0; d_o < 2; ++d_o) {
                        const double wo = d_o ? fo : 1.0 - fo;
                        const double weight = w * wt * wl * wo;
                        if (weight == 0.0) continue;
                        stencil.push_back(
                            {static_cast<std::uint32_t>(grid_.state_index(it + dt, il + dl, io + d_o)),
                             weight});
                    }
                }
            }
        }
    }
    std::sort(stencil.begin(), stencil.end(),
              [](const Entry& a, const Entry& b) { return a.state < b.state; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < stencil.size(); ++i) {
        if (out > 0 && stencil[out - 1].state == stencil[i].state)
            stencil[out - 1].weight += stencil[i].weight;
        else
            stencil[out++] = stencil[i];
    }
    stencil.resize(out);
}

double BellmanModel::expected_continuation(std::span<const double> value, std::size_t state,
                                           std::size_t action) const {
    const std::size_t pair = state * grid_.action_count() + action;
    double acc = 0.0;
    for (std::size_t e = offsets_[pair]; e < offsets_[pair + 1]; ++e)
        acc += entries_[e].weight * value[entries_[e].state];
    return acc;
}

double BellmanModel::objective_at(std::span<const double> value, std::size_t state,
                                  const PolicyAction& action) const {
    double u = 0.0;
    std::vector<Entry> stencil;
    build_pair(state, action, u, stencil);
    double acc = 0.0;
    for (const auto& e : stencil) acc += e.weight * value[e.state];
    return u + params_.delta * acc;
}

BackupResult bellman_backup(std::span<const double> value, const BellmanModel& model) {
    const GridSpec& grid = model.grid();
    const std::size_t n_states = grid.state_count();
    if (value.size() != n_states) throw DomainError("value table size does not match grid");
    for (double v : value)
        if (!std::isfinite(v)) throw DomainError("value table holds a non-finite entry");

    BackupResult out;
    out.value.resize(n_states);
    out.policy_p.resize(n_states);
    out.policy_m.resize(n_states);
    for (std::size_t s = 0; s < n_states; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        int best_p = 0, best_m = 0;
        // Strict improvement keeps the lexicographically lowest (p, m) on ties.
        for (int ip = 0; ip < grid.n_p; ++ip) {
            for (int im = 0; im < grid.n_m; ++im) {
                const double q =
                    model.objective(value, s, static_cast<std::size_t>(ip) * grid.n_m + im);
                if (q > best) {
                    best = q;
                    best_p = ip;
                    best_m = im;
                }
            }
        }
        if (!std::isfinite(best))
            throw NumericalError("non-finite Bellman objective at state " + std::to_string(s));
        out.value[s] = best;
        const auto a = grid.action_at(best_p, best_m);
        out.policy_p[s] = a.p;
        out.policy_m[s] = a.m;
    }
    return out;
}

BackupResult bellman_backup(std::span<const double> value, const GridSpec& grid,
                            const ModelParams& params) {
    return bellman_backup(value, BellmanModel(grid, params));
}

int iteration_bound(double utility_bound, double delta, double tol) {
    if (utility_bound <= tol) return 1;
    return static_cast<int>(std::ceil(std::log(tol / utility_bound) / std::log(delta))) + 1;
}

SolvedPolicy solve_value_iteration(const GridSpec& grid, const ModelParams& params,
                                   const IterationObserver& observer) {
    const BellmanModel model(grid, params);
    SolvedPolicy solved;
    solved.grid = grid;
    std::vector<double> value(grid.state_count(), 0.0);
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= grid.max_iter; ++iter) {
        BackupResult next = bellman_backup(value, model);
        double residual = 0.0;
        for (std::size_t s = 0; s < value.size(); ++s)
            residual = std::max(residual, std::abs(next.value[s] - value[s]));
        solved.residual_history.push_back(residual);
        if (observer) observer(iter, residual);
        if (residual > params.delta * previous + 1e-12) {
            throw NumericalError("contraction violated at iteration " + std::to_string(iter) +
                                 ": residual " + std::to_string(residual));
        }
        previous = residual;
        value = std::move(next.value);
        if (residual < grid.tol) {
            // Greedy policy against the returned value table.
            BackupResult greedy = bellman_backup(value, model);
            solved.value = std::move(value);
            solved.policy_p = std::move(greedy.policy_p);
            solved.policy_m = std::move(greedy.policy_m);
            solved.iterations = iter;
            solved.final_residual = residual;
            return solved;
        }
    }
    throw ConvergenceError("value iteration did not converge within " +
                               std::to_string(grid.max_iter) + " iterations (residual " +
                               std::to_string(solved.residual_history.back()) + ")",
                           solved.residual_history);
}

FocAxis finite_difference_foc(const std::function<double(double)>& objective, double x, double h,
                              double lo, double hi) {
    const double q0 = objective(x);
    if (x - h < lo - 1e-12 * h) return classify(q0, q0, objective(x + h), h, FocKind::LowerBoundary);
    if (x + h > hi + 1e-12 * h) return classify(objective(x - h), q0, q0, h, FocKind::UpperBoundary);
    return classify(objective(x - h), q0, objective(x + h), h, FocKind::Interior);
}

std::vector<FocResidual> foc_residuals(const SolvedPolicy& solved, const BellmanModel& model) {
    const GridSpec& grid = model.grid();
    std::span<const double> value(solved.value);
    std::vector<FocResidual> out;
    out.reserve(grid.state_count());
    const double hp = 1.0 / (grid.n_p - 1);
    const double hm = 1.0 / (grid.n_m - 1);
    for (std::size_t s = 0; s < grid.state_count(); ++s) {
        const int ip = static_cast<int>(std::lround(solved.policy_p[s] * (grid.n_p - 1)));
        const int im = static_cast<int>(std::lround(solved.policy_m[s] * (grid.n_m - 1)));
        auto q = [&](int a, int b) {
            return model.objective(value, s, static_cast<std::size_t>(a) * grid.n_m + b);
        };
        const double q0 = q(ip, im);
        FocResidual r;
        r.state = s;
        if (ip == 0)
            r.p = classify(q0, q0, q(ip + 1, im), hp, FocKind::LowerBoundary);
        else if (ip == grid.n_p - 1)
            r.p = classify(q(ip - 1, im), q0, q0, hp, FocKind::UpperBoundary);
        else
            r.p = classify(q(ip - 1, im), q0, q(ip + 1, im), hp, FocKind::Interior);
        if (im == 0)
            r.m = classify(q0, q0, q(ip, im + 1), hm, FocKind::LowerBoundary);
        else if (im == grid.n_m - 1)
            r.m = classify(q(ip, im - 1), q0, q0, hm, FocKind::UpperBoundary);
        else
            r.m = classify(q(ip, im - 1), q0, q(ip, im + 1), hm, FocKind::Interior);
        out.push_back(r);
    }
    return out;
}

std::vector<FocResidual> foc_residuals(const SolvedPolicy& solved, const ModelParams& params) {
    return foc_residuals(solved, BellmanModel(solved.grid, params));
}

double steady_state_credibility(const PolicyAction& action, double kappa, const ModelParams& params,
                                bool commitment_active) {
    return local_best_response(params, action, kappa, commitment_active) * action.p;
}

}  // namespace ncc
