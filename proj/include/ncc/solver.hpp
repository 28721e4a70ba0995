#pragma once

// Value-function iteration for the central government's dynamic program on
// a uniform grid over S = [0,1]^3 (theta, L-tilde, omega) and A = [0,1]^2.
//
// Transitions are integrated with tensor Gauss-Hermite quadrature over the
// belief noise eps and execution noise nu; continuation values are read by
// multilinear interpolation. Local heterogeneity enters through the
// kappa-averaged ideal consistency, so there is no fourth state axis.
//
// The Bellman operator built here is a positive-weight averaging map
// followed by a max, hence monotone and a delta-contraction in sup norm.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ncc/model.hpp"

namespace ncc {

struct GridSpec {
    int n_theta = 5;
    int n_ltilde = 5;
    int n_omega = 5;
    int n_p = 5;
    int n_m = 5;
    int quad_nodes = 7;
    double tol = 1e-8;
    int max_iter = 5000;

    void validate() const;

    std::size_t state_count() const noexcept {
        return static_cast<std::size_t>(n_theta) * n_ltilde * n_omega;
    }
    std::size_t action_count() const noexcept { return static_cast<std::size_t>(n_p) * n_m; }

    // Flat state index; omega varies fastest.
    std::size_t state_index(int i_theta, int i_ltilde, int i_omega) const noexcept {
        return (static_cast<std::size_t>(i_theta) * n_ltilde + i_ltilde) * n_omega + i_omega;
    }
    std::array<double, 3> state_coords(std::size_t index) const noexcept;
    PolicyAction action_at(int i_p, int i_m) const noexcept;
};

// Multilinear interpolation of a state-grid table at (theta, l_tilde, omega);
// coordinates outside [0,1] are clamped first.
double interpolate(std::span<const double> table, const GridSpec& grid, double theta,
                   double l_tilde, double omega);

struct SolvedPolicy {
    GridSpec grid;
    std::vector<double> value;
    std::vector<double> policy_p;
    std::vector<double> policy_m;
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> residual_history;

    // Interpolated policy, clamped to [0,1].
    PolicyAction action_at(const EconState& state) const;
};

// Sparse one-step model: for every (state, action) pair the period utility and
// the quadrature-weighted interpolation stencil of the continuation value.
// Independent of the value table, so it is built once per solve.
class BellmanModel {
public:
    BellmanModel(const GridSpec& grid, const ModelParams& params);

    const GridSpec& grid() const noexcept { return grid_; }
    const ModelParams& params() const noexcept { return params_; }

    double utility(std::size_t state, std::size_t action) const {
        return utility_[state * grid_.action_count() + action];
    }
    double expected_continuation(std::span<const double> value, std::size_t state,
                                 std::size_t action) const;
    // u + delta E[V(s')]
    double objective(std::span<const double> value, std::size_t state, std::size_t action) const {
        return utility(state, action) + params_.delta * expected_continuation(value, state, action);
    }

    // Objective at an arbitrary action for a grid state (used off-grid by
    // finite differences). Builds the stencil on the fly.
    double objective_at(std::span<const double> value, std::size_t state,
                        const PolicyAction& action) const;

    // Upper bound on |u| over the grid.
    double utility_bound() const noexcept { return utility_bound_; }

private:
    struct Entry {
        std::uint32_t state;
        double weight;
    };

    void build_pair(std::size_t state, const PolicyAction& action, double& utility,
                    std::vector<Entry>& stencil) const;

    GridSpec grid_;
    ModelParams params_;
    std::vector<double> eps_nodes_, eps_weights_, nu_nodes_, nu_weights_;
    std::vector<double> utility_;
    std::vector<std::size_t> offsets_;
    std::vector<Entry> entries_;
    double utility_bound_ = 0.0;
};

struct BackupResult {
    std::vector<double> value;
    std::vector<double> policy_p;
    std::vector<double> policy_m;
};

BackupResult bellman_backup(std::span<const double> value, const BellmanModel& model);
BackupResult bellman_backup(std::span<const double> value, const GridSpec& grid,
                            const ModelParams& params);

// Called after every backup with (iteration, sup|V_k+1 - V_k|).
using IterationObserver = std::function<void(int, double)>;

// Iterates from V = 0 until the sup-norm update is below grid.tol. Throws
// ConvergenceError carrying the residual history when max_iter is reached and
// NumericalError if an update ever violates the delta-contraction bound.
SolvedPolicy solve_value_iteration(const GridSpec& grid, const ModelParams& params,
                                   const IterationObserver& observer = {});

// Iteration count guaranteed by the contraction from V = 0.
int iteration_bound(double utility_bound, double delta, double tol);

enum class FocKind { Interior, LowerBoundary, UpperBoundary };

struct FocAxis {
    FocKind kind = FocKind::Interior;
    double derivative = 0.0;  // central difference (interior) or one-sided
    double curvature = 0.0;   // |second difference| / h^2, interior only
    double step = 0.0;
    bool satisfied = false;   // |d| <= curvature * h (interior) or KKT sign
};

struct FocResidual {
    std::size_t state = 0;
    FocAxis p;
    FocAxis m;
};

// First-order diagnostic for one action coordinate of a grid argmax x on
// [lo, hi] with neighbours at distance h. At an interior point the central
// difference must lie within curvature * h; at a bound the one-sided
// derivative must point out of the feasible set (KKT sign).
FocAxis finite_difference_foc(const std::function<double(double)>& objective, double x, double h,
                              double lo, double hi);

// Finite-difference first-order-condition diagnostics of the Bellman
// objective around the solved argmax at every grid state.
std::vector<FocResidual> foc_residuals(const SolvedPolicy& solved, const ModelParams& params);
std::vector<FocResidual> foc_residuals(const SolvedPolicy& solved, const BellmanModel& model);

// Fixed point c*(p,m,kappa) p of the noiseless belief recursion.
double steady_state_credibility(const PolicyAction& action, double kappa, const ModelParams& params,
                                bool commitment_active = false);

}  // namespace ncc
