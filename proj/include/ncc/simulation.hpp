#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "ncc/model.hpp"
#include "ncc/solver.hpp"

namespace ncc {

struct InitialState {
    double theta0 = 0.3;
    double l0 = 0.0;
    double omega0 = 0.3;
};

struct SimulationOptions {
    // Redraw kappa ~ U[kappa_lo, kappa_hi] every period unless fixed.
    std::optional<double> fixed_kappa;
};

// Either a constant action or a solved policy looked up by interpolation.
using PolicySource = std::variant<PolicyAction, std::reference_wrapper<const SolvedPolicy>>;

// Period t (1-based): the action, kappa draw and consistency chosen on the
// state entering the period, and the state s_t after the transition.
struct PeriodRecord {
    int period = 0;
    EconState state;
    PolicyAction action;
    double kappa = 0.0;
    double c_ideal = 0.0;
    double c_realized = 0.0;
    InvestmentBreakdown investment;
    double central_utility = 0.0;
    bool committed = false;  // L_t >= l_threshold after the transition
};

struct Trajectory {
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    EconState initial;
    std::vector<PeriodRecord> records;

    int length() const noexcept { return static_cast<int>(records.size()); }
};

Trajectory simulate_path(const PolicySource& policy, const ModelParams& params,
                         const InitialState& init, int t_max, std::uint64_t seed,
                         const SimulationOptions& options = {}, std::uint64_t path = 0);

// First period whose post-transition level reaches l_threshold; period 1 if
// the path starts committed.
std::optional<int> detect_commitment_transition(const Trajectory& traj, const ModelParams& params);

struct MomentSeries {
    std::vector<double> mean;
    std::vector<double> variance;  // sample variance, 0 for a single path
};

struct TransitionSummary {
    int reached = 0;
    int paths = 0;
    double mean = 0.0;
    double median = 0.0;
    int min = 0;
    int max = 0;
};

struct EnsembleStats {
    int t_max = 0;
    int n_paths = 0;
    std::uint64_t base_seed = 0;
    MomentSeries theta;
    MomentSeries omega;
    MomentSeries i_total;
    MomentSeries l;
    TransitionSummary transition;
};

// Path i uses the counter stream (base_seed, i). Reduction order is by path
// index regardless of how paths are scheduled.
EnsembleStats simulate_ensemble(const PolicySource& policy, const ModelParams& params,
                                const InitialState& init, int t_max, int n_paths,
                                std::uint64_t base_seed, const SimulationOptions& options = {});

// CSV emitters; column sets are fixed.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_ensemble_csv(std::ostream& os, const EnsembleStats& stats);

}  // namespace ncc
