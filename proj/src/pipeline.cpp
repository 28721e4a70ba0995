#include "ncc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include <openssl/evp.h>

#include "ncc/csv.hpp"
#include "ncc/errors.hpp"
#include "ncc/local_projection.hpp"
#include "ncc/plot.hpp"
#include "ncc/shock.hpp"
#include "ncc/simulation.hpp"
#include "ncc/solver.hpp"

namespace ncc {

namespace fs = std::filesystem;
using nlohmann::json;

Stage parse_stage(std::string_view name) {
    if (name == "solve") return Stage::Solve;
    if (name == "simulate") return Stage::Simulate;
    if (name == "shock") return Stage::Shock;
    if (name == "irf") return Stage::Irf;
    if (name == "report") return Stage::Report;
    throw ValidationError("unknown stage '" + std::string(name) + "'");
}

std::string_view stage_name(Stage stage) {
    switch (stage) {
        case Stage::Solve: return "solve";
        case Stage::Simulate: return "simulate";
        case Stage::Shock: return "shock";
        case Stage::Irf: return "irf";
        case Stage::Report: return "report";
    }
    return "?";
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        out += buf;
    }
    return out;
}

json RunManifest::to_json() const {
    json arts = json::array();
    for (const auto& a : artifacts) arts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    json times = json::array();
    for (const auto& t : timings) times.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    json out{{"tool_version", tool_version}, {"complete", complete}, {"stages", stages},
             {"artifacts", arts},            {"timings", times},     {"config", config}};
    if (!error.empty()) out["error"] = error;
    return out;
}

std::set<Stage> with_dependencies(const std::set<Stage>& stages, const RunConfig& config) {
    std::set<Stage> out = stages;
    if (out.contains(Stage::Report)) out.insert(Stage::Irf);
    if (out.contains(Stage::Irf) && config.lp.shock_file.empty()) out.insert(Stage::Shock);
    if (out.contains(Stage::Simulate) && config.simulation.policy == "solved") out.insert(Stage::Solve);
    return out;
}

namespace {

class Runner {
public:
    Runner(const RunConfig& config, RunManifest& manifest) : cfg_(config), manifest_(manifest) {}

    void run(Stage stage) {
        switch (stage) {
            case Stage::Solve: solve(); break;
            case Stage::Simulate: simulate(); break;
            case Stage::Shock: shock(); break;
            case Stage::Irf: irf(); break;
            case Stage::Report: report(); break;
        }
    }

    void emit(const std::string& name, const std::string& content) {
        csv::write_atomic(cfg_.output_dir / name, content);
        manifest_.artifacts.push_back({name, sha256_hex(content), content.size()});
    }

private:
    void solve() {
        policy_ = solve_value_iteration(cfg_.grid, cfg_.model);
        const auto& sp = *policy_;
        std::ostringstream table;
        table << "theta,l_tilde,omega,value,p_star,m_star\n";
        for (std::size_t s = 0; s < sp.grid.state_count(); ++s) {
            const auto c = sp.grid.state_coords(s);
            table << csv::fmt(c[0]) << ',' << csv::fmt(c[1]) << ',' << csv::fmt(c[2]) << ','
                  << csv::fmt(sp.value[s]) << ',' << csv::fmt(sp.policy_p[s]) << ','
                  << csv::fmt(sp.policy_m[s]) << '\n';
        }
        emit("policy.csv", table.str());

        std::ostringstream meta;
        const auto& g = sp.grid;
        meta << "n_theta " << g.n_theta << "\nn_ltilde " << g.n_ltilde << "\nn_omega " << g.n_omega
             << "\nn_p " << g.n_p << "\nn_m " << g.n_m << "\nquad_nodes " << g.quad_nodes
             << "\ntol " << csv::fmt(g.tol) << "\nmax_iter " << g.max_iter << "\niterations "
             << sp.iterations << "\nfinal_residual " << csv::fmt(sp.final_residual)
             << "\nresidual_history";
        for (double r : sp.residual_history) meta << ' ' << csv::fmt(r);
        meta << '\n';
        emit("policy_manifest.txt", meta.str());
    }

    void simulate() {
        const auto& sc = cfg_.simulation;
        PolicySource source = PolicyAction{sc.fixed_p, sc.fixed_m};
        if (sc.policy == "solved") {
            if (!policy_) throw std::logic_error("simulate requires a solved policy");
            source = std::cref(*policy_);
        }
        SimulationOptions opts{sc.fixed_kappa};
        const auto path0 = simulate_path(source, cfg_.model, sc.initial, sc.t_max, sc.base_seed, opts, 0);
        std::ostringstream traj;
        write_trajectory_csv(traj, path0);
        emit("trajectory.csv", traj.str());

        const auto stats =
            simulate_ensemble(source, cfg_.model, sc.initial, sc.t_max, sc.n_paths, sc.base_seed, opts);
        std::ostringstream ens;
        write_ensemble_csv(ens, stats);
        emit("ensemble.csv", ens.str());

        const auto& tr = stats.transition;
        std::ostringstream summary;
        summary << "paths,reached,mean_period,median_period,min_period,max_period\n"
                << tr.paths << ',' << tr.reached << ',' << csv::fmt(tr.mean) << ','
                << csv::fmt(tr.median) << ',' << tr.min << ',' << tr.max << '\n';
        emit("commitment_transition.csv", summary.str());
    }

    void shock() {
        const auto& k = cfg_.shock;
        std::vector<double> components;
        std::ostringstream table;
        table << "index,pre_close_ma,post_open_ma,shock\n";
        for (const auto& index : k.indices) {
            const auto pre_path = minute_bar_path(k.data_dir, index, k.preclose_date, SessionKind::PreClose);
            const auto post_path = minute_bar_path(k.data_dir, index, k.postopen_date, SessionKind::PostOpen);
            const auto pre = read_minute_bars(pre_path, index + " preclose");
            const auto post = read_minute_bars(post_path, index + " postopen");
            auto gap = opening_gap(pre, post, k.k);
            if (k.absolute) gap.shock = std::abs(gap.shock);
            components.push_back(gap.shock);
            table << index << ',' << csv::fmt(gap.pre_close_ma) << ',' << csv::fmt(gap.post_open_ma)
                  << ',' << csv::fmt(gap.shock) << '\n';
        }
        const double aggregate = equal_weight_shock(components);
        table << "aggregate,,," << csv::fmt(aggregate) << '\n';
        emit("shock_components.csv", table.str());

        shocks_ = build_quarterly_shock_series(aggregate, k.base_quarter, k.reinforcements, k.range);
        std::ostringstream series;
        shocks_->write_csv(series);
        emit("shock_series.csv", series.str());
    }

    void irf() {
        const auto& l = cfg_.lp;
        if (!fs::exists(l.panel)) throw ValidationError("lp.panel: file not found: " + l.panel.string());
        const ShockSeries shocks = l.shock_file.empty() ? *shocks_ : ShockSeries::read_csv(l.shock_file);
        const MacroPanel panel = MacroPanel::read_csv(l.panel);
        std::vector<std::string> deps = l.dep_vars;
        if (deps.empty()) {
            for (const auto& n : panel.names())
                if (std::find(l.controls.begin(), l.controls.end(), n) == l.controls.end()) deps.push_back(n);
        }
        for (const auto& c : l.controls)
            if (!panel.has(c)) throw ValidationError("lp.controls: panel has no column '" + c + "'");
        IrfConfig ic;
        ic.spec.controls = l.controls;
        ic.spec.trend_origin = l.trend_origin;
        ic.hac_lag = l.hac_lag;
        ic.confidence_level = l.confidence_level;
        ic.t_distribution = l.t_distribution;
        irfs_.clear();
        for (const auto& dep : deps) {
            if (!panel.has(dep)) throw ValidationError("lp.dep_vars: panel has no column '" + dep + "'");
            irfs_.push_back(estimate_irf(panel, shocks, dep, l.max_horizon, ic));
            std::ostringstream os;
            write_irf_csv(os, irfs_.back());
            emit("irf_" + dep + ".csv", os.str());
        }
    }

    void report() {
        emit("significance_table.txt", render_significance_table(irfs_, cfg_.lp.max_horizon));
        std::ostringstream os;
        write_significance_csv(os, irfs_);
        emit("significance_table.csv", os.str());
        for (const auto& r : irfs_)
            if (!r.horizons.empty()) emit("irf_" + r.dep_var + ".svg", render_irf_plot(r));
    }

    const RunConfig& cfg_;
    RunManifest& manifest_;
    std::optional<SolvedPolicy> policy_;
    std::optional<ShockSeries> shocks_;
    std::vector<IrfResult> irfs_;
};

void write_manifest(const RunConfig& config, const RunManifest& manifest) {
    csv::write_atomic(config.output_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
}

}  // namespace

RunManifest run_pipeline(const RunConfig& config, const std::set<Stage>& requested) {
    config.validate();
    RunManifest manifest;
    manifest.config = config_to_json(config);
    const auto stages = with_dependencies(requested, config);
    for (Stage s : stages) manifest.stages.emplace_back(stage_name(s));

    if (stages.contains(Stage::Irf)) {
        if (!fs::exists(config.lp.panel))
            throw ValidationError("lp.panel: file not found: " + config.lp.panel.string());
        if (!config.lp.shock_file.empty() && !fs::exists(config.lp.shock_file))
            throw ValidationError("lp.shock_file: file not found: " + config.lp.shock_file.string());
    }
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw ValidationError("output_dir: cannot create " + config.output_dir.string());

    Runner runner(config, manifest);
    for (Stage s : stages) {
        const auto start = std::chrono::steady_clock::now();
        try {
            runner.run(s);
        } catch (const std::exception& e) {
            manifest.complete = false;
            manifest.error = std::string(stage_name(s)) + ": " + e.what();
            write_manifest(config, manifest);
            throw;
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        manifest.timings.push_back({std::string(stage_name(s)), dt.count()});
    }
    manifest.complete = true;
    write_manifest(config, manifest);
    return manifest;
}

}  // namespace ncc
