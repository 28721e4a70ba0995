#include "ncc/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>

#include "ncc/errors.hpp"

namespace ncc {

using nlohmann::json;

namespace {

struct ParamField {
    const char* key;
    double ModelParams::*member;
};

constexpr std::array<ParamField, 23> kParamFields{{
    {"lambda", &ModelParams::lambda},
    {"gamma", &ModelParams::gamma},
    {"psi", &ModelParams::psi},
    {"delta", &ModelParams::delta},
    {"xi", &ModelParams::xi},
    {"beta0", &ModelParams::beta0},
    {"eta", &ModelParams::eta},
    {"n_s", &ModelParams::n_s},
    {"phi", &ModelParams::phi},
    {"alpha", &ModelParams::alpha},
    {"k_b", &ModelParams::k_b},
    {"k_r", &ModelParams::k_r},
    {"k_s", &ModelParams::k_s},
    {"theta_bar", &ModelParams::theta_bar},
    {"kappa_lo", &ModelParams::kappa_lo},
    {"kappa_hi", &ModelParams::kappa_hi},
    {"sigma_eps", &ModelParams::sigma_eps},
    {"sigma_nu", &ModelParams::sigma_nu},
    {"theta_threshold", &ModelParams::theta_threshold},
    {"l_threshold", &ModelParams::l_threshold},
    {"c_min", &ModelParams::c_min},
    {"cost_p", &ModelParams::cost_p},
    {"cost_m", &ModelParams::cost_m},
}};

// Reads keys out of one config section and rejects any it did not consume.
class Section {
public:
    Section(const json& doc, std::string name) : name_(std::move(name)) {
        if (doc.contains(name_)) {
            obj_ = &doc.at(name_);
            if (!obj_->is_object()) fail(name_, "must be an object");
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        throw ValidationError(name_ + "." + key + ": " + why);
    }

    const json* get(const std::string& key) {
        seen_.insert(key);
        if (!obj_ || !obj_->contains(key)) return nullptr;
        return &obj_->at(key);
    }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) fail(key, "expected a number");
            out = v->get<double>();
        }
    }
    template <typename Int>
    void integer(const std::string& key, Int& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer() && !v->is_number_unsigned()) fail(key, "expected an integer");
            out = v->get<Int>();
        }
    }
    void boolean(const std::string& key, bool& out) {
        if (const json* v = get(key)) {
            if (!v->is_boolean()) fail(key, "expected true or false");
            out = v->get<bool>();
        }
    }
    void string(const std::string& key, std::string& out) {
        if (const json* v = get(key)) {
            if (!v->is_string()) fail(key, "expected a string");
            out = v->get<std::string>();
        }
    }
    void path(const std::string& key, std::filesystem::path& out, const std::filesystem::path& base) {
        std::string s;
        if (get(key) == nullptr) {
            if (!out.empty() && out.is_relative() && !base.empty()) out = (base / out).lexically_normal();
            return;
        }
        string(key, s);
        out = s.empty() ? std::filesystem::path{}
                        : (base.empty() ? std::filesystem::path(s) : (base / s).lexically_normal());
    }
    void strings(const std::string& key, std::vector<std::string>& out) {
        if (const json* v = get(key)) {
            if (!v->is_array()) fail(key, "expected an array of strings");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_string()) fail(key, "expected an array of strings");
                out.push_back(e.get<std::string>());
            }
        }
    }
    void quarter(const std::string& key, Quarter& out) {
        std::string s;
        if (get(key) == nullptr) return;
        string(key, s);
        try {
            out = Quarter::parse(s);
        } catch (const std::exception& e) {
            fail(key, e.what());
        }
    }

    void finish() const {
        if (!obj_) return;
        for (const auto& [key, _] : obj_->items())
            if (!seen_.contains(key)) throw ValidationError(name_ + "." + key + ": unknown key");
    }

private:
    std::string name_;
    const json* obj_ = nullptr;
    std::set<std::string> seen_;
};

void check(bool ok, const std::string& key, const std::string& rule) {
    if (!ok) throw ValidationError(key + ": must satisfy " + rule);
}

}  // namespace

ModelParams model_params_from_json(const json& obj) {
    const json doc{{"model", obj}};
    Section s(doc, "model");
    ModelParams p;
    for (const auto& f : kParamFields) s.number(f.key, p.*(f.member));
    s.finish();
    return p;
}

json model_params_to_json(const ModelParams& params) {
    json out = json::object();
    for (const auto& f : kParamFields) out[f.key] = params.*(f.member);
    return out;
}

RunConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ValidationError("config: top level must be an object");
    static const std::set<std::string> kSections{"model", "grid", "simulation", "shock", "lp",
                                                 "output_dir"};
    for (const auto& [key, _] : doc.items())
        if (!kSections.contains(key)) throw ValidationError(key + ": unknown config section");

    RunConfig cfg;
    if (doc.contains("model")) cfg.model = model_params_from_json(doc.at("model"));

    Section g(doc, "grid");
    g.integer("n_theta", cfg.grid.n_theta);
    g.integer("n_ltilde", cfg.grid.n_ltilde);
    g.integer("n_omega", cfg.grid.n_omega);
    g.integer("n_p", cfg.grid.n_p);
    g.integer("n_m", cfg.grid.n_m);
    g.integer("quad_nodes", cfg.grid.quad_nodes);
    g.number("tol", cfg.grid.tol);
    g.integer("max_iter", cfg.grid.max_iter);
    g.finish();

    Section sim(doc, "simulation");
    auto& sc = cfg.simulation;
    sim.integer("t_max", sc.t_max);
    sim.integer("n_paths", sc.n_paths);
    sim.integer("base_seed", sc.base_seed);
    sim.string("policy", sc.policy);
    sim.number("fixed_p", sc.fixed_p);
    sim.number("fixed_m", sc.fixed_m);
    sim.number("theta0", sc.initial.theta0);
    sim.number("l0", sc.initial.l0);
    sim.number("omega0", sc.initial.omega0);
    if (const json* v = sim.get("fixed_kappa")) {
        if (v->is_null())
            sc.fixed_kappa.reset();
        else if (v->is_number())
            sc.fixed_kappa = v->get<double>();
        else
            sim.fail("fixed_kappa", "expected a number or null");
    }
    sim.finish();

    Section sh(doc, "shock");
    auto& k = cfg.shock;
    sh.path("data_dir", k.data_dir, base_dir);
    sh.strings("indices", k.indices);
    sh.string("preclose_date", k.preclose_date);
    sh.string("postopen_date", k.postopen_date);
    sh.integer("k", k.k);
    sh.boolean("absolute", k.absolute);
    sh.quarter("base_quarter", k.base_quarter);
    if (const json* v = sh.get("reinforcements")) {
        if (!v->is_array()) sh.fail("reinforcements", "expected an array");
        k.reinforcements.clear();
        for (const auto& e : *v) {
            if (!e.is_object() || !e.contains("quarter") || !e.contains("value") || e.size() != 2 ||
                !e.at("quarter").is_string() || !e.at("value").is_number())
                sh.fail("reinforcements", "entries must be {\"quarter\": \"YYYYQn\", \"value\": x}");
            k.reinforcements.emplace_back(Quarter::parse(e.at("quarter").get<std::string>()),
                                          e.at("value").get<double>());
        }
    }
    sh.quarter("range_start", k.range.first);
    sh.quarter("range_end", k.range.last);
    sh.finish();

    Section lp(doc, "lp");
    auto& l = cfg.lp;
    lp.path("panel", l.panel, base_dir);
    lp.path("shock_file", l.shock_file, base_dir);
    lp.strings("dep_vars", l.dep_vars);
    lp.strings("controls", l.controls);
    lp.integer("max_horizon", l.max_horizon);
    if (const json* v = lp.get("hac_lag")) {
        if (v->is_string() && v->get<std::string>() == "h+1")
            l.hac_lag.reset();
        else if (v->is_number_integer())
            l.hac_lag = v->get<int>();
        else
            lp.fail("hac_lag", "expected \"h+1\" or an integer");
    }
    lp.number("confidence_level", l.confidence_level);
    lp.boolean("t_distribution", l.t_distribution);
    lp.quarter("trend_origin", l.trend_origin);
    lp.finish();

    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string()) throw ValidationError("output_dir: expected a string");
        cfg.output_dir = doc.at("output_dir").get<std::string>();
    }
    if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = (base_dir / cfg.output_dir).lexically_normal();

    cfg.validate();
    return cfg;
}

json config_to_json(const RunConfig& c) {
    json doc;
    doc["model"] = model_params_to_json(c.model);
    doc["grid"] = {{"n_theta", c.grid.n_theta}, {"n_ltilde", c.grid.n_ltilde},
                   {"n_omega", c.grid.n_omega}, {"n_p", c.grid.n_p},
                   {"n_m", c.grid.n_m},         {"quad_nodes", c.grid.quad_nodes},
                   {"tol", c.grid.tol},         {"max_iter", c.grid.max_iter}};
    const auto& s = c.simulation;
    doc["simulation"] = {{"t_max", s.t_max},       {"n_paths", s.n_paths},
                         {"base_seed", s.base_seed}, {"policy", s.policy},
                         {"fixed_p", s.fixed_p},   {"fixed_m", s.fixed_m},
                         {"theta0", s.initial.theta0}, {"l0", s.initial.l0},
                         {"omega0", s.initial.omega0}};
    doc["simulation"]["fixed_kappa"] = s.fixed_kappa ? json(*s.fixed_kappa) : json(nullptr);
    const auto& k = c.shock;
    json reinf = json::array();
    for (const auto& [q, v] : k.reinforcements) reinf.push_back({{"quarter", q.str()}, {"value", v}});
    doc["shock"] = {{"data_dir", k.data_dir.string()},
                    {"indices", k.indices},
                    {"preclose_date", k.preclose_date},
                    {"postopen_date", k.postopen_date},
                    {"k", k.k},
                    {"absolute", k.absolute},
                    {"base_quarter", k.base_quarter.str()},
                    {"reinforcements", reinf},
                    {"range_start", k.range.first.str()},
                    {"range_end", k.range.last.str()}};
    const auto& l = c.lp;
    doc["lp"] = {{"panel", l.panel.string()},
                 {"shock_file", l.shock_file.string()},
                 {"dep_vars", l.dep_vars},
                 {"controls", l.controls},
                 {"max_horizon", l.max_horizon},
                 {"confidence_level", l.confidence_level},
                 {"t_distribution", l.t_distribution},
                 {"trend_origin", l.trend_origin.str()}};
    doc["lp"]["hac_lag"] = l.hac_lag ? json(*l.hac_lag) : json("h+1");
    doc["output_dir"] = c.output_dir.string();
    return doc;
}

void RunConfig::validate() const {
    try {
        model.validate();
        grid.validate();
    } catch (const DomainError& e) {
        throw ValidationError(e.what());
    }
    const auto& s = simulation;
    check(s.t_max >= 1, "simulation.t_max", ">= 1");
    check(s.n_paths >= 1, "simulation.n_paths", ">= 1");
    check(s.policy == "solved" || s.policy == "fixed", "simulation.policy", "\"solved\" or \"fixed\"");
    check(s.fixed_p >= 0.0 && s.fixed_p <= 1.0, "simulation.fixed_p", "0 <= fixed_p <= 1");
    check(s.fixed_m >= 0.0 && s.fixed_m <= 1.0, "simulation.fixed_m", "0 <= fixed_m <= 1");
    check(s.initial.theta0 >= 0.0 && s.initial.theta0 <= 1.0, "simulation.theta0", "0 <= theta0 <= 1");
    check(s.initial.l0 >= 0.0 && std::isfinite(s.initial.l0), "simulation.l0", "l0 >= 0");
    check(s.initial.omega0 >= 0.0 && s.initial.omega0 <= 1.0 - model.alpha, "simulation.omega0",
          "0 <= omega0 <= 1 - alpha");
    check(!s.fixed_kappa || (*s.fixed_kappa > 0.0 && std::isfinite(*s.fixed_kappa)),
          "simulation.fixed_kappa", "> 0");

    const auto& k = shock;
    check(k.k >= 1, "shock.k", ">= 1");
    check(!k.indices.empty(), "shock.indices", "non-empty");
    check(k.range.first <= k.range.last, "shock.range_end", ">= range_start");
    check(k.range.contains(k.base_quarter), "shock.base_quarter", "inside the shock range");
    for (const auto& [q, v] : k.reinforcements) {
        check(k.range.contains(q), "shock.reinforcements", "quarters inside the shock range");
        check(std::isfinite(v), "shock.reinforcements", "finite values");
    }

    const auto& l = lp;
    check(l.max_horizon >= 1, "lp.max_horizon", ">= 1");
    check(!l.hac_lag || *l.hac_lag >= 0, "lp.hac_lag", ">= 0");
    check(l.confidence_level > 0.0 && l.confidence_level < 1.0, "lp.confidence_level", "in (0,1)");
}

json read_config_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config: " + path.string() + ": " + e.what());
    }
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ValidationError("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        doc[key] = value;
        return;
    }
    const std::string section = key.substr(0, dot);
    json& sec = doc[section];
    if (!sec.is_null() && !sec.is_object())
        throw ValidationError("override '" + key + "': section is not an object");
    sec[key.substr(dot + 1)] = value;
}

}  // namespace ncc
