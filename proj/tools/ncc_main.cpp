// ncc: solve, simulate, shock, irf and report stages of the pipeline.
//
//   ncc <stage> --config run.json [--section.key=value ...]
//   ncc run --config run.json --stages solve,simulate [overrides]
//
// Exit codes: 0 success, 2 validation error, 3 runtime error. Errors are a
// single stderr line "error[validation]: ..." or "error[runtime]: ...".

#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncc/config.hpp"
#include "ncc/errors.hpp"
#include "ncc/pipeline.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

int fail(const char* kind, const std::string& what, int code) {
    std::cerr << "error[" << kind << "]: " << one_line(what) << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Narrative credibility game solver and local-projection pipeline", "ncc"};
    app.require_subcommand(1);
    app.allow_extras(false);

    std::string config_path;
    std::string stage_list;
    std::vector<std::string> overrides;

    std::vector<CLI::App*> subs;
    for (const char* name : {"solve", "simulate", "shock", "irf", "report", "run"}) {
        auto* sub = app.add_subcommand(name, name == std::string("run") ? "Run a list of stages"
                                                                        : std::string("Run the ") + name + " stage");
        sub->add_option("--config", config_path, "Run configuration (JSON)")->required();
        if (name == std::string("run"))
            sub->add_option("--stages", stage_list, "Comma-separated stages (may be empty)")->expected(0, 1);
        sub->allow_extras();
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("validation", e.what(), kExitValidation);
    }

    CLI::App* active = nullptr;
    for (auto* s : subs)
        if (s->parsed()) active = s;

    ncc::RunConfig config;
    std::set<ncc::Stage> stages;
    try {
        for (const auto& extra : active->remaining()) {
            if (extra.rfind("--", 0) != 0)
                throw ncc::ValidationError("unexpected argument '" + extra + "'");
            overrides.push_back(extra.substr(2));
        }
        auto doc = ncc::read_config_document(config_path);
        for (const auto& o : overrides) ncc::apply_override(doc, o);
        config = ncc::config_from_json(doc, std::filesystem::path(config_path).parent_path());

        if (active->get_name() == "run") {
            std::size_t start = 0;
            while (start < stage_list.size()) {
                auto comma = stage_list.find(',', start);
                if (comma == std::string::npos) comma = stage_list.size();
                if (comma > start) stages.insert(ncc::parse_stage(stage_list.substr(start, comma - start)));
                start = comma + 1;
            }
        } else {
            stages.insert(ncc::parse_stage(active->get_name()));
        }
    } catch (const std::exception& e) {
        return fail("validation", e.what(), kExitValidation);
    }

    try {
        const auto manifest = ncc::run_pipeline(config, stages);
        for (const auto& a : manifest.artifacts) std::cout << (config.output_dir / a.path).string() << '\n';
        std::cout << (config.output_dir / "manifest.json").string() << '\n';
    } catch (const ncc::ValidationError& e) {
        return fail("validation", e.what(), kExitValidation);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), kExitRuntime);
    }
    return 0;
}
