// srled: figure presets, parameter sweeps and the validation battery.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "srled/config.hpp"
#include "srled/errors.hpp"
#include "srled/presets.hpp"
#include "srled/property_suite.hpp"
#include "srled/runner.hpp"

namespace {

struct CommonOptions {
    std::string config_file;
    std::vector<std::string> sets;
    std::string pf_model;
    std::string quad;
    int threads = -1;

    void add_to(CLI::App* app) {
        app->add_option("--config", config_file, "YAML file of overrides")->check(CLI::ExistingFile);
        app->add_option("--set", sets, "Override, key=value (repeatable)");
        app->add_option("--pf-model", pf_model, "Population-fluctuation model")
            ->check(CLI::IsMember({"binomial", "langevin-rate", "none"}));
        app->add_option("--quad", quad, "Photon-number integration backend")
            ->check(CLI::IsMember({"adaptive", "residue", "both"}));
        app->add_option("--threads", threads, "Worker threads, 0 for all cores")
            ->check(CLI::NonNegativeNumber);
    }

    // File first, then --set in order, then the dedicated flags.
    std::vector<srled::Override> overrides() const {
        std::vector<srled::Override> out;
        if (!config_file.empty()) out = srled::read_config_file(config_file);
        for (const auto& s : sets) out.push_back(srled::parse_override(s));
        if (!pf_model.empty()) out.emplace_back("pf.model", pf_model);
        if (!quad.empty()) out.emplace_back("solver.backend", quad);
        if (threads >= 0) out.emplace_back("run.threads", std::to_string(threads));
        return out;
    }
};

void report_written(const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths) std::cout << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Output power and spectra of superradiant and conventional nanolasers "
                 "operated as LEDs, with population fluctuations"};
    app.set_version_flag("--version", std::string(SRLED_VERSION));
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::string preset;
    std::string out_dir = "out";
    auto* run = app.add_subcommand("run", "Compute every table of a figure preset");
    run->add_option("--preset", preset, "Figure preset")
        ->required()
        ->check(CLI::IsMember(srled::preset_names()));
    run->add_option("--out", out_dir, "Output directory");
    run_opts.add_to(run);

    CommonOptions sweep_opts;
    std::string pumps;
    std::vector<std::string> axes;
    std::string variant = "nonperturbative";
    std::string sweep_out = "out";
    auto* sweep = app.add_subcommand("sweep", "Cartesian sweep over pump and parameters");
    sweep->add_option("--pump", pumps, "Pump grid: comma list or log:lo:hi:points")->required();
    sweep->add_option("--axis", axes, "key=v1,v2,... (repeatable)");
    sweep->add_option("--variant", variant, "Spectrum variant")
        ->check(CLI::IsMember({"zero-order", "spontaneous-only", "perturbative", "nonperturbative"}));
    sweep->add_option("--out", sweep_out, "Output directory");
    sweep_opts.add_to(sweep);

    CommonOptions point_opts;
    double pump = 1.0;
    std::string point_variant = "nonperturbative";
    auto* point = app.add_subcommand("point", "Solve a single operating point and print it as JSON");
    point->add_option("--pump", pump, "Normalized pump P")->check(CLI::NonNegativeNumber);
    point->add_option("--variant", point_variant, "Spectrum variant")
        ->check(CLI::IsMember({"zero-order", "spontaneous-only", "perturbative", "nonperturbative"}));
    point_opts.add_to(point);

    std::uint64_t seed = 20240601;
    int validate_threads = 0;
    auto* validate = app.add_subcommand("validate", "Run the invariant battery; nonzero exit on failure");
    validate->add_option("--seed", seed, "Seed for the random-state suites");
    validate->add_option("--threads", validate_threads, "Worker threads, 0 for all cores");

    app.add_subcommand("presets", "List the figure presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto result = srled::run_preset(preset, {}, run_opts.overrides());
            report_written(srled::write_outputs(result, out_dir));
        } else if (*sweep) {
            srled::SweepSpec spec;
            spec.pumps = srled::parse_grid(pumps);
            spec.variant = srled::variant_from_string(variant);
            for (const auto& a : axes) {
                const auto [key, values] = srled::parse_override(a);
                std::vector<std::string> list;
                std::size_t start = 0;
                while (start <= values.size()) {
                    const auto end = std::min(values.find(',', start), values.size());
                    if (end > start) list.push_back(values.substr(start, end - start));
                    start = end + 1;
                }
                spec.axes.emplace_back(key, list);
            }
            const auto result = srled::run_sweep(spec, {}, sweep_opts.overrides());
            report_written(srled::write_outputs(result, sweep_out));
        } else if (*point) {
            srled::RunConfig config;
            for (const auto& [k, v] : point_opts.overrides()) srled::apply_override(config, k, v);
            const auto op = srled::solve_operating_point(
                pump, config.device, srled::variant_from_string(point_variant), config.pf,
                config.solver);
            const auto& d = op.diagnostics;
            nlohmann::json j = {{"P", op.P},
                                {"variant", std::string(srled::to_string(op.variant))},
                                {"N_e", op.N_e},
                                {"N_g", op.N_g},
                                {"delta2_Ne", op.delta2_Ne},
                                {"n", op.n},
                                {"p_out", op.p_out},
                                {"stability_margin", d.stability_margin},
                                {"narrowness_ratio", d.narrowness_ratio},
                                {"residual", d.residual},
                                {"backend_deviation", d.backend_deviation},
                                {"warnings", d.warnings}};
            std::cout << j.dump(2) << '\n';
        } else if (*validate) {
            const auto report = srled::run_property_suite(seed, validate_threads);
            std::cout << report.format();
            const bool ok = report.all_passed();
            std::cout << (ok ? "all properties hold\n" : "property failures present\n");
            return ok ? 0 : 1;
        } else {
            for (const auto& name : srled::preset_names()) std::cout << name << '\n';
        }
    } catch (const srled::ValidationError& e) {
        std::cerr << "invalid input (" << e.field() << "): " << e.what() << '\n';
        return 2;
    } catch (const srled::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
