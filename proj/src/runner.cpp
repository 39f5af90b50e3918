#include "srled/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

#include <json.hpp>

#include "srled/errors.hpp"

namespace srled {

using nlohmann::json;

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count && !failed; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string error_status(const std::exception& e) {
    std::string tag = "error";
    if (dynamic_cast<const StabilityViolation*>(&e)) tag = "StabilityViolation";
    else if (dynamic_cast<const QuadratureNoConvergence*>(&e)) tag = "QuadratureNoConvergence";
    else if (dynamic_cast<const NoRoot*>(&e)) tag = "NoRoot";
    else if (dynamic_cast<const FixedPointDivergence*>(&e)) tag = "FixedPointDivergence";
    else if (dynamic_cast<const InternalError*>(&e)) tag = "InternalError";
    else if (dynamic_cast<const ValidationError*>(&e)) tag = "ValidationError";
    return "error:" + tag + ": " + e.what();
}

Row failed_row(double x, const std::exception& e) {
    Row r;
    r.x = x;
    r.value = r.N_e = r.n = r.delta2_Ne = kNaN;
    r.stability_margin = r.narrowness_ratio = r.residual = kNaN;
    r.status = error_status(e);
    return r;
}

std::string variant_tag(SpectrumVariant v) {
    switch (v) {
        case SpectrumVariant::ZeroOrder: return "noPF";
        case SpectrumVariant::SpontaneousOnly: return "PFspem";
        case SpectrumVariant::Perturbative: return "PFpert";
        case SpectrumVariant::NonPerturbative: return "PF";
    }
    return "unknown";
}

json device_json(const DeviceParams& d) {
    return {{"lambda0_m", d.lambda0},       {"n_r", d.n_r},
            {"dipole_C_m", d.dipole},       {"n_c", d.n_c},
            {"N0", d.N0},                   {"gamma_perp_rad_per_s", d.gamma_perp},
            {"gamma_par_rad_per_s", d.gamma_par}, {"kappa_rad_per_s", d.kappa},
            {"f", d.f}};
}

json derived_json(const DerivedRates& r) {
    return {{"omega0_rad_per_s", r.omega0}, {"V_min_m3", r.V_min}, {"V_c_m3", r.V_c},
            {"Omega_rad_per_s", r.Omega},   {"g_diff_rad_per_s", r.g_diff},
            {"beta", r.beta},               {"N_th", r.N_th}};
}

json solver_json(const SolverConfig& s) {
    return {{"ne_tol", s.ne_tol},
            {"quad_rel_tol", s.quad_rel_tol},
            {"max_outer_iters", s.max_outer_iters},
            {"max_root_iters", s.max_root_iters},
            {"max_intervals", s.max_intervals},
            {"damping", s.damping},
            {"narrowness_threshold", s.narrowness_threshold},
            {"backend", std::string(to_string(s.backend))}};
}

json columns_json(bool spectra) {
    return {
        {"P_or_omega", spectra ? "offset from carrier omega (rad/s)" : "normalized pump P (1)"},
        {"value", spectra ? "p_out(omega) = 2 kappa n(omega) (photons/s per rad/s)"
                          : "p_out = 2 kappa n (photons/s), or R (1) in *_R tables"},
        {"N_e", "mean upper population (1)"},
        {"n", "mean cavity photon number (1)"},
        {"delta2_Ne", "upper population dispersion (1)"},
        {"stability_margin", "(min|s|^2 - 4 Omega^4 f^2 delta2_Ne) / min|s|^2 (1)"},
        {"narrowness_ratio", "fluctuation bandwidth / min(kappa, gamma_perp/2) (1)"},
        {"residual", "|2 kappa n - gamma_par (P N_g - N_e)| / (gamma_par N0) (1)"},
        {"status", "ok, warn:<...> or error:<type>: <message>"}};
}

RunConfig configured(const RunConfig& base, std::span<const Override> overrides) {
    RunConfig c = base;
    for (const auto& [k, v] : overrides) apply_override(c, k, v);
    return c;
}

struct CurveSetup {
    Curve curve;
    RunConfig config;
};

std::vector<CurveSetup> curve_setups(const Preset& preset, const RunConfig& base,
                                     std::span<const Override> overrides) {
    std::vector<CurveSetup> out;
    for (const auto& curve : preset.curves) {
        RunConfig c = base;
        c.device = curve_params(preset, curve, base.device);
        for (const auto& [k, v] : overrides) apply_override(c, k, v);
        c.device.validate();
        c.solver.validate();
        out.push_back({curve, std::move(c)});
    }
    return out;
}

}  // namespace

Row row_from(const OperatingPoint& op, double x, double value) {
    Row r;
    r.x = x;
    r.value = value;
    r.N_e = op.N_e;
    r.n = op.n;
    r.delta2_Ne = op.delta2_Ne;
    r.stability_margin = op.diagnostics.stability_margin;
    r.narrowness_ratio = op.diagnostics.narrowness_ratio;
    r.residual = op.diagnostics.residual;
    if (!op.diagnostics.warnings.empty()) {
        r.status = "warn:";
        for (std::size_t i = 0; i < op.diagnostics.warnings.size(); ++i) {
            if (i) r.status += '|';
            r.status += op.diagnostics.warnings[i];
        }
    }
    return r;
}

RunResult run_preset(std::string_view name, const RunConfig& base,
                     std::span<const Override> overrides) {
    const Preset preset = make_preset(name);
    const RunConfig global = configured(base, overrides);
    const auto setups = curve_setups(preset, base, overrides);
    const std::size_t n_curves = setups.size();
    const std::size_t n_var = preset.variants.size();

    json manifest;
    manifest["code_version"] = SRLED_VERSION;
    manifest["kind"] = "preset";
    manifest["preset"] = preset.name;
    manifest["superradiant"] = preset.superradiant;
    manifest["pf_model"] = std::string(to_string(global.pf.kind));
    manifest["solver"] = solver_json(global.solver);
    json overrides_json = json::array();
    for (const auto& [k, v] : overrides) {
        if (k != "run.threads") overrides_json.push_back({k, v});
    }
    manifest["overrides"] = overrides_json;
    json variants_json = json::array();
    for (auto v : preset.variants) variants_json.push_back(std::string(to_string(v)));
    manifest["variants"] = variants_json;
    json curves_json = json::array();
    for (const auto& s : setups) {
        curves_json.push_back({{"label", s.curve.label()},
                               {"device", device_json(s.config.device)},
                               {"derived", derived_json(derive_rates(s.config.device))}});
    }
    manifest["curves"] = curves_json;
    manifest["columns"] = columns_json(preset.kind == PresetKind::Spectra);

    RunResult result;
    json tables_json = json::array();
    double cross_check = 0.0;

    if (preset.kind == PresetKind::PowerVsPump) {
        const auto pumps = global.pump_grid.empty() ? default_pump_grid() : global.pump_grid;
        manifest["pump_grid"] = pumps;
        const std::size_t n_p = pumps.size();
        std::vector<Row> rows(n_curves * n_var * n_p);
        std::vector<double> deviations(rows.size(), 0.0);
        parallel_for(rows.size(), global.threads, [&](std::size_t job) {
            const std::size_t ci = job / (n_var * n_p);
            const std::size_t vi = (job / n_p) % n_var;
            const std::size_t pi = job % n_p;
            const auto& setup = setups[ci];
            try {
                const auto op = solve_operating_point(pumps[pi], setup.config.device,
                                                      preset.variants[vi], setup.config.pf,
                                                      setup.config.solver);
                rows[job] = row_from(op, pumps[pi], op.p_out);
                deviations[job] = op.diagnostics.backend_deviation;
            } catch (const Error& e) {
                rows[job] = failed_row(pumps[pi], e);
            }
        });
        for (double d : deviations) cross_check = std::max(cross_check, d);

        for (std::size_t ci = 0; ci < n_curves; ++ci) {
            for (std::size_t vi = 0; vi < n_var; ++vi) {
                Table t;
                t.name = preset.name + "_" + setups[ci].curve.label() + "_" +
                         variant_tag(preset.variants[vi]);
                t.x_label = "P";
                t.value_label = "p_out";
                const auto first = rows.begin() + static_cast<std::ptrdiff_t>((ci * n_var + vi) * n_p);
                t.rows.assign(first, first + static_cast<std::ptrdiff_t>(n_p));
                tables_json.push_back({{"name", t.name},
                                       {"curve", setups[ci].curve.label()},
                                       {"variant", std::string(to_string(preset.variants[vi]))},
                                       {"quantity", "p_out vs P"},
                                       {"rows", t.rows.size()}});
                result.tables.push_back(std::move(t));
            }
            if (preset.ratio_tables) {
                const auto idx = [&](SpectrumVariant v) {
                    return static_cast<std::size_t>(
                        std::find(preset.variants.begin(), preset.variants.end(), v) -
                        preset.variants.begin());
                };
                const std::size_t zo = idx(SpectrumVariant::ZeroOrder);
                const std::size_t np = idx(SpectrumVariant::NonPerturbative);
                Table t;
                t.name = preset.name + "_" + setups[ci].curve.label() + "_R";
                t.x_label = "P";
                t.value_label = "R";
                for (std::size_t pi = 0; pi < n_p; ++pi) {
                    const Row& a = rows[(ci * n_var + np) * n_p + pi];
                    const Row& b = rows[(ci * n_var + zo) * n_p + pi];
                    Row r = a;
                    r.value = a.value / b.value;
                    r.residual = std::max(a.residual, b.residual);
                    if (a.status.starts_with("error")) r.status = a.status;
                    else if (b.status.starts_with("error")) r.status = b.status;
                    else if (a.status == "ok") r.status = b.status;
                    t.rows.push_back(std::move(r));
                }
                tables_json.push_back({{"name", t.name},
                                       {"curve", setups[ci].curve.label()},
                                       {"variant", "ratio"},
                                       {"quantity", "R = p_out(nonperturbative) / p_out(zero-order) vs P"},
                                       {"rows", t.rows.size()}});
                result.tables.push_back(std::move(t));
            }
        }
    } else {
        manifest["spectrum"] = {{"pump", global.spectrum_pump},
                                {"points_per_side", global.spectrum_points},
                                {"span", global.spectrum_span}};
        const std::size_t jobs = n_curves * n_var;
        std::vector<Table> tables(jobs);
        std::vector<json> meta(jobs);
        std::vector<double> deviations(jobs, 0.0);
        parallel_for(jobs, global.threads, [&](std::size_t job) {
            const std::size_t ci = job / n_var;
            const std::size_t vi = job % n_var;
            const auto& setup = setups[ci];
            const auto variant = preset.variants[vi];
            Table& t = tables[job];
            t.name = preset.name + "_" + setup.curve.label() + "_" + variant_tag(variant);
            t.x_label = "omega_rad_per_s";
            t.value_label = "p_out_omega";
            json m = {{"name", t.name},
                      {"curve", setup.curve.label()},
                      {"variant", std::string(to_string(variant))},
                      {"quantity", "p_out(omega) vs omega"}};
            const double P = setup.config.spectrum_pump;
            try {
                const auto op = solve_operating_point(P, setup.config.device, variant,
                                                      setup.config.pf, setup.config.solver);
                deviations[job] = op.diagnostics.backend_deviation;
                const auto rates = derive_rates(setup.config.device);
                const auto grid =
                    default_grid(rates, setup.config.spectrum_points, setup.config.spectrum_span);
                const auto table =
                    make_spectrum_table(rates, op.state(), variant, grid, setup.config.solver);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    t.rows.push_back(row_from(op, grid[i], table.p_out_of_omega[i]));
                }
                m["pump"] = P;
                m["window_rad_per_s"] = table.meta.window;
                m["n_exact"] = table.meta.n_exact;
                m["n_sampled"] = table.meta.n_sampled;
                m["sampling_error"] = table.meta.error_estimate;
                try {
                    const auto peak = find_crs_peaks(table);
                    m["peak"] = {{"position_rad_per_s", peak.peak_position},
                                 {"height", peak.peak_height},
                                 {"splitting_rad_per_s", peak.splitting},
                                 {"is_split", peak.is_split}};
                } catch (const WindowTooNarrow& e) {
                    m["peak"] = {{"error", e.what()}};
                }
            } catch (const Error& e) {
                t.rows.push_back(failed_row(P, e));
                m["error"] = error_status(e);
            }
            m["rows"] = t.rows.size();
            meta[job] = std::move(m);
        });
        for (double d : deviations) cross_check = std::max(cross_check, d);
        for (std::size_t j = 0; j < jobs; ++j) {
            tables_json.push_back(std::move(meta[j]));
            result.tables.push_back(std::move(tables[j]));
        }
    }

    manifest["tables"] = tables_json;
    if (global.solver.backend == QuadBackend::Both) {
        manifest["quadrature_cross_check"] = {{"max_relative_deviation", cross_check}};
    }
    result.manifest_json = manifest.dump(2) + "\n";
    return result;
}

RunResult run_sweep(const SweepSpec& spec, const RunConfig& base,
                    std::span<const Override> overrides) {
    if (spec.pumps.empty()) throw ValidationError("sweep", "empty sweep");
    for (const auto& [key, values] : spec.axes) {
        if (values.empty()) throw ValidationError("sweep", "empty sweep");
    }

    // Enumerate the Cartesian product of the non-pump axes, last axis fastest.
    std::vector<std::vector<Override>> combos = {{}};
    for (const auto& [key, values] : spec.axes) {
        std::vector<std::vector<Override>> next;
        for (const auto& prefix : combos) {
            for (const auto& v : values) {
                auto c = prefix;
                c.emplace_back(key, v);
                next.push_back(std::move(c));
            }
        }
        combos = std::move(next);
    }

    std::vector<RunConfig> configs;
    for (const auto& combo : combos) {
        RunConfig c = configured(base, overrides);
        for (const auto& [k, v] : combo) apply_override(c, k, v);
        c.device.validate();
        c.solver.validate();
        configs.push_back(std::move(c));
    }
    const RunConfig global = configured(base, overrides);

    const std::size_t n_p = spec.pumps.size();
    std::vector<Row> rows(combos.size() * n_p);
    std::vector<double> deviations(rows.size(), 0.0);
    parallel_for(rows.size(), global.threads, [&](std::size_t job) {
        const auto& c = configs[job / n_p];
        const double P = spec.pumps[job % n_p];
        try {
            const auto op = solve_operating_point(P, c.device, spec.variant, c.pf, c.solver);
            rows[job] = row_from(op, P, op.p_out);
            deviations[job] = op.diagnostics.backend_deviation;
        } catch (const Error& e) {
            rows[job] = failed_row(P, e);
        }
    });

    json manifest;
    manifest["code_version"] = SRLED_VERSION;
    manifest["kind"] = "sweep";
    manifest["variant"] = std::string(to_string(spec.variant));
    manifest["pf_model"] = std::string(to_string(global.pf.kind));
    manifest["solver"] = solver_json(global.solver);
    manifest["pump_grid"] = spec.pumps;
    manifest["columns"] = columns_json(false);
    json tables_json = json::array();

    RunResult result;
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        Table t;
        t.name = "sweep";
        json axes = json::object();
        for (const auto& [k, v] : combos[ci]) {
            t.name += "_" + k + "=" + v;
            axes[k] = v;
        }
        t.x_label = "P";
        t.value_label = "p_out";
        const auto first = rows.begin() + static_cast<std::ptrdiff_t>(ci * n_p);
        t.rows.assign(first, first + static_cast<std::ptrdiff_t>(n_p));
        tables_json.push_back({{"name", t.name},
                               {"axes", axes},
                               {"device", device_json(configs[ci].device)},
                               {"rows", t.rows.size()}});
        result.tables.push_back(std::move(t));
    }
    manifest["tables"] = tables_json;
    if (global.solver.backend == QuadBackend::Both) {
        double cross_check = 0.0;
        for (double d : deviations) cross_check = std::max(cross_check, d);
        manifest["quadrature_cross_check"] = {{"max_relative_deviation", cross_check}};
    }
    result.manifest_json = manifest.dump(2) + "\n";
    return result;
}

std::vector<std::filesystem::path> write_outputs(const RunResult& result,
                                                 const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& t : result.tables) {
        const auto path = dir / (t.name + ".csv");
        std::ofstream out(path, std::ios::binary);
        out << write_csv(t);
        if (!out) throw Error("failed to write " + path.string());
        written.push_back(path);
    }
    const auto manifest = dir / "manifest.json";
    std::ofstream out(manifest, std::ios::binary);
    out << result.manifest_json;
    if (!out) throw Error("failed to write " + manifest.string());
    written.push_back(manifest);
    return written;
}

}  // namespace srled
