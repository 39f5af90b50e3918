#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srled/params.hpp"
#include "srled/pf.hpp"
#include "srled/solver.hpp"

namespace srled {

using Override = std::pair<std::string, std::string>;

/// Everything a run needs besides the preset itself.
struct RunConfig {
    DeviceParams device;
    PFModel pf;
    SolverConfig solver;
    std::vector<double> pump_grid;   // empty: preset default
    double spectrum_pump = 1.0;
    int spectrum_points = 1500;      // positive grid points per side
    double spectrum_span = 20.0;     // in units of spectral_scale
    int threads = 0;                 // 0: hardware concurrency
};

/// Applies `section.key = value`. Recognized keys:
///   device.{lambda0,n_r,dipole,n_c,N0,gamma_perp,gamma_par,kappa,f}
///   solver.{ne_tol,quad_rel_tol,max_outer_iters,max_root_iters,max_intervals,damping,backend}
///   pf.{model,narrowness_threshold}
///   sweep.pump            comma list, or log:lo:hi:points
///   spectrum.{pump,points,span}
///   run.threads
/// Throws ValidationError for unknown keys or malformed values.
void apply_override(RunConfig& config, std::string_view key, std::string_view value);

/// Parses `key=value`.
Override parse_override(std::string_view assignment);

/// Flattens a YAML file of nested sections into overrides, in file order.
std::vector<Override> read_config_file(const std::filesystem::path& path);
std::vector<Override> parse_config_text(std::string_view text);

/// Comma list of numbers, or log:lo:hi:points.
std::vector<double> parse_grid(std::string_view text);

}  // namespace srled
