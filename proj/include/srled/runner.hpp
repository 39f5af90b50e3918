#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srled/config.hpp"
#include "srled/presets.hpp"
#include "srled/records.hpp"
#include "srled/solver.hpp"

namespace srled {

/// Calls fn(i) for i in [0, count) on `threads` workers (0: hardware
/// concurrency). Each index is visited exactly once; results must be stored by
/// index so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

struct RunResult {
    std::vector<Table> tables;
    std::string manifest_json;
};

/// Computes every table of a figure preset. Solver failures are recorded in
/// the row status and the run continues.
RunResult run_preset(std::string_view name, const RunConfig& base,
                     std::span<const Override> overrides = {});

/// Cartesian sweep over pump values and any device/pf/solver keys.
struct SweepSpec {
    std::vector<double> pumps;
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    SpectrumVariant variant = SpectrumVariant::NonPerturbative;
};

/// Throws ValidationError("sweep", "empty sweep") if any dimension is empty.
RunResult run_sweep(const SweepSpec& spec, const RunConfig& base,
                    std::span<const Override> overrides = {});

/// Writes <name>.csv per table and manifest.json; returns the written paths.
std::vector<std::filesystem::path> write_outputs(const RunResult& result,
                                                 const std::filesystem::path& dir);

/// Row for a solved operating point; p_out in `value`.
Row row_from(const OperatingPoint& op, double x, double value);

}  // namespace srled
