#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "srled/params.hpp"
#include "srled/spectra.hpp"

namespace srled {

/// One curve of a figure: cavity volume and emitter count.
struct Curve {
    double n_c = 100.0;
    int N0 = 100;

    std::string label() const;
};

enum class PresetKind {
    PowerVsPump,  // p_out(P) per curve and variant, optionally R(P)
    Spectra,      // p_out(w) per curve and variant at a fixed pump
};

struct Preset {
    std::string name;
    PresetKind kind = PresetKind::PowerVsPump;
    bool superradiant = false;
    double kappa = 2.5e10;
    double gamma_perp = 1e12;
    std::vector<Curve> curves;
    std::vector<SpectrumVariant> variants;
    bool ratio_tables = false;  // emit R(P) = p_out(NonPerturbative) / p_out(ZeroOrder)
    double spectrum_pump = 1.0;
};

/// fig2, fig3, fig4a, fig4b, fig5, fig6, fig7a, fig7b.
const std::vector<std::string>& preset_names();

/// Throws ValidationError for unknown names.
Preset make_preset(std::string_view name);

/// 60 log-spaced pumps in [0.01, 2].
std::vector<double> default_pump_grid();

std::vector<double> log_grid(double lo, double hi, int points);

/// `base` with the preset decay rates and the curve's n_c and N0.
DeviceParams curve_params(const Preset& preset, const Curve& curve, DeviceParams base);

}  // namespace srled
