#include "srled/presets.hpp"

#include <cmath>
#include <sstream>

#include "srled/errors.hpp"

namespace srled {

namespace {

// Non-superradiant bundle; the superradiant one exchanges 2 kappa and gamma_perp.
constexpr double kKappaNonSR = 2.5e10;
constexpr double kGammaPerpNonSR = 1e12;

std::vector<Curve> figure_curves() {
    return {{100.0, 100}, {50.0, 100}, {10.0, 100}, {5.0, 100}, {2.0, 100}, {2.0, 200}};
}

}  // namespace

std::string Curve::label() const {
    std::ostringstream os;
    os << "nc" << n_c << "_N0" << N0;
    return os.str();
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig2", "fig3", "fig4a", "fig4b",
                                                   "fig5", "fig6", "fig7a", "fig7b"};
    return names;
}

Preset make_preset(std::string_view name) {
    Preset p;
    p.name = std::string(name);
    const std::string_view figure = name.substr(0, 4);
    if (figure == "fig5" || figure == "fig6" || figure == "fig7") {
        p.superradiant = true;
        p.kappa = kGammaPerpNonSR / 2.0;
        p.gamma_perp = 2.0 * kKappaNonSR;
    } else {
        p.kappa = kKappaNonSR;
        p.gamma_perp = kGammaPerpNonSR;
    }

    const std::vector<SpectrumVariant> with_without = {SpectrumVariant::ZeroOrder,
                                                       SpectrumVariant::NonPerturbative};
    const std::vector<SpectrumVariant> all_four = {
        SpectrumVariant::ZeroOrder, SpectrumVariant::SpontaneousOnly,
        SpectrumVariant::Perturbative, SpectrumVariant::NonPerturbative};

    if (name == "fig2" || name == "fig5") {
        p.kind = PresetKind::PowerVsPump;
        p.curves = figure_curves();
        p.variants = with_without;
        p.ratio_tables = true;
    } else if (name == "fig3" || name == "fig6") {
        p.kind = PresetKind::Spectra;
        p.curves = figure_curves();
        p.variants = with_without;
    } else if (name == "fig4a" || name == "fig7a") {
        p.kind = PresetKind::PowerVsPump;
        p.curves = {{2.0, 200}};
        p.variants = all_four;
    } else if (name == "fig4b" || name == "fig7b") {
        p.kind = PresetKind::Spectra;
        p.curves = {{2.0, 200}};
        p.variants = all_four;
    } else {
        throw ValidationError("preset", "unknown preset '" + std::string(name) + "'");
    }
    return p;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (points < 1) throw ValidationError("points", "grid needs at least one point");
    if (!(lo > 0.0 && hi >= lo)) throw ValidationError("grid", "log grid needs 0 < lo <= hi");
    if (points == 1) return {lo};
    std::vector<double> g(static_cast<std::size_t>(points));
    const double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_pump_grid() { return log_grid(0.01, 2.0, 60); }

DeviceParams curve_params(const Preset& preset, const Curve& curve, DeviceParams base) {
    base.kappa = preset.kappa;
    base.gamma_perp = preset.gamma_perp;
    base.n_c = curve.n_c;
    base.N0 = curve.N0;
    return base;
}

}  // namespace srled
