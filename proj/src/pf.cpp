#include "srled/pf.hpp"

#include <algorithm>
#include <string>

#include "srled/errors.hpp"

namespace srled {

std::string_view to_string(PFKind kind) {
    switch (kind) {
        case PFKind::None: return "none";
        case PFKind::Binomial: return "binomial";
        case PFKind::LangevinRate: return "langevin-rate";
    }
    return "unknown";
}

PFKind pf_kind_from_string(std::string_view name) {
    for (auto k : {PFKind::None, PFKind::Binomial, PFKind::LangevinRate}) {
        if (to_string(k) == name) return k;
    }
    throw ValidationError("pf_model", "unknown model '" + std::string(name) +
                                          "' (expected none, binomial or langevin-rate)");
}

double pf_bandwidth(double n, double P, const DerivedRates& rates) {
    return rates.gamma_par * (P + 1.0) + 2.0 * rates.g_diff * n * rates.f;
}

double pf_dispersion(double N_e, double n, double P, const DerivedRates& rates,
                     const PFModel& model) {
    const double N0 = rates.N0;
    const double N_g = N0 - N_e;
    double d = 0.0;
    switch (model.kind) {
        case PFKind::None:
            return 0.0;
        case PFKind::Binomial:
            d = N_e * N_g / N0;
            break;
        case PFKind::LangevinRate: {
            const double diffusion =
                rates.gamma_par * (P * N_g + N_e) + 2.0 * rates.g_diff * n * rates.f * N0;
            d = diffusion / (2.0 * pf_bandwidth(n, P, rates));
            break;
        }
    }
    return std::clamp(d, 0.0, N0 * N0 / 4.0);
}

NarrownessResult narrowness_check(const DerivedRates& rates, double bandwidth, double threshold) {
    NarrownessResult r;
    r.ratio = bandwidth / std::min(rates.kappa, rates.gamma_perp / 2.0);
    r.pass = r.ratio <= threshold;
    return r;
}

}  // namespace srled
