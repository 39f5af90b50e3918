#include "srled/params.hpp"

#include <cmath>
#include <numbers>

#include "srled/errors.hpp"

namespace srled {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ValidationError(field, "must be finite and strictly positive");
    }
}

}  // namespace

void DeviceParams::validate() const {
    require_positive(lambda0, "lambda0");
    require_positive(n_r, "n_r");
    require_positive(dipole, "dipole");
    if (!(n_c >= 1.0) || !std::isfinite(n_c)) {
        throw ValidationError("n_c", "must be >= 1");
    }
    if (N0 < 1) {
        throw ValidationError("N0", "must be >= 1");
    }
    require_positive(gamma_perp, "gamma_perp");
    require_positive(gamma_par, "gamma_par");
    require_positive(kappa, "kappa");
    if (!(f > 0.0 && f <= 1.0)) {
        throw ValidationError("f", "must lie in (0, 1]");
    }
}

DerivedRates derive_rates(const DeviceParams& params) {
    params.validate();
    using C = PhysicalConstants;

    DerivedRates r;
    r.omega0 = 2.0 * std::numbers::pi * C::c_light / params.lambda0;
    const double half_wave = params.lambda0 / (2.0 * params.n_r);
    r.V_min = half_wave * half_wave * half_wave;
    r.V_c = params.n_c * r.V_min;
    r.Omega = (params.dipole / params.n_r) * std::sqrt(r.omega0 / (C::eps0 * C::hbar * r.V_c));

    const double omega2f = r.Omega * r.Omega * params.f;
    r.g_diff = 4.0 * omega2f / (2.0 * params.kappa + params.gamma_perp);
    r.beta = r.g_diff / (r.g_diff + params.gamma_par);
    r.N_th = params.kappa * params.gamma_perp / (2.0 * omega2f);

    r.kappa = params.kappa;
    r.gamma_perp = params.gamma_perp;
    r.gamma_par = params.gamma_par;
    r.f = params.f;
    r.N0 = params.N0;
    return r;
}

DeviceParams exchange_decay_rates(DeviceParams params) {
    const double kappa = params.kappa;
    params.kappa = params.gamma_perp / 2.0;
    params.gamma_perp = 2.0 * kappa;
    return params;
}

}  // namespace srled
