#include "srled/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "srled/errors.hpp"

namespace srled {

MediumState MediumState::from_upper(double N_e, int N0, double delta2_Ne, double P) {
    MediumState s;
    s.N_e = N_e;
    s.N_g = static_cast<double>(N0) - N_e;
    s.N = s.N_e - s.N_g;
    s.delta2_Ne = delta2_Ne;
    s.P = P;
    return s;
}

std::string_view to_string(SpectrumVariant v) {
    switch (v) {
        case SpectrumVariant::ZeroOrder: return "zero-order";
        case SpectrumVariant::SpontaneousOnly: return "spontaneous-only";
        case SpectrumVariant::Perturbative: return "perturbative";
        case SpectrumVariant::NonPerturbative: return "nonperturbative";
    }
    return "unknown";
}

SpectrumVariant variant_from_string(std::string_view name) {
    for (auto v : {SpectrumVariant::ZeroOrder, SpectrumVariant::SpontaneousOnly,
                   SpectrumVariant::Perturbative, SpectrumVariant::NonPerturbative}) {
        if (to_string(v) == name) return v;
    }
    throw ValidationError("variant", "unknown spectrum variant '" + std::string(name) + "'");
}

double ResponseCoefficients::min_abs2_s() const noexcept {
    // |s|^2 = u^2 + (B^2 - 2A) u + A^2 with u = w^2 >= 0.
    const double u = std::max(0.0, (2.0 * A - B * B) / 2.0);
    return abs2_s(std::sqrt(u));
}

ResponseCoefficients response_coefficients(const DerivedRates& rates, const MediumState& state) {
    ResponseCoefficients c;
    c.A = rates.kappa * rates.gamma_perp / 2.0 - rates.Omega * rates.Omega * rates.f * state.N;
    c.B = rates.kappa + rates.gamma_perp / 2.0;
    c.K = rates.coupling();
    return c;
}

std::complex<double> s_of_omega(double omega, const DerivedRates& rates, const MediumState& state) {
    using namespace std::complex_literals;
    return (rates.kappa - 1i * omega) * (rates.gamma_perp / 2.0 - 1i * omega) -
           rates.kappa * rates.gamma_perp * state.N / (2.0 * rates.N_th);
}

namespace {

// Numerator of c(w); equals gamma_perp * A + 2 kappa w^2.
double c_numerator(double omega, const DerivedRates& rates, const ResponseCoefficients& rc) {
    return 2.0 * rates.kappa * omega * omega + rates.gamma_perp * rc.A;
}

double checked_abs2_s(double omega, const ResponseCoefficients& rc, const MediumState& state) {
    const double s2 = rc.abs2_s(omega);
    if (!(s2 > 0.0)) {
        throw StabilityViolation("|s(w)|^2 vanishes at the threshold singularity", state.N_e);
    }
    return s2;
}

}  // namespace

double c_of_omega(double omega, const DerivedRates& rates, const MediumState& state) {
    const auto rc = response_coefficients(rates, state);
    return c_numerator(omega, rates, rc) / checked_abs2_s(omega, rc, state);
}

double stability_margin(const DerivedRates& rates, const MediumState& state) {
    const auto rc = response_coefficients(rates, state);
    return rc.min_abs2_s() - rc.K * rc.K * state.delta2_Ne;
}

bool below_threshold(const DerivedRates& rates, const MediumState& state) {
    return state.N < rates.N_th;
}

double spectrum(double omega, const DerivedRates& rates, const MediumState& state,
                SpectrumVariant variant) {
    const auto rc = response_coefficients(rates, state);
    const double s2 = checked_abs2_s(omega, rc, state);
    const double half_k = rc.K / 2.0;  // f Omega^2
    const double spontaneous = rates.gamma_perp * state.N_e;
    const double d = state.delta2_Ne;

    switch (variant) {
        case SpectrumVariant::ZeroOrder:
            return half_k * spontaneous / s2;
        case SpectrumVariant::SpontaneousOnly: {
            const double c = c_numerator(omega, rates, rc) / s2;
            return half_k * (rc.K * c * d + spontaneous) / s2;
        }
        case SpectrumVariant::Perturbative: {
            const double c = c_numerator(omega, rates, rc) / s2;
            return half_k * (spontaneous / s2 + d * rc.K * c / s2 +
                             d * spontaneous * rc.K * rc.K / (s2 * s2));
        }
        case SpectrumVariant::NonPerturbative: {
            if (!(stability_margin(rates, state) > 0.0)) {
                throw StabilityViolation(
                    "fluctuation dispersion exceeds the stability bound of the spectrum", state.N_e);
            }
            const double c = c_numerator(omega, rates, rc) / s2;
            return half_k * (rc.K * c * d + spontaneous) / (s2 - rc.K * rc.K * d);
        }
    }
    throw InternalError("unhandled spectrum variant");
}

double langevin_power_spectrum(double omega, const DerivedRates& rates, const MediumState& state,
                               double dispersion) {
    const double c = c_of_omega(omega, rates, state);
    return rates.f * rates.gamma_perp * state.N_e +
           2.0 * rates.f * rates.f * rates.Omega * rates.Omega * c * dispersion;
}

double spectral_scale(const DerivedRates& rates) {
    return std::max({rates.kappa, rates.gamma_perp / 2.0,
                     rates.Omega * std::sqrt(rates.f * rates.N0)});
}

std::vector<double> default_grid(const DerivedRates& rates, int points_per_side,
                                 double span_factor) {
    if (points_per_side < 2) throw ValidationError("points_per_side", "must be >= 2");
    const double hi = span_factor * spectral_scale(rates);
    const double lo = hi * 1e-5;
    std::vector<double> positive(static_cast<std::size_t>(points_per_side));
    const double step = std::log(hi / lo) / (points_per_side - 1);
    for (int i = 0; i < points_per_side; ++i) {
        positive[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    }
    positive.back() = hi;

    std::vector<double> grid;
    grid.reserve(2 * positive.size() + 1);
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) grid.push_back(-*it);
    grid.push_back(0.0);
    grid.insert(grid.end(), positive.begin(), positive.end());
    return grid;
}

}  // namespace srled
