#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srled/params.hpp"

namespace srled {

/// Mean populations of the medium and the population-fluctuation dispersion.
struct MediumState {
    double N_e = 0.0;
    double N_g = 0.0;
    double N = 0.0;          // N_e - N_g
    double delta2_Ne = 0.0;  // dispersion of the upper-state population
    double P = 0.0;          // normalized pump

    /// Builds a consistent state from the upper population; N_g = N0 - N_e.
    static MediumState from_upper(double N_e, int N0, double delta2_Ne = 0.0, double P = 0.0);
};

/// How population fluctuations close the field spectrum.
enum class SpectrumVariant {
    ZeroOrder,        // fluctuations neglected
    SpontaneousOnly,  // fluctuations feed the polarization noise only
    Perturbative,     // first order in the dispersion
    NonPerturbative,  // full nonlinear dependence on the dispersion
};

std::string_view to_string(SpectrumVariant v);
SpectrumVariant variant_from_string(std::string_view name);

/// Coefficients of the response polynomial. With
///   A = kappa gamma_perp / 2 - Omega^2 f N,  B = kappa + gamma_perp / 2,
///   K = 2 Omega^2 f
/// one has s(w) = A - w^2 - i B w and |s(w)|^2 = w^4 + (B^2 - 2A) w^2 + A^2.
struct ResponseCoefficients {
    double A = 0.0;
    double B = 0.0;
    double K = 0.0;

    double abs2_s(double omega) const noexcept {
        const double re = A - omega * omega;
        const double im = B * omega;
        return re * re + im * im;
    }
    /// Minimum of |s(w)|^2 over real w (vertex of the parabola in w^2).
    double min_abs2_s() const noexcept;
};

ResponseCoefficients response_coefficients(const DerivedRates& rates, const MediumState& state);

/// s(w) = (kappa - i w)(gamma_perp/2 - i w) - kappa gamma_perp N / (2 N_th).
std::complex<double> s_of_omega(double omega, const DerivedRates& rates, const MediumState& state);

/// c(w) = [2 kappa w^2 + (kappa gamma_perp^2 / 2)(1 - N/N_th)] / |s(w)|^2.
/// Throws StabilityViolation when |s(w)|^2 == 0.
double c_of_omega(double omega, const DerivedRates& rates, const MediumState& state);

/// min_w |s(w)|^2 - 4 Omega^4 f^2 delta2_Ne. Non-positive means the
/// nonperturbative spectrum has a real pole.
double stability_margin(const DerivedRates& rates, const MediumState& state);

/// True when the state is below the semiclassical threshold, N < N_th.
bool below_threshold(const DerivedRates& rates, const MediumState& state);

/// Cavity field spectrum n(w) for the given variant.
///
/// NonPerturbative:
///   n = f Omega^2 (2 Omega^2 f c(w) d + gamma_perp N_e) / (|s|^2 - 4 Omega^4 f^2 d)
/// SpontaneousOnly drops the dispersion from the denominator, Perturbative
/// keeps the first order Taylor term in d, and ZeroOrder sets d = 0.
/// Throws StabilityViolation when the relevant denominator is not positive.
double spectrum(double omega, const DerivedRates& rates, const MediumState& state,
                SpectrumVariant variant);

/// Power spectrum of the polarization Langevin force in the narrow-fluctuation
/// limit: f gamma_perp N_e + 2 f^2 Omega^2 c(w) dispersion.
double langevin_power_spectrum(double omega, const DerivedRates& rates, const MediumState& state,
                               double dispersion);

struct SpectrumMeta {
    double window = 0.0;           // half-width of the sampled grid (rad/s)
    double n_exact = 0.0;          // photon number from the closed-form integral
    double n_sampled = 0.0;        // trapezoid over the grid
    double error_estimate = 0.0;   // |n_sampled - n_exact| / n_exact
};

/// Sampled spectrum on an ascending grid of offsets from the carrier.
struct SpectrumTable {
    std::vector<double> omega;
    std::vector<double> n_of_omega;
    std::vector<double> p_out_of_omega;  // 2 kappa n(w)
    SpectrumVariant variant = SpectrumVariant::ZeroOrder;
    SpectrumMeta meta;
};

/// Characteristic spectral width max(kappa, gamma_perp/2, Omega sqrt(f N0)).
double spectral_scale(const DerivedRates& rates);

/// Symmetric grid over +-span_factor * spectral_scale, logarithmically dense
/// towards the center, including w = 0. `points_per_side` positive points.
std::vector<double> default_grid(const DerivedRates& rates, int points_per_side = 4000,
                                 double span_factor = 20.0);

}  // namespace srled
