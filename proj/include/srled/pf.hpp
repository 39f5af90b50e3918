#pragma once

#include <string_view>

#include "srled/params.hpp"

namespace srled {

/// Model for the dispersion of the upper-state population.
enum class PFKind {
    None,          // fluctuations switched off, dispersion is identically zero
    Binomial,      // N_e N_g / N0, independent two-state emitters
    LangevinRate,  // stationary variance of the linearized population equation
};

std::string_view to_string(PFKind kind);
PFKind pf_kind_from_string(std::string_view name);

struct PFModel {
    PFKind kind = PFKind::Binomial;

    /// Whether the dispersion changes with the photon number. When false the
    /// self-consistent inner loop reduces to a single evaluation.
    bool depends_on_field() const noexcept { return kind == PFKind::LangevinRate; }
};

/// Population-fluctuation bandwidth gamma_par (P + 1) + 2 g_diff n f.
double pf_bandwidth(double n, double P, const DerivedRates& rates);

/// Dispersion of N_e for the chosen model, clamped to [0, N0^2 / 4].
double pf_dispersion(double N_e, double n, double P, const DerivedRates& rates,
                     const PFModel& model);

struct NarrownessResult {
    double ratio = 0.0;  // bandwidth / min(kappa, gamma_perp / 2)
    bool pass = false;   // ratio <= threshold
};

/// The fluctuation spectrum must be narrow compared with the field and
/// polarization spectra for the product approximation of the convolution.
NarrownessResult narrowness_check(const DerivedRates& rates, double bandwidth,
                                  double threshold = 0.1);

}  // namespace srled
