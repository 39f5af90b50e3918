#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srled/params.hpp"
#include "srled/pf.hpp"
#include "srled/quadrature.hpp"
#include "srled/spectra.hpp"

namespace srled {

enum class QuadBackend {
    Adaptive,  // Gauss-Kronrod on the tangent-mapped real line
    Residue,   // upper half-plane residues of the rational integrand
    Both,      // residue value, cross-checked against adaptive
};

std::string_view to_string(QuadBackend b);
QuadBackend quad_backend_from_string(std::string_view name);

struct SolverConfig {
    double ne_tol = 1e-10;         // relative tolerance on N_e and on the energy residual
    double quad_rel_tol = 1e-9;    // adaptive quadrature relative tolerance
    int max_outer_iters = 200;     // inner fixed-point iteration cap
    int max_root_iters = 300;      // bracketing root-finder cap
    int max_intervals = 4000;      // adaptive quadrature subdivision budget
    double damping = 0.5;          // fixed-point damping
    double narrowness_threshold = 0.1;
    QuadBackend backend = QuadBackend::Residue;

    void validate() const;
};

struct IntegrationResult {
    double n = 0.0;                // (2 pi)^-1 * integral of n(w)
    double error_estimate = 0.0;   // absolute
    QuadBackend used = QuadBackend::Residue;
    double backend_deviation = 0.0;  // |adaptive - residue| / |residue| when both ran
    std::string warning;
};

/// Mean photon number for a fixed medium state. Throws StabilityViolation if
/// the state is at or above the (effective) threshold.
IntegrationResult integrate_spectrum(const DerivedRates& rates, const MediumState& state,
                                     SpectrumVariant variant, const SolverConfig& config = {});

/// Closed-form residue evaluation of the photon number; throws DegenerateRoots
/// when the pole configuration is ill-conditioned.
double integrate_spectrum_residue(const DerivedRates& rates, const MediumState& state,
                                  SpectrumVariant variant);

/// Tangent-mapped adaptive quadrature of the photon number.
QuadratureResult integrate_spectrum_adaptive(const DerivedRates& rates,
                                                 const MediumState& state,
                                                 SpectrumVariant variant,
                                                 const SolverConfig& config);

struct Diagnostics {
    double stability_margin = 0.0;   // relative: margin / min |s|^2, in (0, 1]
    double narrowness_ratio = 0.0;
    bool narrow = true;
    double residual = 0.0;           // |2 kappa n - gamma_par (P N_g - N_e)| / (gamma_par N0)
    double backend_deviation = 0.0;
    int inner_iterations = 0;
    int root_iterations = 0;
    std::vector<std::string> warnings;
};

/// Self-consistent stationary state at pump P.
struct OperatingPoint {
    double P = 0.0;
    double N_e = 0.0;
    double N_g = 0.0;
    double N = 0.0;
    double delta2_Ne = 0.0;
    double n = 0.0;
    double p_out = 0.0;   // 2 kappa n, photons/s
    SpectrumVariant variant = SpectrumVariant::ZeroOrder;
    Diagnostics diagnostics;

    MediumState state() const;
};

/// Finds N_e in [0, P N0 / (P + 1)] such that the photon number produced by the
/// spectrum satisfies energy conservation 2 kappa n = gamma_par (P N_g - N_e).
/// For field-dependent fluctuation models the dispersion and n are iterated to a
/// joint fixed point at every trial N_e.
OperatingPoint solve_operating_point(double P, const DeviceParams& params,
                                     SpectrumVariant variant, const PFModel& pf_model,
                                     const SolverConfig& config = {});

/// p_out(NonPerturbative) / p_out(ZeroOrder) at the same pump and device.
double enhancement_factor(double P, const DeviceParams& params, const PFModel& pf_model,
                          const SolverConfig& config = {});

/// Samples the spectrum of a state on `grid` and records the sampling error
/// of the photon number against the closed-form integral.
SpectrumTable make_spectrum_table(const DerivedRates& rates, const MediumState& state,
                                  SpectrumVariant variant, std::span<const double> grid,
                                  const SolverConfig& config = {});

struct PeakReport {
    double peak_position = 0.0;  // omega_peak >= 0; peaks sit at +-omega_peak
    double peak_height = 0.0;    // p_out at the peak (photons/s per rad/s)
    double splitting = 0.0;      // 2 omega_peak
    bool is_split = false;
};

/// Largest maximum of p_out(w) over w >= 0 with three-point parabolic
/// refinement. Throws WindowTooNarrow when it sits on the grid edge.
PeakReport find_crs_peaks(const SpectrumTable& table);

}  // namespace srled
