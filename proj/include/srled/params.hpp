#pragma once

// Device parameters and the constants derived from them.
//
// All frequencies and rates are angular (rad/s).

namespace srled {

struct PhysicalConstants {
    static constexpr double c_light = 299792458.0;      // m/s
    static constexpr double hbar = 1.054571817e-34;     // J s
    static constexpr double eps0 = 8.8541878128e-12;    // F/m
};

/// Raw device inputs, SI units. Defaults are the non-superradiant device with
/// the largest cavity (n_c = 100, N0 = 100).
struct DeviceParams {
    double lambda0 = 1.55e-6;     // vacuum wavelength (m)
    double n_r = 3.3;             // refractive index
    double dipole = 1e-28;        // transition dipole moment (C m)
    double n_c = 100.0;           // cavity volume in units of the minimal volume, >= 1
    int N0 = 100;                 // emitter count
    double gamma_perp = 1e12;     // polarization decay (rad/s)
    double gamma_par = 1e9;       // upper-state decay (rad/s)
    double kappa = 2.5e10;        // cavity field decay (rad/s)
    double f = 0.5;               // coupling-averaging factor, (0, 1]

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    friend bool operator==(const DeviceParams&, const DeviceParams&) = default;
};

/// Constants computed from DeviceParams. The relaxation rates, f and N0 are
/// carried along so that downstream code needs a single argument.
struct DerivedRates {
    double omega0 = 0.0;   // carrier frequency
    double V_min = 0.0;    // (lambda0 / 2 n_r)^3
    double V_c = 0.0;      // n_c * V_min
    double Omega = 0.0;    // Rabi coupling
    double g_diff = 0.0;   // differential gain, 4 Omega^2 f / (2 kappa + gamma_perp)
    double beta = 0.0;     // g_diff / (g_diff + gamma_par)
    double N_th = 0.0;     // kappa gamma_perp / (2 Omega^2 f)

    double kappa = 0.0;
    double gamma_perp = 0.0;
    double gamma_par = 0.0;
    double f = 0.0;
    int N0 = 0;

    /// 2 Omega^2 f, the combination that appears throughout the spectra.
    double coupling() const noexcept { return 2.0 * Omega * Omega * f; }
};

DerivedRates derive_rates(const DeviceParams& params);

/// Same device with 2 kappa and gamma_perp exchanged.
DeviceParams exchange_decay_rates(DeviceParams params);

}  // namespace srled
