#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "srled/errors.hpp"
#include "srled/spectra.hpp"

using namespace srled;

namespace {

// Hand-built rates with kappa = gamma_perp / 2 = 1e10.
DerivedRates simple_rates() {
    DerivedRates r;
    r.kappa = 1e10;
    r.gamma_perp = 2e10;
    r.gamma_par = 1e8;
    r.Omega = 1e9;
    r.f = 0.5;
    r.N0 = 100;
    r.N_th = r.kappa * r.gamma_perp / (2 * r.Omega * r.Omega * r.f);
    r.g_diff = 4 * r.Omega * r.Omega * r.f / (2 * r.kappa + r.gamma_perp);
    return r;
}

// State with inversion N exactly (N0 = 100).
MediumState with_inversion(double N, double delta2 = 0.0) {
    return MediumState::from_upper(0.5 * (N + 100.0), 100, delta2);
}

DerivedRates preset_rates(double n_c = 10.0) {
    DeviceParams p;
    p.n_c = n_c;
    return derive_rates(p);
}

}  // namespace

TEST_CASE("s(omega) special values") {
    const auto r = simple_rates();
    const auto s0 = s_of_omega(0.0, r, with_inversion(0.0));
    CHECK(s0.real() == doctest::Approx(r.kappa * r.gamma_perp / 2));
    CHECK(s0.imag() == 0.0);

    DeviceParams p;
    const auto rates = derive_rates(p);
    const auto at_threshold = MediumState{0, 0, rates.N_th, 0, 0};
    CHECK(std::abs(s_of_omega(0.0, rates, at_threshold)) <= 1e-12 * rates.kappa * rates.gamma_perp);

    const auto s = s_of_omega(1e10, r, with_inversion(0.0));
    CHECK(std::abs(s - std::complex<double>(0.0, -2e20)) <= 1e-12 * 2e20);
}

TEST_CASE("|s|^2 coefficients match the complex form") {
    const auto r = preset_rates(2);
    const auto st = MediumState::from_upper(40.0, 100);
    const auto rc = response_coefficients(r, st);
    for (double w : {0.0, 1e9, 3e10, 2e11, -5e11, 4e12}) {
        CHECK(rc.abs2_s(w) == doctest::Approx(std::norm(s_of_omega(w, r, st))).epsilon(1e-12));
    }
    double brute = INFINITY;
    for (int i = 0; i <= 200000; ++i) brute = std::min(brute, rc.abs2_s(i * 1e7));
    CHECK(rc.min_abs2_s() <= brute * (1 + 1e-12));
    CHECK(rc.min_abs2_s() >= brute * (1 - 1e-6));
}

TEST_CASE("c(omega) special values") {
    const auto r = simple_rates();
    CHECK(c_of_omega(0.0, r, with_inversion(0.0)) * r.kappa == doctest::Approx(2.0).epsilon(1e-14));

    const auto rates = preset_rates();
    const MediumState at_th{0, 0, rates.N_th, 0, 0};
    const double w = 3e10;
    CHECK(c_of_omega(w, rates, at_th) ==
          doctest::Approx(2 * rates.kappa * w * w / std::norm(s_of_omega(w, rates, at_th))).epsilon(1e-10));
    CHECK_THROWS_AS(c_of_omega(0.0, rates, at_th), StabilityViolation);

    const auto st = MediumState::from_upper(30.0, 100);
    const double big = 100 * std::max(rates.kappa, rates.gamma_perp);
    CHECK(c_of_omega(big, rates, st) < 1e-3 * c_of_omega(0.0, rates, st));
}

TEST_CASE("all variants agree without fluctuations") {
    const auto r = preset_rates(2);
    const auto st = MediumState::from_upper(45.0, 100, 0.0);
    for (double w : {0.0, 1e10, -2e11, 7e11}) {
        const double zo = spectrum(w, r, st, SpectrumVariant::ZeroOrder);
        const double expected = r.f * r.Omega * r.Omega * r.gamma_perp * st.N_e / std::norm(s_of_omega(w, r, st));
        CHECK(zo == doctest::Approx(expected).epsilon(1e-13));
        CHECK(spectrum(w, r, st, SpectrumVariant::SpontaneousOnly) == zo);
        CHECK(spectrum(w, r, st, SpectrumVariant::Perturbative) == doctest::Approx(zo).epsilon(1e-15));
        CHECK(spectrum(w, r, st, SpectrumVariant::NonPerturbative) == doctest::Approx(zo).epsilon(1e-15));
    }
}

TEST_CASE("perturbative variant is the first-order expansion") {
    const auto r = preset_rates(5);
    auto st = MediumState::from_upper(35.0, 100, 0.0);
    const double w = 4e10;
    const double h = 1e-4;
    auto np = [&](double d) {
        st.delta2_Ne = d;
        return spectrum(w, r, st, SpectrumVariant::NonPerturbative);
    };
    const double central = (np(h) - np(-h)) / (2 * h);
    st.delta2_Ne = 1.0;
    const double slope_pert = spectrum(w, r, st, SpectrumVariant::Perturbative) -
                              spectrum(w, r, st, SpectrumVariant::ZeroOrder);
    CHECK(std::abs(central / slope_pert - 1) <= 1e-6);
}

TEST_CASE("non-perturbative minus perturbative is second order at w = 0") {
    const auto r = preset_rates(2);
    auto st = MediumState::from_upper(30.0, 100);
    const auto rc = response_coefficients(r, st);
    const double d0 = rc.min_abs2_s() / (rc.K * rc.K);
    std::vector<double> lx, ly;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        st.delta2_Ne = eps * d0;
        const double diff = spectrum(0.0, r, st, SpectrumVariant::NonPerturbative) -
                            spectrum(0.0, r, st, SpectrumVariant::Perturbative);
        lx.push_back(std::log(eps));
        ly.push_back(std::log(std::abs(diff)));
    }
    const double slope = (ly[0] - ly[2]) / (lx[0] - lx[2]);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("stability margin") {
    const auto r = preset_rates(10);
    auto st = MediumState::from_upper(40.0, 100, 0.0);
    CHECK(stability_margin(r, st) > 0.0);

    const MediumState at_th{0, 0, r.N_th, 0, 0};
    CHECK(std::abs(stability_margin(r, at_th)) <= 1e-12 * std::pow(r.kappa * r.gamma_perp, 2));

    const double m0 = stability_margin(r, st);
    st.delta2_Ne = 1.0;
    const double m1 = stability_margin(r, st);
    st.delta2_Ne = 7.0;
    const double m7 = stability_margin(r, st);
    const double K = r.coupling();
    CHECK((m1 - m0) == doctest::Approx(-K * K).epsilon(1e-9));
    CHECK((m7 - m0) == doctest::Approx(-7 * K * K).epsilon(1e-9));

    const auto rc = response_coefficients(r, st);
    st.delta2_Ne = 1.01 * rc.min_abs2_s() / (K * K);
    CHECK(stability_margin(r, st) < 0.0);
    CHECK_THROWS_AS(spectrum(0.0, r, st, SpectrumVariant::NonPerturbative), StabilityViolation);
    CHECK_NOTHROW(spectrum(0.0, r, st, SpectrumVariant::SpontaneousOnly));
}

TEST_CASE("Langevin power spectrum") {
    const auto r = preset_rates(10);
    const auto st = MediumState::from_upper(30.0, 100);
    for (double w : {0.0, 1e10, 1e12}) {
        CHECK(langevin_power_spectrum(w, r, st, 0.0) == doctest::Approx(r.f * r.gamma_perp * 30.0));
    }
    // At N = 0 the second/first ratio at w = 0 composes c(0) = 2/kappa.
    const auto half = MediumState::from_upper(50.0, 100);
    const double d = 12.0;
    const double first = r.f * r.gamma_perp * 50.0;
    const double ratio = (langevin_power_spectrum(0.0, r, half, d) - first) / first;
    const double expected = (2 * r.f * r.Omega * r.Omega / (r.gamma_perp * 50.0)) * (2 / r.kappa) * d;
    CHECK(ratio == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("variant names round-trip") {
    for (auto v : {SpectrumVariant::ZeroOrder, SpectrumVariant::SpontaneousOnly,
                   SpectrumVariant::Perturbative, SpectrumVariant::NonPerturbative}) {
        CHECK(variant_from_string(to_string(v)) == v);
    }
    CHECK_THROWS_AS(variant_from_string("exact"), ValidationError);
}

TEST_CASE("default grid is symmetric, contains zero and spans the window") {
    const auto r = preset_rates(2);
    const auto g = default_grid(r, 100, 20);
    REQUIRE(g.size() == 201);
    CHECK(g[100] == 0.0);
    for (std::size_t i = 0; i < 100; ++i) CHECK(g[i] == -g[200 - i]);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK(g.back() == doctest::Approx(20 * spectral_scale(r)));
    CHECK_THROWS_AS(default_grid(r, 1), ValidationError);
}
