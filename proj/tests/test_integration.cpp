#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "srled/errors.hpp"
#include "srled/quadrature.hpp"
#include "srled/residue.hpp"
#include "srled/solver.hpp"

using namespace srled;
using std::numbers::pi;

TEST_CASE("Gauss-Kronrod on smooth finite integrals") {
    const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.error <= 1e-9 * 2.0);
    const auto e = integrate_adaptive([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
    CHECK(e.value == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
    const auto s = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, {1e-12, 0, 5000});
    CHECK(s.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("Gauss-Kronrod reports an exhausted budget") {
    QuadratureOptions tight{1e-15, 0, 3};
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::sin(1 / (x + 1e-3)); }, 0.0, 1.0, tight),
                    QuadratureNoConvergence);
}

TEST_CASE("real-line quadrature of Lorentzians") {
    for (double a : {1e-3, 1.0, 2.5e10}) {
        const auto r = integrate_even_real_line([a](double w) { return 1.0 / (w * w + a * a); }, a);
        CHECK(r.value == doctest::Approx(pi / a).epsilon(1e-11));
    }
    const double k = 3.0, b = 7.0;
    const auto r = integrate_even_real_line(
        [&](double w) { return 1.0 / ((k * k + w * w) * (b * b + w * w)); }, 1.0);
    CHECK(r.value == doctest::Approx(pi / (k * b * (k + b))).epsilon(1e-11));
}

TEST_CASE("polynomial helpers") {
    const Polynomial p = {1.0, -3.0, 0.0, 2.0};
    CHECK(evaluate(p, 2.0).real() == doctest::Approx(11.0));
    CHECK(derivative(p) == Polynomial{-3.0, 0.0, 6.0});
    CHECK(multiply(Polynomial{1, 1}, Polynomial{-1, 1}) == Polynomial{-1, 0, 1});
}

TEST_CASE("companion roots") {
    // (x - 1)(x - 2)(x^2 + 4)
    const Polynomial p = multiply(multiply(Polynomial{-1, 1}, Polynomial{-2, 1}), Polynomial{4, 0, 1});
    const auto roots = polynomial_roots(p);
    REQUIRE(roots.size() == 4);
    for (const auto& z : roots) CHECK(std::abs(evaluate(p, z)) <= 1e-12);
    int real = 0;
    for (const auto& z : roots) real += std::abs(z.imag()) < 1e-12;
    CHECK(real == 2);
}

TEST_CASE("quartic factorization of a widely scaled even quartic") {
    // (w^2 + k^2)(w^2 + b^2) with rates of the device scale.
    const double k = 2.5e10, b = 5e11;
    const Polynomial d = {k * k * b * b, 0.0, k * k + b * b, 0.0, 1.0};
    const auto q = factor_quartic(d);
    CHECK(q.leading == 1.0);
    for (const auto& z : q.roots) {
        CHECK(std::abs(evaluate(d, z)) <= 1e-6 * std::pow(b, 4));
        CHECK(std::abs(z.real()) <= 1e-6 * std::abs(z));
    }
    CHECK_THROWS_AS(factor_quartic(Polynomial{1, 2, 3}), ValidationError);
}

TEST_CASE("residue integral: single pole pair") {
    for (double a : {0.5, 1.0, 1e10}) {
        const Polynomial num = {1.0};
        const std::vector<Pole> poles = {{{0, a}, 1}, {{0, -a}, 1}};
        CHECK(residue_integral(num, poles, 1.0) == doctest::Approx(pi / a).epsilon(1e-14));
    }
}

TEST_CASE("residue integral: double poles and numerator powers") {
    const double a = 2.0;
    // integral 1/(w^2+a^2)^2 = pi / (2 a^3)
    const std::vector<Pole> dbl = {{{0, a}, 2}, {{0, -a}, 2}};
    CHECK(residue_integral(Polynomial{1.0}, dbl, 1.0) == doctest::Approx(pi / (2 * a * a * a)).epsilon(1e-14));
    // integral w^2/(w^2+a^2)^2 = pi / (2 a)
    CHECK(residue_integral(Polynomial{0, 0, 1.0}, dbl, 1.0) == doctest::Approx(pi / (2 * a)).epsilon(1e-14));
    // Leading coefficient divides.
    CHECK(residue_integral(Polynomial{1.0}, dbl, 4.0) == doctest::Approx(pi / (8 * a * a * a)).epsilon(1e-14));
}

TEST_CASE("residue integral preconditions") {
    const std::vector<Pole> one = {{{0, 1}, 1}, {{0, -1}, 1}};
    CHECK_THROWS_AS(residue_integral(Polynomial{0, 1.0}, one, 1.0), ValidationError);
    const std::vector<Pole> real = {{{1, 0}, 1}, {{-1, 0}, 1}};
    CHECK_THROWS_AS(residue_integral(Polynomial{1.0}, real, 1.0), ValidationError);
    const std::vector<Pole> close = {{{1, 1}, 1}, {{1 + 1e-13, 1}, 1}, {{1, -1}, 1}, {{1 + 1e-13, -1}, 1}};
    CHECK_THROWS_AS(residue_integral(Polynomial{1.0}, close, 1.0), DegenerateRoots);
}

TEST_CASE("zero-order photon number at N = 0 has a closed form") {
    DeviceParams p;
    const auto rates = derive_rates(p);
    const auto st = MediumState::from_upper(50.0, 100);
    const double k = rates.kappa, b = rates.gamma_perp / 2;
    const double integral = pi / (k * b * (k + b));
    const double expected = rates.f * rates.Omega * rates.Omega * rates.gamma_perp * 50.0 * integral / (2 * pi);
    const double residue = integrate_spectrum_residue(rates, st, SpectrumVariant::ZeroOrder);
    SolverConfig cfg;
    cfg.quad_rel_tol = 1e-12;
    const auto adaptive = integrate_spectrum_adaptive(rates, st, SpectrumVariant::ZeroOrder, cfg);
    CHECK(residue == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(adaptive.value / residue - 1) <= 1e-10);
}

TEST_CASE("backends agree for every variant") {
    for (double n_c : {100.0, 2.0}) {
        for (bool sr : {false, true}) {
            DeviceParams p;
            p.n_c = n_c;
            if (sr) p = exchange_decay_rates(p);
            const auto rates = derive_rates(p);
            auto st = MediumState::from_upper(40.0, 100, 0.0);
            const auto rc = response_coefficients(rates, st);
            st.delta2_Ne = std::min(24.0, 0.5 * rc.min_abs2_s() / (rc.K * rc.K));
            for (auto v : {SpectrumVariant::ZeroOrder, SpectrumVariant::SpontaneousOnly,
                           SpectrumVariant::Perturbative, SpectrumVariant::NonPerturbative}) {
                SolverConfig cfg;
                cfg.backend = QuadBackend::Both;
                const auto r = integrate_spectrum(rates, st, v, cfg);
                CHECK(r.used == QuadBackend::Both);
                CHECK(r.backend_deviation <= 1e-8);
            }
        }
    }
}

TEST_CASE("photon number vanishes without excited emitters") {
    const auto rates = derive_rates(DeviceParams{});
    const auto st = MediumState::from_upper(0.0, 100);
    for (auto v : {SpectrumVariant::ZeroOrder, SpectrumVariant::NonPerturbative}) {
        CHECK(integrate_spectrum(rates, st, v).n == 0.0);
    }
}

TEST_CASE("integration refuses unstable states") {
    const auto rates = derive_rates(DeviceParams{});
    const auto above = MediumState::from_upper(90.0, 100);
    CHECK_THROWS_AS(integrate_spectrum(rates, above, SpectrumVariant::ZeroOrder), StabilityViolation);
    auto st = MediumState::from_upper(40.0, 100);
    const auto rc = response_coefficients(rates, st);
    st.delta2_Ne = 2 * rc.min_abs2_s() / (rc.K * rc.K);
    CHECK_THROWS_AS(integrate_spectrum(rates, st, SpectrumVariant::NonPerturbative), StabilityViolation);
}

TEST_CASE("exchange leaves the zero-order photon flux invariant") {
    for (double n_c : {100.0, 10.0, 2.0}) {
        DeviceParams p;
        p.n_c = n_c;
        const auto a = derive_rates(p);
        const auto b = derive_rates(exchange_decay_rates(p));
        const auto st = MediumState::from_upper(30.0, 100);
        const double fa = 2 * a.kappa * integrate_spectrum_residue(a, st, SpectrumVariant::ZeroOrder);
        const double fb = 2 * b.kappa * integrate_spectrum_residue(b, st, SpectrumVariant::ZeroOrder);
        CHECK(std::abs(fa / fb - 1) <= 1e-10);
    }
}
