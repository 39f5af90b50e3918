#include "srled/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "srled/errors.hpp"
#include "srled/presets.hpp"
#include "srled/residue.hpp"
#include "srled/runner.hpp"
#include "srled/solver.hpp"

namespace srled {

bool PropertyReport::all_passed() const {
    return std::all_of(cases.begin(), cases.end(), [](const PropertyCase& c) { return c.pass; });
}

std::string PropertyReport::format() const {
    std::ostringstream out;
    out.precision(3);
    for (const auto& c : cases) {
        out << (c.pass ? "PASS " : "FAIL ") << c.suite << "/" << c.name << "  measured="
            << std::scientific << c.measured << " bound=" << c.tolerance;
        if (!c.detail.empty()) out << "  " << c.detail;
        out << '\n';
    }
    return out.str();
}

namespace {

using Rng = std::mt19937_64;
using Cases = std::vector<PropertyCase>;

constexpr SpectrumVariant kAllVariants[] = {
    SpectrumVariant::ZeroOrder, SpectrumVariant::SpontaneousOnly,
    SpectrumVariant::Perturbative, SpectrumVariant::NonPerturbative};

double rel_dev(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

PropertyCase make_case(std::string suite, std::string name, double measured, double bound,
                       bool pass, std::string detail = {}) {
    return {std::move(suite), std::move(name), pass, measured, bound, std::move(detail)};
}

PropertyCase upper_bound_case(std::string suite, std::string name, double measured,
                              double bound, std::string detail = {}) {
    const bool pass = std::isfinite(measured) && measured <= bound;
    return make_case(std::move(suite), std::move(name), measured, bound, pass, std::move(detail));
}

/// Every (bundle, curve) device used by the figure presets.
std::vector<std::pair<std::string, DeviceParams>> preset_devices() {
    std::vector<std::pair<std::string, DeviceParams>> out;
    for (const char* name : {"fig2", "fig5"}) {
        const Preset p = make_preset(name);
        for (const auto& c : p.curves) {
            out.emplace_back(std::string(name) + "_" + c.label(), curve_params(p, c, {}));
        }
    }
    return out;
}

/// A random state strictly below threshold with a dispersion that keeps the
/// full spectrum finite.
MediumState random_state(Rng& rng, const DerivedRates& rates) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double N0 = rates.N0;
    const double ne_max = std::min(N0, 0.5 * (N0 + rates.N_th));
    MediumState s = MediumState::from_upper(u(rng) * ne_max * 0.999, rates.N0, 0.0, 2.0 * u(rng));
    const auto rc = response_coefficients(rates, s);
    const double d_max = std::min(N0 * N0 / 4.0, 0.999 * rc.min_abs2_s() / (rc.K * rc.K));
    s.delta2_Ne = u(rng) * d_max;
    return s;
}

Cases exchange_suite(Rng&) {
    Cases out;
    const Preset fig2 = make_preset("fig2");
    const PFModel none{PFKind::None};
    const std::vector<double> pumps = {0.01, 0.05, 0.2, 0.5, 1.0, 1.5, 2.0};
    for (const auto& curve : {Curve{100, 100}, Curve{10, 100}, Curve{2, 200}}) {
        const DeviceParams a = curve_params(fig2, curve, {});
        const DeviceParams b = exchange_decay_rates(a);
        double worst = 0.0;
        double worst_spec = 0.0;
        try {
            for (double P : pumps) {
                const auto oa = solve_operating_point(P, a, SpectrumVariant::ZeroOrder, none);
                const auto ob = solve_operating_point(P, b, SpectrumVariant::ZeroOrder, none);
                worst = std::max(worst, rel_dev(oa.p_out, ob.p_out));
                const auto ra = derive_rates(a);
                const auto rb = derive_rates(b);
                for (double x : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0}) {
                    const double w = x * spectral_scale(ra);
                    const double pa = 2 * ra.kappa * spectrum(w, ra, oa.state(), oa.variant);
                    const double pb = 2 * rb.kappa * spectrum(w, rb, ob.state(), ob.variant);
                    worst_spec = std::max(worst_spec, rel_dev(pa, pb));
                }
            }
            out.push_back(upper_bound_case("exchange", curve.label() + "_p_out", worst, 1e-9));
            out.push_back(
                upper_bound_case("exchange", curve.label() + "_p_out_omega", worst_spec, 1e-9));
        } catch (const Error& e) {
            out.push_back(make_case("exchange", curve.label(), NAN, 1e-9, false, e.what()));
        }
    }
    return out;
}

Cases ordering_suite(Rng& rng) {
    const auto devices = preset_devices();
    std::uniform_int_distribution<std::size_t> pick(0, devices.size() - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    constexpr int kStates = 1000;
    int point_fail = 0, integral_fail = 0, c_fail = 0, even_fail = 0;
    double worst_even = 0.0;
    double min_c = INFINITY;
    std::string first_failure;
    for (int i = 0; i < kStates; ++i) {
        const auto& [label, device] = devices[pick(rng)];
        const auto rates = derive_rates(device);
        const auto s = random_state(rng, rates);
        const double w = 10.0 * u(rng) * spectral_scale(rates);
        const double zo = spectrum(w, rates, s, SpectrumVariant::ZeroOrder);
        const double so = spectrum(w, rates, s, SpectrumVariant::SpontaneousOnly);
        const double np = spectrum(w, rates, s, SpectrumVariant::NonPerturbative);
        const double slack = 1e-13 * np;
        if (!(zo >= 0.0 && so >= zo - slack && np >= so - slack)) {
            ++point_fail;
            if (first_failure.empty()) first_failure = label;
        }
        const double nz = integrate_spectrum_residue(rates, s, SpectrumVariant::ZeroOrder);
        const double ns = integrate_spectrum_residue(rates, s, SpectrumVariant::SpontaneousOnly);
        const double nn = integrate_spectrum_residue(rates, s, SpectrumVariant::NonPerturbative);
        if (!(nz > 0.0 && ns >= nz * (1 - 1e-12) && nn >= ns * (1 - 1e-12))) ++integral_fail;
        const double c = c_of_omega(w, rates, s);
        min_c = std::min(min_c, c);
        if (!(c >= 0.0)) ++c_fail;
        for (auto v : kAllVariants) {
            const double d = rel_dev(spectrum(w, rates, s, v), spectrum(-w, rates, s, v));
            worst_even = std::max(worst_even, d);
            if (d > 1e-14) ++even_fail;
        }
    }
    const std::string states = std::to_string(kStates) + " random states";
    return {
        make_case("ordering", "pointwise_NP>=SO>=ZO", point_fail, 0, point_fail == 0,
                  states + (first_failure.empty() ? "" : ", first failure " + first_failure)),
        make_case("ordering", "integrated_NP>=SO>=ZO", integral_fail, 0, integral_fail == 0, states),
        make_case("sign", "c_nonnegative", min_c, 0, c_fail == 0, "min c over " + states),
        make_case("evenness", "n(w)=n(-w)", worst_even, 1e-14, even_fail == 0, states),
    };
}

Cases limit_suite(Rng& rng) {
    Cases out;
    const auto devices = preset_devices();
    double worst = 0.0;
    for (const auto& [label, device] : devices) {
        const auto rates = derive_rates(device);
        for (int i = 0; i < 20; ++i) {
            auto s = random_state(rng, rates);
            s.delta2_Ne = 0.0;
            worst = std::max(worst, rel_dev(integrate_spectrum_residue(rates, s, SpectrumVariant::NonPerturbative),
                                            integrate_spectrum_residue(rates, s, SpectrumVariant::ZeroOrder)));
            const double w = 3.0 * spectral_scale(rates) * (i / 20.0);
            worst = std::max(worst, rel_dev(spectrum(w, rates, s, SpectrumVariant::NonPerturbative),
                                            spectrum(w, rates, s, SpectrumVariant::ZeroOrder)));
        }
    }
    out.push_back(upper_bound_case("limit", "NP(delta=0)=ZO", worst, 1e-12));

    // |n_NP - n_pert| against the dispersion on a log grid; the fitted slope
    // is the order of the first neglected term.
    for (const auto& [label, device] : devices) {
        const auto rates = derive_rates(device);
        const double ne = 0.5 * std::min<double>(rates.N0, 0.5 * (rates.N0 + rates.N_th));
        auto s = MediumState::from_upper(ne, rates.N0, 0.0, 1.0);
        const auto rc = response_coefficients(rates, s);
        const double d_unit = rc.min_abs2_s() / (rc.K * rc.K);
        std::vector<double> lx, ly;
        for (int k = 0; k < 9; ++k) {
            s.delta2_Ne = d_unit * 1e-3 * std::pow(10.0, 1.5 * k / 8.0);
            const double np = integrate_spectrum_residue(rates, s, SpectrumVariant::NonPerturbative);
            const double pt = integrate_spectrum_residue(rates, s, SpectrumVariant::Perturbative);
            lx.push_back(std::log(s.delta2_Ne));
            ly.push_back(std::log(std::abs(np - pt)));
        }
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
        const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        const double slope = sxy / sxx;
        out.push_back(make_case("limit", "perturbative_order_" + label, slope, 2.0,
                                slope >= 1.9 && slope <= 2.1, "log-log slope, band [1.9, 2.1]"));
    }
    return out;
}

Cases backend_suite(Rng&) {
    Cases out;
    SolverConfig cfg;
    cfg.quad_rel_tol = 1e-11;
    cfg.max_intervals = 20000;
    const PFModel pf{PFKind::Binomial};
    const std::vector<double> pumps = log_grid(0.01, 2.0, 12);
    for (const auto& [label, device] : preset_devices()) {
        const auto rates = derive_rates(device);
        double worst = 0.0, worst_residual = 0.0;
        std::string error;
        for (auto v : kAllVariants) {
            for (double P : pumps) {
                try {
                    const auto op = solve_operating_point(P, device, v, pf);
                    const double r = integrate_spectrum_residue(rates, op.state(), v);
                    const auto a = integrate_spectrum_adaptive(rates, op.state(), v, cfg);
                    worst = std::max(worst, rel_dev(r, a.value));
                    worst_residual = std::max(worst_residual, op.diagnostics.residual);
                } catch (const Error& e) {
                    if (error.empty()) error = e.what();
                }
            }
        }
        if (!error.empty()) {
            out.push_back(make_case("backends", label, NAN, 1e-8, false, error));
            continue;
        }
        out.push_back(upper_bound_case("backends", "residue_vs_adaptive_" + label, worst, 1e-8));
        out.push_back(upper_bound_case("energy", "residual_" + label, worst_residual, 1e-10));
    }
    return out;
}

Cases roots_suite(Rng& rng) {
    const auto devices = preset_devices();
    std::uniform_int_distribution<std::size_t> pick(0, devices.size() - 1);
    double worst = 0.0, worst_pair = 0.0, min_imag = INFINITY;
    for (int i = 0; i < 300; ++i) {
        const auto rates = derive_rates(devices[pick(rng)].second);
        const auto s = random_state(rng, rates);
        const auto rc = response_coefficients(rates, s);
        const Polynomial d = {rc.A * rc.A - rc.K * rc.K * s.delta2_Ne, 0.0,
                              rc.B * rc.B - 2.0 * rc.A, 0.0, 1.0};
        const auto q = factor_quartic(d);
        const double rate = std::max(rates.kappa, rates.gamma_perp);
        for (const auto& z : q.roots) {
            worst = std::max(worst, std::abs(evaluate(d, z)) / (std::abs(q.leading) * std::pow(rate, 4)));
            min_imag = std::min(min_imag, std::abs(z.imag()) / std::abs(z));
            // An even real polynomial has roots z, -z, conj(z), -conj(z).
            double best = INFINITY;
            for (const auto& w : q.roots) best = std::min(best, std::abs(w + std::conj(z)));
            worst_pair = std::max(worst_pair, best / std::abs(z));
        }
    }
    return {
        upper_bound_case("roots", "residual", worst, 1e-6, "|D(root)| / (|lead| max(kappa,gamma_perp)^4)"),
        upper_bound_case("roots", "mirror_pairs", worst_pair, 1e-10),
        make_case("roots", "no_real_roots", min_imag, 0.0, min_imag > 1e-12, "min |Im z| / |z|"),
    };
}

Cases derivative_suite(Rng& rng) {
    Cases out;
    const auto devices = preset_devices();
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    // Polynomial derivative against central differences.
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto rates = derive_rates(devices[i % devices.size()].second);
        const auto s = random_state(rng, rates);
        const auto rc = response_coefficients(rates, s);
        const Polynomial p = {rc.A * rc.A, 0.0, rc.B * rc.B - 2.0 * rc.A, 0.0, 1.0};
        const auto dp = derivative(p);
        const double w = 5.0 * u(rng) * spectral_scale(rates);
        const double h = 1e-5 * spectral_scale(rates);
        const double fd = (rc.abs2_s(w + h) - rc.abs2_s(w - h)) / (2 * h);
        const double exact = evaluate(dp, w).real();
        const double scale = std::abs(exact) + 1e-6 * rc.abs2_s(w) / spectral_scale(rates);
        worst = std::max(worst, std::abs(fd - exact) / scale);
    }
    out.push_back(upper_bound_case("derivative", "abs2_s_polynomial", worst, 1e-6));

    // The energy balance increases with N_e on the admissible bracket.
    const PFModel pf{PFKind::Binomial};
    for (const auto& [label, device] : devices) {
        const auto rates = derive_rates(device);
        int violations = 0;
        double min_slope = INFINITY;
        for (double P : {0.1, 1.0, 2.0}) {
            for (auto v : {SpectrumVariant::ZeroOrder, SpectrumVariant::NonPerturbative}) {
                auto F = [&](double ne) -> double {
                    const double d = v == SpectrumVariant::ZeroOrder
                                         ? 0.0
                                         : pf_dispersion(ne, 0.0, P, rates, pf);
                    const auto s = MediumState::from_upper(ne, rates.N0, d, P);
                    if (!below_threshold(rates, s) ||
                        (v != SpectrumVariant::ZeroOrder && !(stability_margin(rates, s) > 0.0))) {
                        return NAN;
                    }
                    const double n = integrate_spectrum_residue(rates, s, v);
                    return 2 * rates.kappa * n - rates.gamma_par * (P * (rates.N0 - ne) - ne);
                };
                const double hi = P * rates.N0 / (P + 1);
                const double h = 1e-6 * rates.N0;
                for (int k = 1; k < 32; ++k) {
                    const double x = hi * k / 32.0;
                    const double a = F(x - h), b = F(x + h);
                    if (std::isnan(a) || std::isnan(b)) continue;
                    const double slope = (b - a) / (2 * h) / rates.gamma_par;
                    min_slope = std::min(min_slope, slope);
                    if (!(slope > 0.0)) ++violations;
                }
            }
        }
        out.push_back(make_case("derivative", "energy_balance_increasing_" + label, min_slope, 0.0,
                                violations == 0, "min dF/dN_e / gamma_par"));
    }
    return out;
}

Cases homogeneity_suite(Rng& rng) {
    const auto devices = preset_devices();
    double worst = 0.0;
    for (const auto& [label, device] : devices) {
        const auto rates = derive_rates(device);
        for (int i = 0; i < 5; ++i) {
            const auto s = random_state(rng, rates);
            for (double lambda : {0.1, 10.0}) {
                DerivedRates scaled = rates;
                scaled.kappa *= lambda;
                scaled.gamma_perp *= lambda;
                scaled.Omega *= lambda;
                for (auto v : kAllVariants) {
                    worst = std::max(worst, rel_dev(integrate_spectrum_residue(rates, s, v),
                                                    integrate_spectrum_residue(scaled, s, v)));
                }
            }
        }
    }
    return {upper_bound_case("homogeneity", "n_scale_invariant", worst, 1e-10,
                             "rates and Omega scaled by 0.1 and 10")};
}

}  // namespace

PropertyReport run_property_suite(std::uint64_t seed, int threads) {
    const std::vector<std::function<Cases(Rng&)>> suites = {
        exchange_suite, ordering_suite,   limit_suite,       backend_suite,
        roots_suite,    derivative_suite, homogeneity_suite,
    };
    std::vector<Cases> results(suites.size());
    parallel_for(suites.size(), threads, [&](std::size_t i) {
        Rng rng(seed + i);
        try {
            results[i] = suites[i](rng);
        } catch (const std::exception& e) {
            results[i] = {make_case("suite", std::to_string(i), NAN, 0, false, e.what())};
        }
    });
    PropertyReport report;
    for (auto& r : results) {
        report.cases.insert(report.cases.end(), r.begin(), r.end());
    }
    return report;
}

}  // namespace srled
