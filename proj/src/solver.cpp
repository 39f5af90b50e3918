#include "srled/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "srled/errors.hpp"
#include "srled/residue.hpp"

namespace srled {

std::string_view to_string(QuadBackend b) {
    switch (b) {
        case QuadBackend::Adaptive: return "adaptive";
        case QuadBackend::Residue: return "residue";
        case QuadBackend::Both: return "both";
    }
    return "unknown";
}

QuadBackend quad_backend_from_string(std::string_view name) {
    for (auto b : {QuadBackend::Adaptive, QuadBackend::Residue, QuadBackend::Both}) {
        if (to_string(b) == name) return b;
    }
    throw ValidationError("quad", "unknown backend '" + std::string(name) +
                                      "' (expected adaptive, residue or both)");
}

void SolverConfig::validate() const {
    if (!(ne_tol > 0.0)) throw ValidationError("ne_tol", "must be positive");
    if (!(quad_rel_tol > 0.0)) throw ValidationError("quad_rel_tol", "must be positive");
    if (max_outer_iters < 1) throw ValidationError("max_outer_iters", "must be >= 1");
    if (max_root_iters < 1) throw ValidationError("max_root_iters", "must be >= 1");
    if (max_intervals < 1) throw ValidationError("max_intervals", "must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw ValidationError("damping", "must lie in (0, 1]");
    if (!(narrowness_threshold > 0.0)) {
        throw ValidationError("narrowness_threshold", "must be positive");
    }
}

MediumState OperatingPoint::state() const {
    MediumState s;
    s.N_e = N_e;
    s.N_g = N_g;
    s.N = N;
    s.delta2_Ne = delta2_Ne;
    s.P = P;
    return s;
}

namespace {

bool uses_dispersion(SpectrumVariant v) { return v != SpectrumVariant::ZeroOrder; }

// Margin of the denominator the variant actually divides by.
double relevant_margin(const DerivedRates& rates, const MediumState& state,
                       SpectrumVariant variant) {
    const auto rc = response_coefficients(rates, state);
    const double min_s2 = rc.min_abs2_s();
    if (variant == SpectrumVariant::NonPerturbative) return min_s2 - rc.K * rc.K * state.delta2_Ne;
    return min_s2;
}

bool is_stable(const DerivedRates& rates, const MediumState& state, SpectrumVariant variant) {
    return below_threshold(rates, state) && relevant_margin(rates, state, variant) > 0.0;
}

void require_stable(const DerivedRates& rates, const MediumState& state, SpectrumVariant variant) {
    if (!below_threshold(rates, state)) {
        throw StabilityViolation("inversion at or above threshold N_th", state.N_e);
    }
    if (!(relevant_margin(rates, state, variant) > 0.0)) {
        throw StabilityViolation("spectrum denominator has a real root (effective threshold)",
                                 state.N_e);
    }
}

}  // namespace

double integrate_spectrum_residue(const DerivedRates& rates, const MediumState& state,
                                  SpectrumVariant variant) {
    const auto rc = response_coefficients(rates, state);
    const double A = rc.A, B = rc.B, K = rc.K;
    const double d = uses_dispersion(variant) ? state.delta2_Ne : 0.0;
    const double spont = rates.gamma_perp * state.N_e;

    const std::array<double, 5> s2 = {A * A, 0.0, B * B - 2.0 * A, 0.0, 1.0};
    const Polynomial c_num = {rates.gamma_perp * A, 0.0, 2.0 * rates.kappa};
    const auto s_roots = factor_quartic(s2);
    const auto simple = poles_of(s_roots, 1);

    const Polynomial zero_order_num = {0.5 * K * spont};
    double integral = 0.0;

    if (d == 0.0 || variant == SpectrumVariant::ZeroOrder) {
        integral = residue_integral(zero_order_num, simple, 1.0);
    } else if (variant == SpectrumVariant::NonPerturbative) {
        // With D = |s|^2 - K^2 d, 1/(|s|^2 D) = (1/D - 1/|s|^2) / (K^2 d), so
        // n(w) = [(K spont + c_num) / D - c_num / |s|^2] / 2
        // and each piece has well separated poles for any d.
        const std::array<double, 5> dq = {A * A - K * K * d, 0.0, B * B - 2.0 * A, 0.0, 1.0};
        const auto d_poles = poles_of(factor_quartic(dq), 1);
        Polynomial first = c_num;
        first[0] += K * spont;
        integral = 0.5 * (residue_integral(first, d_poles, 1.0) -
                          residue_integral(c_num, simple, 1.0));
    } else {
        const auto doubled = poles_of(s_roots, 2);
        Polynomial pf_num = c_num;
        for (auto& c : pf_num) c *= 0.5 * K * K * d;
        if (variant == SpectrumVariant::Perturbative) pf_num[0] += 0.5 * K * K * K * d * spont;
        integral = residue_integral(zero_order_num, simple, 1.0) +
                   residue_integral(pf_num, doubled, 1.0);
    }
    return integral / (2.0 * std::numbers::pi);
}

QuadratureResult integrate_spectrum_adaptive(const DerivedRates& rates, const MediumState& state,
                                             SpectrumVariant variant,
                                             const SolverConfig& config) {
    QuadratureOptions opts;
    opts.rel_tol = config.quad_rel_tol;
    opts.max_intervals = config.max_intervals;
    auto integrand = [&](double w) { return spectrum(w, rates, state, variant); };
    auto q = integrate_even_real_line(integrand, spectral_scale(rates), opts);
    q.value /= 2.0 * std::numbers::pi;
    q.error /= 2.0 * std::numbers::pi;
    return q;
}

IntegrationResult integrate_spectrum(const DerivedRates& rates, const MediumState& state,
                                     SpectrumVariant variant, const SolverConfig& config) {
    require_stable(rates, state, variant);
    IntegrationResult out;
    out.used = config.backend;

    auto adaptive = [&] {
        const auto q = integrate_spectrum_adaptive(rates, state, variant, config);
        out.error_estimate = q.error;
        return q.value;
    };

    if (config.backend == QuadBackend::Adaptive) {
        out.n = adaptive();
        return out;
    }

    double residue = 0.0;
    try {
        residue = integrate_spectrum_residue(rates, state, variant);
    } catch (const DegenerateRoots& e) {
        out.warning = std::string("residue backend fell back to adaptive quadrature: ") + e.what();
        out.used = QuadBackend::Adaptive;
        out.n = adaptive();
        return out;
    }
    out.n = residue;
    out.error_estimate = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(residue);
    if (config.backend == QuadBackend::Both) {
        const double a = adaptive();
        out.backend_deviation = residue != 0.0 ? std::abs(a - residue) / std::abs(residue)
                                               : std::abs(a);
    }
    return out;
}

namespace {

struct Evaluation {
    bool stable = false;
    double n = 0.0;
    double delta2 = 0.0;
    double F = 0.0;  // 2 kappa n - gamma_par (P N_g - N_e)
    int inner_iterations = 0;
    double backend_deviation = 0.0;
    std::string warning;
};

class EnergyBalance {
public:
    EnergyBalance(double P, const DerivedRates& rates, SpectrumVariant variant,
                  const PFModel& pf, const SolverConfig& config)
        : P_(P), rates_(rates), variant_(variant), pf_(pf), config_(config) {}

    double dispersion(double N_e, double n) const {
        if (!uses_dispersion(variant_)) return 0.0;
        return pf_dispersion(N_e, n, P_, rates_, pf_);
    }

    MediumState state(double N_e, double n) const {
        return MediumState::from_upper(N_e, rates_.N0, dispersion(N_e, n), P_);
    }

    /// Stability with the dispersion at n = 0, the smallest it gets.
    bool stable_at_zero_field(double N_e) const {
        return is_stable(rates_, state(N_e, 0.0), variant_);
    }

    double pump_balance(double N_e) const {
        return rates_.gamma_par * (P_ * (rates_.N0 - N_e) - N_e);
    }

    Evaluation evaluate(double N_e) const {
        Evaluation ev;
        const bool iterate = uses_dispersion(variant_) && pf_.depends_on_field();
        double n = 0.0;
        for (int k = 0; k < config_.max_outer_iters; ++k) {
            const MediumState s = state(N_e, n);
            if (!is_stable(rates_, s, variant_)) return ev;
            const auto integ = integrate_spectrum(rates_, s, variant_, config_);
            ev.inner_iterations = k + 1;
            const bool done =
                !iterate || std::abs(integ.n - n) <= 1e-13 * std::max(std::abs(integ.n), 1e-300);
            if (done) {
                ev.stable = true;
                ev.n = integ.n;
                ev.delta2 = s.delta2_Ne;
                ev.F = 2.0 * rates_.kappa * integ.n - pump_balance(N_e);
                ev.backend_deviation = integ.backend_deviation;
                ev.warning = integ.warning;
                return ev;
            }
            n += config_.damping * (integ.n - n);
        }
        std::ostringstream msg;
        msg << "photon-number / dispersion iteration did not converge in "
            << config_.max_outer_iters << " steps at N_e = " << N_e;
        throw FixedPointDivergence(msg.str());
    }

private:
    double P_;
    const DerivedRates& rates_;
    SpectrumVariant variant_;
    const PFModel& pf_;
    const SolverConfig& config_;
};

// Upper end of the physically admissible bracket: the first N_e at which the
// zero-field state reaches the (effective) threshold, or the no-field bound.
std::pair<double, bool> admissible_upper(const EnergyBalance& eb, double no_field) {
    constexpr int kScan = 64;
    double last_stable = 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double x = no_field * i / kScan;
        if (eb.stable_at_zero_field(x)) {
            last_stable = x;
            continue;
        }
        double lo = last_stable, hi = x;
        while (hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi) {
            const double mid = 0.5 * (lo + hi);
            (eb.stable_at_zero_field(mid) ? lo : hi) = mid;
        }
        return {hi, false};
    }
    return {no_field, true};
}

}  // namespace

OperatingPoint solve_operating_point(double P, const DeviceParams& params,
                                     SpectrumVariant variant, const PFModel& pf_model,
                                     const SolverConfig& config) {
    if (!(P >= 0.0) || !std::isfinite(P)) throw ValidationError("P", "pump must be >= 0");
    config.validate();
    const DerivedRates rates = derive_rates(params);
    const EnergyBalance eb(P, rates, variant, pf_model, config);
    const double N0 = rates.N0;
    const double energy_scale = rates.gamma_par * N0;

    OperatingPoint op;
    op.P = P;
    op.variant = variant;

    auto finish = [&](double N_e, const Evaluation& ev, int iterations) {
        op.N_e = N_e;
        op.N_g = N0 - N_e;
        op.N = op.N_e - op.N_g;
        op.delta2_Ne = ev.delta2;
        op.n = ev.n;
        op.p_out = 2.0 * rates.kappa * ev.n;
        auto& d = op.diagnostics;
        const MediumState s = op.state();
        const double min_s2 = response_coefficients(rates, s).min_abs2_s();
        d.stability_margin = relevant_margin(rates, s, variant) / min_s2;
        const auto narrow = narrowness_check(rates, pf_bandwidth(op.n, P, rates),
                                             config.narrowness_threshold);
        d.narrowness_ratio = narrow.ratio;
        d.narrow = narrow.pass;
        d.residual = std::abs(ev.F) / energy_scale;
        d.backend_deviation = ev.backend_deviation;
        d.inner_iterations = ev.inner_iterations;
        d.root_iterations = iterations;
        if (!narrow.pass) d.warnings.push_back("fluctuation bandwidth not narrow");
        if (!ev.warning.empty()) d.warnings.push_back(ev.warning);
        if (d.residual > config.ne_tol) d.warnings.push_back("energy residual above tolerance");
        if (pf_model.depends_on_field() && uses_dispersion(variant)) {
            const double field_part = ev.delta2 - eb.dispersion(N_e, 0.0);
            if (field_part > 0.0 && std::sqrt(field_part) > 0.1 * N_e) {
                d.warnings.push_back("field-driven dispersion not small against N_e");
            }
        }
        return op;
    };

    if (P == 0.0) {
        Evaluation ev = eb.evaluate(0.0);
        return finish(0.0, ev, 0);
    }

    const double no_field = P * N0 / (P + 1.0);
    auto [hi, hi_stable] = admissible_upper(eb, no_field);

    double lo = 0.0;
    Evaluation ev_lo = eb.evaluate(lo);
    if (!ev_lo.stable) throw StabilityViolation("state with no upper population is unstable", 0.0);
    if (ev_lo.F >= 0.0) {
        if (ev_lo.F == 0.0) return finish(lo, ev_lo, 0);
        throw NoRoot("energy balance positive at N_e = 0; internal inconsistency");
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    Evaluation ev_hi;
    double f_hi = kInf;
    if (hi_stable) {
        ev_hi = eb.evaluate(hi);
        if (ev_hi.stable) f_hi = ev_hi.F;
        if (f_hi < 0.0) throw NoRoot("energy balance negative at the no-field population");
    }
    double f_lo = ev_lo.F;

    // Monotonicity is checked up to the integration accuracy of the flux term.
    struct Sample {
        double x, F, slack;
        auto operator<=>(const Sample&) const = default;
    };
    const auto sample = [&](double x, const Evaluation& ev) {
        return Sample{x, ev.F, 1e-12 * energy_scale + 1e-8 * 2.0 * rates.kappa * ev.n};
    };
    std::vector<Sample> samples = {sample(lo, ev_lo)};
    if (std::isfinite(f_hi)) samples.push_back(sample(hi, ev_hi));

    // Illinois regula falsi with bisection safeguards; an unstable trial
    // point acts as F = +inf.
    const double f_target = 1e-2 * config.ne_tol * energy_scale;
    int side = 0;
    int iterations = 0;
    double width_before = hi - lo;
    Evaluation best = ev_lo;
    double best_x = lo;
    bool converged = false;

    for (; iterations < config.max_root_iters; ++iterations) {
        double x = 0.5 * (lo + hi);
        const bool bisect = !std::isfinite(f_hi) || (iterations % 4 == 3 && hi - lo > 0.5 * width_before);
        if (iterations % 4 == 3) width_before = hi - lo;
        if (!bisect) {
            const double secant = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
            if (secant > lo && secant < hi) x = secant;
        }
        if (!(x > lo && x < hi)) {
            converged = true;  // bracket collapsed to adjacent doubles
            break;
        }
        const Evaluation ev = eb.evaluate(x);
        if (!ev.stable) {
            hi = x;
            f_hi = kInf;
            side = 0;
            continue;
        }
        samples.push_back(sample(x, ev));
        if (std::abs(ev.F) < std::abs(best.F) || !best.stable) {
            best = ev;
            best_x = x;
        }
        if (ev.F < 0.0) {
            lo = x;
            f_lo = ev.F;
            if (side == -1) f_hi /= 2.0;
            side = -1;
        } else {
            hi = x;
            f_hi = ev.F;
            if (side == 1) f_lo /= 2.0;
            side = 1;
        }
        if (std::abs(ev.F) <= f_target) {
            converged = true;
            break;
        }
    }
    if (!converged && !(hi - lo <= config.ne_tol * std::max(best_x, 1e-300))) {
        std::ostringstream msg;
        msg << "root search did not converge in " << config.max_root_iters
            << " iterations; bracket [" << lo << ", " << hi << "]";
        throw NoRoot(msg.str());
    }
    if (hi_stable && ev_hi.stable && hi == no_field && std::abs(ev_hi.F) < std::abs(best.F)) {
        best = ev_hi;
        best_x = hi;
    }

    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].x > samples[i - 1].x &&
            samples[i].F < samples[i - 1].F - samples[i].slack - samples[i - 1].slack) {
            std::ostringstream msg;
            msg << "energy balance not increasing in N_e between " << samples[i - 1].x
                << " and " << samples[i].x;
            throw InternalError(msg.str());
        }
    }
    return finish(best_x, best, iterations);
}

double enhancement_factor(double P, const DeviceParams& params, const PFModel& pf_model,
                          const SolverConfig& config) {
    if (!(P > 0.0)) throw ValidationError("P", "enhancement factor needs a positive pump");
    const auto with_pf =
        solve_operating_point(P, params, SpectrumVariant::NonPerturbative, pf_model, config);
    const auto without =
        solve_operating_point(P, params, SpectrumVariant::ZeroOrder, pf_model, config);
    return with_pf.p_out / without.p_out;
}

SpectrumTable make_spectrum_table(const DerivedRates& rates, const MediumState& state,
                                  SpectrumVariant variant, std::span<const double> grid,
                                  const SolverConfig& config) {
    if (grid.size() < 2) throw ValidationError("grid", "needs at least two points");
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw ValidationError("grid", "must be ascending");
    }
    SpectrumTable t;
    t.variant = variant;
    t.omega.assign(grid.begin(), grid.end());
    t.n_of_omega.reserve(grid.size());
    t.p_out_of_omega.reserve(grid.size());
    for (double w : grid) {
        const double n = spectrum(w, rates, state, variant);
        t.n_of_omega.push_back(n);
        t.p_out_of_omega.push_back(2.0 * rates.kappa * n);
    }
    double sampled = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        sampled += 0.5 * (t.n_of_omega[i] + t.n_of_omega[i - 1]) * (grid[i] - grid[i - 1]);
    }
    t.meta.window = std::max(std::abs(grid.front()), std::abs(grid.back()));
    t.meta.n_sampled = sampled / (2.0 * std::numbers::pi);
    t.meta.n_exact = integrate_spectrum(rates, state, variant, config).n;
    t.meta.error_estimate =
        t.meta.n_exact != 0.0 ? std::abs(t.meta.n_sampled - t.meta.n_exact) / t.meta.n_exact : 0.0;
    return t;
}

PeakReport find_crs_peaks(const SpectrumTable& table) {
    const auto& w = table.omega;
    const auto& y = table.p_out_of_omega;
    if (w.size() != y.size() || w.size() < 3) {
        throw ValidationError("table", "needs at least three samples");
    }
    const auto start = static_cast<std::size_t>(
        std::lower_bound(w.begin(), w.end(), 0.0) - w.begin());
    if (w.size() - start < 3) throw WindowTooNarrow("table has fewer than three points at w >= 0");

    std::size_t best = start;
    for (std::size_t i = start + 1; i < w.size(); ++i) {
        if (y[i] > y[best]) best = i;
    }
    if (best == w.size() - 1) {
        throw WindowTooNarrow("largest spectral maximum lies on the grid edge");
    }

    PeakReport r;
    if (best == start) {
        r.peak_position = 0.0;
        r.peak_height = y[best];
        return r;
    }
    // Parabola through three neighbouring (possibly non-uniform) samples.
    const double x0 = w[best - 1], x1 = w[best], x2 = w[best + 1];
    const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curvature = (d12 - d01) / (x2 - x0);
    double xv = x1;
    double yv = y1;
    if (curvature < 0.0) {
        xv = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
        xv = std::clamp(xv, x0, x2);
        yv = y1 + (xv - x1) * (d01 + curvature * (xv - x0));
    }
    r.peak_position = xv;
    r.peak_height = std::max(yv, y1);
    r.splitting = 2.0 * xv;
    r.is_split = xv > 0.0;
    return r;
}

}  // namespace srled
