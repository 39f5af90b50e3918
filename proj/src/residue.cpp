#include "srled/residue.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "srled/errors.hpp"

namespace srled {

namespace {

std::size_t degree(std::span<const double> poly) {
    std::size_t n = poly.size();
    while (n > 0 && poly[n - 1] == 0.0) --n;
    if (n == 0) return 0;
    return n - 1;
}

// Largest acceptable eps / rel_sep^(m1 + m2 - 1) for a pair of poles.
constexpr double kResidueConditionLimit = 1e-11;

}  // namespace

std::complex<double> evaluate(std::span<const double> poly, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Polynomial derivative(std::span<const double> poly) {
    if (poly.size() <= 1) return {0.0};
    Polynomial d(poly.size() - 1);
    for (std::size_t k = 1; k < poly.size(); ++k) d[k - 1] = static_cast<double>(k) * poly[k];
    return d;
}

Polynomial multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    Polynomial out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> poly) {
    const std::size_t n = degree(poly);
    if (n == 0) return {};
    const double lead = poly[n];

    // Rescale w = scale * y so the monic coefficients are of order one.
    double scale = 1.0;
    if (poly[0] != 0.0) scale = std::pow(std::abs(poly[0] / lead), 1.0 / static_cast<double>(n));

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                      static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i < n; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double monic = poly[k] / lead * std::pow(scale, static_cast<double>(k) - static_cast<double>(n));
        companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n - 1)) = -monic;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw InternalError("companion eigenvalue solve failed");

    const Polynomial trimmed(poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(n + 1));
    const Polynomial dpoly = derivative(trimmed);
    std::vector<std::complex<double>> roots;
    roots.reserve(n);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        std::complex<double> z = solver.eigenvalues()[i] * scale;
        std::complex<double> pz = evaluate(trimmed, z);
        for (int iter = 0; iter < 8; ++iter) {
            const std::complex<double> dz = evaluate(dpoly, z);
            if (dz == 0.0) break;
            const std::complex<double> candidate = z - pz / dz;
            const std::complex<double> pc = evaluate(trimmed, candidate);
            if (!(std::abs(pc) < std::abs(pz))) break;
            z = candidate;
            pz = pc;
        }
        roots.push_back(z);
    }
    // Deterministic order: by real part, then imaginary part.
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    return roots;
}

QuarticFactorization factor_quartic(std::span<const double> poly) {
    if (poly.size() != 5 || poly[4] == 0.0) {
        throw ValidationError("poly", "quartic needs five coefficients with nonzero leading term");
    }
    const auto roots = polynomial_roots(poly);
    QuarticFactorization q;
    q.leading = poly[4];
    std::copy(roots.begin(), roots.end(), q.roots.begin());
    return q;
}

std::vector<Pole> poles_of(const QuarticFactorization& q, int order) {
    std::vector<Pole> poles;
    for (const auto& z : q.roots) poles.push_back({z, order});
    return poles;
}

double residue_integral(std::span<const double> numerator, std::span<const Pole> poles,
                        double leading) {
    int total_order = 0;
    for (const auto& p : poles) {
        if (p.order < 1 || p.order > 2) throw ValidationError("order", "pole order must be 1 or 2");
        total_order += p.order;
    }
    if (static_cast<int>(degree(numerator)) > total_order - 2) {
        throw ValidationError("numerator", "integrand does not decay fast enough to converge");
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (poles[i].z.imag() <= 0.0) continue;
        for (std::size_t j = i + 1; j < poles.size(); ++j) {
            if (poles[j].z.imag() <= 0.0) continue;
            const double size = std::max(std::abs(poles[i].z), std::abs(poles[j].z));
            const double rel = std::abs(poles[i].z - poles[j].z) / size;
            const double amplification = std::pow(rel, poles[i].order + poles[j].order - 1);
            if (eps > kResidueConditionLimit * amplification) {
                throw DegenerateRoots("upper half-plane poles separated by " + std::to_string(rel) +
                                      " (relative); residue sum ill-conditioned");
            }
        }
    }

    const Polynomial dnum = derivative(numerator);
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const auto z0 = poles[i].z;
        if (z0.imag() == 0.0) throw ValidationError("poles", "pole on the real axis");
        if (z0.imag() < 0.0) continue;
        std::complex<double> rest = leading;
        std::complex<double> log_derivative = 0.0;
        for (std::size_t k = 0; k < poles.size(); ++k) {
            if (k == i) continue;
            const auto diff = z0 - poles[k].z;
            rest *= poles[k].order == 1 ? diff : diff * diff;
            log_derivative += static_cast<double>(poles[k].order) / diff;
        }
        if (poles[i].order == 1) {
            sum += evaluate(numerator, z0) / rest;
        } else {
            sum += (evaluate(dnum, z0) - evaluate(numerator, z0) * log_derivative) / rest;
        }
    }
    // 2 pi i times the residue sum; the imaginary part is round-off.
    return (2.0 * std::numbers::pi * std::complex<double>(0.0, 1.0) * sum).real();
}

}  // namespace srled
