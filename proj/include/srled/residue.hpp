#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace srled {

/// Real polynomial, coefficients in ascending powers.
using Polynomial = std::vector<double>;

std::complex<double> evaluate(std::span<const double> poly, std::complex<double> z);
Polynomial derivative(std::span<const double> poly);
Polynomial multiply(std::span<const double> a, std::span<const double> b);

/// All complex roots of a real polynomial: eigenvalues of the companion
/// matrix of the rescaled polynomial, then Newton-polished on the original.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> poly);

struct QuarticFactorization {
    std::array<std::complex<double>, 4> roots{};
    double leading = 1.0;
};

/// Factorizes a real quartic (5 ascending coefficients, nonzero leading).
QuarticFactorization factor_quartic(std::span<const double> poly);

/// A pole of a rational integrand; `order` is 1 or 2.
struct Pole {
    std::complex<double> z;
    int order = 1;
};

/// Integral over the real line of numerator / (leading * prod (w - z_k)^order_k)
/// by summing residues in the upper half plane. Requires no real poles and a
/// denominator degree at least two above the numerator degree. Throws
/// DegenerateRoots when two distinct poles are too close for the residue sum
/// to be accurate.
double residue_integral(std::span<const double> numerator, std::span<const Pole> poles,
                        double leading);

/// Poles for every root of the factorization with the given order.
std::vector<Pole> poles_of(const QuarticFactorization& q, int order = 1);

}  // namespace srled
