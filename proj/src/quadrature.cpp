#include "srled/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "srled/errors.hpp"

namespace srled {

namespace {

// Kronrod abscissae (descending, last is the center) and weights; Gauss
// weights belong to the odd-indexed Kronrod nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& fn, double a, double b, int& evals) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = fn(center);
    double kronrod = fc * kKronrod[7];
    double gauss = fc * kGauss[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kNodes[static_cast<std::size_t>(j)];
        const double sum = fn(center - dx) + fn(center + dx);
        kronrod += kKronrod[static_cast<std::size_t>(j)] * sum;
        if (j % 2 == 1) gauss += kGauss[static_cast<std::size_t>(j / 2)] * sum;
    }
    evals += 15;
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& fn, double a, double b,
                                    const QuadratureOptions& options) {
    QuadratureResult result;
    std::priority_queue<Segment> heap;
    heap.push(gauss_kronrod(fn, a, b, result.evaluations));
    double total = heap.top().value;
    double error = heap.top().error;

    while (true) {
        const double target = std::max(options.abs_tol, options.rel_tol * std::abs(total));
        if (error <= target) break;
        if (static_cast<int>(heap.size()) >= options.max_intervals) {
            throw QuadratureNoConvergence("adaptive quadrature exhausted " +
                                          std::to_string(options.max_intervals) +
                                          " intervals, error estimate " + std::to_string(error));
        }
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gauss_kronrod(fn, worst.a, mid, result.evaluations);
        const Segment right = gauss_kronrod(fn, mid, worst.b, result.evaluations);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the leaves so the running-update drift does not leak out.
    result.intervals = static_cast<int>(heap.size());
    total = 0.0;
    error = 0.0;
    std::vector<Segment> leaves;
    leaves.reserve(heap.size());
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    for (auto it = leaves.rbegin(); it != leaves.rend(); ++it) {
        total += it->value;
        error += it->error;
    }
    result.value = total;
    result.error = error;
    return result;
}

QuadratureResult integrate_even_real_line(const std::function<double(double)>& fn, double scale,
                                          const QuadratureOptions& options) {
    auto mapped = [&](double t) {
        const double c = std::cos(t);
        if (c <= 0.0) return 0.0;
        return fn(scale * std::tan(t)) * scale / (c * c);
    };
    QuadratureResult half = integrate_adaptive(mapped, 0.0, std::numbers::pi / 2.0, options);
    half.value *= 2.0;
    half.error *= 2.0;
    return half;
}

}  // namespace srled
