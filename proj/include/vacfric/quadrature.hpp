#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace vacfric {

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    long max_evaluations = 1000000;
    // Panels bisected per refinement sweep; all their nodes go to the integrand in one batch.
    int panels_per_sweep = 1;
};

struct IntegralResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

class NonDecayingIntegrand : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoSignChange : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

// Adaptive G7K15 on [a, b]. Integrable endpoint singularities are smoothed by a
// polynomial substitution that clusters nodes at both ends.
IntegralResult integrate_finite(const ComplexIntegrand& f, double a, double b, const QuadratureOptions& options = {});

// Integral over [a, inf) of an integrand decaying at least like exp(-(x - a) / decay_scale).
// Throws NonDecayingIntegrand when successive tail segments stop shrinking.
IntegralResult integrate_evanescent(const ComplexIntegrand& f, double a, double decay_scale,
                                    const QuadratureOptions& options = {});

// Integral over [a, inf) of an integrand decaying algebraically (at least like 1/x^2),
// through x = a + scale tan(theta).
IntegralResult integrate_half_line(const ComplexIntegrand& f, double a, double scale,
                                   const QuadratureOptions& options = {});

// Root of g in [lo, hi]; requires g(lo) g(hi) <= 0.
double solve_root_bracketed(const std::function<double(double)>& g, double lo, double hi, double tol);

namespace gk {

// Kronrod abscissae on [-1, 1] (non-negative half) with the matching weights.
inline constexpr std::array<double, 8> nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
inline constexpr int points = 15;

inline std::array<double, points> panel_nodes(double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, points> x{};
    for (int j = 0; j < 7; ++j) {
        x[2 * j] = centre - half * nodes[j];
        x[2 * j + 1] = centre + half * nodes[j];
    }
    x[14] = centre;
    return x;
}

template <typename Value>
struct Panel {
    double a = 0.0;
    double b = 0.0;
    Value value{};
    double error = 0.0;
};

// Combine fifteen samples ordered as panel_nodes() into the K15 value and |K15 - G7|.
template <typename Value, typename Norm>
Panel<Value> reduce(double a, double b, std::span<const Value> samples, Norm norm) {
    const double half = 0.5 * (b - a);
    Value kronrod = samples[14] * kronrod_weights[7];
    Value gauss = samples[14] * gauss_weights[3];
    for (int j = 0; j < 7; ++j) {
        const Value pair = samples[2 * j] + samples[2 * j + 1];
        kronrod = kronrod + pair * kronrod_weights[j];
        if (j % 2 == 1) gauss = gauss + pair * gauss_weights[j / 2];
    }
    Panel<Value> panel{a, b, kronrod * half, 0.0};
    panel.error = norm((kronrod - gauss) * half);
    return panel;
}

template <typename Value>
struct AdaptiveResult {
    Value value{};
    double error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod over consecutive breakpoints.
// batch(nodes, out) fills out[i] = f(nodes[i]); Value needs +, - and scalar *.
template <typename Value, typename Batch, typename Norm>
AdaptiveResult<Value> integrate_adaptive(Batch&& batch, std::span<const double> breakpoints, Norm norm,
                                         const QuadratureOptions& options, Value zero = Value{}) {
    if (breakpoints.size() < 2) throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("integrate_adaptive: breakpoints must increase strictly");

    AdaptiveResult<Value> result;
    std::vector<double> xs;
    std::vector<Value> ys;

    auto evaluate = [&](std::span<const std::pair<double, double>> intervals) {
        xs.clear();
        for (const auto& [lo, hi] : intervals) {
            const auto x = panel_nodes(lo, hi);
            xs.insert(xs.end(), x.begin(), x.end());
        }
        ys.assign(xs.size(), zero);
        batch(std::span<const double>(xs), std::span<Value>(ys));
        result.evaluations += static_cast<long>(xs.size());
        std::vector<Panel<Value>> panels;
        panels.reserve(intervals.size());
        for (std::size_t i = 0; i < intervals.size(); ++i)
            panels.push_back(reduce<Value>(intervals[i].first, intervals[i].second,
                                           std::span<const Value>(ys).subspan(i * points, points), norm));
        return panels;
    };

    auto by_error = [](const Panel<Value>& lhs, const Panel<Value>& rhs) {
        if (lhs.error != rhs.error) return lhs.error < rhs.error;
        return lhs.a > rhs.a;
    };
    std::priority_queue<Panel<Value>, std::vector<Panel<Value>>, decltype(by_error)> queue(by_error);
    std::vector<Panel<Value>> frozen;

    std::vector<std::pair<double, double>> initial;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) initial.emplace_back(breakpoints[i - 1], breakpoints[i]);
    for (auto& panel : evaluate(initial)) queue.push(std::move(panel));

    const int sweep = std::max(1, options.panels_per_sweep);
    auto totals = [&]() {
        Value value = zero;
        double error = 0.0;
        auto copy = queue;
        while (!copy.empty()) {
            value = value + copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        for (const auto& panel : frozen) {
            value = value + panel.value;
            error += panel.error;
        }
        return std::pair{value, error};
    };

    // Running sums drift slightly; they only steer the loop, the final totals are exact.
    auto [value, error] = totals();
    while (true) {
        const double target = std::max(options.rel_tol * norm(value), options.abs_tol);
        if (error <= target) {
            std::tie(value, error) = totals();
            if (error <= std::max(options.rel_tol * norm(value), options.abs_tol)) {
                result.converged = true;
                break;
            }
        }
        if (queue.empty()) break;
        if (result.evaluations + 2L * points * sweep > options.max_evaluations) break;

        std::vector<std::pair<double, double>> children;
        for (int k = 0; k < sweep && !queue.empty(); ++k) {
            Panel<Value> worst = queue.top();
            queue.pop();
            const double mid = 0.5 * (worst.a + worst.b);
            const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
            if (!(mid > worst.a && mid < worst.b) ||
                worst.b - worst.a <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
                frozen.push_back(worst);
                --k;
                continue;
            }
            value = value - worst.value;
            error -= worst.error;
            children.emplace_back(worst.a, mid);
            children.emplace_back(mid, worst.b);
        }
        if (children.empty()) break;
        for (auto& panel : evaluate(children)) {
            value = value + panel.value;
            error += panel.error;
            queue.push(std::move(panel));
        }
    }
    std::tie(result.value, result.error) = totals();
    return result;
}

}  // namespace gk

}  // namespace vacfric
