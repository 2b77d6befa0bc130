#include "vacfric/quadrature.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cstdint>

namespace vacfric {

namespace {

using cplx = std::complex<double>;

double magnitude(const cplx& z) { return std::abs(z); }

IntegralResult to_result(const gk::AdaptiveResult<cplx>& r) {
    return {r.value, r.error, r.evaluations, r.converged};
}

gk::AdaptiveResult<cplx> integrate_mapped(const std::function<cplx(double)>& g, double lo, double hi,
                                          const QuadratureOptions& options) {
    const std::array<double, 2> breakpoints{lo, hi};
    auto batch = [&](std::span<const double> x, std::span<cplx> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = g(x[i]);
    };
    return gk::integrate_adaptive<cplx>(batch, breakpoints, magnitude, options);
}

}  // namespace

IntegralResult integrate_finite(const ComplexIntegrand& f, double a, double b, const QuadratureOptions& options) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate_finite: need finite a < b");
    const double width = b - a;
    // x = a + width t^2 (3 - 2t): dx = 6 width t (1 - t) dt vanishes at both ends.
    auto mapped = [&](double t) -> cplx {
        const double s = 1.0 - t;
        const double x = t < 0.5 ? a + width * t * t * (3.0 - 2.0 * t) : b - width * s * s * (3.0 - 2.0 * s);
        return f(x) * (6.0 * width * t * s);
    };
    return to_result(integrate_mapped(mapped, 0.0, 1.0, options));
}

IntegralResult integrate_evanescent(const ComplexIntegrand& f, double a, double decay_scale,
                                    const QuadratureOptions& options) {
    if (!(decay_scale > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("integrate_evanescent: need finite a and positive decay scale");
    auto segment = [&](double lo, double hi) {
        return integrate_mapped([&](double x) { return f(x); }, lo, hi, options);
    };

    double cut = a + 32.0 * decay_scale;
    auto head = segment(a, cut);
    IntegralResult total{head.value, head.error, head.evaluations, head.converged};
    double previous = -1.0;
    for (int round = 0; round < 60; ++round) {
        const double next = a + 2.0 * (cut - a);
        const auto tail = segment(cut, next);
        total.value += tail.value;
        total.error_estimate += tail.error;
        total.evaluations += tail.evaluations;
        total.converged = total.converged && tail.converged;
        const double size = std::abs(tail.value);
        if (size <= std::max(options.rel_tol * std::abs(total.value), options.abs_tol)) {
            total.error_estimate += size;
            return total;
        }
        if (previous >= 0.0 && size >= previous)
            throw NonDecayingIntegrand("integrate_evanescent: tail does not decay beyond x = " + std::to_string(cut));
        if (total.evaluations > options.max_evaluations) break;
        previous = size;
        cut = next;
    }
    total.converged = false;
    return total;
}

IntegralResult integrate_half_line(const ComplexIntegrand& f, double a, double scale,
                                   const QuadratureOptions& options) {
    if (!(scale > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("integrate_half_line: need finite a and positive scale");
    auto mapped = [&](double theta) -> cplx {
        const double c = std::cos(theta);
        return f(a + scale * std::tan(theta)) * (scale / (c * c));
    };
    return to_result(integrate_mapped(mapped, 0.0, 0.5 * std::numbers::pi, options));
}

double solve_root_bracketed(const std::function<double(double)>& g, double lo, double hi, double tol) {
    if (!(lo <= hi)) throw std::invalid_argument("solve_root_bracketed: need lo <= hi");
    const double g_lo = g(lo);
    if (g_lo == 0.0) return lo;
    const double g_hi = g(hi);
    if (g_hi == 0.0) return hi;
    if (std::signbit(g_lo) == std::signbit(g_hi))
        throw NoSignChange("solve_root_bracketed: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    auto narrow = [tol](double x0, double x1) {
        const double width = std::abs(x1 - x0);
        return width <= tol * std::max(std::abs(x0), std::abs(x1)) || width == 0.0;
    };
    std::uintmax_t iterations = 500;
    const auto [x0, x1] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, narrow, iterations);
    return 0.5 * (x0 + x1);
}

}  // namespace vacfric
