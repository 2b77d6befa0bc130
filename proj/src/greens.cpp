#include "vacfric/greens.hpp"

#include "vacfric/constants.hpp"

#include <array>
#include <cmath>

namespace vacfric {

using namespace constants;

namespace {

constexpr int exact_phi_samples = 4;   // exact for trigonometric polynomials of degree <= 3
constexpr int initial_phi_samples = 8;
constexpr int max_phi_samples = 4096;

double max_abs(const Matrix3c& m) { return m.cwiseAbs().maxCoeff(); }

// Plane-wave dyad at one (kappa, phi): vacuum part (propagating only) plus reflected part times phase.
Matrix3c dyad(double kappa, cplx p, double phi, const ReflectionMatrix& r, Channel channel, bool propagating,
              cplx phase) {
    const double c = std::cos(phi), s = std::sin(phi);
    const Eigen::Vector3cd s_hat{s, -c, 0.0};
    const Eigen::Vector3cd p_in{p * c, p * s, kappa};
    const Eigen::Vector3cd p_out{-p * c, -p * s, kappa};
    Matrix3c reflected;
    if (channel == Channel::magnetic) {
        reflected = r.pp * s_hat * s_hat.transpose() + r.ss * p_out * p_in.transpose() -
                    r.ps * s_hat * p_in.transpose() - r.sp * p_out * s_hat.transpose();
    } else {
        reflected = r.ss * s_hat * s_hat.transpose() + r.sp * s_hat * p_in.transpose() +
                    r.pp * p_out * p_in.transpose() + r.ps * p_out * s_hat.transpose();
    }
    Matrix3c out = phase * reflected;
    if (propagating) out += s_hat * s_hat.transpose() + p_in * p_in.transpose();
    return out;
}

struct RadialSample {
    double kappa;
    cplx p;
    cplx weight;  // kappa dkappa / p per unit of the integration variable
    bool propagating;
};

// x in [0, pi/2): kappa = sin x. x in (pi/2, pi/2 + t_max]: kappa = cosh(x - pi/2).
RadialSample radial_sample(double x) {
    constexpr double half_pi = 0.5 * pi;
    if (x < half_pi) {
        const double kappa = std::sin(x);
        return {kappa, cplx{std::cos(x), 0.0}, cplx{kappa, 0.0}, true};
    }
    const double t = x - half_pi;
    const double kappa = std::cosh(t);
    return {kappa, cplx{0.0, std::sinh(t)}, cplx{0.0, -kappa}, false};
}

struct RadialIntegral {
    Matrix3c value = Matrix3c::Zero();
    bool converged = false;
    long evaluations = 0;
};

// (1/pi) times the kappa integral at fixed phi, or the full phi average when phis has the exact sample set.
RadialIntegral radial_integral(double omega, double distance, const ReflectionModel& reflection, Channel channel,
                               std::span<const double> phis, double phi_weight, const GreensOptions& options) {
    const double k0d = omega / speed_of_light * distance;
    const double decades = options.cutoff_decades * std::log(10.0);
    const double kappa_max = 1.0 + decades / k0d;
    const double t_max = std::acosh(kappa_max);
    const bool silent = reflection.vanishing();
    const bool shared = reflection.phi_independent();

    auto batch = [&](std::span<const double> xs, std::span<Matrix3c> out) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const RadialSample sample = radial_sample(xs[i]);
            const cplx phase = sample.propagating ? std::exp(cplx{0.0, 2.0 * k0d} * sample.p)
                                                  : cplx{std::exp(-2.0 * k0d * sample.p.imag()), 0.0};
            Matrix3c sum = Matrix3c::Zero();
            if (!sample.propagating && (silent || phase == 0.0)) {
                out[i] = sum;
                continue;
            }
            ReflectionMatrix r{};
            if (!silent && shared) r = reflection.evaluate(omega, sample.kappa, 0.0);
            for (const double phi : phis) {
                if (!silent && !shared) r = reflection.evaluate(omega, sample.kappa, phi);
                sum += dyad(sample.kappa, sample.p, phi, r, channel, sample.propagating, phase);
            }
            out[i] = sum * (sample.weight * phi_weight / pi);
        }
    };
    const std::array<double, 3> breakpoints{0.0, 0.5 * pi, 0.5 * pi + t_max};
    QuadratureOptions quadrature;
    quadrature.rel_tol = options.kappa_tol;
    quadrature.max_evaluations = options.max_evaluations;
    const auto result =
        gk::integrate_adaptive<Matrix3c>(batch, breakpoints, max_abs, quadrature, Matrix3c::Zero().eval());
    return {result.value, result.converged, result.evaluations};
}

}  // namespace

GreensOptions GreensOptions::from(const Numerics& numerics) {
    GreensOptions options;
    options.kappa_tol = numerics.kappa_tol;
    options.phi_tol = numerics.phi_tol;
    options.cutoff_decades = numerics.kappa_cutoff_decades;
    options.max_evaluations = numerics.evaluation_budget;
    return options;
}

double vacuum_dos(double omega) { return omega * omega / (pi * pi * std::pow(speed_of_light, 3)); }

NormalizedTensor normalized_tensor(double omega, double distance, const ReflectionModel& reflection, Channel channel,
                                   const GreensOptions& options) {
    if (!(omega > 0.0)) throw std::domain_error("normalized_tensor: omega must be positive");
    // Free space: the propagating-wave average is exactly 4/3 per axis and no distance is involved.
    if (reflection.vanishing()) return {Matrix3c::Identity() * cplx{4.0 / 3.0, 0.0}, true, 0};
    if (!(distance > 0.0)) throw std::domain_error("normalized_tensor: distance must be positive");

    if (reflection.phi_independent()) {
        std::array<double, exact_phi_samples> phis;
        for (int j = 0; j < exact_phi_samples; ++j) phis[j] = 2.0 * pi * j / exact_phi_samples;
        const auto radial = radial_integral(omega, distance, reflection, channel, phis,
                                            2.0 * pi / exact_phi_samples, options);
        return {radial.value, radial.converged, radial.evaluations};
    }

    // Periodic trapezoid in phi with doubling; every level reuses the previous nodes.
    NormalizedTensor out;
    Matrix3c node_sum = Matrix3c::Zero();
    bool nodes_converged = true;
    auto add_nodes = [&](int count, int stride_offset, int total) {
        for (int j = 0; j < count; ++j) {
            const double phi = 2.0 * pi * (2 * j + stride_offset) / total;
            const std::array<double, 1> single{phi};
            const auto radial = radial_integral(omega, distance, reflection, channel, single, 1.0, options);
            node_sum += radial.value;
            nodes_converged = nodes_converged && radial.converged;
            out.evaluations += radial.evaluations;
        }
    };
    int total = initial_phi_samples;
    for (int j = 0; j < total; ++j) {
        const std::array<double, 1> single{2.0 * pi * j / total};
        const auto radial = radial_integral(omega, distance, reflection, channel, single, 1.0, options);
        node_sum += radial.value;
        nodes_converged = nodes_converged && radial.converged;
        out.evaluations += radial.evaluations;
    }
    Matrix3c estimate = node_sum * (2.0 * pi / total);
    while (total < max_phi_samples) {
        add_nodes(total, 1, 2 * total);
        total *= 2;
        const Matrix3c refined = node_sum * (2.0 * pi / total);
        const double change = max_abs(refined - estimate);
        estimate = refined;
        if (change <= options.phi_tol * max_abs(refined)) {
            out.converged = nodes_converged;
            break;
        }
    }
    out.value = estimate;
    return out;
}

GreensWeights weights_from_tensor(const Matrix3c& n, Orientation orientation, Channel channel) {
    GreensWeights w;
    w.perp1 = n(0, 0).real();
    w.perp2 = n(1, 1).real();
    w.par = 0.5 * n(2, 2).real();
    w.gyro1 = -0.5 * (n(0, 1).imag() - n(1, 0).imag());
    w.gyro2 = -0.5 * (n(1, 2).imag() - n(2, 1).imag());
    w.orientation = orientation;
    w.channel = channel;
    return w;
}

GreensWeights greens_weights(double omega, double distance, Orientation orientation,
                             const ReflectionModel& reflection, Channel channel, const GreensOptions& options) {
    const NormalizedTensor n = normalized_tensor(omega, distance, reflection, channel, options);
    GreensWeights w = weights_from_tensor(n.value, orientation, channel);
    w.converged = n.converged;
    return w;
}

Matrix3c lab_from_slab(const Matrix3c& slab_tensor, Orientation orientation) {
    if (orientation == Orientation::xy_plane) return slab_tensor;
    // lab x = slab y, lab y = slab z, lab z = slab x.
    Eigen::Matrix3d rotation;
    rotation << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    return rotation.cast<cplx>() * slab_tensor * rotation.transpose().cast<cplx>();
}

Matrix3c green_tensor_from_normalized(double omega, const Matrix3c& slab_tensor, Orientation orientation) {
    const double k0 = std::abs(omega) / speed_of_light;
    const Matrix3c g = cplx{0.0, k0 * k0 * k0 / (8.0 * pi)} * lab_from_slab(slab_tensor, orientation);
    return omega < 0.0 ? Matrix3c(g.conjugate()) : g;
}

Ldos ldos(double omega, double distance, Orientation orientation, const ReflectionModel& reflection,
          const GreensOptions& options) {
    const double rho0 = vacuum_dos(omega);
    Ldos out;
    const Matrix3c magnetic = normalized_tensor(omega, distance, reflection, Channel::magnetic, options).value;
    const Matrix3c electric = normalized_tensor(omega, distance, reflection, Channel::electric, options).value;
    (void)orientation;  // the trace is frame independent
    out.magnetic = rho0 / 8.0 * magnetic.trace().real();
    out.electric = rho0 / 8.0 * electric.trace().real();
    out.total = out.magnetic + out.electric;
    return out;
}

}  // namespace vacfric
