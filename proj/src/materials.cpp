#include "vacfric/materials.hpp"

#include "vacfric/constants.hpp"

#include <cmath>

namespace vacfric {

using namespace constants;

namespace {

constexpr double dipole_size_limit = 0.1;

double sphere_volume_factor(double radius) { return 4.0 * pi * radius * radius * radius; }

// Series in 1/u^2, used where the closed forms lose digits to cancellation.
cplx transverse_series(cplx inv_u2) {
    cplx sum = 0.0;
    cplx power = 1.0;
    for (int m = 0; m < 60; ++m) {
        const cplx term = 3.0 * power / double((2 * m + 1) * (2 * m + 3));
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        power *= inv_u2;
    }
    return sum;
}

// -3 u^2 f_l(u) = 3 sum_{n>=1} u^{2-2n} / (2n + 1), which tends to 1.
cplx longitudinal_scaled_series(cplx inv_u2) {
    cplx sum = 0.0;
    cplx power = 1.0;
    for (int n = 1; n < 60; ++n) {
        const cplx term = 3.0 * power / double(2 * n + 1);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        power *= inv_u2;
    }
    return sum;
}

constexpr double series_threshold = 8.0;

}  // namespace

double barnett_larmor(double rotation_rate, double bias_field, double gyromagnetic_ratio) {
    return rotation_rate + mu0 * gyromagnetic_ratio * bias_field;
}

double gilbert_damping(double linewidth, double gyromagnetic_ratio, double reference_larmor) {
    if (!(reference_larmor != 0.0)) throw std::domain_error("gilbert_damping: zero reference Larmor frequency");
    return mu0 * gyromagnetic_ratio * linewidth / (2.0 * std::abs(reference_larmor));
}

GyrotropicPermeability yig_permeability(double omega, double larmor, double magnetization_frequency, double damping) {
    const double w = omega;
    const double w0 = larmor;
    const double wm = magnetization_frequency;
    const double a = damping;
    const double detuning = w0 * w0 - w * w * (1.0 + a * a);
    const double denominator = detuning * detuning + 4.0 * w0 * w0 * w * w * a * a;
    const cplx perp_numerator{w0 * wm * (w0 * w0 - w * w) + w0 * wm * w * w * a * a,
                              a * w * wm * (w0 * w0 + w * w * (1.0 + a * a))};
    const cplx gyro_numerator{-2.0 * w0 * wm * w * w * a, w * wm * detuning};
    return {mu0 * (1.0 + perp_numerator / denominator), mu0 * gyro_numerator / denominator, cplx{mu0, 0.0}};
}

PolarizabilityTensor sphere_polarizability_gyromagnetic(double radius, const GyrotropicPermeability& mu) {
    const double scale = sphere_volume_factor(radius);
    const cplx loaded = mu.perp + 2.0 * mu0;
    const cplx denominator = loaded * loaded + mu.gyro * mu.gyro;
    const cplx perp = ((mu.perp - mu0) * loaded + mu.gyro * mu.gyro) / denominator;
    const cplx gyro = 3.0 * mu0 * mu.gyro / denominator;
    const cplx par = (mu.par - mu0) / (mu.par + 2.0 * mu0);
    return {scale * perp, scale * gyro, scale * par, Channel::magnetic};
}

PolarizabilityTensor clausius_mossotti(double radius, cplx relative_response, Channel channel) {
    const cplx value = sphere_volume_factor(radius) * (relative_response - 1.0) / (relative_response + 2.0);
    return {value, 0.0, value, channel};
}

PolarizabilityTensor effective_rotating_polarizability(const std::function<PolarizabilityTensor(double)>& body_frame,
                                                       double omega, double rotation_rate) {
    const PolarizabilityTensor plus = body_frame(omega + rotation_rate);
    const PolarizabilityTensor minus = body_frame(omega - rotation_rate);
    const PolarizabilityTensor here = body_frame(omega);
    const cplx i{0.0, 1.0};
    PolarizabilityTensor out;
    out.perp = 0.5 * (plus.perp + minus.perp + i * plus.gyro - i * minus.gyro);
    out.gyro = -0.5 * i * (plus.perp - minus.perp + i * plus.gyro + i * minus.gyro);
    out.par = here.par;
    out.channel = here.channel;
    return out;
}

cplx drude_susceptibility_times_omega_squared(double omega, const MetalParams& metal) {
    const double wp2 = metal.plasma_frequency * metal.plasma_frequency;
    return -wp2 * omega / cplx{omega, metal.collision_rate};
}

cplx drude_permittivity(double omega, const MetalParams& metal) {
    if (omega == 0.0) throw std::domain_error("drude_permittivity: pole at omega = 0");
    const double wp2 = metal.plasma_frequency * metal.plasma_frequency;
    return 1.0 - wp2 / (omega * cplx{omega, metal.collision_rate});
}

cplx longitudinal_shape(cplx u) {
    if (std::abs(u) > series_threshold) return -longitudinal_scaled_series(1.0 / (u * u)) / (3.0 * u * u);
    return 1.0 - 0.5 * u * std::log((u + 1.0) / (u - 1.0));
}

cplx transverse_shape(cplx u) {
    if (std::abs(u) > series_threshold) return transverse_series(1.0 / (u * u));
    return 1.5 * u * u - 0.75 * u * (u * u - 1.0) * std::log((u + 1.0) / (u - 1.0));
}

NonlocalDielectricPair nonlocal_dielectrics(double k, double omega, const MetalParams& metal) {
    if (!(k >= 0.0)) throw std::invalid_argument("nonlocal_dielectrics: k must be non-negative");
    if (omega == 0.0) throw std::domain_error("nonlocal_dielectrics: pole at omega = 0");
    const cplx damped{omega, metal.collision_rate};
    const double wp2 = metal.plasma_frequency * metal.plasma_frequency;
    const double kv = k * metal.fermi_velocity;

    cplx transverse_factor = 1.0;
    cplx longitudinal_factor = 1.0;   // -3 u^2 f_l
    cplx longitudinal_shape_value = 0.0;
    if (kv > 0.0) {
        const cplx u = damped / kv;
        if (std::abs(u - 1.0) < 1e-12 || std::abs(u + 1.0) < 1e-12)
            throw BranchPointProximity("nonlocal_dielectrics: u is at the branch point +-1");
        if (std::abs(u) > series_threshold) {
            const cplx inv_u2 = 1.0 / (u * u);
            transverse_factor = transverse_series(inv_u2);
            longitudinal_factor = longitudinal_scaled_series(inv_u2);
            longitudinal_shape_value = -longitudinal_factor * inv_u2 / 3.0;
        } else {
            transverse_factor = transverse_shape(u);
            longitudinal_shape_value = longitudinal_shape(u);
            longitudinal_factor = -3.0 * u * u * longitudinal_shape_value;
        }
    }
    const cplx i{0.0, 1.0};
    const cplx eps_t = 1.0 - wp2 * transverse_factor / (omega * damped);
    const cplx eps_l =
        1.0 - wp2 * longitudinal_factor / (damped * (omega + i * metal.collision_rate * longitudinal_shape_value));
    return {eps_l, eps_t};
}

MetalSpherePolarizability metal_sphere_polarizability(double omega, double radius, cplx permittivity) {
    const double size = std::abs(omega) * radius / speed_of_light;
    if (size >= dipole_size_limit)
        throw DipoleLimitExceeded("metal_sphere_polarizability: k0 a = " + std::to_string(size) + " >= 0.1");
    MetalSpherePolarizability out;
    out.electric = clausius_mossotti(radius, permittivity, Channel::electric);
    const cplx magnetic = sphere_volume_factor(radius) * size * size * (permittivity - 1.0) / 30.0;
    out.magnetic = {magnetic, 0.0, magnetic, Channel::magnetic};
    return out;
}

SphereResponse::SphereResponse(const Scenario& scenario)
    : material_(scenario.sphere_material),
      radius_(scenario.sphere_radius),
      metal_(scenario.metal),
      validity_limit_(dipole_size_limit * speed_of_light / scenario.sphere_radius) {
    if (material_ == SphereMaterial::yig) {
        const YigParams& yig = scenario.yig;
        larmor_ = barnett_larmor(scenario.rotation_rate, scenario.sphere_bias_field, yig.gyromagnetic_ratio);
        magnetization_frequency_ = mu0 * yig.gyromagnetic_ratio * yig.saturation_magnetization;
        damping_ = yig.damping ? *yig.damping : gilbert_damping(yig.linewidth, yig.gyromagnetic_ratio, larmor_);
        if (yig.permittivity) yig_permittivity_ = *yig.permittivity;
    }
}

PolarizabilityTensor SphereResponse::body_frame(double omega, Channel channel) const {
    if (material_ == SphereMaterial::yig) {
        if (channel == Channel::electric) {
            // Lossless: a frequency-independent loss would make the rotating term diverge at omega = Omega.
            return clausius_mossotti(radius_, cplx{yig_permittivity_.real(), 0.0}, Channel::electric);
        }
        return sphere_polarizability_gyromagnetic(
            radius_, yig_permeability(omega, larmor_, magnetization_frequency_, damping_));
    }
    const double size = std::abs(omega) * radius_ / speed_of_light;
    if (size >= dipole_size_limit)
        throw DipoleLimitExceeded("sphere polarizability: k0 a = " + std::to_string(size) + " >= 0.1");
    const double scale = sphere_volume_factor(radius_);
    if (channel == Channel::magnetic) {
        const cplx value =
            scale * drude_susceptibility_times_omega_squared(omega, metal_) * (radius_ * radius_) /
            (30.0 * speed_of_light * speed_of_light);
        return {value, 0.0, value, Channel::magnetic};
    }
    // (eps - 1)/(eps + 2) rewritten so that omega = 0 is regular.
    const double wp2 = metal_.plasma_frequency * metal_.plasma_frequency;
    const cplx value = scale * wp2 / (wp2 - 3.0 * omega * cplx{omega, metal_.collision_rate});
    return {value, 0.0, value, Channel::electric};
}

double SphereResponse::circular_loss(double omega, Channel channel) const {
    const PolarizabilityTensor alpha = body_frame(omega, channel);
    return alpha.perp.imag() - alpha.gyro.real();
}

}  // namespace vacfric
