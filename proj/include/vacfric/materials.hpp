#pragma once

#include "vacfric/scenario.hpp"

#include <complex>
#include <functional>

namespace vacfric {

using cplx = std::complex<double>;

enum class Channel { magnetic, electric };

// Permeability of a medium magnetized along z, in H/m.
struct GyrotropicPermeability {
    cplx perp;
    cplx gyro;
    cplx par;
};

// Sphere polarizability in m^3; the tensor is [[perp, -gyro, 0], [gyro, perp, 0], [0, 0, par]].
struct PolarizabilityTensor {
    cplx perp;
    cplx gyro;
    cplx par;
    Channel channel = Channel::magnetic;
};

struct NonlocalDielectricPair {
    cplx longitudinal;
    cplx transverse;
};

struct MetalSpherePolarizability {
    PolarizabilityTensor electric;
    PolarizabilityTensor magnetic;
};

class BranchPointProximity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DipoleLimitExceeded : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Larmor frequency of a body spinning at rotation_rate in a field bias_field (A/m) along the spin axis.
double barnett_larmor(double rotation_rate, double bias_field, double gyromagnetic_ratio);

// Landau-Lifshitz-Gilbert permeability; larmor and magnetization_frequency are mu0 gamma H and mu0 gamma Ms.
GyrotropicPermeability yig_permeability(double omega, double larmor, double magnetization_frequency, double damping);

// Magnetostatic polarizability of a sphere with permeability tensor mu.
PolarizabilityTensor sphere_polarizability_gyromagnetic(double radius, const GyrotropicPermeability& mu);

// Isotropic quasistatic sphere with relative response eps: 4 pi a^3 (eps - 1) / (eps + 2).
PolarizabilityTensor clausius_mossotti(double radius, cplx relative_response, Channel channel);

// Lab-frame polarizability of a sphere spinning about z at rotation_rate, given its body-frame response.
PolarizabilityTensor effective_rotating_polarizability(const std::function<PolarizabilityTensor(double)>& body_frame,
                                                       double omega, double rotation_rate);

// Local Drude permittivity 1 - wp^2 / (w (w + i gamma)); relative.
cplx drude_permittivity(double omega, const MetalParams& metal);

// (eps - 1) omega^2, finite at omega = 0.
cplx drude_susceptibility_times_omega_squared(double omega, const MetalParams& metal);

// Longitudinal and transverse permittivities of the semi-classical free-electron gas at wavenumber k.
// k = 0 returns the local limit. Throws BranchPointProximity when u = (w + i gamma)/(k vF) is within 1e-12 of +-1.
NonlocalDielectricPair nonlocal_dielectrics(double k, double omega, const MetalParams& metal);

// Lindhard-type shape functions of u; exposed for tests.
cplx longitudinal_shape(cplx u);
cplx transverse_shape(cplx u);

// Quasistatic metal sphere: Clausius-Mossotti electric term and the leading eddy-current magnetic term.
// Throws DipoleLimitExceeded when k0 a >= 0.1.
MetalSpherePolarizability metal_sphere_polarizability(double omega, double radius, cplx permittivity);

// Polarizability of the scenario's sphere in its own (rotating) frame at signed omega.
class SphereResponse {
public:
    explicit SphereResponse(const Scenario& scenario);

    PolarizabilityTensor body_frame(double omega, Channel channel) const;

    // Im perp - Re gyro: the co-rotating circular component that couples to the lab field.
    double circular_loss(double omega, Channel channel) const;

    double larmor() const noexcept { return larmor_; }
    double magnetization_frequency() const noexcept { return magnetization_frequency_; }
    double damping() const noexcept { return damping_; }
    // Largest |omega| at which the dipole formulas still hold.
    double validity_limit() const noexcept { return validity_limit_; }

private:
    SphereMaterial material_;
    double radius_;
    MetalParams metal_;
    cplx yig_permittivity_{1.0, 0.0};
    double larmor_ = 0.0;
    double magnetization_frequency_ = 0.0;
    double damping_ = 0.0;
    double validity_limit_ = 0.0;
};

// Gilbert damping from a linewidth (A/m) referred to the Larmor frequency reference_larmor.
double gilbert_damping(double linewidth, double gyromagnetic_ratio, double reference_larmor);

}  // namespace vacfric
