#include "vacfric/reflection.hpp"

#include "vacfric/constants.hpp"

namespace vacfric {

using namespace constants;

cplx vacuum_normal(double kappa) { return std::sqrt(cplx{1.0 - kappa * kappa, 0.0}); }

ReflectionMatrix fresnel_local(double kappa, cplx eps, cplx mu) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("fresnel_local: kappa must be non-negative");
    const cplx p = vacuum_normal(kappa);
    cplx w = std::sqrt(eps * mu - kappa * kappa);
    if (w.imag() < 0.0 || (w.imag() == 0.0 && w.real() < 0.0)) w = -w;
    ReflectionMatrix r;
    r.ss = (mu * p - w) / (mu * p + w);
    r.pp = (eps * p - w) / (eps * p + w);
    return r;
}

ReflectionMatrix ReflectionModel::evaluate(double omega, double kappa, double phi) const {
    if (omega == 0.0) throw std::domain_error("reflection: omega must be non-zero");
    if (omega < 0.0) return at_positive(-omega, kappa, phi).conj();
    return at_positive(omega, kappa, phi);
}

ReflectionMatrix LocalMetal::at_positive(double omega, double kappa, double) const {
    return fresnel_local(kappa, drude_permittivity(omega, metal_), 1.0);
}

ReflectionMatrix GyromagneticHalfSpace::at_positive(double omega, double kappa, double phi) const {
    const GyrotropicPermeability mu = yig_permeability(omega, larmor_, magnetization_frequency_, damping_);
    return fresnel_gyromagnetic(kappa, phi, eps_, oriented_permeability(mu, bias_axis_));
}

Axis slab_axis_of(Axis lab_axis, Orientation orientation) {
    if (orientation == Orientation::xy_plane) return lab_axis;
    switch (lab_axis) {
        case Axis::x: return Axis::y;
        case Axis::y: return Axis::z;
        case Axis::z: return Axis::x;
    }
    return lab_axis;
}

std::unique_ptr<ReflectionModel> make_reflection_model(const Scenario& scenario) {
    QuadratureOptions options;
    options.rel_tol = scenario.numerics.reflection_tol;
    options.max_evaluations = scenario.numerics.evaluation_budget;
    switch (scenario.interface_kind) {
        case InterfaceKind::none: return std::make_unique<NoInterface>();
        case InterfaceKind::metal_local: return std::make_unique<LocalMetal>(scenario.metal);
        case InterfaceKind::metal_nonlocal: return std::make_unique<NonlocalMetal>(scenario.metal, options);
        case InterfaceKind::gyromagnetic: {
            const YigParams& yig = scenario.yig;
            if (!yig.permittivity) throw ScenarioError("yig.eps_rel", "required for a gyromagnetic interface");
            const double larmor = mu0 * yig.gyromagnetic_ratio * scenario.slab_bias_field;
            const double magnetization = mu0 * yig.gyromagnetic_ratio * yig.saturation_magnetization;
            const double damping =
                yig.damping ? *yig.damping : gilbert_damping(yig.linewidth, yig.gyromagnetic_ratio, larmor);
            return std::make_unique<GyromagneticHalfSpace>(*yig.permittivity, larmor, magnetization, damping,
                                                           slab_axis_of(scenario.slab_bias_axis,
                                                                        scenario.orientation));
        }
    }
    throw std::logic_error("make_reflection_model: unhandled interface kind");
}

}  // namespace vacfric
