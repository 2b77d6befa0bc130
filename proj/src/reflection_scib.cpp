#include "vacfric/reflection.hpp"

#include "vacfric/constants.hpp"

namespace vacfric {

using namespace constants;

std::array<cplx, 2> scib_impedances(double omega, double kappa, const MetalParams& metal,
                                    const QuadratureOptions& options) {
    if (!(omega > 0.0)) throw std::domain_error("scib_impedances: omega must be positive");
    if (!(kappa >= 0.0)) throw std::invalid_argument("scib_impedances: kappa must be non-negative");
    const double k0 = omega / speed_of_light;
    const double kappa2 = kappa * kappa;
    const double scale = std::max(std::abs(std::sqrt(drude_permittivity(omega, metal) - kappa2)), 1.0);

    // q = scale tan(theta); both impedance integrands share the nodes.
    auto batch = [&](std::span<const double> theta, std::span<Eigen::Vector2cd> out) {
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double c = std::cos(theta[i]);
            const double q = scale * std::tan(theta[i]);
            const double jacobian = scale / (c * c);
            const double q2 = q * q;
            const NonlocalDielectricPair eps = nonlocal_dielectrics(k0 * std::sqrt(q2 + kappa2), omega, metal);
            const cplx transverse = 1.0 / (eps.transverse - q2 - kappa2);
            out[i][0] = transverse * jacobian;
            out[i][1] = (q2 * transverse + kappa2 / eps.longitudinal) / (q2 + kappa2) * jacobian;
        }
    };
    const std::array<double, 2> range{0.0, 0.5 * pi};
    auto norm = [](const Eigen::Vector2cd& v) { return std::max(std::abs(v[0]), std::abs(v[1])); };
    const auto result = gk::integrate_adaptive<Eigen::Vector2cd>(batch, range, norm, options,
                                                                 Eigen::Vector2cd::Zero().eval());
    const cplx prefactor{0.0, 2.0 / pi};
    return {prefactor * result.value[0], prefactor * result.value[1]};
}

ReflectionMatrix fresnel_nonlocal_scib(double omega, double kappa, const MetalParams& metal,
                                       const QuadratureOptions& options) {
    const auto [zs, zp] = scib_impedances(omega, kappa, metal, options);
    const cplx p = vacuum_normal(kappa);
    ReflectionMatrix r;
    r.ss = (zs * p - 1.0) / (zs * p + 1.0);
    r.pp = (p - zp) / (p + zp);
    return r;
}

}  // namespace vacfric
