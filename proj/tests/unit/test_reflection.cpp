#include "oracles/oracles.hpp"
#include "vacfric/reflection.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>

using namespace vacfric;

namespace {

constexpr double gamma_e = 1.760859e11;
const double magnetization_frequency = oracle::mu0 * gamma_e * 1780.0 * 1000.0 / (4.0 * oracle::pi);

Eigen::Matrix2cd as_matrix(const ReflectionMatrix& r) {
    Eigen::Matrix2cd m;
    m << r.ss, r.sp, r.ps, r.pp;
    return m;
}

double largest_singular_value(const ReflectionMatrix& r) {
    return Eigen::JacobiSVD<Eigen::Matrix2cd>(as_matrix(r)).singularValues()(0);
}

double gap(const ReflectionMatrix& a, const ReflectionMatrix& b) { return (as_matrix(a) - as_matrix(b)).norm(); }

}  // namespace

TEST_SUITE("reflection") {
    TEST_CASE("vacuum normal wavenumber") {
        CHECK(vacuum_normal(0.6) == cplx{0.8, 0.0});
        const cplx evanescent = vacuum_normal(std::sqrt(3.0));
        CHECK(std::abs(evanescent.real()) <= 1e-15);
        CHECK(evanescent.imag() == doctest::Approx(1.4142135623730951).epsilon(1e-15));
    }

    TEST_CASE("isotropic reflection against the textbook formulas") {
        oracle::Uniform uniform(17);
        for (int i = 0; i < 500; ++i) {
            const double kappa = uniform.in(0.0, 5.0);
            const cplx eps{uniform.in(-50.0, 50.0), uniform.log_in(1e-4, 1e4)};
            const cplx mu{uniform.in(0.5, 3.0), uniform.in(0.0, 1.0)};
            const ReflectionMatrix r = fresnel_local(kappa, eps, mu);
            const oracle::Fresnel expected = oracle::textbook_fresnel(kappa, eps, mu);
            CHECK(std::abs(r.ss - expected.s) <= 1e-12 * (1.0 + std::abs(expected.s)));
            CHECK(std::abs(r.pp - expected.p) <= 1e-12 * (1.0 + std::abs(expected.p)));
            CHECK(r.sp == cplx{0.0, 0.0});
            CHECK(r.ps == cplx{0.0, 0.0});
            if (kappa < 1.0) CHECK(largest_singular_value(r) <= 1.0 + 1e-12);
        }
        CHECK_THROWS_AS(fresnel_local(-0.1, 2.0), std::invalid_argument);
    }

    TEST_CASE("anisotropic solver reduces to the isotropic formulas") {
        oracle::Uniform uniform(19);
        for (int i = 0; i < 100; ++i) {
            const double kappa = uniform.in(0.0, 4.0);
            const double phi = uniform.in(0.0, 2.0 * oracle::pi);
            const cplx eps{uniform.in(1.0, 20.0), uniform.in(0.01, 1.0)};
            const cplx mu{uniform.in(0.5, 3.0), uniform.in(0.01, 0.5)};
            const ReflectionMatrix gyro = fresnel_gyromagnetic(kappa, phi, eps, mu * Matrix3c::Identity());
            CHECK(gap(gyro, fresnel_local(kappa, eps, mu)) <= 1e-8);
        }
        // Unit permeability gives an exact double root that numerics split; sweep across the branch point.
        for (int i = 0; i <= 400; ++i) {
            const double kappa = 3.7 + 0.35 * i / 400.0;
            const ReflectionMatrix gyro = fresnel_gyromagnetic(kappa, 0.3, {15.0, 0.01}, Matrix3c::Identity());
            CHECK(gap(gyro, fresnel_local(kappa, {15.0, 0.01})) <= 1e-10);
        }
    }

    TEST_CASE("oriented permeability keeps the tensor handedness") {
        const GyrotropicPermeability mu{oracle::mu0 * cplx{2.0, 0.1}, oracle::mu0 * cplx{0.3, 0.05},
                                        oracle::mu0 * cplx{1.0, 0.0}};
        const Matrix3c z = oriented_permeability(mu, Axis::z);
        CHECK(std::abs(z(0, 1) + mu.gyro / oracle::mu0) <= 1e-15);
        CHECK(std::abs(z(1, 0) - mu.gyro / oracle::mu0) <= 1e-15);
        CHECK(z(2, 2) == cplx{1.0, 0.0});
        // A bias along x is the z-biased tensor under the cyclic relabelling (x, y, z) -> (y, z, x).
        const Matrix3c x = oriented_permeability(mu, Axis::x);
        Eigen::Matrix3d cyclic;
        cyclic << 0, 0, 1, 1, 0, 0, 0, 1, 0;
        CHECK((x - cyclic * z * cyclic.transpose()).norm() <= 1e-15);
        CHECK(slab_axis_of(Axis::x, Orientation::xz_plane) == Axis::y);
        CHECK(slab_axis_of(Axis::y, Orientation::xz_plane) == Axis::z);
        CHECK(slab_axis_of(Axis::z, Orientation::xz_plane) == Axis::x);
        CHECK(slab_axis_of(Axis::y, Orientation::xy_plane) == Axis::y);
    }

    TEST_CASE("magnetized ferrite never amplifies propagating waves") {
        oracle::Uniform uniform(23);
        for (int i = 0; i < 200; ++i) {
            const double larmor = uniform.log_in(1e9, 3e10);
            const double omega = uniform.log_in(1e8, 1e11);
            const double kappa = uniform.in(0.0, 0.999);
            const double phi = uniform.in(0.0, 2.0 * oracle::pi);
            const Axis axis = static_cast<Axis>(i % 3);
            const GyromagneticHalfSpace lossy({15.0, 0.01}, larmor, magnetization_frequency, 0.05, axis);
            CHECK(largest_singular_value(lossy.evaluate(omega, kappa, phi)) <= 1.0 + 1e-9);
            const GyromagneticHalfSpace lossless({15.0, 0.0}, larmor, magnetization_frequency, 0.0, axis);
            CHECK(largest_singular_value(lossless.evaluate(omega, kappa, phi)) <= 1.0 + 1e-9);
        }
    }

    TEST_CASE("slab modes solve the dispersion relation") {
        const GyrotropicPermeability mu = yig_permeability(8e9, 1.2e10, magnetization_frequency, 0.01);
        for (const Axis axis : {Axis::x, Axis::y, Axis::z}) {
            const SlabModeSet modes = slab_modes_gyromagnetic(1.7, 0.4, {15.0, 0.0}, oriented_permeability(mu, axis));
            CHECK(modes.max_residual <= 1e-9);
            CHECK_FALSE(modes.degenerate);
            // Fields vary as exp(i kz z), so decay towards z -> -inf needs Im kz < 0.
            for (const SlabMode& mode : modes.selected) CHECK(mode.normal.imag() < 0.0);
        }
    }

    TEST_CASE("negative frequencies conjugate and the empty interface vanishes") {
        const LocalMetal metal{MetalParams{}};
        const ReflectionMatrix plus = metal.evaluate(1e12, 0.7, 0.0);
        const ReflectionMatrix minus = metal.evaluate(-1e12, 0.7, 0.0);
        CHECK(gap(minus, plus.conj()) == 0.0);
        CHECK_THROWS_AS(metal.evaluate(0.0, 0.7, 0.0), std::domain_error);
        const NoInterface none;
        CHECK(none.vanishing());
        CHECK(gap(none.evaluate(1e12, 0.7, 0.0), {}) == 0.0);
    }

    TEST_CASE("infinite-barrier metal approaches Drude when the Fermi velocity vanishes") {
        MetalParams slow;
        slow.fermi_velocity *= 1e-3;
        for (const double omega : {1e10, 1e12, 1e14}) {
            for (const double kappa : {0.3, 3.0, 300.0}) {
                const ReflectionMatrix scib = fresnel_nonlocal_scib(omega, kappa, slow, {.rel_tol = 1e-10});
                const ReflectionMatrix drude = fresnel_local(kappa, drude_permittivity(omega, slow));
                CHECK(std::abs(scib.ss - drude.ss) <= 1e-2 * std::abs(drude.ss));
                CHECK(std::abs(scib.pp - drude.pp) <= 1e-2 * std::abs(drude.pp));
            }
        }
    }

    TEST_CASE("infinite-barrier metal is passive") {
        const MetalParams aluminium;
        oracle::Uniform uniform(29);
        for (int i = 0; i < 40; ++i) {
            const double omega = uniform.log_in(1e9, 1e15);
            const double kappa = uniform.in(0.0, 0.999);
            CHECK(largest_singular_value(fresnel_nonlocal_scib(omega, kappa, aluminium)) <= 1.0 + 1e-8);
        }
    }

    TEST_CASE("factory builds the configured interface") {
        Scenario s;
        s.interface_kind = InterfaceKind::none;
        CHECK(make_reflection_model(s)->vanishing());
        s.interface_kind = InterfaceKind::metal_local;
        CHECK(make_reflection_model(s)->phi_independent());
        s.interface_kind = InterfaceKind::gyromagnetic;
        CHECK_THROWS_AS(make_reflection_model(s), ScenarioError);
        s.yig.permittivity = cplx{15.0, 0.0};
        s.yig.damping = 0.01;
        s.yig.gyromagnetic_ratio = gamma_e;
        s.yig.saturation_magnetization = 1780.0 * 1000.0 / (4.0 * oracle::pi);
        s.slab_bias_axis = Axis::z;
        s.orientation = Orientation::xz_plane;
        CHECK_FALSE(make_reflection_model(s)->phi_independent());
        s.orientation = Orientation::xy_plane;
        CHECK(make_reflection_model(s)->phi_independent());
    }
}
