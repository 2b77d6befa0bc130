#include "oracles/oracles.hpp"
#include "vacfric/fluctuation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

using namespace vacfric;

namespace {

Scenario yig_scenario(const std::string& interface_lines, const std::string& extra = "") {
    return parse_scenario("sphere.material = yig\nsphere.radius_nm = 200\nsphere.rotation_ghz = 1\n"
                          "environment.t0_k = 0\nnumerics.frequency_tol = 1e-4\n" +
                          interface_lines + extra);
}

// Circular body-frame loss Im(alpha_perp - i alpha_gyro) of a YIG sphere, from the Polder oracle.
double oracle_circular_loss(double x, double larmor, double magnetization_frequency, double damping, double radius) {
    const oracle::Polder chi = oracle::polder(x, larmor, magnetization_frequency, damping);
    const cplx mu_circular = 1.0 + chi.perp - cplx{0.0, 1.0} * chi.gyro;
    return (4.0 * oracle::pi * std::pow(radius, 3) * (mu_circular - 1.0) / (mu_circular + 2.0)).imag();
}

}  // namespace

TEST_SUITE("fluctuation") {
    TEST_CASE("detailed balance is exact at rest and in equilibrium") {
        const Scenario s = parse_scenario(
            "sphere.material = yig\nsphere.radius_nm = 200\nsphere.rotation_ghz = 0\nyig.alpha = 0.01\n"
            "interface.kind = metal_local\ninterface.distance_nm = 500\nenvironment.t0_k = 300\n"
            "numerics.frequency_tol = 1e-4\n");
        const FluctuationModel model(s);
        for (const double omega : {1e8, 1e10, 1e12}) {
            CHECK(model.gamma_rad(omega) == 0.0);
            CHECK(model.gamma_rad(-omega) == 0.0);
            CHECK(model.gamma_torque(omega) == 0.0);
        }
        const FrequencyIntegral power = model.radiated_power();
        const FrequencyIntegral torque = model.torque_z();
        CHECK(power.value == 0.0);
        CHECK(torque.value == 0.0);
        CHECK(power.converged);
        CHECK(torque.converged);
    }

    TEST_CASE("zero-temperature vacuum friction against an independent assembly") {
        const Scenario s = yig_scenario("interface.kind = none\n");
        const FluctuationModel model(s);
        const double spin = s.rotation_rate;
        const double larmor = model.sphere().larmor();
        const double wm = model.sphere().magnetization_frequency();
        const double damping = model.sphere().damping();
        const double radius = s.sphere_radius;
        const double c3 = std::pow(oracle::speed_of_light, 3);

        // Only 0 < w < Omega contributes at T = 0; the vacuum in-plane weight is 8/3.
        auto spectral = [&](double w) {
            return w * w * w / (8.0 * oracle::pi * oracle::pi * c3) * (8.0 / 3.0) *
                   oracle_circular_loss(w - spin, larmor, wm, damping, radius);
        };
        const double torque = oracle::hbar * oracle::trapezoid(spectral, 0.0, spin, 200000);
        const double power =
            -oracle::hbar * oracle::trapezoid([&](double w) { return w * spectral(w); }, 0.0, spin, 200000);

        const FrequencyIntegral model_torque = model.torque_z();
        const FrequencyIntegral model_power = model.radiated_power();
        CHECK(model_torque.converged);
        CHECK(model_power.converged);
        CHECK(torque < 0.0);
        CHECK(model_torque.value == doctest::Approx(torque).epsilon(1e-3));
        CHECK(model_power.value == doctest::Approx(power).epsilon(1e-3));
        // Each emitted quantum carries energy below hbar Omega.
        CHECK(model_power.value < spin * std::abs(model_torque.value));
        CHECK(model_power.value > 0.0);
        // Free functions agree with the model.
        CHECK(torque_z(s) == model_torque.value);
        CHECK(radiated_power(s) == model_power.value);
        CHECK(torque_xy(s) == std::pair{0.0, 0.0});
    }

    TEST_CASE("rotation is damped near a metal at zero temperature") {
        const Scenario s = yig_scenario("interface.kind = metal_local\ninterface.distance_nm = 500\n",
                                        "numerics.band_limit_ratio = 100\n");
        const FluctuationModel model(s);
        const double torque = model.torque_z().value;
        const Scenario vacuum = yig_scenario("interface.kind = none\n");
        CHECK(torque < 0.0);
        CHECK(std::abs(torque) > std::abs(torque_z(vacuum)));
        CHECK(model.radiated_power().value > 0.0);
    }

    TEST_CASE("spectral samples are internally consistent") {
        const Scenario s = yig_scenario("interface.kind = metal_local\ninterface.distance_nm = 500\n",
                                        "sphere.temperature_k = 300\n");
        const FluctuationModel model(s);
        for (const double omega : {1e9, 5e9, 3e10, 2e11}) {
            const SpectralSample sample = model.sample(omega);
            CHECK(sample.omega == omega);
            CHECK(sample.gamma_rad == model.gamma_rad(omega));
            CHECK(sample.gamma_rad_negative == model.gamma_rad(-omega));
            CHECK(sample.photon_rate_density == sample.gamma_rad - sample.gamma_rad_negative);
            CHECK(sample.gamma_torque == model.gamma_torque(omega));
            CHECK(sample.converged);
        }
        // The lab tensor is memoized in the shared cache.
        const long before = model.tensor_evaluations();
        model.lab_tensor(1e9, Channel::magnetic);
        CHECK(model.tensor_evaluations() == before);
    }

    TEST_CASE("feature frequencies and the starting window") {
        const Scenario s = yig_scenario("interface.kind = metal_local\ninterface.distance_nm = 500\n");
        const FluctuationModel model(s);
        const std::vector<double> features = model.feature_frequencies();
        CHECK(std::is_sorted(features.begin(), features.end()));
        CHECK(features.front() > 0.0);
        const double kittel = model.sphere().larmor() + model.sphere().magnetization_frequency() / 3.0;
        auto has = [&](double f) {
            return std::any_of(features.begin(), features.end(),
                               [&](double g) { return std::abs(g - f) <= 1e-12 * f; });
        };
        CHECK(has(s.rotation_rate));
        CHECK(has(kittel + s.rotation_rate));
        CHECK(has(kittel - s.rotation_rate));
        CHECK(model.initial_window() >= 10.0 * s.rotation_rate);

        Scenario metal = s;
        metal.sphere_material = SphereMaterial::metal;
        const auto metal_features = FluctuationModel(metal).feature_frequencies();
        CHECK(std::count(metal_features.begin(), metal_features.end(), s.metal.collision_rate) == 1);
    }

    TEST_CASE("tensor cache is bound to one environment") {
        const Scenario near = yig_scenario("interface.kind = metal_local\ninterface.distance_nm = 500\n");
        auto cache = std::make_shared<TensorCache>();
        const FluctuationModel first(near, cache);
        first.lab_tensor(2e10, Channel::magnetic);
        CHECK(cache->find(2e10, Channel::magnetic).has_value());
        CHECK_FALSE(cache->find(2e10, Channel::electric).has_value());

        Scenario hotter = near;
        hotter.sphere_temperature = 400.0;
        hotter.rotation_rate *= 2.0;
        const FluctuationModel second(hotter, cache);
        CHECK(second.cache() == cache);
        const long before = cache->evaluations();
        CHECK(second.lab_tensor(2e10, Channel::magnetic) == first.lab_tensor(2e10, Channel::magnetic));
        CHECK(cache->evaluations() == before);

        Scenario farther = near;
        farther.distance = 1e-6;
        CHECK_THROWS_AS(FluctuationModel(farther, cache), std::invalid_argument);
    }

    TEST_CASE("log grid") {
        const std::vector<double> grid = log_grid(1e9, 1e-3, 1e2, 6);
        REQUIRE(grid.size() == 6);
        CHECK(grid.front() == doctest::Approx(1e6).epsilon(1e-14));
        CHECK(grid.back() == doctest::Approx(1e11).epsilon(1e-14));
        for (std::size_t i = 1; i < grid.size(); ++i)
            CHECK(grid[i] / grid[i - 1] == doctest::Approx(10.0).epsilon(1e-13));
    }
}
