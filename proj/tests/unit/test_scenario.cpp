#include "oracles/oracles.hpp"
#include "vacfric/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace vacfric;

namespace {

const char* minimal_yig_al = R"(
# comment lines and blank lines are ignored
sphere.material = yig
sphere.radius_nm = 200
sphere.rotation_ghz = 1
interface.kind = metal_nonlocal
interface.distance_nm = 500
environment.t0_k = 300
numerics.frequency_tol = 1e-4
)";

std::string with(const std::string& base, const std::string& extra) { return base + extra + "\n"; }

std::string replaced(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

// Empty when the document parses.
std::string failing_key(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.key();
    }
    return "";
}

}  // namespace

TEST_SUITE("scenario") {
    TEST_CASE("unit conversions") {
        // 1e-4 Torr in Pa, frozen from an exact rational evaluation of 133.322 * 1e-4.
        CHECK(torr_to_pascal(1e-4) == doctest::Approx(0.0133322).epsilon(1e-15));
        CHECK(pascal_to_torr(torr_to_pascal(3.5)) == doctest::Approx(3.5).epsilon(1e-15));
        CHECK(oersted_to_amperes_per_meter(4.0 * oracle::pi) == doctest::Approx(1000.0).epsilon(1e-15));
        CHECK(amperes_per_meter_to_oersted(oersted_to_amperes_per_meter(812.0)) ==
              doctest::Approx(812.0).epsilon(1e-15));
    }

    TEST_CASE("thermal occupation") {
        const double t = 300.0;
        const double omega = oracle::k_boltzmann * t / oracle::hbar;
        // 1 / (e - 1), frozen from a 30-digit evaluation.
        CHECK(thermal_occupation(omega, t) == doctest::Approx(0.5819767068693265).epsilon(1e-14));
        CHECK(thermal_occupation(1e9, 0.0) == 0.0);
        CHECK(thermal_occupation(-1e9, 0.0) == -1.0);
        CHECK_THROWS_AS(thermal_occupation(0.0, t), std::domain_error);
        CHECK_THROWS_AS(thermal_occupation(1.0, -1.0), std::domain_error);
        CHECK(omega_times_occupation(0.0, t) == doctest::Approx(omega).epsilon(1e-15));

        // n(-w) = -1 - n(w) across decades of hbar w / k T.
        oracle::Uniform uniform(11);
        for (int i = 0; i < 200; ++i) {
            const double w = uniform.log_in(1e6, 1e15);
            const double temperature = uniform.in(1.0, 1000.0);
            CHECK(thermal_occupation(-w, temperature) + thermal_occupation(w, temperature) ==
                  doctest::Approx(-1.0).epsilon(1e-12));
            // w n(w) tends to k T / hbar continuously.
            const double tiny = 1e-9 * oracle::k_boltzmann * temperature / oracle::hbar;
            CHECK(omega_times_occupation(tiny, temperature) ==
                  doctest::Approx(omega_times_occupation(0.0, temperature)).epsilon(1e-8));
        }
    }

    TEST_CASE("parse applies defaults and unit conversions") {
        const Scenario s = parse_scenario(minimal_yig_al);
        CHECK(s.sphere_material == SphereMaterial::yig);
        CHECK(s.sphere_radius == doctest::Approx(200e-9).epsilon(1e-15));
        CHECK(s.rotation_rate == doctest::Approx(2.0 * oracle::pi * 1e9).epsilon(1e-15));
        CHECK(s.distance == doctest::Approx(500e-9).epsilon(1e-15));
        CHECK(s.sphere_temperature == 300.0);
        CHECK(s.orientation == Orientation::xz_plane);
        CHECK(s.yig.saturation_magnetization == doctest::Approx(oersted_to_amperes_per_meter(1780.0)));
        CHECK(s.yig.density == 5110.0);
        CHECK(s.observables.drag_constant == 1.497);
        CHECK(s.observables.laser_torque == 1.568e-21);
        CHECK_FALSE(s.yig.permittivity.has_value());
    }

    TEST_CASE("render and parse round trip bit for bit") {
        const std::string extra =
            "sphere.bias_oe = 12.5\nyig.eps_rel = 15\nyig.eps_imag = 0.003\nyig.alpha = 0.063\n"
            "environment.pressure_torr = 1e-4\nobservables.distances_nm = 300, 500, 5000\n"
            "numerics.band_limit_ratio = 100\n";
        const Scenario s = parse_scenario(with(minimal_yig_al, extra));
        const std::string canonical = render_scenario(s);
        const Scenario back = parse_scenario(canonical);
        CHECK(back == s);
        CHECK(render_scenario(back) == canonical);
    }

    TEST_CASE("errors name the offending key") {
        CHECK(failing_key(with(minimal_yig_al, "sphere.colour = red")) == "sphere.colour");
        CHECK(failing_key(with(minimal_yig_al, "sphere.radius_nm = 3")) == "sphere.radius_nm");  // duplicate
        CHECK(failing_key(with(minimal_yig_al, "environment.pressure_torr = abc")) == "environment.pressure_torr");
        CHECK(failing_key(with(minimal_yig_al, "interface.orientation = diagonal")) == "interface.orientation");
        CHECK(failing_key(with(minimal_yig_al, "sphere.electric_channel = maybe")) == "sphere.electric_channel");
        CHECK(failing_key(with(minimal_yig_al, "yig.eps_imag = 0.1")) == "yig.eps_imag");
        CHECK(failing_key("sphere.material = yig\n") == "interface");
        CHECK(failing_key(with(minimal_yig_al, "nonsense")) == "line 10");
        CHECK(failing_key(minimal_yig_al) == "");
    }

    TEST_CASE("validation of physical preconditions") {
        const std::string text = minimal_yig_al;
        CHECK(failing_key(replaced(text, "distance_nm = 500", "distance_nm = 150")) == "interface.distance_nm");
        CHECK(failing_key(replaced(text, "radius_nm = 200", "radius_nm = -1")) == "sphere.radius_nm");
        CHECK(failing_key(replaced(text, "frequency_tol = 1e-4", "frequency_tol = 2")) == "numerics.frequency_tol");
        CHECK(failing_key(with(text, "observables.distances_nm = 300, 100")) == "observables.distances_nm");

        const std::string gyro = replaced(text, "metal_nonlocal", "gyromagnetic");
        CHECK(failing_key(with(gyro, "interface.bias_oe = 812")) == "yig.eps_rel");
        CHECK(failing_key(with(gyro, "yig.eps_rel = 15")) == "yig.alpha");
        CHECK(failing_key(with(gyro, "yig.eps_rel = 15\ninterface.bias_oe = 812")) == "");
        CHECK(failing_key(with(text, "sphere.electric_channel = true")) == "yig.eps_rel");

        const std::string still = replaced(text, "rotation_ghz = 1", "rotation_ghz = 0");
        CHECK(failing_key(still) == "yig.alpha");
        CHECK(failing_key(with(still, "yig.alpha = 0.063")) == "");
        CHECK(failing_key(with(still, "yig.alpha = 0.063\nnumerics.band_limit_ratio = 10")) ==
              "numerics.band_limit_ratio");
        CHECK(failing_key(with(text, "numerics.band_limit_ratio = 10")) == "");
    }

    TEST_CASE("load_scenario reports missing files") {
        CHECK_THROWS_AS(load_scenario("/nonexistent/path/scenario.cfg"), std::ios_base::failure);
    }
}
