#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vacfric {

enum class SphereMaterial { yig, metal };
enum class InterfaceKind { none, metal_local, metal_nonlocal, gyromagnetic };
enum class Orientation { xy_plane, xz_plane };
enum class Axis { x, y, z };

// Raised for malformed or physically invalid scenario documents.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct YigParams {
    double saturation_magnetization = 0.0;  // A/m
    double linewidth = 0.0;                 // A/m (full resonance linewidth)
    double gyromagnetic_ratio = 0.0;        // rad/(s T)
    double density = 5110.0;                // kg/m^3
    std::optional<std::complex<double>> permittivity;  // relative
    std::optional<double> damping;          // overrides the linewidth-derived value

    bool operator==(const YigParams&) const = default;
};

struct MetalParams {
    double plasma_frequency = 2.24e16;  // rad/s
    double collision_rate = 1.22e14;    // rad/s
    double fermi_velocity = 2.03e6;     // m/s
    double density = 2700.0;            // kg/m^3

    bool operator==(const MetalParams&) const = default;
};

struct Numerics {
    double frequency_tol = 1e-4;
    double window_tol = 1e-3;
    double kappa_tol = 1e-7;
    double phi_tol = 1e-6;
    double reflection_tol = 1e-8;
    double kappa_cutoff_decades = 20.0;
    long evaluation_budget = 1000000;
    int grid_points = 200;
    double grid_min_ratio = 1e-3;
    double grid_max_ratio = 1e2;
    int workers = 0;  // 0 selects hardware concurrency
    double band_limit_ratio = 0.0;  // frequency integrals stop at this multiple of the rotation rate; 0 disables

    bool operator==(const Numerics&) const = default;
};

struct ObservableParams {
    double laser_torque = 1.568e-21;      // N m
    double drag_constant = 1.497;
    double max_temperature_rise = 1000.0;  // K
    std::vector<double> sweep_distances;   // m; empty means the scenario distance

    bool operator==(const ObservableParams&) const = default;
};

struct Scenario {
    SphereMaterial sphere_material = SphereMaterial::yig;
    double sphere_radius = 0.0;          // m
    double rotation_rate = 0.0;          // rad/s
    double sphere_temperature = 0.0;     // K
    double sphere_bias_field = 0.0;      // A/m along z
    bool electric_channel = false;

    InterfaceKind interface_kind = InterfaceKind::none;
    Orientation orientation = Orientation::xz_plane;
    double distance = 0.0;               // m, sphere centre to interface
    double slab_bias_field = 0.0;        // A/m
    Axis slab_bias_axis = Axis::y;       // lab frame

    double environment_temperature = 0.0;  // K
    double gas_pressure = 0.0;             // Pa
    double gas_molecular_mass = 0.0;       // kg

    YigParams yig;
    MetalParams metal;
    Numerics numerics;
    ObservableParams observables;

    bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
std::string render_scenario(const Scenario& scenario);
void validate_scenario(const Scenario& scenario);

double oersted_to_amperes_per_meter(double oersted);
double amperes_per_meter_to_oersted(double amperes_per_meter);
double torr_to_pascal(double torr);
double pascal_to_torr(double pascal);

// Bose-Einstein occupation with n(-w) = -1 - n(w). Throws std::domain_error at w = 0.
double thermal_occupation(double omega, double temperature);

// w n(w, T), finite at w = 0 where it equals k_B T / hbar.
double omega_times_occupation(double omega, double temperature);

std::string_view to_string(SphereMaterial value);
std::string_view to_string(InterfaceKind value);
std::string_view to_string(Orientation value);
std::string_view to_string(Axis value);

}  // namespace vacfric
