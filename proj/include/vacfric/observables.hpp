#pragma once

#include "vacfric/fluctuation.hpp"
#include "vacfric/scenario.hpp"

#include <memory>
#include <vector>

namespace vacfric {

// Linear gas drag 2 a^4 p sqrt(2 pi m / k_B T) Omega / constant, in N m.
double drag_torque(double rotation_rate, double pressure, double temperature, double molecular_mass, double radius,
                   double drag_constant);
// Drag of the scenario gas at `rotation_rate`.
double drag_torque(const Scenario& scenario, double rotation_rate);

double sphere_mass_density(const Scenario& scenario);
// Solid sphere, (2/5) m a^2.
double moment_of_inertia(const Scenario& scenario);

struct BalanceSpeed {
    double rotation_rate = 0.0;       // with vacuum friction, rad/s
    double free_rotation_rate = 0.0;  // gas drag only, rad/s
    double ratio = 1.0;
    bool converged = false;
};

// Root of M_opt - M_drag(W) - |M_z(W)| on [0, W0]. Requires a positive gas pressure.
BalanceSpeed balance_speed(const Scenario& scenario, double laser_torque,
                           std::shared_ptr<TensorCache> cache = nullptr);

struct StoppingTime {
    double seconds = 0.0;  // +inf when no torque acts
    double drag_torque = 0.0;
    double vacuum_torque = 0.0;
    bool infinite = false;
    bool converged = false;
};

// I Omega / (M_drag + |M_z|) at the scenario rotation rate.
StoppingTime stopping_time(const Scenario& scenario, std::shared_ptr<TensorCache> cache = nullptr);

struct BalanceTemperature {
    double temperature = 0.0;  // K; +inf on runaway
    bool runaway = false;
    bool below_ambient = false;  // the sphere radiates more than the rotational work at T0
    bool converged = false;
};

// Sphere temperature where radiated power equals the rotational work |M_z Omega|. Net heating at T0
// searches [T0, T0 + max_temperature_rise]; net cooling searches [max(T0 - max_temperature_rise, T0 / 1000), T0].
BalanceTemperature balance_temperature(const Scenario& scenario, std::shared_ptr<TensorCache> cache = nullptr);

struct ObservablePoint {
    double distance = 0.0;
    double balance_speed_ratio = 1.0;
    double stopping_time = 0.0;
    double balance_temperature = 0.0;
    bool runaway = false;
    bool below_ambient = false;
    bool converged = false;
};

ObservablePoint observable_point(const Scenario& scenario);

// One point per distance; the scenario distance is replaced at each point.
std::vector<ObservablePoint> observable_sweep(const Scenario& scenario, const std::vector<double>& distances);

}  // namespace vacfric
