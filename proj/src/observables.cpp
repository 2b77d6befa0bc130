#include "vacfric/observables.hpp"

#include "vacfric/constants.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vacfric {

using namespace constants;

namespace {

constexpr double speed_rel_tol = 1e-10;        // bracket width relative to the free speed
constexpr double temperature_abs_tol = 1e-6;   // K
constexpr std::uintmax_t max_root_iterations = 60;
constexpr double coldest_fraction = 1e-3;       // lowest temperature searched, relative to T0

std::shared_ptr<TensorCache> ensure(std::shared_ptr<TensorCache> cache) {
    return cache ? std::move(cache) : std::make_shared<TensorCache>();
}

struct TorqueAt {
    double value = 0.0;
    bool converged = false;
};

TorqueAt vacuum_torque(const Scenario& scenario, const std::shared_ptr<TensorCache>& cache) {
    const FrequencyIntegral m = FluctuationModel(scenario, cache).torque_z();
    return {m.value, m.converged};
}

}  // namespace

double drag_torque(double rotation_rate, double pressure, double temperature, double molecular_mass, double radius,
                   double drag_constant) {
    if (!(rotation_rate >= 0.0) || !(pressure >= 0.0) || !(temperature >= 0.0) || !(molecular_mass >= 0.0) ||
        !(radius >= 0.0))
        throw std::invalid_argument("drag_torque: inputs must be non-negative");
    if (!(drag_constant > 0.0)) throw std::invalid_argument("drag_torque: drag constant must be positive");
    if (pressure == 0.0 || rotation_rate == 0.0) return 0.0;
    if (temperature == 0.0) throw std::domain_error("drag_torque: gas temperature must be positive");
    const double a2 = radius * radius;
    const double thermal = std::sqrt(2.0 * pi * molecular_mass / (k_boltzmann * temperature));
    return 2.0 * a2 * a2 * pressure / drag_constant * thermal * rotation_rate;
}

double drag_torque(const Scenario& scenario, double rotation_rate) {
    return drag_torque(std::abs(rotation_rate), scenario.gas_pressure, scenario.environment_temperature,
                       scenario.gas_molecular_mass, scenario.sphere_radius, scenario.observables.drag_constant);
}

double sphere_mass_density(const Scenario& scenario) {
    return scenario.sphere_material == SphereMaterial::yig ? scenario.yig.density : scenario.metal.density;
}

double moment_of_inertia(const Scenario& scenario) {
    const double a = scenario.sphere_radius;
    const double mass = 4.0 / 3.0 * pi * a * a * a * sphere_mass_density(scenario);
    return 0.4 * mass * a * a;
}

BalanceSpeed balance_speed(const Scenario& scenario, double laser_torque, std::shared_ptr<TensorCache> cache) {
    if (!(laser_torque > 0.0)) throw std::invalid_argument("balance_speed: laser torque must be positive");
    const double drag_per_rate = drag_torque(scenario, 1.0);
    if (!(drag_per_rate > 0.0)) throw std::domain_error("balance_speed: requires a positive gas pressure");
    cache = ensure(std::move(cache));

    BalanceSpeed out;
    out.free_rotation_rate = laser_torque / drag_per_rate;
    out.converged = true;
    auto residual = [&](double rate) {
        if (rate == 0.0) return laser_torque;
        Scenario trial = scenario;
        trial.rotation_rate = rate;
        const TorqueAt m = vacuum_torque(trial, cache);
        out.converged = out.converged && m.converged;
        return laser_torque - drag_per_rate * rate - std::abs(m.value);
    };

    const double hi = out.free_rotation_rate;
    const double f_hi = residual(hi);
    if (f_hi == 0.0) {
        out.rotation_rate = hi;
        out.ratio = 1.0;
        return out;
    }
    if (!(f_hi < 0.0)) throw std::runtime_error("balance_speed: no root in [0, free speed]");
    std::uintmax_t iterations = max_root_iterations;
    auto tolerance = [hi](double a, double b) { return std::abs(b - a) <= speed_rel_tol * hi; };
    const auto [lo_root, hi_root] =
        boost::math::tools::toms748_solve(residual, 0.0, hi, laser_torque, f_hi, tolerance, iterations);
    out.converged = out.converged && iterations < max_root_iterations;
    out.rotation_rate = 0.5 * (lo_root + hi_root);
    out.ratio = out.rotation_rate / out.free_rotation_rate;
    return out;
}

StoppingTime stopping_time(const Scenario& scenario, std::shared_ptr<TensorCache> cache) {
    if (!(scenario.rotation_rate > 0.0)) throw std::invalid_argument("stopping_time: rotation rate must be positive");
    StoppingTime out;
    out.drag_torque = drag_torque(scenario, scenario.rotation_rate);
    const TorqueAt m = vacuum_torque(scenario, ensure(std::move(cache)));
    out.vacuum_torque = m.value;
    out.converged = m.converged;
    const double total = out.drag_torque + std::abs(m.value);
    if (total == 0.0) {
        out.infinite = true;
        out.seconds = std::numeric_limits<double>::infinity();
        return out;
    }
    out.seconds = moment_of_inertia(scenario) * scenario.rotation_rate / total;
    return out;
}

BalanceTemperature balance_temperature(const Scenario& scenario, std::shared_ptr<TensorCache> cache) {
    BalanceTemperature out;
    const double ambient = scenario.environment_temperature;
    if (scenario.rotation_rate == 0.0) {
        out.temperature = ambient;
        out.converged = true;
        return out;
    }
    cache = ensure(std::move(cache));
    out.converged = true;
    // Net heating rate of the sphere, negated: emitted power minus rotational work.
    auto net_loss = [&](double temperature) {
        Scenario trial = scenario;
        trial.sphere_temperature = temperature;
        const FluctuationModel model(trial, cache);
        const FrequencyIntegral power = model.radiated_power();
        const FrequencyIntegral torque = model.torque_z();
        out.converged = out.converged && power.converged && torque.converged;
        return power.value - std::abs(torque.value * scenario.rotation_rate);
    };

    const double f_ambient = net_loss(ambient);
    if (f_ambient == 0.0) {
        out.temperature = ambient;
        return out;
    }
    const double rise = scenario.observables.max_temperature_rise;
    double lo = ambient, hi = ambient, f_lo = f_ambient, f_hi = f_ambient;
    if (f_ambient < 0.0) {
        hi = ambient + rise;
        f_hi = net_loss(hi);
        if (f_hi < 0.0) {
            out.runaway = true;
            out.temperature = std::numeric_limits<double>::infinity();
            return out;
        }
    } else {
        out.below_ambient = true;
        lo = std::max(ambient - rise, ambient * coldest_fraction);
        f_lo = net_loss(lo);
        if (f_lo > 0.0) {
            out.converged = false;
            out.temperature = lo;
            return out;
        }
    }
    std::uintmax_t iterations = max_root_iterations;
    auto tolerance = [](double a, double b) { return std::abs(b - a) <= temperature_abs_tol; };
    const auto [a, b] = boost::math::tools::toms748_solve(net_loss, lo, hi, f_lo, f_hi, tolerance, iterations);
    out.converged = out.converged && iterations < max_root_iterations;
    out.temperature = 0.5 * (a + b);
    return out;
}

ObservablePoint observable_point(const Scenario& scenario) {
    auto cache = std::make_shared<TensorCache>();
    ObservablePoint point;
    point.distance = scenario.distance;
    const BalanceSpeed speed = balance_speed(scenario, scenario.observables.laser_torque, cache);
    const StoppingTime stop = stopping_time(scenario, cache);
    const BalanceTemperature heat = balance_temperature(scenario, cache);
    point.balance_speed_ratio = speed.ratio;
    point.stopping_time = stop.seconds;
    point.balance_temperature = heat.temperature;
    point.runaway = heat.runaway;
    point.below_ambient = heat.below_ambient;
    point.converged = speed.converged && stop.converged && heat.converged;
    return point;
}

std::vector<ObservablePoint> observable_sweep(const Scenario& scenario, const std::vector<double>& distances) {
    std::vector<ObservablePoint> points;
    points.reserve(distances.size());
    for (const double d : distances) {
        Scenario at = scenario;
        at.distance = d;
        points.push_back(observable_point(at));
    }
    return points;
}

}  // namespace vacfric
