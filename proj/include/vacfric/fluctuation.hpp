#pragma once

#include "vacfric/greens.hpp"
#include "vacfric/materials.hpp"
#include "vacfric/reflection.hpp"
#include "vacfric/scenario.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace vacfric {

struct SpectralSample {
    double omega = 0.0;               // rad/s, > 0
    double gamma_rad = 0.0;           // at +omega
    double gamma_rad_negative = 0.0;  // at -omega
    double photon_rate_density = 0.0; // gamma_rad - gamma_rad_negative
    double gamma_torque = 0.0;        // torque density at +omega
    bool converged = true;
};

struct FrequencyIntegral {
    double value = 0.0;
    double error_estimate = 0.0;
    double window = 0.0;        // upper frequency limit actually used, rad/s
    long evaluations = 0;       // integrand samples
    bool converged = false;
    bool window_capped = false;  // stopped at the dipole-approximation limit or the band limit
};

struct OffAxisTorque {
    double x = 0.0;
    double y = 0.0;
    FrequencyIntegral detail;
};

// Memoized lab-frame tensors keyed by (omega, channel). Shareable between models whose
// scenarios differ only in sphere properties (rotation, temperature, bias, material).
class TensorCache {
public:
    std::optional<Matrix3c> find(double omega, Channel channel) const;
    void store(double omega, Channel channel, const Matrix3c& tensor, long evaluations, bool converged);
    long evaluations() const;
    bool converged() const;
    // Binds the cache to the environment of `scenario`; throws std::invalid_argument on a mismatch.
    void bind(const Scenario& scenario);

private:
    mutable std::mutex mutex_;
    std::map<std::pair<double, int>, Matrix3c> entries_;
    long evaluations_ = 0;
    bool converged_ = true;
    std::optional<Scenario> environment_;
};

// Per-scenario evaluator; all methods are const and safe to call concurrently.
class FluctuationModel {
public:
    explicit FluctuationModel(const Scenario& scenario, std::shared_ptr<TensorCache> cache = nullptr);

    const Scenario& scenario() const noexcept { return scenario_; }
    const SphereResponse& sphere() const noexcept { return sphere_; }
    const ReflectionModel& reflection() const noexcept { return *reflection_; }
    std::shared_ptr<TensorCache> cache() const noexcept { return cache_; }

    // Lab-frame normalized tensor at omega > 0 (memoized).
    Matrix3c lab_tensor(double omega, Channel channel) const;

    // Spectral densities at signed omega, summed over the enabled channels.
    double gamma_rad(double omega) const;
    double gamma_torque(double omega) const;
    SpectralSample sample(double omega) const;

    // Net radiated power (W), positive when the sphere loses energy.
    FrequencyIntegral radiated_power() const;
    // Torque along the rotation axis (N m).
    FrequencyIntegral torque_z() const;
    OffAxisTorque torque_xy() const;

    // Frequencies where the integrands have structure, sorted, positive.
    std::vector<double> feature_frequencies() const;
    double initial_window() const;

    long tensor_evaluations() const;
    bool all_tensors_converged() const;

private:
    struct Terms {
        double rad = 0.0;
        double torque = 0.0;
    };
    Terms channel_terms(double omega, Channel channel) const;
    double occupation_product(double x, double omega, Channel channel, double& loss) const;
    std::array<double, 2> offaxis_density(double omega) const;

    template <typename Integrand>
    FrequencyIntegral integrate_window(Integrand&& integrand) const;

    Scenario scenario_;
    SphereResponse sphere_;
    std::unique_ptr<ReflectionModel> reflection_;
    GreensOptions greens_options_;
    std::vector<Channel> channels_;

    std::shared_ptr<TensorCache> cache_;
};

double gamma_rad(double omega, const Scenario& scenario);
double radiated_power(const Scenario& scenario);
double torque_z(const Scenario& scenario);
std::pair<double, double> torque_xy(const Scenario& scenario);

// Log-spaced positive frequencies over [min_ratio, max_ratio] x reference.
std::vector<double> log_grid(double reference, double min_ratio, double max_ratio, int points);

}  // namespace vacfric
