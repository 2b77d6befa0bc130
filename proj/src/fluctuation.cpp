#include "vacfric/fluctuation.hpp"

#include "vacfric/constants.hpp"
#include "vacfric/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace vacfric {

using namespace constants;

namespace {

constexpr double limit_fraction = 1e-6;   // |omega-| below this fraction of the scale uses the analytic limit
constexpr int panels_per_sweep = 8;       // fixed so results do not depend on the worker count
constexpr int max_doublings = 48;
constexpr int small_segments_to_stop = 2;

// omega rho0 / 8 with rho0 = omega^2 / (pi^2 c^3); odd in omega.
double spectral_prefactor(double omega) { return omega * vacuum_dos(omega) / 8.0; }

// Everything the Green tensor depends on, with sphere-only fields reset.
Scenario environment_of(const Scenario& scenario) {
    Scenario env;
    env.interface_kind = scenario.interface_kind;
    env.orientation = scenario.orientation;
    env.distance = scenario.distance;
    env.slab_bias_field = scenario.slab_bias_field;
    env.slab_bias_axis = scenario.slab_bias_axis;
    env.yig = scenario.yig;
    env.metal = scenario.metal;
    env.numerics = scenario.numerics;
    return env;
}

}  // namespace

std::optional<Matrix3c> TensorCache::find(double omega, Channel channel) const {
    const std::lock_guard lock(mutex_);
    if (const auto it = entries_.find({omega, static_cast<int>(channel)}); it != entries_.end()) return it->second;
    return std::nullopt;
}

void TensorCache::store(double omega, Channel channel, const Matrix3c& tensor, long evaluations, bool converged) {
    const std::lock_guard lock(mutex_);
    if (entries_.emplace(std::pair{omega, static_cast<int>(channel)}, tensor).second) {
        evaluations_ += evaluations;
        converged_ = converged_ && converged;
    }
}

long TensorCache::evaluations() const {
    const std::lock_guard lock(mutex_);
    return evaluations_;
}

bool TensorCache::converged() const {
    const std::lock_guard lock(mutex_);
    return converged_;
}

void TensorCache::bind(const Scenario& scenario) {
    const Scenario env = environment_of(scenario);
    const std::lock_guard lock(mutex_);
    if (!environment_) {
        environment_ = env;
    } else if (!(*environment_ == env)) {
        throw std::invalid_argument("TensorCache: scenario environment differs from the cached one");
    }
}

FluctuationModel::FluctuationModel(const Scenario& scenario, std::shared_ptr<TensorCache> cache)
    : scenario_(scenario),
      sphere_(scenario),
      reflection_(make_reflection_model(scenario)),
      greens_options_(GreensOptions::from(scenario.numerics)),
      cache_(cache ? std::move(cache) : std::make_shared<TensorCache>()) {
    cache_->bind(scenario);
    channels_.push_back(Channel::magnetic);
    if (scenario.electric_channel) channels_.push_back(Channel::electric);
}

Matrix3c FluctuationModel::lab_tensor(double omega, Channel channel) const {
    if (auto hit = cache_->find(omega, channel)) return *hit;
    const NormalizedTensor n = normalized_tensor(omega, scenario_.distance, *reflection_, channel, greens_options_);
    const Matrix3c lab = lab_from_slab(n.value, scenario_.orientation);
    cache_->store(omega, channel, lab, n.evaluations, n.converged);
    return lab;
}

long FluctuationModel::tensor_evaluations() const { return cache_->evaluations(); }

bool FluctuationModel::all_tensors_converged() const { return cache_->converged(); }

// Returns loss(x) [n1(x) - n0(omega)], finite at x = 0; `loss` receives loss(x).
double FluctuationModel::occupation_product(double x, double omega, Channel channel, double& loss) const {
    const double t1 = scenario_.sphere_temperature;
    const double t0 = scenario_.environment_temperature;
    loss = sphere_.circular_loss(x, channel);
    if (scenario_.rotation_rate == 0.0) return loss * (thermal_occupation(x, t1) - thermal_occupation(omega, t0));
    const double scale = std::max({scenario_.rotation_rate, std::abs(sphere_.larmor()), std::abs(omega), 1.0});
    const double h = limit_fraction * scale;
    double sphere_term;
    if (std::abs(x) < h) {
        const double slope = (sphere_.circular_loss(h, channel) - sphere_.circular_loss(-h, channel)) / (2.0 * h);
        sphere_term = slope * omega_times_occupation(x, t1);
    } else {
        sphere_term = loss * thermal_occupation(x, t1);
    }
    return sphere_term - loss * thermal_occupation(omega, t0);
}

FluctuationModel::Terms FluctuationModel::channel_terms(double omega, Channel channel) const {
    if (omega == 0.0) return {};
    const double shifted = omega - scenario_.rotation_rate;
    double loss = 0.0;
    const double rotating = occupation_product(shifted, omega, channel, loss);
    const double axial_loss = sphere_.body_frame(omega, channel).par.imag();
    const double axial = axial_loss == 0.0 ? 0.0
                                           : axial_loss * (thermal_occupation(omega, scenario_.sphere_temperature) -
                                                           thermal_occupation(omega, scenario_.environment_temperature));
    if (rotating == 0.0 && axial == 0.0) return {};

    Matrix3c n = lab_tensor(std::abs(omega), channel);
    if (omega < 0.0) n = n.conjugate();
    const double in_plane = n(0, 0).real() + n(1, 1).real() - (n(0, 1).imag() - n(1, 0).imag());
    const double prefactor = spectral_prefactor(omega);
    Terms terms;
    terms.torque = prefactor * in_plane * rotating;
    terms.rad = terms.torque + prefactor * n(2, 2).real() * axial;
    return terms;
}

double FluctuationModel::gamma_rad(double omega) const {
    double sum = 0.0;
    for (const Channel channel : channels_) sum += channel_terms(omega, channel).rad;
    return sum;
}

double FluctuationModel::gamma_torque(double omega) const {
    double sum = 0.0;
    for (const Channel channel : channels_) sum += channel_terms(omega, channel).torque;
    return sum;
}

SpectralSample FluctuationModel::sample(double omega) const {
    SpectralSample s;
    s.omega = omega;
    s.gamma_rad = gamma_rad(omega);
    s.gamma_rad_negative = gamma_rad(-omega);
    s.photon_rate_density = s.gamma_rad - s.gamma_rad_negative;
    s.gamma_torque = gamma_torque(omega);
    s.converged = all_tensors_converged();
    return s;
}

std::vector<double> FluctuationModel::feature_frequencies() const {
    std::vector<double> out;
    const double spin = scenario_.rotation_rate;
    out.push_back(spin);
    if (scenario_.sphere_material == SphereMaterial::yig) {
        const double kittel = std::abs(sphere_.larmor() + sphere_.magnetization_frequency() / 3.0);
        out.push_back(kittel + spin);
        out.push_back(std::abs(kittel - spin));
    } else {
        out.push_back(scenario_.metal.collision_rate);
    }
    if (scenario_.interface_kind == InterfaceKind::gyromagnetic) {
        const double w0 = mu0 * scenario_.yig.gyromagnetic_ratio * scenario_.slab_bias_field;
        const double wm = mu0 * scenario_.yig.gyromagnetic_ratio * scenario_.yig.saturation_magnetization;
        out.push_back(w0);
        out.push_back(std::sqrt(w0 * (w0 + wm)));
        out.push_back(w0 + 0.5 * wm);
    }
    std::erase_if(out, [](double w) { return !(w > 0.0) || !std::isfinite(w); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double FluctuationModel::initial_window() const {
    double window = 10.0 * scenario_.rotation_rate;
    window = std::max(window, 5.0 * std::abs(sphere_.larmor()));
    if (scenario_.interface_kind == InterfaceKind::gyromagnetic)
        window = std::max(window, 5.0 * mu0 * scenario_.yig.gyromagnetic_ratio * scenario_.slab_bias_field);
    if (window == 0.0) {
        const double hottest = std::max(scenario_.sphere_temperature, scenario_.environment_temperature);
        window = hottest > 0.0 ? k_boltzmann * hottest / hbar : 1.0;
    }
    return window;
}

template <typename Integrand>
FrequencyIntegral FluctuationModel::integrate_window(Integrand&& integrand) const {
    const Numerics& numerics = scenario_.numerics;
    const std::vector<double> features = feature_frequencies();
    double cap = sphere_.validity_limit();
    if (numerics.band_limit_ratio > 0.0) cap = std::min(cap, numerics.band_limit_ratio * scenario_.rotation_rate);

    auto segment = [&](double lo, double hi, double abs_tol) {
        std::vector<double> breakpoints{lo};
        for (const double w : features)
            if (w > lo * (1.0 + 1e-12) && w < hi * (1.0 - 1e-12)) breakpoints.push_back(w);
        breakpoints.push_back(hi);
        QuadratureOptions options;
        options.rel_tol = numerics.frequency_tol;
        options.abs_tol = abs_tol;
        options.max_evaluations = numerics.evaluation_budget;
        options.panels_per_sweep = panels_per_sweep;
        auto batch = [&](std::span<const double> xs, std::span<double> out) {
            parallel_for(xs.size(), numerics.workers, [&](std::size_t i) { out[i] = integrand(xs[i]); });
        };
        auto norm = [](double v) { return std::abs(v); };
        return gk::integrate_adaptive<double>(batch, breakpoints, norm, options, 0.0);
    };

    FrequencyIntegral out;
    double window = initial_window();
    if (window >= cap) {
        window = cap;
        out.window_capped = true;
    }
    const auto head = segment(0.0, window, 0.0);
    out.value = head.value;
    out.error_estimate = head.error;
    out.evaluations = head.evaluations;
    out.converged = head.converged;

    int small_segments = 0;
    for (int doubling = 0; doubling < max_doublings && !out.window_capped; ++doubling) {
        double next = 2.0 * window;
        if (next >= cap) {
            next = cap;
            out.window_capped = true;
        }
        const auto tail = segment(window, next, 0.1 * numerics.frequency_tol * std::abs(out.value));
        out.value += tail.value;
        out.error_estimate += tail.error;
        out.evaluations += tail.evaluations;
        out.converged = out.converged && tail.converged;
        window = next;
        if (std::abs(tail.value) <= numerics.window_tol * std::abs(out.value)) {
            if (++small_segments >= small_segments_to_stop) break;
        } else {
            small_segments = 0;
        }
        if (doubling + 1 == max_doublings) out.converged = false;
    }
    out.window = window;
    out.converged = out.converged && all_tensors_converged();
    return out;
}

FrequencyIntegral FluctuationModel::radiated_power() const {
    return integrate_window([this](double omega) { return hbar * omega * (gamma_rad(omega) - gamma_rad(-omega)); });
}

FrequencyIntegral FluctuationModel::torque_z() const {
    return integrate_window([this](double omega) { return -hbar * (gamma_torque(omega) + gamma_torque(-omega)); });
}

std::array<double, 2> FluctuationModel::offaxis_density(double omega) const {
    const double spin = scenario_.rotation_rate;
    const double t1 = scenario_.sphere_temperature;
    const double t0 = scenario_.environment_temperature;
    const double shifted = omega - spin;

    Matrix3c n = lab_tensor(std::abs(omega), Channel::magnetic);
    const Matrix3c g = green_tensor_from_normalized(omega, n, Orientation::xy_plane);
    // Indices: x = 0, y = 1, z = 2; g is already in lab axes.
    const double re_xz = g(0, 2).real(), im_xz = g(0, 2).imag();
    const double re_zx = g(2, 0).real(), im_zx = g(2, 0).imag();
    const double re_yz = g(1, 2).real(), im_yz = g(1, 2).imag();
    const double re_zy = g(2, 1).real(), im_zy = g(2, 1).imag();

    double loss = 0.0;
    // loss(w-) [2 n1(w-) + 1] through the regular product, plus the n0 part added back.
    const double loss_times_n1 = occupation_product(shifted, omega, Channel::magnetic, loss) +
                                 loss * thermal_occupation(omega, t0);
    const double rotating = 2.0 * loss_times_n1 + loss;
    const PolarizabilityTensor shifted_alpha = sphere_.body_frame(shifted, Channel::magnetic);
    const double reactive = shifted_alpha.perp.real() + shifted_alpha.gyro.imag();
    const PolarizabilityTensor alpha = sphere_.body_frame(omega, Channel::magnetic);
    const double axial_re = alpha.par.real(), axial_im = alpha.par.imag();
    const double n1 = thermal_occupation(omega, t1);
    const double n0 = thermal_occupation(omega, t0);

    const double mx = rotating * (2.0 * im_zx + 2.0 * re_zy) - 4.0 * (n1 + 1.0) * axial_im * re_yz +
                      (2.0 * n0 + 1.0) * (reactive * (re_xz - re_zx + im_yz + im_zy) +
                                          loss * (-im_xz - im_zx + re_yz - re_zy)) +
                      (n0 + 1.0) * (-2.0 * axial_re * (im_zy + im_yz) + 2.0 * axial_im * (-re_zy + re_yz));
    const double my = rotating * (-2.0 * re_zx + 2.0 * im_zy) + 4.0 * (n1 + 1.0) * axial_im * re_xz -
                      (2.0 * n0 + 1.0) * (reactive * (im_xz + im_zx - re_yz + re_zy) +
                                          loss * (re_xz - re_zx + im_yz + im_zy)) -
                      (n0 + 1.0) * (-2.0 * axial_re * (im_zx + im_xz) + 2.0 * axial_im * (-re_zx + re_xz));
    return {hbar / (4.0 * pi) * mx, hbar / (4.0 * pi) * my};
}

OffAxisTorque FluctuationModel::torque_xy() const {
    OffAxisTorque out;
    if (reflection_->vanishing()) {
        out.detail.converged = true;
        return out;
    }
    // Integrate each component over the symmetric line folded onto omega > 0.
    auto component = [this](int index) {
        return integrate_window([this, index](double omega) {
            return offaxis_density(omega)[index] + offaxis_density(-omega)[index];
        });
    };
    const FrequencyIntegral x = component(0);
    const FrequencyIntegral y = component(1);
    out.x = x.value;
    out.y = y.value;
    out.detail = x;
    out.detail.value = std::hypot(x.value, y.value);
    out.detail.error_estimate = x.error_estimate + y.error_estimate;
    out.detail.evaluations = x.evaluations + y.evaluations;
    out.detail.converged = x.converged && y.converged;
    out.detail.window = std::max(x.window, y.window);
    out.detail.window_capped = x.window_capped || y.window_capped;
    return out;
}

double gamma_rad(double omega, const Scenario& scenario) { return FluctuationModel(scenario).gamma_rad(omega); }

double radiated_power(const Scenario& scenario) { return FluctuationModel(scenario).radiated_power().value; }

double torque_z(const Scenario& scenario) { return FluctuationModel(scenario).torque_z().value; }

std::pair<double, double> torque_xy(const Scenario& scenario) {
    const OffAxisTorque t = FluctuationModel(scenario).torque_xy();
    return {t.x, t.y};
}

std::vector<double> log_grid(double reference, double min_ratio, double max_ratio, int points) {
    if (!(reference > 0.0) || !(min_ratio > 0.0) || !(max_ratio > min_ratio) || points < 2)
        throw std::invalid_argument("log_grid: need reference > 0, 0 < min < max and at least two points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double lo = std::log(min_ratio), hi = std::log(max_ratio);
    for (int i = 0; i < points; ++i) grid[i] = reference * std::exp(lo + (hi - lo) * i / (points - 1));
    return grid;
}

}  // namespace vacfric
