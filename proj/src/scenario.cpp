#include "vacfric/scenario.hpp"

#include "vacfric/constants.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace vacfric {

namespace {

namespace c = constants;

constexpr double meters_per_nm = 1e-9;
constexpr double rad_s_per_ghz = 2.0 * c::pi * 1e9;
constexpr double kg_per_g_mol = 1e-3 / c::avogadro;

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

double parse_number(const std::string& key, std::string_view token) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end || token.empty())
        throw ScenarioError(key, "expected a number, got '" + std::string(token) + "'");
    if (!std::isfinite(value)) throw ScenarioError(key, "value must be finite");
    return value;
}

long parse_integer(const std::string& key, std::string_view token) {
    token = trim(token);
    long value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end || token.empty())
        throw ScenarioError(key, "expected an integer, got '" + std::string(token) + "'");
    return value;
}

bool parse_bool(const std::string& key, std::string_view token) {
    token = trim(token);
    if (token == "true" || token == "yes" || token == "on" || token == "1") return true;
    if (token == "false" || token == "no" || token == "off" || token == "0") return false;
    throw ScenarioError(key, "expected true or false, got '" + std::string(token) + "'");
}

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& key, std::string_view token,
                const std::array<std::pair<std::string_view, Enum>, N>& table) {
    token = trim(token);
    for (const auto& [name, value] : table)
        if (name == token) return value;
    std::string allowed;
    for (const auto& entry : table) allowed += (allowed.empty() ? "" : ", ") + std::string(entry.first);
    throw ScenarioError(key, "unknown token '" + std::string(token) + "' (expected one of " + allowed + ")");
}

constexpr std::array<std::pair<std::string_view, SphereMaterial>, 2> material_names{{
    {"yig", SphereMaterial::yig}, {"metal", SphereMaterial::metal}}};
constexpr std::array<std::pair<std::string_view, InterfaceKind>, 4> interface_names{{
    {"none", InterfaceKind::none},
    {"metal_local", InterfaceKind::metal_local},
    {"metal_nonlocal", InterfaceKind::metal_nonlocal},
    {"gyromagnetic", InterfaceKind::gyromagnetic}}};
constexpr std::array<std::pair<std::string_view, Orientation>, 2> orientation_names{{
    {"xy_plane", Orientation::xy_plane}, {"xz_plane", Orientation::xz_plane}}};
constexpr std::array<std::pair<std::string_view, Axis>, 3> axis_names{{
    {"x", Axis::x}, {"y", Axis::y}, {"z", Axis::z}}};

std::string shortest(double value) {
    std::array<char, 64> buffer{};
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

// Decimal text in source units whose conversion reproduces `si` bit for bit.
std::string render_converted(double si, double factor) {
    const double guess = si / factor;
    double up = guess;
    double down = guess;
    for (int step = 0; step < 64; ++step) {
        for (const double candidate : {up, down}) {
            const std::string text = shortest(candidate);
            double parsed = 0.0;
            std::from_chars(text.data(), text.data() + text.size(), parsed);
            if (parsed * factor == si) return text;
        }
        up = std::nextafter(up, HUGE_VAL);
        down = std::nextafter(down, -HUGE_VAL);
    }
    return shortest(guess);
}

struct Document {
    std::map<std::string, std::string, std::less<>> entries;
    std::map<std::string, int, std::less<>> lines;

    bool has(std::string_view key) const { return entries.contains(key); }

    const std::string* find(std::string_view key) const {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }

    const std::string& require(const std::string& key) const {
        const auto* value = find(key);
        if (value == nullptr) throw ScenarioError(key, "required key is missing");
        return *value;
    }
};

Document tokenize(std::string_view text) {
    Document doc;
    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find('\n', pos);
        std::string_view line = text.substr(pos, next == std::string_view::npos ? text.size() - pos : next - pos);
        pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ScenarioError("line " + std::to_string(line_number), "expected 'section.key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.find('.') == std::string::npos)
            throw ScenarioError(key, "keys must have the form section.key");
        if (doc.entries.contains(key)) throw ScenarioError(key, "duplicate key");
        doc.entries.emplace(key, value);
        doc.lines.emplace(key, line_number);
    }
    return doc;
}

const std::vector<std::string_view>& known_keys() {
    static const std::vector<std::string_view> keys{
        "sphere.material", "sphere.radius_nm", "sphere.rotation_ghz", "sphere.temperature_k",
        "sphere.bias_oe", "sphere.electric_channel",
        "interface.kind", "interface.orientation", "interface.distance_nm", "interface.bias_oe",
        "interface.bias_axis",
        "environment.t0_k", "environment.pressure_torr", "environment.gas_molar_mass_g_mol",
        "yig.ms_oe", "yig.dh_oe", "yig.gamma", "yig.density_kg_m3", "yig.eps_rel", "yig.eps_imag",
        "yig.alpha",
        "metal.omega_p", "metal.gamma", "metal.v_fermi", "metal.density_kg_m3",
        "numerics.frequency_tol", "numerics.window_tol", "numerics.kappa_tol", "numerics.phi_tol",
        "numerics.reflection_tol", "numerics.kappa_cutoff_decades", "numerics.evaluation_budget",
        "numerics.grid_points", "numerics.grid_min_ratio", "numerics.grid_max_ratio",
        "numerics.workers", "numerics.band_limit_ratio",
        "observables.laser_torque_nm", "observables.drag_constant",
        "observables.max_temperature_rise_k", "observables.distances_nm"};
    return keys;
}

void require_positive(const std::string& key, double value) {
    if (!(value > 0.0)) throw ScenarioError(key, "must be positive");
}

void require_non_negative(const std::string& key, double value) {
    if (!(value >= 0.0)) throw ScenarioError(key, "must be non-negative");
}

void require_fraction(const std::string& key, double value) {
    if (!(value > 0.0 && value < 1.0)) throw ScenarioError(key, "must lie in (0, 1)");
}

}  // namespace

double oersted_to_amperes_per_meter(double oersted) { return oersted * c::amperes_per_meter_per_oersted; }
double amperes_per_meter_to_oersted(double amperes_per_meter) {
    return amperes_per_meter / c::amperes_per_meter_per_oersted;
}
double torr_to_pascal(double torr) { return torr * c::pascal_per_torr; }
double pascal_to_torr(double pascal) { return pascal / c::pascal_per_torr; }

double thermal_occupation(double omega, double temperature) {
    if (temperature < 0.0) throw std::domain_error("thermal_occupation: negative temperature");
    if (omega == 0.0) throw std::domain_error("thermal_occupation: pole at zero frequency");
    if (omega < 0.0) return -1.0 - thermal_occupation(-omega, temperature);
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(c::hbar * omega / (c::k_boltzmann * temperature));
}

double omega_times_occupation(double omega, double temperature) {
    if (omega == 0.0) {
        if (temperature < 0.0) throw std::domain_error("omega_times_occupation: negative temperature");
        return c::k_boltzmann * temperature / c::hbar;
    }
    return omega * thermal_occupation(omega, temperature);
}

std::string_view to_string(SphereMaterial value) {
    for (const auto& [name, v] : material_names)
        if (v == value) return name;
    return "?";
}
std::string_view to_string(InterfaceKind value) {
    for (const auto& [name, v] : interface_names)
        if (v == value) return name;
    return "?";
}
std::string_view to_string(Orientation value) {
    for (const auto& [name, v] : orientation_names)
        if (v == value) return name;
    return "?";
}
std::string_view to_string(Axis value) {
    for (const auto& [name, v] : axis_names)
        if (v == value) return name;
    return "?";
}

Scenario parse_scenario(std::string_view text) {
    const Document doc = tokenize(text);
    const auto& keys = known_keys();
    for (const auto& [key, value] : doc.entries)
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ScenarioError(key, "unknown key");
    for (const std::string section : {"sphere", "interface", "environment", "numerics"}) {
        const auto prefix = section + ".";
        const bool present = std::any_of(doc.entries.begin(), doc.entries.end(),
                                         [&](const auto& entry) { return entry.first.starts_with(prefix); });
        if (!present) throw ScenarioError(section, "required section is missing");
    }

    auto number = [&](const std::string& key, double fallback) {
        const auto* value = doc.find(key);
        return value ? parse_number(key, *value) : fallback;
    };

    Scenario s;
    s.sphere_material = parse_enum("sphere.material", doc.require("sphere.material"), material_names);
    s.sphere_radius = parse_number("sphere.radius_nm", doc.require("sphere.radius_nm")) * meters_per_nm;
    s.rotation_rate = parse_number("sphere.rotation_ghz", doc.require("sphere.rotation_ghz")) * rad_s_per_ghz;
    s.environment_temperature = parse_number("environment.t0_k", doc.require("environment.t0_k"));
    s.sphere_temperature = number("sphere.temperature_k", s.environment_temperature);
    s.sphere_bias_field = oersted_to_amperes_per_meter(number("sphere.bias_oe", 0.0));
    if (const auto* v = doc.find("sphere.electric_channel")) s.electric_channel = parse_bool("sphere.electric_channel", *v);

    s.interface_kind = parse_enum("interface.kind", doc.require("interface.kind"), interface_names);
    if (const auto* v = doc.find("interface.orientation"))
        s.orientation = parse_enum("interface.orientation", *v, orientation_names);
    if (s.interface_kind != InterfaceKind::none || doc.has("interface.distance_nm"))
        s.distance = parse_number("interface.distance_nm", doc.require("interface.distance_nm")) * meters_per_nm;
    s.slab_bias_field = oersted_to_amperes_per_meter(number("interface.bias_oe", 0.0));
    if (const auto* v = doc.find("interface.bias_axis")) s.slab_bias_axis = parse_enum("interface.bias_axis", *v, axis_names);

    s.gas_pressure = torr_to_pascal(number("environment.pressure_torr", 0.0));
    s.gas_molecular_mass = number("environment.gas_molar_mass_g_mol", 28.966) * kg_per_g_mol;

    s.yig.saturation_magnetization = oersted_to_amperes_per_meter(number("yig.ms_oe", 1780.0));
    s.yig.linewidth = oersted_to_amperes_per_meter(number("yig.dh_oe", 45.0));
    s.yig.gyromagnetic_ratio = number("yig.gamma", constants::electron_gyromagnetic_ratio);
    s.yig.density = number("yig.density_kg_m3", 5110.0);
    if (const auto* v = doc.find("yig.eps_rel"))
        s.yig.permittivity = std::complex<double>(parse_number("yig.eps_rel", *v), number("yig.eps_imag", 0.0));
    else if (doc.has("yig.eps_imag"))
        throw ScenarioError("yig.eps_imag", "requires yig.eps_rel");
    if (const auto* v = doc.find("yig.alpha")) s.yig.damping = parse_number("yig.alpha", *v);

    s.metal.plasma_frequency = number("metal.omega_p", s.metal.plasma_frequency);
    s.metal.collision_rate = number("metal.gamma", s.metal.collision_rate);
    s.metal.fermi_velocity = number("metal.v_fermi", s.metal.fermi_velocity);
    s.metal.density = number("metal.density_kg_m3", s.metal.density);

    auto& n = s.numerics;
    n.frequency_tol = number("numerics.frequency_tol", n.frequency_tol);
    n.window_tol = number("numerics.window_tol", n.window_tol);
    n.kappa_tol = number("numerics.kappa_tol", n.kappa_tol);
    n.phi_tol = number("numerics.phi_tol", n.phi_tol);
    n.reflection_tol = number("numerics.reflection_tol", n.reflection_tol);
    n.kappa_cutoff_decades = number("numerics.kappa_cutoff_decades", n.kappa_cutoff_decades);
    if (const auto* v = doc.find("numerics.evaluation_budget"))
        n.evaluation_budget = parse_integer("numerics.evaluation_budget", *v);
    if (const auto* v = doc.find("numerics.grid_points"))
        n.grid_points = static_cast<int>(parse_integer("numerics.grid_points", *v));
    n.grid_min_ratio = number("numerics.grid_min_ratio", n.grid_min_ratio);
    n.grid_max_ratio = number("numerics.grid_max_ratio", n.grid_max_ratio);
    if (const auto* v = doc.find("numerics.workers")) n.workers = static_cast<int>(parse_integer("numerics.workers", *v));
    n.band_limit_ratio = number("numerics.band_limit_ratio", n.band_limit_ratio);

    auto& o = s.observables;
    o.laser_torque = number("observables.laser_torque_nm", o.laser_torque);
    o.drag_constant = number("observables.drag_constant", o.drag_constant);
    o.max_temperature_rise = number("observables.max_temperature_rise_k", o.max_temperature_rise);
    if (const auto* v = doc.find("observables.distances_nm")) {
        std::string_view rest = *v;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            o.sweep_distances.push_back(parse_number("observables.distances_nm", rest.substr(0, comma)) * meters_per_nm);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
    }

    validate_scenario(s);
    return s;
}

void validate_scenario(const Scenario& s) {
    require_positive("sphere.radius_nm", s.sphere_radius);
    require_non_negative("sphere.rotation_ghz", s.rotation_rate);
    require_non_negative("sphere.temperature_k", s.sphere_temperature);
    require_non_negative("sphere.bias_oe", s.sphere_bias_field);
    require_non_negative("environment.t0_k", s.environment_temperature);
    require_non_negative("environment.pressure_torr", s.gas_pressure);
    require_positive("environment.gas_molar_mass_g_mol", s.gas_molecular_mass);
    require_non_negative("interface.bias_oe", s.slab_bias_field);
    if (s.interface_kind != InterfaceKind::none && !(s.distance > s.sphere_radius))
        throw ScenarioError("interface.distance_nm", "distance must exceed the sphere radius");

    require_positive("yig.ms_oe", s.yig.saturation_magnetization);
    require_non_negative("yig.dh_oe", s.yig.linewidth);
    require_positive("yig.gamma", s.yig.gyromagnetic_ratio);
    require_positive("yig.density_kg_m3", s.yig.density);
    if (s.yig.damping) require_non_negative("yig.alpha", *s.yig.damping);

    const bool slab_is_yig = s.interface_kind == InterfaceKind::gyromagnetic;
    const bool sphere_is_yig = s.sphere_material == SphereMaterial::yig;
    if (!s.yig.permittivity && (slab_is_yig || (sphere_is_yig && s.electric_channel)))
        throw ScenarioError("yig.eps_rel", "required for a gyromagnetic interface or the electric channel of a YIG sphere");
    if (!s.yig.damping) {
        if (sphere_is_yig && s.rotation_rate == 0.0 && s.sphere_bias_field == 0.0)
            throw ScenarioError("yig.alpha", "damping is undefined for a YIG sphere with zero Larmor frequency; set it explicitly");
        if (slab_is_yig && s.slab_bias_field == 0.0)
            throw ScenarioError("yig.alpha", "damping is undefined for an unbiased YIG slab; set it explicitly");
    }

    require_positive("metal.omega_p", s.metal.plasma_frequency);
    require_positive("metal.gamma", s.metal.collision_rate);
    require_positive("metal.v_fermi", s.metal.fermi_velocity);
    require_positive("metal.density_kg_m3", s.metal.density);

    const auto& n = s.numerics;
    require_fraction("numerics.frequency_tol", n.frequency_tol);
    require_fraction("numerics.window_tol", n.window_tol);
    require_fraction("numerics.kappa_tol", n.kappa_tol);
    require_fraction("numerics.phi_tol", n.phi_tol);
    require_fraction("numerics.reflection_tol", n.reflection_tol);
    require_positive("numerics.kappa_cutoff_decades", n.kappa_cutoff_decades);
    if (n.evaluation_budget < 1000) throw ScenarioError("numerics.evaluation_budget", "must be at least 1000");
    if (n.grid_points < 2) throw ScenarioError("numerics.grid_points", "must be at least 2");
    require_positive("numerics.grid_min_ratio", n.grid_min_ratio);
    if (!(n.grid_max_ratio > n.grid_min_ratio))
        throw ScenarioError("numerics.grid_max_ratio", "must exceed numerics.grid_min_ratio");
    if (n.workers < 0) throw ScenarioError("numerics.workers", "must be non-negative");
    require_non_negative("numerics.band_limit_ratio", n.band_limit_ratio);
    if (n.band_limit_ratio > 0.0 && s.rotation_rate == 0.0)
        throw ScenarioError("numerics.band_limit_ratio", "requires a non-zero rotation rate");

    require_positive("observables.laser_torque_nm", s.observables.laser_torque);
    require_positive("observables.drag_constant", s.observables.drag_constant);
    require_positive("observables.max_temperature_rise_k", s.observables.max_temperature_rise);
    for (const double d : s.observables.sweep_distances)
        if (!(d > s.sphere_radius))
            throw ScenarioError("observables.distances_nm", "every distance must exceed the sphere radius");
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open scenario file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string render_scenario(const Scenario& s) {
    std::ostringstream out;
    auto line = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };

    line("sphere.material", std::string(to_string(s.sphere_material)));
    line("sphere.radius_nm", render_converted(s.sphere_radius, meters_per_nm));
    line("sphere.rotation_ghz", render_converted(s.rotation_rate, rad_s_per_ghz));
    line("sphere.temperature_k", shortest(s.sphere_temperature));
    line("sphere.bias_oe", render_converted(s.sphere_bias_field, c::amperes_per_meter_per_oersted));
    line("sphere.electric_channel", s.electric_channel ? "true" : "false");

    line("interface.kind", std::string(to_string(s.interface_kind)));
    line("interface.orientation", std::string(to_string(s.orientation)));
    line("interface.distance_nm", render_converted(s.distance, meters_per_nm));
    line("interface.bias_oe", render_converted(s.slab_bias_field, c::amperes_per_meter_per_oersted));
    line("interface.bias_axis", std::string(to_string(s.slab_bias_axis)));

    line("environment.t0_k", shortest(s.environment_temperature));
    line("environment.pressure_torr", render_converted(s.gas_pressure, c::pascal_per_torr));
    line("environment.gas_molar_mass_g_mol", render_converted(s.gas_molecular_mass, kg_per_g_mol));

    line("yig.ms_oe", render_converted(s.yig.saturation_magnetization, c::amperes_per_meter_per_oersted));
    line("yig.dh_oe", render_converted(s.yig.linewidth, c::amperes_per_meter_per_oersted));
    line("yig.gamma", shortest(s.yig.gyromagnetic_ratio));
    line("yig.density_kg_m3", shortest(s.yig.density));
    if (s.yig.permittivity) {
        line("yig.eps_rel", shortest(s.yig.permittivity->real()));
        line("yig.eps_imag", shortest(s.yig.permittivity->imag()));
    }
    if (s.yig.damping) line("yig.alpha", shortest(*s.yig.damping));

    line("metal.omega_p", shortest(s.metal.plasma_frequency));
    line("metal.gamma", shortest(s.metal.collision_rate));
    line("metal.v_fermi", shortest(s.metal.fermi_velocity));
    line("metal.density_kg_m3", shortest(s.metal.density));

    const auto& n = s.numerics;
    line("numerics.frequency_tol", shortest(n.frequency_tol));
    line("numerics.window_tol", shortest(n.window_tol));
    line("numerics.kappa_tol", shortest(n.kappa_tol));
    line("numerics.phi_tol", shortest(n.phi_tol));
    line("numerics.reflection_tol", shortest(n.reflection_tol));
    line("numerics.kappa_cutoff_decades", shortest(n.kappa_cutoff_decades));
    line("numerics.evaluation_budget", std::to_string(n.evaluation_budget));
    line("numerics.grid_points", std::to_string(n.grid_points));
    line("numerics.grid_min_ratio", shortest(n.grid_min_ratio));
    line("numerics.grid_max_ratio", shortest(n.grid_max_ratio));
    line("numerics.workers", std::to_string(n.workers));
    line("numerics.band_limit_ratio", shortest(n.band_limit_ratio));

    const auto& o = s.observables;
    line("observables.laser_torque_nm", shortest(o.laser_torque));
    line("observables.drag_constant", shortest(o.drag_constant));
    line("observables.max_temperature_rise_k", shortest(o.max_temperature_rise));
    if (!o.sweep_distances.empty()) {
        std::string list;
        for (const double d : o.sweep_distances) list += (list.empty() ? "" : ", ") + render_converted(d, meters_per_nm);
        line("observables.distances_nm", list);
    }
    return out.str();
}

}  // namespace vacfric
