#include "vacfric/cli.hpp"

#include "vacfric/fluctuation.hpp"
#include "vacfric/greens.hpp"
#include "vacfric/observables.hpp"
#include "vacfric/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace vacfric::cli {

namespace {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Manifest {
    std::string subcommand;
    std::string hash;
    Numerics numerics;
    double wall_time = 0.0;
    std::vector<std::pair<std::string, bool>> flags;

    bool converged() const {
        for (const auto& [name, value] : flags)
            if (name == "converged") return value;
        return true;
    }
};

enum class Format { csv, json };

struct Options {
    std::string config;
    std::string out;
    Format format = Format::csv;
    std::optional<double> tol;
    std::optional<int> workers;
    std::optional<int> points;
    bool offaxis = false;
};

std::string render_csv(const Manifest& manifest, const Table& table) {
    std::ostringstream out;
    out << "# subcommand: " << manifest.subcommand << '\n';
    out << "# scenario_sha256: " << manifest.hash << '\n';
    const Numerics& n = manifest.numerics;
    out << "# tolerances: frequency=" << format_number(n.frequency_tol) << " window=" << format_number(n.window_tol)
        << " kappa=" << format_number(n.kappa_tol) << " phi=" << format_number(n.phi_tol)
        << " reflection=" << format_number(n.reflection_tol) << '\n';
    out << "# wall_time_s: " << format_number(manifest.wall_time) << '\n';
    for (const auto& [name, value] : manifest.flags) out << "# " << name << ": " << (value ? "true" : "false") << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
    return out.str();
}

std::string render_json(const Manifest& manifest, const Table& table) {
    nlohmann::ordered_json doc;
    auto& m = doc["manifest"];
    m["subcommand"] = manifest.subcommand;
    m["scenario_sha256"] = manifest.hash;
    const Numerics& n = manifest.numerics;
    m["tolerances"] = {{"frequency", n.frequency_tol},
                       {"window", n.window_tol},
                       {"kappa", n.kappa_tol},
                       {"phi", n.phi_tol},
                       {"reflection", n.reflection_tol}};
    m["wall_time_s"] = manifest.wall_time;
    for (const auto& [name, value] : manifest.flags) m["flags"][name] = value;
    doc["columns"] = table.columns;
    auto& rows = doc["rows"];
    rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto& r = rows.emplace_back(nlohmann::ordered_json::array());
        // Non-finite values have no JSON literal; they travel as strings.
        for (const double v : row) {
            if (std::isfinite(v))
                r.push_back(v);
            else
                r.push_back(format_number(v));
        }
    }
    return doc.dump(2) + "\n";
}

double omega_reference(const FluctuationModel& model) {
    const double spin = model.scenario().rotation_rate;
    return spin > 0.0 ? spin : model.initial_window() / 10.0;
}

std::vector<double> grid_for(const FluctuationModel& model) {
    const Numerics& n = model.scenario().numerics;
    const auto features = model.feature_frequencies();
    return spectral_grid(omega_reference(model), n.grid_min_ratio, n.grid_max_ratio, n.grid_points, features);
}

Table spectrum(const Scenario& scenario, Manifest& manifest) {
    const FluctuationModel model(scenario);
    const auto grid = grid_for(model);
    std::vector<SpectralSample> samples(grid.size());
    parallel_for(grid.size(), scenario.numerics.workers, [&](std::size_t i) { samples[i] = model.sample(grid[i]); });
    Table table{{"omega_rad_s", "gamma_rad", "gamma_rad_negative", "photon_rate_density", "gamma_torque"}, {}};
    for (const auto& s : samples)
        table.rows.push_back({s.omega, s.gamma_rad, s.gamma_rad_negative, s.photon_rate_density, s.gamma_torque});
    manifest.flags.emplace_back("converged", model.all_tensors_converged());
    return table;
}

Table local_dos(const Scenario& scenario, Manifest& manifest) {
    const FluctuationModel model(scenario);
    const auto grid = grid_for(model);
    const GreensOptions options = GreensOptions::from(scenario.numerics);
    std::vector<Ldos> values(grid.size());
    parallel_for(grid.size(), scenario.numerics.workers, [&](std::size_t i) {
        values[i] = ldos(grid[i], scenario.distance, scenario.orientation, model.reflection(), options);
    });
    Table table{{"omega_rad_s", "vacuum_dos", "electric", "magnetic", "total"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i)
        table.rows.push_back({grid[i], vacuum_dos(grid[i]), values[i].electric, values[i].magnetic, values[i].total});
    manifest.flags.emplace_back("converged", true);
    return table;
}

Table power(const Scenario& scenario, Manifest& manifest) {
    const FluctuationModel model(scenario);
    const FrequencyIntegral p = model.radiated_power();
    manifest.flags.emplace_back("converged", p.converged);
    manifest.flags.emplace_back("window_capped", p.window_capped);
    return {{"power_w", "error_estimate_w", "window_rad_s"}, {{p.value, p.error_estimate, p.window}}};
}

Table torque(const Scenario& scenario, bool offaxis, Manifest& manifest) {
    const FluctuationModel model(scenario);
    const FrequencyIntegral z = model.torque_z();
    Table table{{"torque_z_nm", "error_estimate_nm", "window_rad_s"}, {{z.value, z.error_estimate, z.window}}};
    bool converged = z.converged;
    bool capped = z.window_capped;
    if (offaxis) {
        const OffAxisTorque xy = model.torque_xy();
        table.columns.insert(table.columns.end(), {"torque_x_nm", "torque_y_nm"});
        table.rows.front().insert(table.rows.front().end(), {xy.x, xy.y});
        converged = converged && xy.detail.converged;
        capped = capped || xy.detail.window_capped;
    }
    manifest.flags.emplace_back("converged", converged);
    manifest.flags.emplace_back("window_capped", capped);
    return table;
}

Table observables(const Scenario& scenario, Manifest& manifest) {
    std::vector<double> distances = scenario.observables.sweep_distances;
    if (distances.empty()) distances.push_back(scenario.distance);
    const auto points = observable_sweep(scenario, distances);
    Table table{{"d_m", "omega_b_ratio", "stopping_time_s", "t_balance_K"}, {}};
    bool converged = true;
    bool runaway = false;
    bool below_ambient = false;
    for (const auto& p : points) {
        table.rows.push_back({p.distance, p.balance_speed_ratio, p.stopping_time, p.balance_temperature});
        converged = converged && p.converged;
        runaway = runaway || p.runaway;
        below_ambient = below_ambient || p.below_ambient;
    }
    manifest.flags.emplace_back("converged", converged);
    manifest.flags.emplace_back("runaway", runaway);
    manifest.flags.emplace_back("below_ambient", below_ambient);
    return table;
}

void emit(const Options& options, const std::string& text, std::ostream& out) {
    if (options.out.empty() || options.out == "-")
        out << text;
    else
        write_atomically(options.out, text);
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                      std::chars_format::general, 17);
    return std::string(buffer.data(), result.ptr);
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256_hex: digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string scenario_hash(const Scenario& scenario) {
    Scenario canonical = scenario;
    canonical.numerics.workers = 0;
    return sha256_hex(render_scenario(canonical));
}

void write_atomically(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path temporary = path;
    temporary += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream file(temporary, std::ios::binary | std::ios::trunc);
        if (!file) throw std::ios_base::failure("cannot open " + temporary.string() + " for writing");
        file.write(content.data(), static_cast<std::streamsize>(content.size()));
        file.flush();
        if (!file) {
            std::filesystem::remove(temporary);
            throw std::ios_base::failure("write failed for " + temporary.string());
        }
    }
    std::filesystem::rename(temporary, path);
}

std::vector<double> spectral_grid(double reference, double min_ratio, double max_ratio, int points,
                                  std::span<const double> features) {
    std::vector<double> grid = log_grid(reference, min_ratio, max_ratio, points);
    const double lo = grid.front(), hi = grid.back();
    for (const double w : features) {
        if (!(w > lo && w < hi)) continue;
        const auto nearest = std::min_element(grid.begin() + 1, grid.end() - 1, [w](double a, double b) {
            return std::abs(std::log(a / w)) < std::abs(std::log(b / w));
        });
        *nearest = w;
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vacuum friction and radiation of a spinning nanosphere near an interface", "vacfric"};
    app.require_subcommand(1);
    Options options;
    std::string format = "csv";

    const std::array<std::pair<const char*, const char*>, 6> commands{{
        {"spectrum", "Spectral densities on a log-spaced frequency grid"},
        {"power", "Net radiated power"},
        {"torque", "Vacuum frictional torque"},
        {"ldos", "Electric and magnetic local density of states"},
        {"observables", "Balance speed, stopping time and balance temperature per distance"},
        {"validate", "Parse and validate a scenario; print its canonical form and hash"},
    }};
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", options.config, "Scenario file")->required();
        sub->add_option("--out", options.out, "Output path (default: standard output)");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tol", options.tol, "Relative frequency-integration tolerance")
            ->check(CLI::Range(std::numeric_limits<double>::min(), 0.5));
        sub->add_option("--workers", options.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
        if (std::string_view(name) == "spectrum" || std::string_view(name) == "ldos")
            sub->add_option("--points", options.points, "Grid points")->check(CLI::Range(2, 1000000));
        if (std::string_view(name) == "torque")
            sub->add_flag("--offaxis", options.offaxis, "Also compute the in-plane torque components");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    options.format = format == "json" ? Format::json : Format::csv;
    const std::string subcommand = app.get_subcommands().front()->get_name();

    if (!std::filesystem::is_regular_file(options.config)) {
        err << "usage error: cannot open scenario file " << options.config << '\n';
        return exit_usage;
    }

    Scenario scenario;
    try {
        scenario = load_scenario(options.config);
        if (options.tol) scenario.numerics.frequency_tol = *options.tol;
        if (options.workers) scenario.numerics.workers = *options.workers;
        if (options.points) scenario.numerics.grid_points = *options.points;
        validate_scenario(scenario);
    } catch (const ScenarioError& e) {
        err << "invalid scenario " << options.config << ": " << e.what() << '\n';
        return exit_invalid_scenario;
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }

    Manifest manifest;
    manifest.subcommand = subcommand;
    manifest.hash = scenario_hash(scenario);
    manifest.numerics = scenario.numerics;

    try {
        if (subcommand == "validate") {
            Scenario canonical = scenario;
            canonical.numerics.workers = 0;
            emit(options, render_scenario(canonical) + "# scenario_sha256: " + manifest.hash + "\n", out);
            return exit_ok;
        }
        const auto start = std::chrono::steady_clock::now();
        Table table;
        if (subcommand == "spectrum")
            table = spectrum(scenario, manifest);
        else if (subcommand == "ldos")
            table = local_dos(scenario, manifest);
        else if (subcommand == "power")
            table = power(scenario, manifest);
        else if (subcommand == "torque")
            table = torque(scenario, options.offaxis, manifest);
        else
            table = observables(scenario, manifest);
        manifest.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit(options, options.format == Format::json ? render_json(manifest, table) : render_csv(manifest, table),
             out);
        if (!manifest.converged()) {
            err << "warning: numerical tolerances were not met; output is flagged\n";
            return exit_not_converged;
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace vacfric::cli
