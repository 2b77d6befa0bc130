#include "vacfric/cli.hpp"
#include "vacfric/fluctuation.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace vacfric;
namespace fs = std::filesystem;

namespace {

const char* vacuum_config =
    "# free YIG sphere\n"
    "sphere.material = yig\nsphere.radius_nm = 200\nsphere.rotation_ghz = 1\n"
    "interface.kind = none\nenvironment.t0_k = 300\nnumerics.frequency_tol = 1e-4\nnumerics.grid_points = 12\n";

// Scratch directory removed on scope exit.
class ScratchDir {
public:
    ScratchDir() : path_(fs::temp_directory_path() / ("vacfric_cli_" + std::to_string(counter_++) + "_" +
                                                     std::to_string(std::rand()))) {
        fs::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ignored;
        fs::remove_all(path_, ignored);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    fs::path write(const std::string& name, const std::string& content) const {
        std::ofstream(path_ / name) << content;
        return path_ / name;
    }
    const fs::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Body of a CSV result: everything after the comment header.
std::string csv_body(const std::string& text) {
    std::istringstream in(text);
    std::string line, body;
    while (std::getline(in, line))
        if (!line.starts_with("#")) body += line + "\n";
    return body;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("number formatting round trips") {
        CHECK(cli::format_number(std::numeric_limits<double>::infinity()) == "inf");
        CHECK(cli::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
        CHECK(cli::format_number(std::nan("")) == "nan");
        CHECK(cli::format_number(0.5) == "0.5");
        std::uint64_t state = 99;
        for (int i = 0; i < 1000; ++i) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            double value;
            std::uint64_t bits = state;
            std::memcpy(&value, &bits, sizeof value);
            if (!std::isfinite(value)) continue;
            CHECK(std::strtod(cli::format_number(value).c_str(), nullptr) == value);
        }
    }

    TEST_CASE("sha256 test vectors") {
        CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    TEST_CASE("scenario hash ignores layout, comments and the worker count") {
        const Scenario base = parse_scenario(vacuum_config);
        const Scenario reordered = parse_scenario(
            "numerics.grid_points = 12\nnumerics.frequency_tol = 0.0001\n\n# reordered\nenvironment.t0_k = 300.0\n"
            "interface.kind = none\nsphere.rotation_ghz = 1\nsphere.radius_nm = 200\nsphere.material = yig\n"
            "numerics.workers = 3\n");
        CHECK(cli::scenario_hash(base) == cli::scenario_hash(reordered));
        Scenario hotter = base;
        hotter.sphere_temperature = 301.0;
        CHECK(cli::scenario_hash(base) != cli::scenario_hash(hotter));
    }

    TEST_CASE("spectral grid snaps onto features") {
        const std::vector<double> features{3.3e9, 7.77e10, 1e20};
        const std::vector<double> grid = cli::spectral_grid(1e9, 1e-3, 1e2, 51, features);
        REQUIRE(grid.size() == 51);
        CHECK(std::is_sorted(grid.begin(), grid.end()));
        CHECK(std::count(grid.begin(), grid.end(), 3.3e9) == 1);
        CHECK(std::count(grid.begin(), grid.end(), 7.77e10) == 1);
        CHECK(grid.front() == doctest::Approx(1e6).epsilon(1e-14));
        CHECK(grid.back() == doctest::Approx(1e11).epsilon(1e-14));
        const auto plain = log_grid(1e9, 1e-3, 1e2, 51);
        long moved = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) moved += grid[i] != plain[i];
        CHECK(moved == 2);
    }

    TEST_CASE("atomic writes leave no temporary behind") {
        const ScratchDir dir;
        const fs::path target = dir.path() / "result.csv";
        cli::write_atomically(target, "first\n");
        cli::write_atomically(target, "second\n");
        CHECK(read_file(target) == "second\n");
        long entries = std::distance(fs::directory_iterator(dir.path()), fs::directory_iterator());
        CHECK(entries == 1);
    }

    TEST_CASE("usage and scenario errors map to exit codes") {
        const ScratchDir dir;
        const Outcome missing = invoke({"power", "--config", (dir.path() / "absent.cfg").string()});
        CHECK(missing.code == cli::exit_usage);
        CHECK(missing.err.find("absent.cfg") != std::string::npos);

        const fs::path good = dir.write("vacuum.cfg", vacuum_config);
        CHECK(invoke({"power", "--config", good.string(), "--bogus"}).code == cli::exit_usage);
        CHECK(invoke({"power"}).code == cli::exit_usage);
        CHECK(invoke({}).code == cli::exit_usage);
        CHECK(invoke({"power", "--config", good.string(), "--tol", "0.9"}).code == cli::exit_usage);
        CHECK(invoke({"power", "--config", good.string(), "--format", "xml"}).code == cli::exit_usage);
        CHECK(invoke({"power", "--config", good.string(), "--points", "5"}).code == cli::exit_usage);

        const fs::path bad = dir.write("bad.cfg", std::string(vacuum_config) + "sphere.colour = red\n");
        const Outcome invalid = invoke({"validate", "--config", bad.string()});
        CHECK(invalid.code == cli::exit_invalid_scenario);
        CHECK(invalid.err.find("sphere.colour") != std::string::npos);
    }

    TEST_CASE("validate prints the canonical scenario and its hash") {
        const ScratchDir dir;
        const fs::path config = dir.write("vacuum.cfg", vacuum_config);
        const Outcome result = invoke({"validate", "--config", config.string(), "--workers", "2"});
        REQUIRE(result.code == cli::exit_ok);
        const Scenario parsed = parse_scenario(vacuum_config);
        CHECK(result.out.find(render_scenario(parsed)) == 0);
        CHECK(result.out.find("# scenario_sha256: " + cli::scenario_hash(parsed)) != std::string::npos);
    }

    TEST_CASE("power writes a manifest and a deterministic body") {
        const ScratchDir dir;
        const fs::path config = dir.write("vacuum.cfg", vacuum_config);
        const fs::path out_path = dir.path() / "power.csv";
        const Outcome first = invoke({"power", "--config", config.string(), "--out", out_path.string()});
        REQUIRE(first.code == cli::exit_ok);
        CHECK(first.out.empty());
        const std::string text = read_file(out_path);
        CHECK(text.find("# subcommand: power\n") == 0);
        CHECK(text.find("# scenario_sha256: " + cli::scenario_hash(parse_scenario(vacuum_config))) !=
              std::string::npos);
        CHECK(text.find("# converged: true") != std::string::npos);
        const bool capped = FluctuationModel(parse_scenario(vacuum_config)).radiated_power().window_capped;
        CHECK(text.find(std::string("# window_capped: ") + (capped ? "true" : "false")) != std::string::npos);
        CHECK(text.find("# wall_time_s: ") != std::string::npos);
        CHECK(csv_body(text).starts_with("power_w,error_estimate_w,window_rad_s\n"));

        const Outcome again = invoke({"power", "--config", config.string(), "--workers", "3"});
        REQUIRE(again.code == cli::exit_ok);
        CHECK(csv_body(again.out) == csv_body(text));

        std::istringstream body(csv_body(text));
        std::string header, row;
        std::getline(body, header);
        std::getline(body, row);
        CHECK(std::stod(row.substr(0, row.find(','))) == radiated_power(parse_scenario(vacuum_config)));
    }

    TEST_CASE("json output carries the same values") {
        const ScratchDir dir;
        const fs::path config = dir.write("vacuum.cfg", vacuum_config);
        const Outcome csv = invoke({"spectrum", "--config", config.string()});
        const Outcome json = invoke({"spectrum", "--config", config.string(), "--format", "json"});
        REQUIRE(csv.code == cli::exit_ok);
        REQUIRE(json.code == cli::exit_ok);
        const auto doc = nlohmann::json::parse(json.out);
        CHECK(doc["manifest"]["subcommand"] == "spectrum");
        CHECK(doc["columns"].size() == 5);
        REQUIRE(doc["rows"].size() == 12);
        std::istringstream body(csv_body(csv.out));
        std::string line;
        std::getline(body, line);
        for (const auto& row : doc["rows"]) {
            std::getline(body, line);
            CHECK(std::stod(line.substr(0, line.find(','))) == row[0].get<double>());
        }
        const Outcome torque = invoke({"torque", "--config", config.string(), "--offaxis"});
        REQUIRE(torque.code == cli::exit_ok);
        CHECK(csv_body(torque.out).starts_with("torque_z_nm,error_estimate_nm,window_rad_s,torque_x_nm,torque_y_nm\n"));
    }

    TEST_CASE("installed tool behaves like the library entry point") {
        const char* tool = std::getenv("VACFRIC_TOOL");
        if (tool == nullptr) return;  // only set when run through ctest
        const ScratchDir dir;
        const fs::path config = dir.write("vacuum.cfg", vacuum_config);
        const fs::path out_path = dir.path() / "validate.txt";
        const std::string command = std::string(tool) + " validate --config " + config.string() + " > " +
                                    out_path.string() + " 2>&1";
        CHECK(std::system(command.c_str()) == 0);
        CHECK(read_file(out_path) == invoke({"validate", "--config", config.string()}).out);
        const std::string failing = std::string(tool) + " power --config " + (dir.path() / "none.cfg").string() +
                                    " > /dev/null 2>&1";
        const int status = std::system(failing.c_str());
        CHECK(WEXITSTATUS(status) == cli::exit_usage);
    }
}
