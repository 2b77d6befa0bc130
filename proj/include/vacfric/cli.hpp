#pragma once

#include "vacfric/scenario.hpp"

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vacfric::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_invalid_scenario = 3;
inline constexpr int exit_not_converged = 4;

// args excludes the program name. Results go to --out or `out`; diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// Shortest text carrying 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

std::string sha256_hex(std::string_view data);

// Digest of the canonical rendering with execution-only settings (worker count) cleared.
std::string scenario_hash(const Scenario& scenario);

// Writes through a sibling temporary file and a rename.
void write_atomically(const std::filesystem::path& path, std::string_view content);

// Log-spaced grid around the reference with the nearest node moved onto each feature frequency.
std::vector<double> spectral_grid(double reference, double min_ratio, double max_ratio, int points,
                                  std::span<const double> features);

}  // namespace vacfric::cli
