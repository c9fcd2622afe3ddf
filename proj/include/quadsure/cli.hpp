#pragma once

// Batch front end. Subcommands: incompat, verify, standard-form, entropy,
// maximize. Exit codes: 0 everything satisfied, 1 an inequality is violated
// or no standard form exists, 2 bad input or domain error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "quadsure/coeffspace.hpp"
#include "quadsure/moments.hpp"
#include "quadsure/states.hpp"

namespace quadsure::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kInputError = 2 };

struct RunConfig {
  double hbar = 1.0;
  int grid_m = 2048;
  double grid_halfwidth = 16.0;  // units of sqrt(hbar)
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  double tol = kDefaultTolerance;
  std::string output;  // empty: stdout
  std::string format = "json";

  GridSpec grid() const { return GridSpec::symmetric(grid_m, grid_halfwidth, hbar); }
  /// Throws DomainError for out-of-range fields.
  void validate() const;
};

/// Fields present in `j` replace those of `base`; unknown keys are rejected.
RunConfig merge_config(RunConfig base, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path, RunConfig base = {});
nlohmann::json to_json(const RunConfig& config);

/// Parses "1,2.5,-3". Throws DomainError on empty or malformed entries.
std::vector<double> parse_list(const std::string& text);

/// Random admissible Gaussian: rotated, squeezed, possibly thermal, with a
/// random mean.
GaussianState random_gaussian(std::uint64_t seed, double hbar = 1.0);
/// N uniform in [n_min, n_max], entries standard normal.
CoefficientPair random_pair(std::uint64_t seed, int n_min = 2, int n_max = 8);
/// 2 to 4 random Gaussian components with random weights.
MixtureState random_mixture(std::uint64_t seed, double hbar = 1.0);

struct UniversalityCase {
  std::size_t index = 0;
  bool mixture = false;
  std::vector<BoundReport> reports;  // linear, sum, product
};

struct UniversalityScan {
  std::size_t gaussians = 0;
  std::size_t mixtures = 0;
  std::size_t linear_violations = 0;
  std::size_t sum_violations = 0;
  std::size_t product_violations = 0;
  std::vector<UniversalityCase> violating;  // in case order
  std::size_t total_violations() const { return linear_violations + sum_violations + product_violations; }
};

/// `gaussians` random states and `mixtures` random mixtures, each paired
/// with a random coefficient pair and random linear-relation parameters.
/// Case i draws from derive_seed(seed, i); mixtures follow the Gaussians.
UniversalityScan universality_scan(std::size_t gaussians, std::size_t mixtures, std::uint64_t seed, double tol,
                                   double hbar = 1.0);

nlohmann::json to_json(const UniversalityScan& scan);

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quadsure::cli
