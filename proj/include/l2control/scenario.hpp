#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l2control/block_system.hpp"
#include "l2control/quadrature.hpp"
#include "l2control/types.hpp"

namespace l2control {

// Which problem the scenario poses: a steering budget theta, or a game with
// budgets rho/sigma.  The variant gates the applicable subcommands.
struct Constraint {
  enum class Kind { Theta, Game };
  Kind kind = Kind::Theta;
  double theta = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
};

// File-form problem instance (JSON, schema version 1).
struct Scenario {
  int version = 1;
  std::vector<Mat> blocks;
  std::vector<Vec> x0;
  double tail_bound = 0.0;
  Constraint constraint;
  int quad_panels_per_unit = 32;
  int quad_nodes = 8;
  std::optional<std::uint64_t> seed;

  BlockSystem make_system(bool allow_dim1 = false) const;
  BlockVector make_x0() const;
  QuadratureSpec make_quadrature() const;
};

// Parse and validate; collects every validation issue before throwing
// ScenarioValidationError, so a bad file reports all its problems at once.
Scenario parse_scenario(const std::filesystem::path& path, bool allow_dim1 = false);
Scenario parse_scenario_text(const std::string& text, bool allow_dim1 = false);

nlohmann::ordered_json scenario_to_json(const Scenario& scenario);
std::string scenario_to_text(const Scenario& scenario);

// Atomic write: temp file in the same directory, then rename.
void write_scenario(const Scenario& scenario, const std::filesystem::path& path);

struct GeneratorParams {
  int n_blocks = 100;
  int dim_min = 2;
  int dim_max = 4;
  double abscissa_lo = -3.0;
  double abscissa_hi = -0.3;
  double decay_exponent = 1.0;  // |x0_i| = i^{-p}; needs p > 1/2 for an l2 tail
  std::uint64_t seed = 0;
  Constraint constraint{Constraint::Kind::Theta, 1.0, 0.0, 0.0};
};

// Deterministic instance builder.  Blocks are Q T Q^T with T upper
// triangular whose diagonal is drawn inside the abscissa window, so the
// spectral abscissa is controlled exactly and stability holds by
// construction; the tail bound is the integral estimate of sum_{i>N} i^{-2p}.
Scenario generate_scenario(const GeneratorParams& params);

}  // namespace l2control
