#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l2control/block_system.hpp"
#include "l2control/control_signal.hpp"
#include "l2control/null_control.hpp"
#include "l2control/parallel.hpp"
#include "l2control/quadrature.hpp"

namespace l2control {

// Pursuit game data: pursuer budget rho, evader budget sigma, plus the plant.
// The capture guarantee needs rho > sigma; violating that is
// rejected here with the dedicated error so callers can tell "the game is not
// winnable this way" apart from garbage input.
class GameConfig {
 public:
  GameConfig(BlockSystem system, BlockVector x0, double rho, double sigma);

  const BlockSystem& system() const { return system_; }
  const BlockVector& x0() const { return x0_; }
  double rho() const { return rho_; }
  double sigma() const { return sigma_; }

 private:
  BlockSystem system_;
  BlockVector x0_;
  double rho_;
  double sigma_;
};

// Admissible evader behaviors.  Every kind is normalized after shaping so its
// realized energy over the game horizon is exactly sigma^2 (zero kind and
// degenerate horizons give 0 <= sigma^2); amplitude in [0, 1] spends a
// fraction of the budget.
class EvaderStrategy {
 public:
  enum class Kind { Zero, ConstantDirection, Sinusoid, GreedyFlee, SeededRandom };

  static EvaderStrategy zero();
  // direction defaults to the x0 direction when omitted
  static EvaderStrategy constant_direction(std::optional<BlockVector> direction = {},
                                           double amplitude = 1.0);
  static EvaderStrategy sinusoid(double frequency, double phase, double amplitude = 1.0);
  static EvaderStrategy greedy_flee(double gain = 1.0);
  static EvaderStrategy seeded_random(std::uint64_t seed, int pieces = 16);

  // CLI names: zero | constant | sinusoid | greedy | random.  The seed feeds
  // the random kind and perturbs the sinusoid's frequency/phase.
  static EvaderStrategy from_name(const std::string& name, std::uint64_t seed);

  Kind kind() const { return kind_; }

  // Concrete admissible signal on [0, horizon].  The greedy kind samples the
  // closed-loop trajectory, which is what the feedforward argument is for.
  ControlSignal materialize(const GameConfig& config, double horizon,
                            const NullControl& feedforward, const QuadratureSpec& quad,
                            Exec exec = Exec::Parallel) const;

 private:
  explicit EvaderStrategy(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::optional<BlockVector> direction_;
  double frequency_ = 1.0;
  double phase_ = 0.0;
  double amplitude_ = 1.0;
  double gain_ = 1.0;
  std::uint64_t seed_ = 0;
  int pieces_ = 16;
};

struct GameResult {
  double vartheta1 = 0.0;
  double capture_norm = 0.0;  // retained |x(vartheta1)|
  double pursuer_energy = 0.0;
  double evader_energy = 0.0;
  bool pursuer_admissible = true;
  bool evader_admissible = true;
  std::vector<std::pair<double, double>> trajectory;  // (t, total norm)
};

// Guaranteed pursuit horizon: optimal_time at budget rho - sigma.
double pursuit_time(const GameConfig& config, const QuadratureSpec& quad, double tol = 1e-10,
                    Exec exec = Exec::Parallel);

// The strategy u(t, v) = v + omega(t), omega the null control at vartheta1.
// Self-contained form per the operation contract; play_game keeps the
// feedforward around instead of rebuilding it per call.
BlockVector pursuer_strategy(const GameConfig& config, double vartheta1, double t,
                             const BlockVector& v_t, const QuadratureSpec& quad,
                             Exec exec = Exec::Parallel);
BlockVector pursuer_strategy(const NullControl& feedforward, double t, const BlockVector& v_t);

// Full match: materializes the evader, forms u = v + omega, and propagates
// the honest closed loop  dx = Ax + u - v  (the cancellation is exercised in
// floating point, not assumed).
GameResult play_game(const GameConfig& config, const EvaderStrategy& evader,
                     const QuadratureSpec& quad, int samples = 33, double tol = 1e-10,
                     Exec exec = Exec::Parallel);

// Same match against an explicit evader signal (horizon must cover the game).
GameResult play_game_with_signal(const GameConfig& config, const ControlSignal& evader,
                                 const QuadratureSpec& quad, int samples = 33,
                                 double tol = 1e-10, Exec exec = Exec::Parallel);

}  // namespace l2control
