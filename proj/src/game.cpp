#include "l2control/game.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "l2control/dynamics.hpp"
#include "l2control/errors.hpp"

namespace l2control {

GameConfig::GameConfig(BlockSystem system, BlockVector x0, double rho, double sigma)
    : system_(std::move(system)), x0_(std::move(x0)), rho_(rho), sigma_(sigma) {
  check_same_shape(system_, x0_);
  if (!(rho_ > 0.0) || !std::isfinite(rho_))
    throw InvalidInput("game: rho must be positive and finite");
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_))
    throw InvalidInput("game: sigma must be nonnegative and finite");
  if (!(rho_ > sigma_))
    throw PursuitNotGuaranteed("game: rho = " + std::to_string(rho_) + " <= sigma = " +
                               std::to_string(sigma_) + "; capture is not guaranteed");
}

EvaderStrategy EvaderStrategy::zero() { return EvaderStrategy(Kind::Zero); }

EvaderStrategy EvaderStrategy::constant_direction(std::optional<BlockVector> direction,
                                                  double amplitude) {
  if (direction && direction->retained_norm() == 0.0)
    throw InvalidInput("evader: constant direction must be nonzero");
  if (!(amplitude >= 0.0 && amplitude <= 1.0))
    throw InvalidInput("evader: amplitude must lie in [0, 1]");
  EvaderStrategy s(Kind::ConstantDirection);
  s.direction_ = std::move(direction);
  s.amplitude_ = amplitude;
  return s;
}

EvaderStrategy EvaderStrategy::sinusoid(double frequency, double phase, double amplitude) {
  if (!(frequency >= 0.0) || !std::isfinite(frequency))
    throw InvalidInput("evader: frequency must be nonnegative and finite");
  if (!std::isfinite(phase)) throw InvalidInput("evader: phase must be finite");
  if (!(amplitude >= 0.0 && amplitude <= 1.0))
    throw InvalidInput("evader: amplitude must lie in [0, 1]");
  EvaderStrategy s(Kind::Sinusoid);
  s.frequency_ = frequency;
  s.phase_ = phase;
  s.amplitude_ = amplitude;
  return s;
}

EvaderStrategy EvaderStrategy::greedy_flee(double gain) {
  if (!(gain > 0.0) || !std::isfinite(gain))
    throw InvalidInput("evader: gain must be positive and finite");
  EvaderStrategy s(Kind::GreedyFlee);
  s.gain_ = gain;
  return s;
}

EvaderStrategy EvaderStrategy::seeded_random(std::uint64_t seed, int pieces) {
  if (pieces < 1 || pieces > 4096) throw InvalidInput("evader: pieces must be in [1, 4096]");
  EvaderStrategy s(Kind::SeededRandom);
  s.seed_ = seed;
  s.pieces_ = pieces;
  return s;
}

EvaderStrategy EvaderStrategy::from_name(const std::string& name, std::uint64_t seed) {
  if (name == "zero") return zero();
  if (name == "constant") return constant_direction();
  if (name == "sinusoid")
    return sinusoid(1.0 + 0.25 * static_cast<double>(seed % 7),
                    0.1 * static_cast<double>(seed % 63));
  if (name == "greedy") return greedy_flee();
  if (name == "random") return seeded_random(seed);
  throw InvalidInput("evader: unknown kind '" + name +
                     "' (expected zero|constant|sinusoid|greedy|random)");
}

namespace {

// Direction of x0, blockwise, unit total norm.
std::vector<Vec> unit_direction(const BlockVector& x) {
  const double norm = x.retained_norm();
  std::vector<Vec> parts;
  parts.reserve(x.block_count());
  for (int i = 0; i < x.block_count(); ++i) parts.push_back(Vec(x.part(i) / norm));
  return parts;
}

ControlSignal normalized_piecewise(std::vector<double> grid, std::vector<BlockVector> values,
                                   double energy_target) {
  double raw = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    double piece = 0.0;
    for (int i = 0; i < values[j].block_count(); ++i) piece += values[j].part(i).squaredNorm();
    raw += (grid[j + 1] - grid[j]) * piece;
  }
  if (!(raw > 0.0)) {
    std::vector<int> dims;
    for (int i = 0; i < values.front().block_count(); ++i)
      dims.push_back(static_cast<int>(values.front().part(i).size()));
    return ControlSignal::zero(dims, grid.back());
  }
  const double scale = std::sqrt(energy_target / raw);
  for (BlockVector& v : values)
    for (int i = 0; i < v.block_count(); ++i) v.part(i) *= scale;
  return ControlSignal::piecewise_constant(std::move(grid), std::move(values));
}

}  // namespace

ControlSignal EvaderStrategy::materialize(const GameConfig& config, double horizon,
                                          const NullControl& feedforward,
                                          const QuadratureSpec& quad, Exec exec) const {
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw InvalidHorizon("evader: horizon must be finite and nonnegative");
  const std::vector<int>& dims = config.system().dims();
  const double budget = amplitude_ * config.sigma();
  if (horizon == 0.0 || budget == 0.0 || kind_ == Kind::Zero)
    return ControlSignal::zero(dims, horizon);
  const double target = budget * budget;

  switch (kind_) {
    case Kind::ConstantDirection: {
      const BlockVector& ref = direction_ ? *direction_ : config.x0();
      if (ref.block_count() != static_cast<int>(dims.size()))
        throw InvalidInput("evader: direction shape mismatch");
      if (ref.retained_norm() == 0.0) return ControlSignal::zero(dims, horizon);
      std::vector<Vec> dir = unit_direction(ref);
      const double value = std::sqrt(target / horizon);
      for (Vec& p : dir) p *= value;
      return ControlSignal::piecewise_constant({0.0, horizon},
                                               {BlockVector(std::move(dir))});
    }
    case Kind::Sinusoid: {
      if (config.x0().retained_norm() == 0.0) return ControlSignal::zero(dims, horizon);
      const auto dir = unit_direction(config.x0());
      const double w = 2.0 * std::numbers::pi * frequency_;
      // integral of sin^2(w t + phase) over [0, horizon], closed form
      const double raw =
          w > 0.0 ? horizon / 2.0 -
                        (std::sin(2.0 * (w * horizon + phase_)) - std::sin(2.0 * phase_)) /
                            (4.0 * w)
                  : horizon * std::sin(phase_) * std::sin(phase_);
      if (!(raw > 1e-300)) return ControlSignal::zero(dims, horizon);
      const double scale = std::sqrt(target / raw);
      const double phase = phase_;
      return ControlSignal::analytic(dims, horizon, [dir, scale, w, phase](int i, double t) {
        return Vec(scale * std::sin(w * t + phase) * dir[i]);
      });
    }
    case Kind::GreedyFlee: {
      // Push along the state direction, sampled at piece midpoints of the
      // (evader-independent) closed loop; the scalar gain washes out in the
      // final normalization and is kept only to shape degenerate mixes.
      const int pieces = 16;
      std::vector<double> grid(pieces + 1);
      for (int j = 0; j <= pieces; ++j) grid[j] = horizon * j / pieces;
      const ControlSignal omega = feedforward.signal();
      std::vector<BlockVector> values;
      values.reserve(pieces);
      for (int j = 0; j < pieces; ++j) {
        const double t_mid = horizon * (j + 0.5) / pieces;
        BlockVector x = propagate(config.system(), config.x0(), omega, t_mid, quad, 0.0, exec);
        std::vector<Vec> parts;
        parts.reserve(x.block_count());
        for (int i = 0; i < x.block_count(); ++i) parts.push_back(Vec(-gain_ * x.part(i)));
        values.emplace_back(std::move(parts));
      }
      return normalized_piecewise(std::move(grid), std::move(values), target);
    }
    case Kind::SeededRandom: {
      std::mt19937_64 rng(seed_);
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::vector<double> grid(pieces_ + 1);
      for (int j = 0; j <= pieces_; ++j) grid[j] = horizon * j / pieces_;
      std::vector<BlockVector> values;
      values.reserve(pieces_);
      for (int j = 0; j < pieces_; ++j) {
        std::vector<Vec> parts;
        parts.reserve(dims.size());
        for (int d : dims) {
          Vec p(d);
          for (int k = 0; k < d; ++k) p(k) = gauss(rng);
          parts.push_back(std::move(p));
        }
        values.emplace_back(std::move(parts));
      }
      return normalized_piecewise(std::move(grid), std::move(values), target);
    }
    case Kind::Zero:
      break;  // handled above
  }
  return ControlSignal::zero(dims, horizon);
}

double pursuit_time(const GameConfig& config, const QuadratureSpec& quad, double tol,
                    Exec exec) {
  return optimal_time(config.system(), config.x0(), config.rho() - config.sigma(), quad, tol,
                      exec);
}

BlockVector pursuer_strategy(const NullControl& feedforward, double t, const BlockVector& v_t) {
  std::vector<Vec> parts;
  parts.reserve(v_t.block_count());
  for (int i = 0; i < v_t.block_count(); ++i)
    parts.push_back(Vec(v_t.part(i) + feedforward.eval_block(i, t)));
  return BlockVector(std::move(parts), v_t.tail_bound());
}

BlockVector pursuer_strategy(const GameConfig& config, double vartheta1, double t,
                             const BlockVector& v_t, const QuadratureSpec& quad, Exec exec) {
  check_same_shape(config.system(), v_t);
  if (!(t >= 0.0) || t > vartheta1)
    throw InvalidHorizon("pursuer strategy: t outside [0, vartheta1]");
  const NullControl omega = null_control(config.system(), config.x0(), vartheta1, quad, exec);
  return pursuer_strategy(omega, t, v_t);
}

namespace {

GameResult run_match(const GameConfig& config, const ControlSignal& v, double vartheta1,
                     const NullControl& feedforward, const QuadratureSpec& quad, int samples,
                     Exec exec) {
  if (samples < 2) throw InvalidInput("game: needs at least 2 trajectory samples");

  GameResult result;
  result.vartheta1 = vartheta1;

  const ControlSignal omega = feedforward.signal();
  const ControlSignal u = v.scaled_sum(1.0, omega, 1.0);
  // The plant sees u - v.  Evaluating it this way (rather than substituting
  // omega) exercises the cancellation numerically.
  const ControlSignal w = u.scaled_sum(1.0, v, -1.0);

  result.trajectory.reserve(samples);
  for (int j = 0; j < samples; ++j) {
    const double t = vartheta1 * j / (samples - 1);
    const BlockVector x = propagate(config.system(), config.x0(), w, t, quad, 0.0, exec);
    result.trajectory.emplace_back(t, x.total_norm());
    if (j == samples - 1) result.capture_norm = x.retained_norm();
  }

  result.pursuer_energy = l2_energy(u, quad, exec);
  result.evader_energy = l2_energy(v, quad, exec);
  result.pursuer_admissible = result.pursuer_energy <= config.rho() * config.rho() + 1e-9;
  result.evader_admissible = result.evader_energy <= config.sigma() * config.sigma() + 1e-9;
  return result;
}

}  // namespace

GameResult play_game(const GameConfig& config, const EvaderStrategy& evader,
                     const QuadratureSpec& quad, int samples, double tol, Exec exec) {
  const double vartheta1 = pursuit_time(config, quad, tol, exec);
  if (vartheta1 == 0.0) {
    GameResult result;
    result.trajectory.emplace_back(0.0, config.x0().total_norm());
    return result;
  }
  const NullControl feedforward =
      null_control(config.system(), config.x0(), vartheta1, quad, exec);
  const ControlSignal v = evader.materialize(config, vartheta1, feedforward, quad, exec);
  return run_match(config, v, vartheta1, feedforward, quad, samples, exec);
}

GameResult play_game_with_signal(const GameConfig& config, const ControlSignal& evader,
                                 const QuadratureSpec& quad, int samples, double tol,
                                 Exec exec) {
  if (evader.dims() != config.system().dims())
    throw InvalidInput("game: evader signal shape mismatch");
  const double vartheta1 = pursuit_time(config, quad, tol, exec);
  if (evader.horizon() < vartheta1)
    throw InvalidHorizon("game: evader signal horizon " + std::to_string(evader.horizon()) +
                         " does not cover the game horizon " + std::to_string(vartheta1));
  if (vartheta1 == 0.0) {
    GameResult result;
    result.trajectory.emplace_back(0.0, config.x0().total_norm());
    return result;
  }
  const NullControl feedforward =
      null_control(config.system(), config.x0(), vartheta1, quad, exec);
  return run_match(config, evader, vartheta1, feedforward, quad, samples, exec);
}

}  // namespace l2control
