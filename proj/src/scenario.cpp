#include "l2control/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include <Eigen/QR>

#include "l2control/errors.hpp"
#include "l2control/report.hpp"

namespace l2control {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

using nlohmann::json;

}  // namespace

ScenarioValidationError::ScenarioValidationError(std::vector<std::string> issues)
    : InvalidInput(join(issues)), issues_(std::move(issues)) {}

std::string ScenarioValidationError::join(const std::vector<std::string>& issues) {
  std::string msg = "scenario rejected:";
  for (const auto& issue : issues) msg += "\n  - " + issue;
  return msg;
}

BlockSystem Scenario::make_system(bool allow_dim1) const {
  std::vector<BlockMatrix> bm;
  bm.reserve(blocks.size());
  for (const Mat& b : blocks) bm.emplace_back(b);
  return BlockSystem(std::move(bm), BlockSystemOptions{kMaxBlockDim, allow_dim1});
}

BlockVector Scenario::make_x0() const { return BlockVector(x0, tail_bound); }

QuadratureSpec Scenario::make_quadrature() const {
  return QuadratureSpec(quad_panels_per_unit, quad_nodes);
}

namespace {

Scenario from_json(const json& j, bool allow_dim1) {
  std::vector<std::string> issues;
  Scenario s;

  if (!j.is_object()) {
    throw ScenarioValidationError({"top level must be a JSON object"});
  }

  if (!j.contains("version") || !j["version"].is_number_integer())
    issues.push_back("missing integer field 'version'");
  else if ((s.version = j["version"].get<int>()) != 1)
    issues.push_back("unsupported version " + std::to_string(s.version) + " (expected 1)");

  const int dim_min = allow_dim1 ? 1 : 2;

  if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty()) {
    issues.push_back("'blocks' must be a nonempty array");
  } else {
    for (std::size_t i = 0; i < j["blocks"].size(); ++i) {
      const json& jb = j["blocks"][i];
      const std::string tag = "block " + std::to_string(i);
      if (!jb.is_object() || !jb.contains("dim") || !jb.contains("rows") ||
          !jb["dim"].is_number_integer() || !jb["rows"].is_array()) {
        issues.push_back(tag + ": needs integer 'dim' and array 'rows'");
        continue;
      }
      const int d = jb["dim"].get<int>();
      if (d < dim_min || d > kMaxBlockDim) {
        issues.push_back(tag + ": dim " + std::to_string(d) + " outside [" +
                         std::to_string(dim_min) + ", " + std::to_string(kMaxBlockDim) + "]");
        continue;
      }
      Mat m(d, d);
      bool shape_ok = jb["rows"].size() == static_cast<std::size_t>(d);
      for (int r = 0; shape_ok && r < d; ++r) {
        const json& row = jb["rows"][r];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(d)) {
          shape_ok = false;
          break;
        }
        for (int c = 0; c < d; ++c) {
          if (!row[c].is_number()) {
            shape_ok = false;
            break;
          }
          m(r, c) = row[c].get<double>();
        }
      }
      if (!shape_ok) {
        issues.push_back(tag + ": 'rows' must be a " + std::to_string(d) + "x" +
                         std::to_string(d) + " numeric matrix");
        continue;
      }
      if (!m.allFinite()) {
        issues.push_back(tag + ": entries must be finite");
        continue;
      }
      const BlockMatrix bm{Mat(m)};
      if (!bm.stable())
        issues.push_back(tag + ": spectral abscissa " + fmt(bm.spectral_abscissa()) + " >= 0");
      s.blocks.push_back(std::move(m));
    }
  }

  if (!j.contains("x0") || !j["x0"].is_array()) {
    issues.push_back("'x0' must be an array of block value lists");
  } else {
    if (j.contains("blocks") && j["blocks"].is_array() &&
        j["x0"].size() != j["blocks"].size())
      issues.push_back("'x0' has " + std::to_string(j["x0"].size()) + " blocks, 'blocks' has " +
                       std::to_string(j["blocks"].size()));
    for (std::size_t i = 0; i < j["x0"].size(); ++i) {
      const json& jx = j["x0"][i];
      if (!jx.is_array() || jx.empty()) {
        issues.push_back("x0 block " + std::to_string(i) + ": must be a nonempty numeric list");
        continue;
      }
      Vec v(static_cast<Eigen::Index>(jx.size()));
      bool ok = jx.size() <= kMaxBlockDim;
      for (std::size_t k = 0; ok && k < jx.size(); ++k) {
        if (!jx[k].is_number()) {
          ok = false;
          break;
        }
        v(static_cast<Eigen::Index>(k)) = jx[k].get<double>();
      }
      if (!ok || !v.allFinite()) {
        issues.push_back("x0 block " + std::to_string(i) + ": must be a finite numeric list");
        continue;
      }
      if (i < s.blocks.size() && v.size() != s.blocks[i].rows())
        issues.push_back("x0 block " + std::to_string(i) + ": length " +
                         std::to_string(v.size()) + " does not match block dim " +
                         std::to_string(s.blocks[i].rows()));
      s.x0.push_back(std::move(v));
    }
  }

  if (!j.contains("tail_bound") || !j["tail_bound"].is_number())
    issues.push_back("missing numeric field 'tail_bound'");
  else if (!((s.tail_bound = j["tail_bound"].get<double>()) >= 0.0) ||
           !std::isfinite(s.tail_bound))
    issues.push_back("'tail_bound' must be finite and >= 0");

  if (!j.contains("constraint") || !j["constraint"].is_object()) {
    issues.push_back("missing object field 'constraint' ({theta} or {rho, sigma})");
  } else {
    const json& jc = j["constraint"];
    const bool has_theta = jc.contains("theta");
    const bool has_game = jc.contains("rho") || jc.contains("sigma");
    if (has_theta == has_game) {
      issues.push_back("'constraint' must hold exactly one of {theta} or {rho, sigma}");
    } else if (has_theta) {
      s.constraint.kind = Constraint::Kind::Theta;
      if (!jc["theta"].is_number() || !((s.constraint.theta = jc["theta"].get<double>()) > 0.0))
        issues.push_back("'constraint.theta' must be a positive number");
    } else {
      s.constraint.kind = Constraint::Kind::Game;
      if (!jc.contains("rho") || !jc.contains("sigma") || !jc["rho"].is_number() ||
          !jc["sigma"].is_number()) {
        issues.push_back("'constraint' game form needs numeric 'rho' and 'sigma'");
      } else {
        s.constraint.rho = jc["rho"].get<double>();
        s.constraint.sigma = jc["sigma"].get<double>();
        if (!(s.constraint.rho > 0.0)) issues.push_back("'constraint.rho' must be positive");
        if (!(s.constraint.sigma >= 0.0))
          issues.push_back("'constraint.sigma' must be nonnegative");
      }
    }
  }

  if (j.contains("quadrature")) {
    const json& jq = j["quadrature"];
    if (!jq.is_object() || !jq.contains("panels_per_unit_time") || !jq.contains("nodes") ||
        !jq["panels_per_unit_time"].is_number_integer() || !jq["nodes"].is_number_integer()) {
      issues.push_back("'quadrature' needs integer 'panels_per_unit_time' and 'nodes'");
    } else {
      s.quad_panels_per_unit = jq["panels_per_unit_time"].get<int>();
      s.quad_nodes = jq["nodes"].get<int>();
      try {
        QuadratureSpec check(s.quad_panels_per_unit, s.quad_nodes);
      } catch (const InvalidInput& e) {
        issues.push_back(e.what());
      }
    }
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      issues.push_back("'seed' must be a nonnegative integer");
    else
      s.seed = j["seed"].get<std::uint64_t>();
  }

  if (!issues.empty()) throw ScenarioValidationError(std::move(issues));
  return s;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, bool allow_dim1) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ScenarioValidationError({"malformed JSON"});
  return from_json(j, allow_dim1);
}

Scenario parse_scenario(const std::filesystem::path& path, bool allow_dim1) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioValidationError({"cannot open scenario file " + path.string()});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), allow_dim1);
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["version"] = s.version;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const Mat& b : s.blocks) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(b(r, c));
      rows.push_back(std::move(row));
    }
    j["blocks"].push_back({{"dim", static_cast<int>(b.rows())}, {"rows", std::move(rows)}});
  }
  j["x0"] = nlohmann::ordered_json::array();
  for (const Vec& v : s.x0) {
    nlohmann::ordered_json part = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) part.push_back(v(k));
    j["x0"].push_back(std::move(part));
  }
  j["tail_bound"] = s.tail_bound;
  if (s.constraint.kind == Constraint::Kind::Theta)
    j["constraint"] = {{"theta", s.constraint.theta}};
  else
    j["constraint"] = {{"rho", s.constraint.rho}, {"sigma", s.constraint.sigma}};
  j["quadrature"] = {{"panels_per_unit_time", s.quad_panels_per_unit}, {"nodes", s.quad_nodes}};
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

std::string scenario_to_text(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

void write_scenario(const Scenario& s, const std::filesystem::path& path) {
  write_text_file(path, scenario_to_text(s));
}

Scenario generate_scenario(const GeneratorParams& p) {
  if (p.n_blocks < 1) throw InvalidInput("generator: n_blocks must be >= 1");
  if (p.dim_min < 1 || p.dim_max > kMaxBlockDim || p.dim_min > p.dim_max)
    throw InvalidInput("generator: dim range must satisfy 1 <= dim_min <= dim_max <= " +
                       std::to_string(kMaxBlockDim));
  if (!(p.abscissa_lo <= p.abscissa_hi) || !(p.abscissa_hi < 0.0))
    throw InvalidInput("generator: abscissa range must lie strictly left of 0");
  if (!(p.decay_exponent > 0.5))
    throw DivergentTail("generator: decay exponent " + fmt(p.decay_exponent) +
                        " <= 1/2, the tail sum diverges");

  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<int> dim_dist(p.dim_min, p.dim_max);
  std::uniform_real_distribution<double> eig_dist(p.abscissa_lo, p.abscissa_hi);
  std::uniform_real_distribution<double> coupling(-0.5, 0.5);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Scenario s;
  s.constraint = p.constraint;
  s.seed = p.seed;
  s.blocks.reserve(p.n_blocks);
  s.x0.reserve(p.n_blocks);

  for (int i = 1; i <= p.n_blocks; ++i) {
    const int d = dim_dist(rng);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) t(k, k) = eig_dist(rng);
    for (int r = 0; r < d; ++r)
      for (int c = r + 1; c < d; ++c) t(r, c) = coupling(rng);

    Eigen::MatrixXd g(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) g(r, c) = gauss(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();

    s.blocks.emplace_back(Mat(q * t * q.transpose()));

    Vec v(d);
    for (int k = 0; k < d; ++k) v(k) = gauss(rng);
    const double norm = v.norm();
    const double weight = std::pow(static_cast<double>(i), -p.decay_exponent);
    s.x0.emplace_back(norm > 0.0 ? Vec(v * (weight / norm)) : Vec(Vec::Unit(d, 0) * weight));
  }

  // sum_{i>N} i^{-2p} <= integral_N^inf x^{-2p} dx = N^{1-2p} / (2p-1)
  s.tail_bound = std::sqrt(std::pow(static_cast<double>(p.n_blocks), 1.0 - 2.0 * p.decay_exponent) /
                           (2.0 * p.decay_exponent - 1.0));
  return s;
}

}  // namespace l2control
