#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "l2control/errors.hpp"
#include "l2control/report.hpp"
#include "l2control/scenario.hpp"

using namespace l2control;

namespace {

const char* kMinimal = R"({
  "version": 1,
  "blocks": [{"dim": 2, "rows": [[-1, 0], [0, -1]]}],
  "x0": [[1, 0]],
  "tail_bound": 0,
  "constraint": {"theta": 1}
})";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("l2control_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("minimal scenario parses into a working system") {
  const Scenario s = parse_scenario_text(kMinimal);
  CHECK(s.version == 1);
  REQUIRE(s.blocks.size() == 1);
  CHECK(s.blocks[0].rows() == 2);
  CHECK(s.tail_bound == 0.0);
  CHECK(s.constraint.kind == Constraint::Kind::Theta);
  CHECK(s.constraint.theta == 1.0);
  CHECK(s.quad_panels_per_unit == 32);
  CHECK(s.quad_nodes == 8);
  CHECK_FALSE(s.seed.has_value());

  const BlockSystem sys = s.make_system();
  CHECK(sys.block_count() == 1);
  const BlockVector x0 = s.make_x0();
  CHECK(x0.part(0)(0) == 1.0);
  CHECK(s.make_quadrature().panels_per_unit() == 32);
}

TEST_CASE("unstable blocks are reported with the offending index and abscissa") {
  const char* rot = R"({
    "version": 1,
    "blocks": [{"dim": 2, "rows": [[0, 1], [-1, 0]]}],
    "x0": [[1, 0]],
    "tail_bound": 0,
    "constraint": {"theta": 1}
  })";
  try {
    parse_scenario_text(rot);
    FAIL("expected rejection");
  } catch (const ScenarioValidationError& e) {
    REQUIRE(e.issues().size() == 1);
    CHECK(e.issues()[0] == "block 0: spectral abscissa 0 >= 0");
  }
}

TEST_CASE("validation collects every issue before throwing") {
  const char* broken = R"({
    "version": 3,
    "blocks": [{"dim": 2, "rows": [[0, 1], [-1, 0]]}, {"dim": 9, "rows": []}],
    "x0": [[1, 0]],
    "tail_bound": -2,
    "constraint": {"theta": 1, "rho": 2, "sigma": 1},
    "quadrature": {"panels_per_unit_time": 0, "nodes": 8}
  })";
  try {
    parse_scenario_text(broken);
    FAIL("expected rejection");
  } catch (const ScenarioValidationError& e) {
    CHECK(e.issues().size() >= 6);
    const std::string all = e.what();
    CHECK(all.find("unsupported version") != std::string::npos);
    CHECK(all.find("spectral abscissa") != std::string::npos);
    CHECK(all.find("dim 9") != std::string::npos);
    CHECK(all.find("tail_bound") != std::string::npos);
    CHECK(all.find("exactly one of") != std::string::npos);
    CHECK(all.find("panels per unit") != std::string::npos);
    CHECK(all.find("'x0' has 1 blocks") != std::string::npos);
  }
}

TEST_CASE("malformed json and shape mismatches are rejected") {
  CHECK_THROWS_AS(parse_scenario_text("{not json"), ScenarioValidationError);
  CHECK_THROWS_AS(parse_scenario_text("[1, 2]"), ScenarioValidationError);

  const char* short_x0 = R"({
    "version": 1,
    "blocks": [{"dim": 2, "rows": [[-1, 0], [0, -1]]}],
    "x0": [[1, 0, 0]],
    "tail_bound": 0,
    "constraint": {"theta": 1}
  })";
  try {
    parse_scenario_text(short_x0);
    FAIL("expected rejection");
  } catch (const ScenarioValidationError& e) {
    CHECK(std::string(e.what()).find("does not match block dim") != std::string::npos);
  }
}

TEST_CASE("scalar blocks are opt-in") {
  const char* dim1 = R"({
    "version": 1,
    "blocks": [{"dim": 1, "rows": [[-1]]}],
    "x0": [[1]],
    "tail_bound": 0,
    "constraint": {"theta": 1}
  })";
  CHECK_THROWS_AS(parse_scenario_text(dim1, false), ScenarioValidationError);
  const Scenario s = parse_scenario_text(dim1, true);
  CHECK(s.blocks[0].rows() == 1);
  CHECK_NOTHROW(s.make_system(true));
}

TEST_CASE("game constraints parse and validate") {
  const char* game = R"({
    "version": 1,
    "blocks": [{"dim": 2, "rows": [[-1, 0], [0, -1]]}],
    "x0": [[1, 0]],
    "tail_bound": 0,
    "constraint": {"rho": 2, "sigma": 1}
  })";
  const Scenario s = parse_scenario_text(game);
  CHECK(s.constraint.kind == Constraint::Kind::Game);
  CHECK(s.constraint.rho == 2.0);
  CHECK(s.constraint.sigma == 1.0);

  const char* bad = R"({
    "version": 1,
    "blocks": [{"dim": 2, "rows": [[-1, 0], [0, -1]]}],
    "x0": [[1, 0]],
    "tail_bound": 0,
    "constraint": {"rho": -2, "sigma": -1}
  })";
  CHECK_THROWS_AS(parse_scenario_text(bad), ScenarioValidationError);
}

TEST_CASE("serialization round-trips bit for bit") {
  GeneratorParams params;
  params.n_blocks = 7;
  params.seed = 42;
  const Scenario s = generate_scenario(params);

  const Scenario back = parse_scenario_text(scenario_to_text(s));
  REQUIRE(back.blocks.size() == s.blocks.size());
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    CHECK((back.blocks[i].array() == s.blocks[i].array()).all());
    CHECK((back.x0[i].array() == s.x0[i].array()).all());
  }
  CHECK(back.tail_bound == s.tail_bound);
  CHECK(back.seed == s.seed);

  // and through the filesystem, write -> parse -> write is byte-identical
  TempDir tmp;
  const auto p1 = tmp.path / "a.json";
  const auto p2 = tmp.path / "b.json";
  write_scenario(s, p1);
  write_scenario(parse_scenario(p1), p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK_FALSE(std::filesystem::exists(tmp.path / "a.json.tmp"));
}

TEST_CASE("awkward decimals survive the round trip") {
  Scenario s = parse_scenario_text(kMinimal);
  s.blocks[0](0, 1) = 0.1 + 0.2;  // 0.30000000000000004
  s.blocks[0](1, 0) = -(0.1 + 0.2);
  s.x0[0](1) = 1.0 / 3.0;
  const Scenario back = parse_scenario_text(scenario_to_text(s));
  CHECK(back.blocks[0](0, 1) == 0.1 + 0.2);
  CHECK(back.x0[0](1) == 1.0 / 3.0);
}

TEST_CASE("generator is deterministic and controls its spectra") {
  GeneratorParams params;
  params.n_blocks = 20;
  params.seed = 7;
  const Scenario a = generate_scenario(params);
  const Scenario b = generate_scenario(params);
  CHECK(scenario_to_text(a) == scenario_to_text(b));

  params.seed = 8;
  CHECK(scenario_to_text(generate_scenario(params)) != scenario_to_text(a));

  // stability by construction, dims inside the requested range
  const BlockSystem sys = a.make_system();
  for (const BlockMatrix& blk : sys.blocks()) {
    CHECK(blk.spectral_abscissa() < -0.3 + 1e-9);
    CHECK(blk.spectral_abscissa() > -3.0 - 1e-9);
    CHECK(blk.dim() >= 2);
    CHECK(blk.dim() <= 4);
  }

  // block norms follow the i^{-p} weights
  for (std::size_t i = 0; i < a.x0.size(); ++i)
    CHECK(a.x0[i].norm() == doctest::Approx(1.0 / (i + 1.0)).epsilon(1e-12));
}

TEST_CASE("generator tail bound uses the integral estimate") {
  GeneratorParams params;
  params.n_blocks = 100;
  params.decay_exponent = 1.0;
  CHECK(generate_scenario(params).tail_bound == doctest::Approx(0.1).epsilon(1e-12));

  params.decay_exponent = 0.5;
  CHECK_THROWS_AS(generate_scenario(params), DivergentTail);
  params.decay_exponent = 0.2;
  CHECK_THROWS_AS(generate_scenario(params), DivergentTail);
}

TEST_CASE("full-precision formatting round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 0.5493061443340549, 1e-300, 12345.6789}) {
    const std::string text = format_full(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(format_full(0.5) == "0.5");
}

TEST_CASE("trajectory csv carries the documented header") {
  std::vector<TrajectoryRow> rows;
  rows.push_back({0.0, 1.0, {0.6, 0.8}});
  rows.push_back({0.5, 0.25, {0.15, 0.2}});

  const std::string plain = trajectory_csv(rows, false);
  CHECK(plain.substr(0, 13) == "t,total_norm\n");
  CHECK(plain.find("0.5,0.25\n") != std::string::npos);

  const std::string per_block = trajectory_csv(rows, true);
  CHECK(per_block.substr(0, 29) == "t,total_norm,block_0,block_1\n");
  CHECK(per_block.find("0,1,0.59999999999999998,0.80000000000000004\n") != std::string::npos);
}

TEST_CASE("run reports serialize their sections in order") {
  RunReport r;
  r.command = "demo";
  r.tool_version = "1.2.3";
  r.parameters["alpha"] = 1.5;
  r.parameters["name"] = "thing";
  r.results["value"] = 42;
  r.wall_time_ms = 3.25;

  const auto j = r.to_json();
  CHECK(j["command"] == "demo");
  CHECK(j["parameters"]["alpha"] == 1.5);
  CHECK(j["results"]["value"] == 42);
  const std::string keys = j.dump();
  CHECK(keys.find("\"command\"") < keys.find("\"parameters\""));
  CHECK(keys.find("\"parameters\"") < keys.find("\"results\""));

  const std::string text = r.to_text();
  CHECK(text.find("command: demo\n") != std::string::npos);
  CHECK(text.find("  alpha: 1.5\n") != std::string::npos);
  CHECK(text.find("  name: thing\n") != std::string::npos);
  CHECK(text.find("wall_time_ms: 3.25\n") != std::string::npos);
}

TEST_CASE("atomic text writes leave no temp files behind") {
  TempDir tmp;
  const auto p = tmp.path / "out.csv";
  write_text_file(p, "hello\n");
  CHECK(slurp(p) == "hello\n");
  CHECK_FALSE(std::filesystem::exists(tmp.path / "out.csv.tmp"));
  write_text_file(p, "replaced\n");
  CHECK(slurp(p) == "replaced\n");
}
