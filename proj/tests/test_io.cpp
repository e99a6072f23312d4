#include <doctest.h>

#include <random>

#include "nlpsa/error.hpp"
#include "nlpsa/io.hpp"
#include "test_support.hpp"

using namespace nlpsa;
using namespace nlpsa::testing;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an nlpsa::Error");
  return ErrorKind::InvalidArgument;
}

Grid awkward_grid() {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1e3);
  Grid grid(5, 3);
  for (auto& v : grid.values()) v = g(rng) / 7.0;
  grid[0] = 0.1;
  grid[1] = -0.0;
  grid[2] = 1e-310;  // subnormal
  grid[3] = 1.7976931348623157e308;
  grid[4] = kPi;
  return grid;
}

}  // namespace

TEST_CASE("grid CSV round trip is bit exact") {
  const auto grid = awkward_grid();
  const auto text = io::grid_to_csv(grid);
  const auto back = io::grid_from_csv(text);
  CHECK(back == grid);
  CHECK(std::signbit(back[1]));

  const auto dir = scratch_dir("io_grid");
  io::write_grid_csv(dir / "g.csv", grid);
  CHECK(io::read_grid_csv(dir / "g.csv") == grid);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("malformed CSV") {
  CHECK(kind_of([] { io::grid_from_csv("1,2\n3\n"); }) == ErrorKind::FormatError);
  CHECK(kind_of([] { io::grid_from_csv("1,abc\n"); }) == ErrorKind::FormatError);
  CHECK(kind_of([] { io::grid_from_csv(""); }) == ErrorKind::FormatError);
  CHECK(io::grid_from_csv("1,2\n3,4").width() == 2);
  CHECK(kind_of([] { io::read_grid_csv("/nonexistent/nlpsa/grid.csv"); }) ==
        ErrorKind::FileNotFound);
}

TEST_CASE("design JSON round trip") {
  const auto coeffs = nonuniform_design();
  const auto doc = io::design_to_json(coeffs);
  const auto back = io::design_from_json(io::json::parse(doc.dump()));
  CHECK(back.values == coeffs.values);
  CHECK(back.steps.values().size() == 7);
  for (std::size_t k = 0; k < 7; ++k) CHECK(back.steps[k] == coeffs.steps[k]);
  CHECK(back.spec.zeros() == coeffs.spec.zeros());
  CHECK(back.condition_estimate == coeffs.condition_estimate);

  const auto dir = scratch_dir("io_design");
  io::write_design(dir / "design.json", coeffs);
  CHECK(io::read_design(dir / "design.json").values == coeffs.values);

  auto tampered = doc;
  tampered["coefficients"][2]["re"] = tampered["coefficients"][2]["re"].get<double>() + 1e-6;
  CHECK(kind_of([&] { io::design_from_json(tampered); }) == ErrorKind::FormatError);

  auto missing = doc;
  missing.erase("steps");
  CHECK(kind_of([&] { io::design_from_json(missing); }) == ErrorKind::FormatError);

  io::write_text(dir / "broken.json", "{ not json");
  CHECK(kind_of([&] { io::read_design(dir / "broken.json"); }) == ErrorKind::FormatError);
  CHECK(kind_of([&] { io::read_design(dir / "absent.json"); }) == ErrorKind::FileNotFound);
}

TEST_CASE("stack directory round trip") {
  const auto truth = synth_phase_map(SceneKind::Quadratic, std::vector<double>{4.0}, 9, 6);
  FringeProfile profile;
  profile.background = 0.25;
  profile.harmonics = {{1, 1.0}, {3, 0.125}};
  const auto stack =
      add_awgn(simulate_stack(truth, PhaseSteps(kNonuniformSteps), profile), 0.01, 123456789012345ULL);

  const auto dir = scratch_dir("io_stack");
  io::write_stack(dir, stack);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "frame_000.csv"));
  CHECK(fs::exists(dir / "frame_006.csv"));
  CHECK(fs::exists(dir / "truth.csv"));

  const auto back = io::read_stack(dir);
  CHECK(back.frames == stack.frames);
  CHECK(back.profile == stack.profile);
  REQUIRE(back.truth.has_value());
  CHECK(*back.truth == *stack.truth);
  CHECK(back.steps.matches(stack.steps, 0.0));

  auto bare = stack;
  bare.truth.reset();
  const auto bare_dir = scratch_dir("io_stack_bare");
  io::write_stack(bare_dir, bare);
  CHECK_FALSE(fs::exists(bare_dir / "truth.csv"));
  CHECK_FALSE(io::read_stack(bare_dir).truth.has_value());

  CHECK(kind_of([] { io::read_stack(scratch_dir("io_stack_empty")); }) == ErrorKind::FileNotFound);

  io::write_text(dir / "frame_002.csv", "1,2\n3\n");
  CHECK(kind_of([&] { io::read_stack(dir); }) == ErrorKind::FormatError);
}

TEST_CASE("spectrum CSV") {
  const auto samples = sample_spectrum(linear_lspsa(4), -1.0, 1.0, 3);
  const auto text = io::spectrum_to_csv(samples);
  CHECK(text.rfind("omega,re,im,mag\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 4);
}

TEST_CASE("json helpers") {
  const auto dir = scratch_dir("io_json");
  const io::json doc = {{"a", 1}, {"b", {1.5, 2.5}}};
  io::write_json(dir / "x.json", doc);
  CHECK(io::read_json(dir / "x.json") == doc);
  const auto text = io::read_text(dir / "x.json");
  CHECK(text.back() == '\n');

  const auto stats = io::stats_to_json({0.5, 1.25, true});
  CHECK(stats["rms"] == 0.5);
  CHECK(stats["max_abs"] == 1.25);
  CHECK(stats["piston_removed"] == true);
}
