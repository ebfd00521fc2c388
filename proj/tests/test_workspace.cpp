#include <cmath>

#include "doctest.h"
#include "mrcert/errors.hpp"
#include "mrcert/workspace.hpp"
#include "oracles.hpp"

using namespace mrcert;

namespace {

Workspace unit_square(std::vector<Rect> obstacles = {}) {
  return Workspace(Rect(Point{0, 0}, Point{1, 1}), std::move(obstacles), {Point{0.1, 0.1}},
                   {Point{0.9, 0.9}});
}

}  // namespace

TEST_SUITE("workspace") {

TEST_CASE("clearance on fixed cases") {
  const Workspace empty = unit_square();
  CHECK(empty.clearance(Point{0.5, 0.5}) == 0.5);
  const Workspace w = unit_square({Rect(Point{0.4, 0.4}, Point{0.6, 0.6})});
  CHECK(w.clearance(Point{0.5, 0.5}) == 0.0);
  CHECK(w.clearance(Point{0.6, 0.5}) == 0.0);
  CHECK(w.clearance(Point{0.7, 0.5}) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(w.clearance(Point{0.0, 0.5}) == 0.0);
  CHECK_THROWS_AS((void)w.clearance(Point{1.5, 0.5}), OutOfBoundsError);
  CHECK_THROWS_AS((void)w.clearance(Point{0.5, 0.5, 0.5}), ContractViolation);
}

TEST_CASE("clearance matches the brute-force per-obstacle loop") {
  const Workspace w = generate(GenSpec{});
  Rng rng(31);
  for (int i = 0; i < 20'000; ++i) {
    const double x = uniform(rng, 0, 1);
    const double y = uniform(rng, 0, 1);
    CHECK(w.clearance(Point{x, y}) == doctest::Approx(oracle::clearance(w, x, y)).epsilon(1e-12));
  }
}

TEST_CASE("point_free on fixed cases") {
  const Workspace w = unit_square({Rect(Point{0.4, 0.4}, Point{0.6, 0.6})});
  CHECK(w.point_free(w.starts()[0]));
  CHECK_FALSE(w.point_free(Point{0.5, 0.5}));
  CHECK_FALSE(w.point_free(Point{1.5, 0.5}));
  CHECK_FALSE(w.point_free(Point{1.0, 0.5}));
}

TEST_CASE("segment_free on fixed cases") {
  const Workspace w = unit_square({Rect(Point{0.4, 0.4}, Point{0.6, 0.6})});
  CHECK_FALSE(w.segment_free(Segment{Point{0.1, 0.5}, Point{0.9, 0.5}}));
  CHECK(w.segment_free(Segment{Point{0.1, 0.8}, Point{0.9, 0.8}}));
  CHECK_FALSE(w.segment_free(Segment{Point{0.1, 0.6}, Point{0.9, 0.6}}));  // grazes the top face
  CHECK_FALSE(w.segment_free(Segment{Point{0.1, 0.8}, Point{1.0, 0.8}}));  // ends on the bounds
}

TEST_CASE("segment_free agrees with dense sampling") {
  const Workspace w = generate(GenSpec{});
  Rng rng(32);
  int compared = 0;
  for (int i = 0; i < 10'000; ++i) {
    const Point a{uniform(rng, 0.01, 0.99), uniform(rng, 0.01, 0.99)};
    const Point b{uniform(rng, a[0] - 0.2, a[0] + 0.2), uniform(rng, a[1] - 0.2, a[1] + 0.2)};
    bool hit = !oracle::point_free(w, a[0], a[1]) || !oracle::point_free(w, b[0], b[1]);
    double closest = std::numeric_limits<double>::infinity();
    for (const Rect& r : w.obstacles()) {
      const auto s = oracle::dense_segment_rect(a, b, r, 1e-4);
      hit = hit || s.hit;
      closest = std::min(closest, s.min_dist);
    }
    if (!hit && closest < 1e-3) continue;
    ++compared;
    CHECK(w.segment_free(a, b) == !hit);
  }
  CHECK(compared > 8'000);
}

TEST_CASE("positive clearance certifies its whole ball") {
  const Workspace w = generate(GenSpec{});
  Rng rng(33);
  int tested = 0;
  while (tested < 500) {
    const Point p{uniform(rng, 0, 1), uniform(rng, 0, 1)};
    const double c = w.clearance(p);
    if (c == 0.0) continue;
    ++tested;
    const double delta = c * uniform(rng, 0.0, 0.999999);
    for (int k = 0; k < 100; ++k) {
      const double angle = uniform(rng, 0, 2 * M_PI);
      const double r = delta * std::sqrt(uniform(rng, 0, 1));
      const double x = p[0] + r * std::cos(angle);
      const double y = p[1] + r * std::sin(angle);
      CHECK(oracle::point_free(w, x, y));
    }
  }
}

TEST_CASE("generate is deterministic and valid") {
  const std::string a = write_workspace(generate(GenSpec{}));
  const std::string b = write_workspace(generate(GenSpec{}));
  CHECK(a == b);
  GenSpec other;
  other.seed = 8;
  CHECK(write_workspace(generate(other)) != a);

  const Workspace w = generate(GenSpec{.seed = 7});
  CHECK(Workspace::invariant_violations(w.bounds(), w.obstacles(), w.starts(), w.goals()).empty());
  CHECK(w.obstacles().size() == 40);
  CHECK(w.starts().size() == 5);
  CHECK(w.goals().size() == 5);
}

TEST_CASE("generate without obstacles leaves the interior free") {
  GenSpec spec;
  spec.num_obstacles = 0;
  const Workspace w = generate(spec);
  Rng rng(34);
  for (int i = 0; i < 1'000; ++i) {
    CHECK(w.point_free(Point{uniform(rng, 1e-9, 1 - 1e-9), uniform(rng, 1e-9, 1 - 1e-9)}));
  }
}

TEST_CASE("generate rejects bad specs and reports exhausted rejection sampling") {
  CHECK_THROWS_AS((void)generate(GenSpec{.size_min = 0.0}), ContractViolation);
  CHECK_THROWS_AS((void)generate(GenSpec{.size_min = 0.2, .size_max = 0.1}), ContractViolation);
  CHECK_THROWS_AS((void)generate(GenSpec{.num_robots = 6}), ContractViolation);
  // Near-full-size obstacles cannot avoid ten start/goal points.
  CHECK_THROWS_AS((void)generate(GenSpec{.num_obstacles = 5, .size_min = 0.9, .size_max = 0.95}),
                  GenerationError);
}

TEST_CASE("workspace JSON round-trips exactly") {
  Rng rng(35);
  for (int i = 0; i < 50; ++i) {
    GenSpec spec;
    spec.seed = rng();
    spec.num_obstacles = static_cast<int>(rng() % 30);
    spec.num_robots = 1 + static_cast<int>(rng() % 5);
    const Workspace w = generate(spec);
    const std::string text = write_workspace(w);
    const Workspace back = read_workspace(text);
    CHECK(back == w);
    CHECK(write_workspace(back) == text);
  }
}

TEST_CASE("malformed workspace files report where they fail") {
  auto message = [](std::string_view text) -> std::string {
    try {
      (void)read_workspace(text);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("{\n  \"bounds\": {\"lo\": [0, 0],\n  oops").find("line 3") != std::string::npos);
  CHECK(message("[]").find("object") != std::string::npos);
  CHECK(message(R"({"obstacles": [], "starts": [], "goals": []})").find("bounds") !=
        std::string::npos);
  const std::string bad_obstacle =
      R"({"bounds": {"lo": [0, 0], "hi": [1, 1]}, "obstacles": [{"lo": [0, 0], "hi": [1]}],
          "starts": [], "goals": []})";
  CHECK(message(bad_obstacle).find("obstacles[0].hi") != std::string::npos);
  const std::string start_in_obstacle =
      R"({"bounds": {"lo": [0, 0], "hi": [1, 1]}, "obstacles": [{"lo": [0, 0], "hi": [0.5, 0.5]}],
          "starts": [[0.25, 0.25]], "goals": [[0.75, 0.75]]})";
  CHECK(message(start_in_obstacle).find("starts[0]") != std::string::npos);
  const std::string unequal =
      R"({"bounds": {"lo": [0, 0], "hi": [1, 1]}, "obstacles": [],
          "starts": [[0.25, 0.25]], "goals": []})";
  CHECK(message(unequal).find("count mismatch") != std::string::npos);
}

}  // TEST_SUITE
