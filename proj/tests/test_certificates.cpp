#include <cmath>
#include <vector>

#include "doctest.h"
#include "mrcert/certificates.hpp"
#include "mrcert/errors.hpp"
#include "oracles.hpp"

using namespace mrcert;

namespace {

// Open square [0, 10]^2 with no obstacles: clearance is the distance to the nearest face.
Workspace open_square(std::size_t robots) {
  std::vector<Point> starts;
  std::vector<Point> goals;
  for (std::size_t i = 0; i < robots; ++i) {
    starts.push_back(Point{1.0 + static_cast<double>(i), 1.0});
    goals.push_back(Point{1.0 + static_cast<double>(i), 9.0});
  }
  return Workspace(Rect(Point{0, 0}, Point{10, 10}), {}, starts, goals);
}

CertOutcome check_flat(CertificateStrategy& s, std::vector<double> q,
                       std::optional<NodeId> nearest) {
  return s.check(TeamView(q, s.robots()), nearest);
}

}  // namespace

TEST_SUITE("certificates") {

TEST_CASE("ball membership is strict") {
  const Point c{0, 0};
  CHECK(certify_ball(c, 1.0, Point{0.5, 0.5}));
  CHECK_FALSE(certify_ball(c, 1.0, Point{1.0, 0.0}));
  CHECK_FALSE(certify_ball(c, 1.0, Point{0.0, -1.0}));
  CHECK(certify_ball(c, 1.0, Point{0.0, std::nextafter(1.0, 0.0)}));
  CHECK_FALSE(certify_ball(c, 0.0, c));
}

TEST_CASE("strategy names round-trip") {
  for (Strategy s : kAllStrategies) CHECK(parse_strategy(to_string(s)) == s);
  CHECK_THROWS_AS((void)parse_strategy("greedy"), ContractViolation);
}

TEST_CASE("baseline checks every robot") {
  const Workspace w = open_square(3);
  StandardChecker checker(w);
  std::vector<double> q{1, 1, 5, 5, 9.5, 9.5};
  const CertOutcome a = check_none(TeamView(q, 3), checker);
  CHECK(a.free);
  CHECK(a.check_fraction() == 1.0);
  CHECK(checker.clearance_calls() == 3);
  // A colliding first robot does not stop the remaining checks.
  q[0] = 0.0;
  const CertOutcome b = check_none(TeamView(q, 3), checker);
  CHECK_FALSE(b.free);
  CHECK(b.check_fraction() == 1.0);
  CHECK(checker.clearance_calls() == 6);
}

TEST_CASE("cutoff guard boundaries") {
  CHECK_FALSE(cutoff_guard(10, 10));
  CHECK(cutoff_guard(11, 10));
  CHECK_FALSE(cutoff_guard(0, 0));
  CHECK(cutoff_guard(1, 0));
  CHECK_FALSE(cutoff_guard(std::size_t{1} << 40, kNoCutoff));
}

TEST_CASE("basic: one displaced robot forces a full team check") {
  const Workspace w = open_square(2);
  StandardChecker checker(w);
  BasicCertificates s(checker, 2, kNoCutoff);
  // Clearances: 1.0 for (1, 5), 0.5 for (0.5, 3).
  const std::vector<double> p{1.0, 5.0, 0.5, 3.0};
  REQUIRE(check_flat(s, p, std::nullopt).free);
  s.commit(0);
  REQUIRE(s.certificate_of(0).has_value());
  CHECK(s.balls().radius(*s.certificate_of(0)) == 1.0);
  CHECK(s.balls().radius(*s.certificate_of(0) + 1) == 0.5);

  const CertOutcome moved = check_flat(s, {1.9, 5.0, 1.1, 3.0}, 0);
  CHECK(moved.free);
  CHECK(moved.checked_mask == 0b11);
  CHECK(moved.check_fraction() == 1.0);

  const CertOutcome same = check_flat(s, p, 0);
  CHECK(same.free);
  CHECK(same.check_fraction() == 0.0);
  s.commit(1);
  CHECK(s.certificate_of(1) == s.certificate_of(0));  // reuses the owner certificate
  CHECK(s.balls().size() == 2);
}

TEST_CASE("basic with one robot is the single-robot ball method") {
  const Workspace w = generate(GenSpec{.seed = 11, .num_robots = 1});
  StandardChecker checker(w);
  BasicCertificates s(checker, 1, kNoCutoff);
  Rng rng(51);
  struct Ball {
    double x, y, r;
  };
  std::vector<Ball> owner;  // certificate each node refers to
  std::vector<double> root{w.starts()[0][0], w.starts()[0][1]};
  REQUIRE(check_flat(s, root, std::nullopt).free);
  s.commit(0);
  owner.push_back({root[0], root[1], w.clearance(w.starts()[0])});
  for (int i = 0; i < 5'000; ++i) {
    const auto n = static_cast<NodeId>(rng() % owner.size());
    const Ball b = owner[n];
    const double x = std::clamp(b.x + uniform(rng, -0.1, 0.1), 0.0, 1.0);
    const double y = std::clamp(b.y + uniform(rng, -0.1, 0.1), 0.0, 1.0);
    const bool inside = std::hypot(x - b.x, y - b.y) < b.r;
    const CertOutcome out = check_flat(s, {x, y}, n);
    REQUIRE(out.check_fraction() == (inside ? 0.0 : 1.0));
    REQUIRE(out.free == oracle::point_free(w, x, y));
    if (out.free) {
      s.commit(static_cast<NodeId>(owner.size()));
      owner.push_back(inside ? b : Ball{x, y, w.clearance(Point{x, y})});
    }
  }
}

TEST_CASE("partial: only robots outside their referenced ball are checked") {
  const Workspace w = open_square(3);
  StandardChecker checker(w);
  PartialCertificates partial(checker, 3, kNoCutoff);
  BasicCertificates basic(checker, 3, kNoCutoff);
  // Clearances 5, 2 and 2.
  const std::vector<double> p{5, 5, 2, 5, 8, 5};
  const std::vector<double> q{5.5, 5, 2.5, 5, 8, 8};
  for (CertificateStrategy* s : {static_cast<CertificateStrategy*>(&partial),
                                 static_cast<CertificateStrategy*>(&basic)}) {
    REQUIRE(check_flat(*s, p, std::nullopt).free);
    s->commit(0);
  }
  const CertOutcome out = check_flat(partial, q, 0);
  CHECK(out.free);
  CHECK(out.checked_mask == 0b100);
  CHECK(out.check_fraction() == doctest::Approx(1.0 / 3.0));
  CHECK(check_flat(basic, q, 0).check_fraction() == 1.0);

  const auto before = partial.balls().size();
  check_flat(partial, q, 0);
  partial.commit(1);
  CHECK(partial.reference(1, 0) == partial.reference(0, 0));
  CHECK(partial.reference(1, 1) == partial.reference(0, 1));
  CHECK(partial.reference(1, 2) != partial.reference(0, 2));
  CHECK(partial.balls().size() == before + 1);
}

TEST_CASE("shared: a robot can be certified by another robot's ball") {
  const Workspace w = open_square(3);
  StandardChecker checker(w);
  SharedProjection shared(checker, 3, kNoCutoff);
  PartialCertificates partial(checker, 3, kNoCutoff);
  const std::vector<double> p{1, 1, 9, 9, 1, 9};
  const std::vector<double> q{5, 5, 1.2, 8.8, 1.2, 1.2};

  // Nothing stored yet: every robot is checked.
  const CertOutcome first = check_flat(shared, p, std::nullopt);
  CHECK(first.check_fraction() == 1.0);
  shared.commit(0);
  REQUIRE(check_flat(partial, p, std::nullopt).free);
  partial.commit(0);
  CHECK(shared.tree().size() == 3);

  const CertOutcome out = check_flat(shared, q, 0);
  CHECK(out.free);
  CHECK(out.checked_mask == 0b001);
  CHECK(out.check_fraction() == doctest::Approx(1.0 / 3.0));
  const auto& cert = shared.last_certifiers();
  CHECK_FALSE(cert[0].has_value());
  CHECK(cert[1] == shared.handle(0, 2));  // robot b inside robot c's ball
  CHECK(cert[2] == shared.handle(0, 0));  // robot c inside robot a's ball
  CHECK(check_flat(partial, q, 0).check_fraction() == 1.0);

  check_flat(shared, q, 0);
  shared.commit(1);
  CHECK(shared.tree().size() == 6);
  CHECK(shared.tree().radius(*shared.handle(1, 0)) == 5.0);
  CHECK(shared.tree().radius(*shared.handle(1, 1)) == 0.0);
  CHECK(shared.tree().radius(*shared.handle(1, 2)) == 0.0);
}

TEST_CASE("strategies fall back to standard checks past the cutoff") {
  const Workspace w = open_square(2);
  for (Strategy kind : {Strategy::Basic, Strategy::Partial, Strategy::Shared}) {
    CAPTURE(to_string(kind));
    StandardChecker checker(w);
    // Shared stores 2 entries per node; the others count nodes.
    const std::size_t cutoff = kind == Strategy::Shared ? 4 : 2;
    auto s = make_strategy(kind, checker, 2, cutoff);
    const std::vector<double> p{5, 5, 5.1, 5.1};
    for (NodeId n = 0; n < 3; ++n) {
      const CertOutcome out = check_flat(*s, p, n == 0 ? std::nullopt : std::optional<NodeId>(0));
      CHECK(out.check_fraction() == (n == 0 ? 1.0 : 0.0));
      s->commit(n);
    }
    CHECK(cutoff_guard(s->store_size(), cutoff));
    const CertOutcome out = check_flat(*s, p, 0);
    CHECK(out.free);
    CHECK(out.check_fraction() == 1.0);
    s->commit(3);
    CHECK(check_flat(*s, p, 3).check_fraction() == 1.0);
  }
}

TEST_CASE("commit contract") {
  const Workspace w = open_square(2);
  StandardChecker checker(w);
  PartialCertificates s(checker, 2, kNoCutoff);
  CHECK_THROWS_AS(s.commit(0), ContractViolation);
  REQUIRE(check_flat(s, {5, 5, 6, 6}, std::nullopt).free);
  CHECK_THROWS_AS(s.commit(1), ContractViolation);
  s.commit(0);
  CHECK_THROWS_AS(s.commit(1), ContractViolation);  // no pending check
  CHECK_FALSE(check_flat(s, {0, 5, 6, 6}, 0).free);
  CHECK_THROWS_AS(s.commit(1), ContractViolation);
  CHECK_THROWS_AS(check_flat(s, {5, 5, 6, 6}, 4), ContractViolation);
  CHECK_THROWS_AS(check_flat(s, {5, 5}, 0), ContractViolation);
}

TEST_CASE("certified robots are always collision free") {
  const Workspace w = generate(GenSpec{.seed = 12, .num_obstacles = 60});
  constexpr std::size_t kRobots = 3;
  Rng rng(52);
  long certified = 0;
  long checks = 0;
  for (Strategy kind : {Strategy::Basic, Strategy::Partial, Strategy::Shared}) {
    CAPTURE(to_string(kind));
    StandardChecker checker(w);
    auto s = make_strategy(kind, checker, kRobots);
    std::vector<std::vector<double>> nodes;
    std::vector<double> root;
    for (std::size_t i = 0; i < kRobots; ++i) {
      root.push_back(w.starts()[i][0]);
      root.push_back(w.starts()[i][1]);
    }
    REQUIRE(check_flat(*s, root, std::nullopt).free);
    s->commit(0);
    nodes.push_back(root);
    for (int it = 0; it < 33'400; ++it) {
      const auto n = static_cast<NodeId>(rng() % nodes.size());
      std::vector<double> q = nodes[n];
      for (double& c : q) c = std::clamp(c + uniform(rng, -0.06, 0.06), 0.0, 1.0);
      const CertOutcome out = check_flat(*s, q, n);
      ++checks;
      bool all_free = true;
      for (std::size_t i = 0; i < kRobots; ++i) {
        const bool free_i = oracle::point_free(w, q[2 * i], q[2 * i + 1]);
        all_free = all_free && free_i;
        if (!out.checked(i)) {
          ++certified;
          REQUIRE(free_i);
        }
      }
      REQUIRE(out.free == all_free);
      if (out.free && nodes.size() < 2'000) {
        s->commit(static_cast<NodeId>(nodes.size()));
        nodes.push_back(q);
      }
    }
  }
  CHECK(checks >= 100'000);
  CHECK(certified > 10'000);
}

}  // TEST_SUITE
