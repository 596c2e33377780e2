#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "zeromap/tower.hpp"

using namespace zeromap;
using namespace zeromap::tower;

namespace {

// Built once; the s_8 tower is the reference zero-entropy case.
const Tower& feigenbaum_tower() {
  static const Tower T = build_tower(
      MapSpec::logistic(mapengine::locate_cascade_parameter(8).parameter), 0.5, 8);
  return T;
}

}  // namespace

TEST_CASE("labels: value of w_n is k") {
  for (int n = 1; n <= 10; ++n) {
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
      const auto w = label_of(n, k);
      REQUIRE(w.prefix() == k);
      REQUIRE(w.order() == n);
      // Children k and k + 2^n extend w_n by 0 and 1.
      REQUIRE(label_of(n + 1, k).to_string() == w.to_string() + "0");
      REQUIRE(label_of(n + 1, k + (std::uint64_t{1} << n)).to_string() == w.to_string() + "1");
    }
  }
}

TEST_CASE("tower: two-cycle at r = 3.2") {
  const auto T = build_tower(MapSpec::logistic(3.2), 0.1, 1);
  REQUIRE(T.depth() == 1);
  CHECK_FALSE(T.truncation.has_value());
  CHECK(T.degenerate());
  const double disc = std::sqrt(4.2 * 0.2);
  const double lo = (4.2 - disc) / 6.4;
  const double hi = (4.2 + disc) / 6.4;
  const auto& level = T.level(1);
  const bool ordered = level[0].lo < level[1].lo;
  const auto& a = ordered ? level[0] : level[1];
  const auto& b = ordered ? level[1] : level[0];
  CHECK(std::abs(a.lo - lo) < 1e-9);
  CHECK(std::abs(b.hi - hi) < 1e-9);
  CHECK(tau(T, 1) < 1e-12);

  const auto report = verify_tower(T);
  REQUIRE(report.levels.size() == 1);
  CHECK(report.levels[0].pass());
  CHECK(report.levels[0].degenerate);
  // f swaps the two points.
  const auto f = T.map;
  CHECK(level[1].contains(f(level[0].lo), T.margin));
  CHECK(level[0].contains(f(level[1].lo), T.margin));
}

TEST_CASE("tower: Feigenbaum parameter, depth 8") {
  const auto& T = feigenbaum_tower();
  REQUIRE(T.depth() == 8);
  CHECK_FALSE(T.truncation.has_value());
  const auto report = verify_tower(T);
  CHECK(report.all_pass());
  for (const auto& l : report.levels) {
    CHECK(l.gap_margin > 0.0);
    CHECK(l.pass());
  }
  CHECK(tau(T, 1) > tau(T, 4));
  CHECK(tau(T, 4) > tau(T, 8));
  CHECK_ERROR_KIND(tau(T, 9), ErrorKind::argument);
  CHECK_ERROR_KIND(tau(T, 0), ErrorKind::argument);
}

TEST_CASE("tower: tau is non-increasing") {
  for (const double r : {3.2, 3.5, 3.56}) {
    const auto T = build_tower(MapSpec::logistic(r), 0.3, 3);
    for (int n = 1; n < T.depth(); ++n) CHECK(tau(T, n + 1) <= tau(T, n));
  }
  const auto& T = feigenbaum_tower();
  for (int n = 1; n < T.depth(); ++n) CHECK(tau(T, n + 1) <= tau(T, n));
}

TEST_CASE("tower: tau of a hand-built level") {
  Tower T;
  T.map = MapSpec::logistic(3.2);
  T.levels = {{{0.0, 0.1}, {0.5, 0.8}}};
  CHECK(tau(T, 1) == doctest::Approx(0.3));
}

TEST_CASE("tower: r = 3.83 truncates early") {
  const auto T = build_tower(MapSpec::logistic(3.83), 0.5, 6);
  REQUIRE(T.truncation.has_value());
  CHECK(T.truncation->failed_level <= 2);
  CHECK(T.depth() == T.truncation->failed_level - 1);
  CHECK(T.truncation->overlap > 0.0);
}

TEST_CASE("tower: widened interval fails disjointness at its own level") {
  Tower T = feigenbaum_tower();
  auto& level3 = T.levels[2];
  // Stretch I_{3,0} until it swallows its nearest neighbour.
  std::size_t nearest = 1;
  for (std::size_t k = 1; k < level3.size(); ++k) {
    if (std::abs(level3[k].lo - level3[0].lo) < std::abs(level3[nearest].lo - level3[0].lo)) {
      nearest = k;
    }
  }
  level3[0].lo = std::min(level3[0].lo, level3[nearest].lo);
  level3[0].hi = std::max(level3[0].hi, level3[nearest].hi);
  const auto report = verify_tower(T);
  CHECK(report.levels[1].disjoint);
  CHECK_FALSE(report.levels[2].disjoint);
  CHECK(report.levels[2].gap_margin < 0.0);
  CHECK(report.levels[3].disjoint);
  CHECK_FALSE(report.all_pass());
}

TEST_CASE("tower: every post-burn-in orbit point is covered at every level") {
  const auto& T = feigenbaum_tower();
  const Eigen::VectorXd orbit = orbit_sample(T);
  CHECK(orbit.size() == T.orbit_length);
  for (int n = 1; n <= T.depth(); ++n) {
    const auto& level = T.level(n);
    for (Eigen::Index t = 0; t < orbit.size(); t += 7) {
      const auto k = T.label_at_time(t, n);
      REQUIRE(level[k].contains(orbit(t), T.margin));
    }
  }
}

TEST_CASE("tower: samples sharing a level-n interval stay tau_n apart") {
  const auto& T = feigenbaum_tower();
  const auto f = T.map;
  const auto K = deepest_sample(T);
  for (int n = 1; n <= 6; ++n) {
    const double bound = tau(T, n) + 2 * T.margin;
    const auto& level = T.level(n);
    for (std::size_t i = 0; i + 1 < K.points.size(); ++i) {
      for (std::size_t j = i + 1; j < K.points.size(); ++j) {
        double u = K.points[i];
        double v = K.points[j];
        const auto ku = T.label_at_time(K.times[i], n);
        if (ku != T.label_at_time(K.times[j], n)) continue;
        REQUIRE(level[ku].contains(u, T.margin));
        for (int step = 0; step < 300; ++step) {
          REQUIRE(std::abs(u - v) <= bound);
          u = f(u);
          v = f(v);
        }
      }
    }
  }
}

TEST_CASE("itinerary: critical point codes as the adding machine") {
  const auto& T = feigenbaum_tower();
  const auto it = itinerary(T, 0.5, 100'000);
  CHECK(it.conjugacy_defect == 0.0);
  CHECK(it.entry_time == 0);
  CHECK(it.depth == 8);
  REQUIRE(it.labels.size() == 100'001);
  for (std::size_t t = 0; t + 1 < 1000; ++t) {
    REQUIRE(it.labels[t].has_value());
    REQUIRE(*it.labels[t + 1] == ((*it.labels[t] + 1) % 256));
  }
}

TEST_CASE("itinerary: transient start enters, then codes cleanly") {
  const auto& T = feigenbaum_tower();
  const auto it = itinerary(T, 0.99, 20'000);
  CHECK(it.entry_time > 0);
  CHECK_FALSE(it.labels.front().has_value());
  CHECK(it.conjugacy_defect == 0.0);
  CHECK(it.in_tower_steps > 0);
}

TEST_CASE("itinerary: a repelling fixed point never enters") {
  const auto& T = feigenbaum_tower();
  CHECK_ERROR_KIND(itinerary(T, 0.0, 1000), ErrorKind::not_attracted);
  CHECK_ERROR_KIND(itinerary(T, 1.5, 1000), ErrorKind::domain);
}

TEST_CASE("tower: argument errors") {
  const auto f = MapSpec::logistic(3.5);
  CHECK_ERROR_KIND(build_tower(f, 0.5, 0), ErrorKind::argument);
  CHECK_ERROR_KIND(build_tower(f, 0.5, kMaxTowerDepth + 1), ErrorKind::argument);
  CHECK_ERROR_KIND(build_tower(f, 0.5, 4, 100, 16 * 10), ErrorKind::argument);
  CHECK_ERROR_KIND(build_tower(f, 2.0, 4), ErrorKind::domain);
  CHECK_ERROR_KIND(verify_tower(Tower{}), ErrorKind::argument);
}
