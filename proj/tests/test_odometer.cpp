#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "support.hpp"
#include "zeromap/odometer.hpp"

using namespace zeromap;
using namespace zeromap::odometer;

TEST_CASE("add: carries") {
  CHECK(add_k(OdometerPoint::zeros(8), 1) == OdometerPoint::parse("10000000"));
  CHECK(add_k(OdometerPoint::ones(8), 1) == OdometerPoint::zeros(8));
  CHECK(add_k(OdometerPoint::parse("1101"), 1) == OdometerPoint::parse("0011"));
  CHECK(add_k(OdometerPoint::zeros(64), -1) == OdometerPoint::ones(64));
  CHECK(add_k(OdometerPoint::ones(64), 1) == OdometerPoint::zeros(64));
}

TEST_CASE("add: bit order follows k = i_0 + 2 i_1 + ...") {
  const auto w = OdometerPoint::parse("0110");
  CHECK(w.value() == 6);
  CHECK(w.bit(0) == 0);
  CHECK(w.bit(1) == 1);
  CHECK(w.to_string() == "0110");
  CHECK(w.shift() == OdometerPoint::parse("110"));
}

TEST_CASE("add: 2^n steps fix the first n bits") {
  const int D = 8;
  for (int n = 0; n <= D; ++n) {
    for (std::uint64_t v = 0; v < (1u << D); ++v) {
      const OdometerPoint w(v, D);
      const auto moved = add_k(w, std::int64_t{1} << n);
      REQUIRE(Cylinder::of(moved, n) == Cylinder::of(w, n));
    }
  }
}

TEST_CASE("add: bijection with inverse add^-1, conjugate to +1") {
  const int D = 12;
  std::vector<bool> hit(1u << D, false);
  for (std::uint64_t v = 0; v < (1u << D); ++v) {
    const OdometerPoint w(v, D);
    const auto next = add_k(w, 1);
    REQUIRE(next.value() == ((v + 1) & low_mask(D)));
    REQUIRE(add_k(next, -1) == w);
    REQUIRE(!hit[next.value()]);
    hit[next.value()] = true;
  }
}

TEST_CASE("add: composition matches repeated steps") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const int D = 1 + static_cast<int>(rng() % 64);
    const OdometerPoint w(rng() & low_mask(D), D);
    const std::int64_t a = static_cast<std::int64_t>(rng() % 1000) - 500;
    const std::int64_t b = static_cast<std::int64_t>(rng() % 1000) - 500;
    REQUIRE(add_k(add_k(w, a), b) == add_k(w, a + b));
  }
}

TEST_CASE("metric: reference values") {
  const int D = 10;
  CHECK(odometer_metric(OdometerPoint::zeros(D), OdometerPoint::ones(D)) ==
        doctest::Approx(1.0 - std::ldexp(1.0, -D)));
  const auto w = OdometerPoint::parse("0110100111");
  CHECK(odometer_metric(w, w) == 0.0);
  CHECK(odometer_metric(OdometerPoint::parse("1000000000"), OdometerPoint::zeros(D)) == 0.5);
  CHECK_ERROR_KIND(odometer_metric(OdometerPoint::zeros(3), OdometerPoint::zeros(4)),
                   ErrorKind::argument);
}

TEST_CASE("metric: equicontinuity modulus by enumeration") {
  const int D = 8;
  const std::uint64_t size = 1u << D;
  for (int n = 1; n <= D; ++n) {
    const double bound = std::ldexp(1.0, -n);
    for (std::uint64_t a = 0; a < size; a += 3) {
      for (std::uint64_t b = 0; b < size; ++b) {
        const OdometerPoint w(a, D);
        const OdometerPoint v(b, D);
        if (!(odometer_metric(w, v) < bound)) continue;
        REQUIRE(Cylinder::of(w, n) == Cylinder::of(v, n));
        for (const std::int64_t k : {1, 2, 5, 17, 100, 255}) {
          REQUIRE(odometer_metric(add_k(w, k), add_k(v, k)) <= bound);
        }
      }
    }
  }
}

TEST_CASE("census: one period visits each cylinder once") {
  const auto counts = cylinder_census(OdometerPoint::zeros(8), 3, 8);
  CHECK(counts == std::vector<std::uint64_t>(8, 1));
  CHECK(cylinder_census(OdometerPoint::zeros(4), 1, 2) == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("census: minimality in every window of 2^n steps") {
  const int D = 12;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const OdometerPoint w(rng() & low_mask(D), D);
    for (int n = 1; n <= D; ++n) {
      const auto counts = cylinder_census(w, n, std::uint64_t{1} << n);
      for (const auto c : counts) REQUIRE(c == 1);
    }
  }
}

TEST_CASE("census: frequencies are exactly 2^-n over whole periods") {
  const auto counts = cylinder_census(OdometerPoint::parse("10110"), 3, 8 * 13);
  for (const auto c : counts) CHECK(c == 13);
}

TEST_CASE("census: add-invariance of the frequencies") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const int D = 10;
    const OdometerPoint w(rng() & low_mask(D), D);
    const int n = 1 + static_cast<int>(rng() % D);
    const std::uint64_t N = (std::uint64_t{1} << n) * (1 + rng() % 4);
    CHECK(cylinder_census(w, n, N) == cylinder_census(add_k(w, 1), n, N));
  }
}

TEST_CASE("census: order above depth is rejected") {
  CHECK_ERROR_KIND(cylinder_census(OdometerPoint::zeros(4), 5, 10), ErrorKind::argument);
  CHECK_ERROR_KIND(cylinder_census(OdometerPoint::zeros(4), 0, 10), ErrorKind::argument);
}

TEST_CASE("cylinder: membership and measure") {
  const auto c = Cylinder::parse("101");
  CHECK(c.measure() == 0.125);
  CHECK(c.contains(OdometerPoint::parse("10111")));
  CHECK_FALSE(c.contains(OdometerPoint::parse("10011")));
  CHECK(c.to_string() == "101");
}

TEST_CASE("progression: same cylinder") {
  const auto c = Cylinder::parse("0110");
  const auto p = progression_density(c, c);
  CHECK(p.offset == 0);
  CHECK(p.modulus == 16);
  CHECK(p.density == Rational{1, 16});
  for (std::uint64_t k = 16; k <= 160; k += 16) CHECK(p.contains(k));
}

TEST_CASE("progression: density 2^-n by enumerating one period") {
  std::mt19937_64 rng(4);
  const int n = 12;
  const std::uint64_t period = std::uint64_t{1} << n;
  for (int trial = 0; trial < 20; ++trial) {
    const Cylinder target(rng() & low_mask(n), n);
    const Cylinder source(rng() & low_mask(n), n);
    const auto p = progression_density(target, source);
    CHECK(p.density == Rational{1, period});
    // E = {k : add^{-k}(target) lies in source}, counted over k = 1..2^n.
    std::uint64_t count = 0;
    const OdometerPoint t(target.prefix(), n);
    for (std::uint64_t k = 1; k <= period; ++k) {
      const bool in_e = source.contains(add_k(t, -static_cast<std::int64_t>(k)));
      REQUIRE(in_e == p.contains(k));
      count += in_e;
    }
    CHECK(count == 1);
  }
}

TEST_CASE("progression: union of distinct targets") {
  const int n = 6;
  const Cylinder source(5, n);
  std::vector<Cylinder> targets;
  for (const std::uint64_t t : {1u, 9u, 33u, 60u, 61u}) targets.emplace_back(t, n);
  CHECK(union_density(targets, source) == Rational{5, 64});

  std::set<std::uint64_t> hits;
  for (std::uint64_t k = 1; k <= 64; ++k) {
    for (const auto& t : targets) {
      if (source.contains(add_k(OdometerPoint(t.prefix(), n), -static_cast<std::int64_t>(k)))) {
        hits.insert(k);
      }
    }
  }
  CHECK(hits.size() == 5);
  CHECK_ERROR_KIND(progression_density(Cylinder(1, 3), Cylinder(1, 4)), ErrorKind::argument);
}
