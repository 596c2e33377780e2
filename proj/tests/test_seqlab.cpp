#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "support.hpp"
#include "zeromap/seqlab.hpp"

using namespace zeromap;
using namespace zeromap::seqlab;

namespace {

// Direct evaluation of S_N(t) for one t.
Complex weyl_direct(const ArithmeticSequence& c, std::int64_t N, double t) {
  CompensatedSum<Complex> acc;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double phase = 2.0 * std::numbers::pi * std::fmod(static_cast<double>(n) * t, 1.0);
    acc.add(c(n) * Complex(std::cos(phase), std::sin(phase)));
  }
  return acc.value() / static_cast<double>(N);
}

ArithmeticSequence random_sequence(std::int64_t N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ArithmeticSequence c{Eigen::VectorXcd(N), "random"};
  for (std::int64_t i = 0; i < N; ++i) c.values(i) = Complex(g(rng), g(rng));
  return c;
}

}  // namespace

TEST_CASE("mobius: small values") {
  const auto mu = mobius_values(10);
  CHECK(std::vector<int>(mu.begin(), mu.end()) == std::vector<int>{1, -1, -1, 0, -1, 1, -1, 0, 0, 1});
  const auto c = mobius_sieve(30);
  CHECK(c(1) == Complex(1.0));
  CHECK(c(30) == Complex(-1.0));
  CHECK(c.size() == 30);
}

TEST_CASE("mobius: agrees with trial division up to 10^5") {
  const auto mu = mobius_values(100'000);
  int mismatches = 0;
  for (std::int64_t n = 1; n <= 100'000; ++n) mismatches += mu[n - 1] != test::mobius_oracle(n);
  CHECK(mismatches == 0);
}

TEST_CASE("mobius: multiplicative on coprime pairs") {
  const auto mu = mobius_values(10'000);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> pick(1, 10'000);
  int checked = 0;
  while (checked < 10'000) {
    const auto m = pick(rng);
    const auto n = pick(rng);
    if (std::gcd(m, n) != 1) continue;
    REQUIRE(test::mobius_oracle(m * n) == mu[m - 1] * mu[n - 1]);
    ++checked;
  }
}

TEST_CASE("mobius: size errors") {
  CHECK_ERROR_KIND(mobius_sieve(0), ErrorKind::size);
  CHECK_ERROR_KIND(mobius_sieve(-5), ErrorKind::size);
  CHECK_ERROR_KIND(mobius_sieve(kMaxSequenceLength + 1), ErrorKind::size);
}

TEST_CASE("cesaro: constant and alternating sequences") {
  const auto one = ArithmeticSequence::constant(1000, 1.0);
  const std::vector<std::int64_t> schedule{1, 7, 100, 1000};
  for (const auto& [N, v] : cesaro_average(one, schedule).points) CHECK(v == Complex(1.0));

  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^n
  const auto c = ArithmeticSequence::from_real(alt, "alternating");
  const std::vector<std::int64_t> even{2, 10, 500, 1000};
  for (const auto& [N, v] : cesaro_average(c, even).points) CHECK(v == Complex(0.0));
}

TEST_CASE("cesaro: mobius mean is small at 10^6") {
  const auto mu = mobius_sieve(1'000'000);
  const std::vector<std::int64_t> s{1'000'000};
  CHECK(std::abs(cesaro_average(mu, s).final_value()) < 0.01);
}

TEST_CASE("cesaro: linear in the sequence") {
  const auto c = random_sequence(5000, 1);
  const auto d = random_sequence(5000, 2);
  const Complex a(0.7, -1.3);
  const Complex b(-2.1, 0.4);
  ArithmeticSequence mix{a * c.values + b * d.values, "mix"};
  const auto schedule = linear_schedule(5000, 10);
  const auto ac = cesaro_average(c, schedule);
  const auto ad = cesaro_average(d, schedule);
  const auto am = cesaro_average(mix, schedule);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    CHECK(std::abs(am.points[i].second - (a * ac.points[i].second + b * ad.points[i].second)) < 1e-12);
  }
}

TEST_CASE("cesaro: schedule errors") {
  const auto c = ArithmeticSequence::constant(10, 1.0);
  CHECK_ERROR_KIND(cesaro_average(c, std::vector<std::int64_t>{}), ErrorKind::argument);
  CHECK_ERROR_KIND(cesaro_average(c, std::vector<std::int64_t>{5, 3}), ErrorKind::argument);
  CHECK_ERROR_KIND(cesaro_average(c, std::vector<std::int64_t>{11}), ErrorKind::argument);
}

TEST_CASE("weyl: FFT route matches direct summation") {
  const auto c = random_sequence(777, 3);
  const int grid = 64;
  for (const std::int64_t N : {1, 50, 777}) {
    const Eigen::VectorXd mags = weyl_magnitudes(c, grid, N);
    REQUIRE(mags.size() == grid);
    for (int j = 0; j < grid; ++j) {
      CHECK(mags(j) == doctest::Approx(std::abs(weyl_direct(c, N, j / double(grid)))).epsilon(1e-10));
    }
  }
}

TEST_CASE("oscillation: constant sequence is a violation witness at t = 0") {
  const auto c = ArithmeticSequence::constant(10'000, 1.0);
  const auto r = oscillation_test(c, 2.0, 1024, decade_schedule(10'000));
  CHECK(r.verdict == OscillationVerdict::violation_witness);
  CHECK(r.worst_t == 0.0);
  CHECK(r.max_weyl.back().second == doctest::Approx(1.0));
  CHECK(r.K_estimates.back().second == doctest::Approx(1.0));
}

TEST_CASE("oscillation: rotation is caught near t = 1 - alpha") {
  const double alpha = std::numbers::sqrt2 - 1.0;
  const auto c = ArithmeticSequence::rotation(1000, alpha);
  const auto r = oscillation_test(c, 2.0, 1024, decade_schedule(1000));
  CHECK(r.verdict == OscillationVerdict::violation_witness);
  CHECK(std::abs(r.worst_t - (1.0 - alpha)) < 1.0 / 1024);
  CHECK(r.max_weyl.back().second > 0.9);
}

TEST_CASE("oscillation: mobius at 10^6") {
  const auto mu = mobius_sieve(1'000'000);
  const auto r = oscillation_test(mu, 2.0, 1024, decade_schedule(1'000'000, 10'000));
  CHECK(r.verdict == OscillationVerdict::consistent_with_oscillating);
  CHECK(r.max_weyl.back().second < 0.05);
}

TEST_CASE("oscillation: every |S_N(t)| is bounded by the mean of |c_n|") {
  for (const std::uint64_t seed : {11u, 12u, 13u}) {
    const auto c = random_sequence(4000, seed);
    const auto r = oscillation_test(c, 3.0, 256, linear_schedule(4000, 8));
    for (std::size_t i = 0; i < r.max_weyl.size(); ++i) {
      CHECK(r.max_weyl[i].second <= r.abs_mean[i].second * (1 + 1e-12));
    }
  }
}

TEST_CASE("oscillation: argument errors") {
  const auto c = ArithmeticSequence::constant(100, 1.0);
  const std::vector<std::int64_t> s{10, 100};
  CHECK_ERROR_KIND(oscillation_test(c, 1.0, 64, s), ErrorKind::argument);
  CHECK_ERROR_KIND(oscillation_test(c, 0.5, 64, s), ErrorKind::argument);
  CHECK_ERROR_KIND(oscillation_test(c, 2.0, 1, s), ErrorKind::argument);
}

TEST_CASE("density: textbook sets") {
  std::vector<std::int64_t> even;
  for (std::int64_t k = 2; k <= 10'000; k += 2) even.push_back(k);
  CHECK(upper_density_estimate(even, 10'000, linear_schedule(10'000, 16)).upper_density_proxy ==
        doctest::Approx(0.5).epsilon(1e-4));

  std::vector<std::int64_t> three_mod_eight;
  for (std::int64_t k = 3; k <= 100'000; k += 8) three_mod_eight.push_back(k);
  CHECK(std::abs(upper_density_estimate(three_mod_eight, 100'000, linear_schedule(100'000, 16))
                     .upper_density_proxy -
                 0.125) < 1e-3);

  std::vector<std::int64_t> squares;
  for (std::int64_t k = 1; k * k <= 1'000'000; ++k) squares.push_back(k * k);
  // sqrt(N)/N is decreasing, so any earlier tail checkpoint would read above 0.001.
  CHECK(upper_density_estimate(squares, 1'000'000, std::vector<std::int64_t>{1'000'000})
            .upper_density_proxy <= 0.001);
}

TEST_CASE("density: finite subadditivity") {
  std::mt19937_64 rng(5);
  const std::int64_t N = 20'000;
  const auto checkpoints = linear_schedule(N, 16);
  for (int trial = 0; trial < 20; ++trial) {
    std::bernoulli_distribution in_a(0.05 + 0.02 * trial);
    std::bernoulli_distribution in_b(0.3 - 0.01 * trial);
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> b;
    std::vector<std::int64_t> u;
    for (std::int64_t k = 1; k <= N; ++k) {
      // Make the sets lopsided in time so the tail maxima land at different checkpoints.
      const bool ka = in_a(rng) && (k < N / 2 || trial % 2 == 0);
      const bool kb = in_b(rng) && (k > N / 3);
      if (ka) a.push_back(k);
      if (kb) b.push_back(k);
      if (ka || kb) u.push_back(k);
    }
    const double da = upper_density_estimate(a, N, checkpoints).upper_density_proxy;
    const double db = upper_density_estimate(b, N, checkpoints).upper_density_proxy;
    const double du = upper_density_estimate(u, N, checkpoints).upper_density_proxy;
    CHECK(du <= da + db + 1e-15);
  }
}

TEST_CASE("density: argument errors") {
  const std::vector<std::int64_t> cps{5, 10};
  CHECK_ERROR_KIND(upper_density_estimate(std::vector<std::int64_t>{3, 2}, 10, cps), ErrorKind::argument);
  CHECK_ERROR_KIND(upper_density_estimate(std::vector<std::int64_t>{0, 2}, 10, cps), ErrorKind::argument);
  CHECK_ERROR_KIND(upper_density_estimate(std::vector<std::int64_t>{2, 11}, 10, cps), ErrorKind::argument);
  CHECK_ERROR_KIND(upper_density_estimate(std::vector<std::int64_t>{2}, 10, std::vector<std::int64_t>{5, 9}),
                   ErrorKind::argument);
}
