#include "zeromap/seqlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace zeromap::seqlab {

namespace {

void require_length(std::int64_t N) {
  if (N < 1) fail(ErrorKind::size, "sequence length must be >= 1");
  if (N > kMaxSequenceLength) {
    fail(ErrorKind::size, "sequence length " + std::to_string(N) +
                              " exceeds the supported maximum " +
                              std::to_string(kMaxSequenceLength));
  }
}

// Σ_r F[r] e^{2πi r j / M} for j = 0..M-1, scaled by 1/N.
Eigen::VectorXd fold_to_magnitudes(const std::vector<Complex>& folded,
                                   std::int64_t N) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<Complex> spectrum;
  fft.inv(spectrum, folded);
  Eigen::VectorXd out(static_cast<Eigen::Index>(spectrum.size()));
  const double scale = 1.0 / static_cast<double>(N);
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    out(static_cast<Eigen::Index>(j)) = std::abs(spectrum[j]) * scale;
  }
  return out;
}

}  // namespace

const char* to_string(OscillationVerdict v) {
  return v == OscillationVerdict::violation_witness ? "violation-witness"
                                                    : "consistent-with-oscillating";
}

OscillationVerdict parse_oscillation_verdict(const std::string& s) {
  if (s == "violation-witness") return OscillationVerdict::violation_witness;
  if (s == "consistent-with-oscillating") {
    return OscillationVerdict::consistent_with_oscillating;
  }
  fail(ErrorKind::argument, "unknown oscillation verdict '" + s + "'");
}

ArithmeticSequence ArithmeticSequence::constant(std::int64_t N, Complex value,
                                                std::string label) {
  require_length(N);
  return {Eigen::VectorXcd::Constant(N, value), std::move(label)};
}

ArithmeticSequence ArithmeticSequence::rotation(std::int64_t N, double alpha,
                                                std::string label) {
  require_length(N);
  ArithmeticSequence out{Eigen::VectorXcd(N), std::move(label)};
  for (std::int64_t n = 1; n <= N; ++n) {
    // Reduce n·α mod 1 first so the phase stays accurate for large n.
    const double phase = std::fmod(static_cast<double>(n) * alpha, 1.0);
    out.values(n - 1) = std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return out;
}

ArithmeticSequence ArithmeticSequence::from_real(std::span<const double> values,
                                                 std::string label) {
  require_length(static_cast<std::int64_t>(values.size()));
  ArithmeticSequence out{Eigen::VectorXcd(static_cast<Eigen::Index>(values.size())),
                         std::move(label)};
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.values(static_cast<Eigen::Index>(i)) = values[i];
  }
  return out;
}

std::vector<std::int8_t> mobius_values(std::int64_t N) {
  require_length(N);
  const auto n_max = static_cast<std::size_t>(N);
  std::vector<std::int8_t> mu(n_max + 1, 0);
  std::vector<bool> composite(n_max + 1, false);
  std::vector<std::uint32_t> primes;
  mu[1] = 1;
  for (std::size_t i = 2; i <= n_max; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      mu[i] = -1;
    }
    for (const std::uint32_t p : primes) {
      const std::size_t m = i * p;
      if (m > n_max) break;
      composite[m] = true;
      if (i % p == 0) {
        mu[m] = 0;
        break;
      }
      mu[m] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  mu.erase(mu.begin());
  return mu;
}

ArithmeticSequence mobius_sieve(std::int64_t N) {
  const auto mu = mobius_values(N);
  ArithmeticSequence out{Eigen::VectorXcd(N), "mobius"};
  for (std::int64_t i = 0; i < N; ++i) {
    out.values(i) = static_cast<double>(mu[static_cast<std::size_t>(i)]);
  }
  return out;
}

CesaroSeries cesaro_average(const ArithmeticSequence& c,
                            std::span<const std::int64_t> schedule) {
  require_schedule(schedule, c.size(), "cesaro_average");
  CesaroSeries out;
  out.label = c.label;
  out.points.reserve(schedule.size());
  CompensatedSum<Complex> acc;
  std::int64_t n = 0;
  for (const auto N : schedule) {
    for (; n < N; ++n) acc.add(c.values(n));
    out.points.emplace_back(N, acc.value() / static_cast<double>(N));
  }
  return out;
}

Eigen::VectorXd weyl_magnitudes(const ArithmeticSequence& c, int grid_size,
                                std::int64_t N) {
  if (grid_size < 2) fail(ErrorKind::argument, "grid_size must be >= 2");
  if (N < 1 || N > c.size()) {
    fail(ErrorKind::argument, "weyl_magnitudes: N out of range");
  }
  std::vector<CompensatedSum<Complex>> fold(static_cast<std::size_t>(grid_size));
  for (std::int64_t n = 1; n <= N; ++n) {
    fold[static_cast<std::size_t>(n % grid_size)].add(c(n));
  }
  std::vector<Complex> folded(fold.size());
  std::transform(fold.begin(), fold.end(), folded.begin(),
                 [](const auto& s) { return s.value(); });
  return fold_to_magnitudes(folded, N);
}

OscillationReport oscillation_test(const ArithmeticSequence& c, double lambda,
                                   int grid_size,
                                   std::span<const std::int64_t> schedule,
                                   const OscillationOptions& opts) {
  if (!(lambda > 1.0)) {
    fail(ErrorKind::argument, "oscillation_test: lambda must be > 1");
  }
  if (grid_size < 2) fail(ErrorKind::argument, "oscillation_test: grid_size must be >= 2");
  if (!(opts.floor >= 0.0) || !(opts.slack >= 0.0 && opts.slack < 1.0)) {
    fail(ErrorKind::argument, "oscillation_test: floor >= 0 and 0 <= slack < 1 required");
  }
  require_schedule(schedule, c.size(), "oscillation_test");

  OscillationReport report;
  report.lambda = lambda;
  report.grid_size = grid_size;
  report.floor = opts.floor;
  report.slack = opts.slack;

  const auto M = static_cast<std::size_t>(grid_size);
  std::vector<CompensatedSum<Complex>> fold(M);
  CompensatedSum<double> power_sum;
  CompensatedSum<double> abs_sum;
  std::vector<Eigen::VectorXd> per_checkpoint;
  per_checkpoint.reserve(schedule.size());

  std::int64_t n = 1;
  for (const auto N : schedule) {
    for (; n <= N; ++n) {
      const Complex v = c(n);
      const double a = std::abs(v);
      fold[static_cast<std::size_t>(n % grid_size)].add(v);
      power_sum.add(std::pow(a, lambda));
      abs_sum.add(a);
    }
    const double scale = 1.0 / static_cast<double>(N);
    report.K_estimates.emplace_back(N, power_sum.value() * scale);
    report.abs_mean.emplace_back(N, abs_sum.value() * scale);

    std::vector<Complex> folded(M);
    std::transform(fold.begin(), fold.end(), folded.begin(),
                   [](const auto& s) { return s.value(); });
    per_checkpoint.push_back(fold_to_magnitudes(folded, N));
    report.max_weyl.emplace_back(N, per_checkpoint.back().maxCoeff());
  }

  // A grid frequency witnesses non-oscillation when |S_N(t)| never drops by
  // more than the slack between checkpoints and ends above the floor.
  const Eigen::VectorXd& last = per_checkpoint.back();
  Eigen::Index witness = -1;
  for (Eigen::Index j = 0; j < last.size(); ++j) {
    if (!(last(j) > opts.floor)) continue;
    bool sustained = true;
    for (std::size_t i = 1; i < per_checkpoint.size() && sustained; ++i) {
      sustained = per_checkpoint[i](j) >= (1.0 - opts.slack) * per_checkpoint[i - 1](j);
    }
    if (sustained && (witness < 0 || last(j) > last(witness))) witness = j;
  }

  Eigen::Index worst = witness;
  if (witness >= 0) {
    report.verdict = OscillationVerdict::violation_witness;
  } else {
    last.maxCoeff(&worst);
  }
  report.worst_t = static_cast<double>(worst) / static_cast<double>(grid_size);
  return report;
}

DensityReport upper_density_estimate(std::span<const std::int64_t> E,
                                     std::int64_t N,
                                     std::span<const std::int64_t> checkpoints) {
  if (N < 1) fail(ErrorKind::argument, "upper_density_estimate: N must be >= 1");
  for (std::size_t i = 0; i < E.size(); ++i) {
    if (E[i] < 1 || E[i] > N) {
      fail(ErrorKind::argument, "upper_density_estimate: E must lie in [1, N]");
    }
    if (i > 0 && E[i] <= E[i - 1]) {
      fail(ErrorKind::argument, "upper_density_estimate: E must be strictly increasing");
    }
  }
  require_schedule(checkpoints, N, "upper_density_estimate");
  if (checkpoints.back() != N) {
    fail(ErrorKind::argument, "upper_density_estimate: last checkpoint must equal N");
  }

  DensityReport report;
  report.N = N;
  report.count = static_cast<std::int64_t>(E.size());
  std::size_t idx = 0;
  for (const auto Nj : checkpoints) {
    while (idx < E.size() && E[idx] <= Nj) ++idx;
    report.running_ratio.emplace_back(
        Nj, static_cast<double>(idx) / static_cast<double>(Nj));
  }
  const std::size_t tail_start = checkpoints.size() / 2;
  for (std::size_t j = tail_start; j < report.running_ratio.size(); ++j) {
    report.upper_density_proxy =
        std::max(report.upper_density_proxy, report.running_ratio[j].second);
  }
  return report;
}

}  // namespace zeromap::seqlab
