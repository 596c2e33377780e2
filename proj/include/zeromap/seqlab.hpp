#ifndef ZEROMAP_SEQLAB_HPP
#define ZEROMAP_SEQLAB_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "zeromap/core.hpp"

namespace zeromap::seqlab {

using Complex = std::complex<double>;

/// Complex sequence c_1..c_N. Storage is 0-based; use operator() for the
/// 1-based view.
struct ArithmeticSequence {
  Eigen::VectorXcd values;
  std::string label;

  std::int64_t size() const { return values.size(); }
  Complex operator()(std::int64_t n) const { return values(n - 1); }

  static ArithmeticSequence constant(std::int64_t N, Complex value,
                                     std::string label = "constant");
  /// c_n = e^{2πinα}.
  static ArithmeticSequence rotation(std::int64_t N, double alpha,
                                     std::string label = "rotation");
  static ArithmeticSequence from_real(std::span<const double> values,
                                      std::string label);
};

/// Running averages (1/N) Σ_{n<=N} (...) at a list of checkpoints.
struct CesaroSeries {
  std::vector<std::pair<std::int64_t, Complex>> points;
  std::string label;

  Complex final_value() const { return points.back().second; }
};

enum class OscillationVerdict { consistent_with_oscillating, violation_witness };

const char* to_string(OscillationVerdict v);
OscillationVerdict parse_oscillation_verdict(const std::string& s);

struct OscillationReport {
  double lambda = 2.0;
  std::vector<std::pair<std::int64_t, double>> K_estimates;
  int grid_size = 1024;
  std::vector<std::pair<std::int64_t, double>> max_weyl;
  double worst_t = 0.0;
  OscillationVerdict verdict = OscillationVerdict::consistent_with_oscillating;
  /// (1/N) Σ|c_n| at each checkpoint; upper bound for every |S_N(t)|.
  std::vector<std::pair<std::int64_t, double>> abs_mean;
  double floor = 0.05;
  double slack = 0.05;
};

struct OscillationOptions {
  double floor = 0.05;
  double slack = 0.05;
};

struct DensityReport {
  std::int64_t N = 0;
  std::int64_t count = 0;
  std::vector<std::pair<std::int64_t, double>> running_ratio;
  double upper_density_proxy = 0.0;
};

inline constexpr std::int64_t kMaxSequenceLength = std::int64_t{1} << 28;

/// μ(1..N) from a linear sieve, as small integers.
std::vector<std::int8_t> mobius_values(std::int64_t N);

ArithmeticSequence mobius_sieve(std::int64_t N);

CesaroSeries cesaro_average(const ArithmeticSequence& c,
                            std::span<const std::int64_t> schedule);

/// |S_N(j/grid)| for j = 0..grid-1, S_N(t) = (1/N) Σ_{n<=N} c_n e^{2πint}.
/// Computed by folding c modulo grid and one inverse DFT of length grid.
Eigen::VectorXd weyl_magnitudes(const ArithmeticSequence& c, int grid_size,
                                std::int64_t N);

OscillationReport oscillation_test(const ArithmeticSequence& c, double lambda,
                                   int grid_size,
                                   std::span<const std::int64_t> schedule,
                                   const OscillationOptions& opts = {});

/// Finite-N proxy of the upper density: the largest running ratio
/// #(E ∩ [1, N_j]) / N_j over the tail half of the checkpoints.
DensityReport upper_density_estimate(std::span<const std::int64_t> E,
                                     std::int64_t N,
                                     std::span<const std::int64_t> checkpoints);

}  // namespace zeromap::seqlab

#endif  // ZEROMAP_SEQLAB_HPP
