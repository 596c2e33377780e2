#ifndef ZEROMAP_VERIFIER_HPP
#define ZEROMAP_VERIFIER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zeromap/mapengine.hpp"
#include "zeromap/seqlab.hpp"
#include "zeromap/tower.hpp"

namespace zeromap::verifier {

using mapengine::MapSpec;
using seqlab::ArithmeticSequence;
using seqlab::CesaroSeries;

struct ProbeConfig {
  double epsilon = 0.1;
  double delta = 1e-3;
  std::int64_t horizon = 100'000;
  int pair_count = 100;
  std::uint64_t seed = 1;
  /// Number of evenly spaced checkpoints for running ratios and averages.
  int checkpoints = 16;

  void validate() const;
};

struct PairDensity {
  double u = 0.0;
  double v = 0.0;
  double bad_set_density = 0.0;
};

struct MlsVerdict {
  std::vector<PairDensity> pairs;
  double worst_density = 0.0;
  bool pass = false;
  ProbeConfig config;
};

struct EquicontinuityResult {
  double worst_separation = 0.0;
  double u = 0.0;
  double v = 0.0;
  /// First time n >= 1 at which the worst separation is attained.
  std::int64_t at_time = 0;
  int pairs_checked = 0;
  ProbeConfig config;
};

struct AttractionResult {
  double z = 0.0;
  std::vector<std::pair<std::int64_t, double>> cesaro_distance;
  /// Max of cesaro_distance over the final quarter of checkpoints.
  double limsup_proxy = 0.0;
  bool attained = false;
  std::int64_t entry_time = 0;
  double epsilon = 0.0;
};

/// Deterministic sample of distinct pairs u < v from `K_sample` with
/// 0 < v - u < delta.
std::vector<std::pair<double, double>> sample_pairs(std::span<const double> K_sample,
                                                    double delta, int pair_count,
                                                    std::uint64_t seed);

MlsVerdict mls_probe(const MapSpec& f, std::span<const double> K_sample,
                     const ProbeConfig& cfg);

EquicontinuityResult equicontinuity_probe(const MapSpec& f,
                                          std::span<const double> K_sample,
                                          const ProbeConfig& cfg);

/// (1/N) Σ_{n=1}^{N} |f^n x - f^n z| at each checkpoint.
std::vector<std::pair<std::int64_t, double>> mean_distance(
    const MapSpec& f, double x, double z, std::span<const std::int64_t> schedule);

AttractionResult mean_attraction_search(const MapSpec& f, double x, const tower::Tower& T,
                                        const ProbeConfig& cfg);

/// Continuous test function φ on the map's domain.
class Observable {
 public:
  enum class Kind { constant, coordinate, trig, table };

  static Observable constant(double value);
  static Observable coordinate();
  /// a_0 + Σ_{k>=1} a_k cos(2πkx) + b_k sin(2πkx); b has one entry fewer than a.
  static Observable trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);
  /// Linear interpolation through (xs, ys); xs strictly increasing.
  static Observable table(std::vector<double> xs, std::vector<double> ys);
  /// "coordinate", "constant:1", "trig:a0,a1,...;b1,...", "table:x0:y0,x1:y1,...".
  static Observable parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::string to_string() const;
  double operator()(double x) const;
  /// Argument error unless φ is defined on all of `domain`.
  void require_defined_on(const mapengine::Interval& domain) const;

 private:
  Kind kind_ = Kind::constant;
  std::vector<double> a_;
  std::vector<double> b_;
};

/// (1/N) Σ_{n=1}^{N} c_n φ(f^n x) at each checkpoint.
CesaroSeries disjointness_run(const ArithmeticSequence& c, const Observable& phi,
                              const MapSpec& f, double x,
                              std::span<const std::int64_t> schedule);

/// Same, for several observables sharing one orbit.
std::vector<CesaroSeries> disjointness_run(const ArithmeticSequence& c,
                                           std::span<const Observable> phis,
                                           const MapSpec& f, double x,
                                           std::span<const std::int64_t> schedule);

}  // namespace zeromap::verifier

#endif  // ZEROMAP_VERIFIER_HPP
