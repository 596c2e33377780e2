#ifndef ZEROMAP_TOWER_HPP
#define ZEROMAP_TOWER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "zeromap/mapengine.hpp"
#include "zeromap/odometer.hpp"

namespace zeromap::tower {

using mapengine::Interval;
using mapengine::MapSpec;

/// Word w_n = i_0 ... i_{n-1} labelling I_{n,k}, with value(w_n) = k.
using CodingLabel = odometer::Cylinder;

CodingLabel label_of(int n, std::uint64_t k);

/// Where construction stopped when a level failed the disjointness check.
struct Truncation {
  int failed_level = 0;
  std::uint64_t k_a = 0;
  std::uint64_t k_b = 0;
  /// Overlap length between the two offending (inflated) intervals.
  double overlap = 0.0;
};

/// Nested families η_n of 2^n intervals I_{n,k}, n = 1..depth(), built from
/// residue classes of one post-burn-in orbit. f maps I_{n,k} into
/// I_{n,k+1 mod 2^n}; I_{n+1,k} and I_{n+1,k+2^n} lie inside I_{n,k}.
struct Tower {
  MapSpec map = MapSpec::logistic(0.0);
  double base_point = 0.5;
  std::int64_t burn_in = 0;
  std::int64_t orbit_length = 0;
  double margin = 1e-12;
  int requested_depth = 0;
  /// Post-burn-in time index that carries label 0 at every level.
  std::int64_t phase_origin = 0;
  /// levels[n - 1] holds the 2^n intervals of η_n, indexed by k.
  std::vector<std::vector<Interval>> levels;
  std::optional<Truncation> truncation;

  int depth() const { return static_cast<int>(levels.size()); }
  const std::vector<Interval>& level(int n) const { return levels.at(static_cast<std::size_t>(n - 1)); }
  /// Label of the post-burn-in sample at time t on level n.
  std::uint64_t label_at_time(std::int64_t t, int n) const;
  /// Deepest-level interval containing x (margin-inflated), if any.
  std::optional<std::uint64_t> locate(double x) const;
  /// True when every deepest-level interval has width <= margin (finite attractor).
  bool degenerate() const;
};

struct TowerOptions {
  double margin = 1e-12;
};

inline constexpr std::int64_t kDefaultBurnIn = 10'000;
inline constexpr int kMaxTowerDepth = 20;

std::int64_t default_orbit_length(int n_max);

Tower build_tower(const MapSpec& f, double x0, int n_max,
                  std::int64_t burn_in = kDefaultBurnIn,
                  std::int64_t orbit_length = 0, const TowerOptions& opts = {});

/// The post-burn-in orbit the tower was built from (length orbit_length).
Eigen::VectorXd orbit_sample(const Tower& T);

/// Distinct (within margin) post-burn-in points, sorted, with the time index
/// of their first occurrence.
struct KSample {
  std::vector<double> points;
  std::vector<std::int64_t> times;
};
KSample deepest_sample(const Tower& T);

struct LevelReport {
  int n = 0;
  bool disjoint = false;
  /// Smallest gap between consecutive inflated intervals (negative = overlap).
  double gap_margin = 0.0;
  bool cyclic = false;
  /// Smallest distance of a sampled image inside its target interval.
  double cyclic_margin = 0.0;
  bool nested = false;
  double nesting_margin = 0.0;
  double tau = 0.0;
  bool degenerate = false;

  bool pass() const { return disjoint && cyclic && nested; }
};

struct TowerReport {
  std::vector<LevelReport> levels;
  int samples_per_interval = 0;

  bool all_pass() const;
};

TowerReport verify_tower(const Tower& T, int samples_per_interval = 16);

/// Largest interval length on level n.
double tau(const Tower& T, int n);

struct Itinerary {
  /// Deepest-level label of f^t(x), t = 0..N; nullopt = outside the tower.
  std::vector<std::optional<std::uint64_t>> labels;
  double conjugacy_defect = 0.0;
  std::int64_t entry_time = -1;
  std::int64_t in_tower_steps = 0;
  int depth = 0;
};

/// Codes the orbit of x through the deepest level and measures how often
/// label(t+1) differs from add(label(t)).
Itinerary itinerary(const Tower& T, double x, std::int64_t N);

}  // namespace zeromap::tower

#endif  // ZEROMAP_TOWER_HPP
