#include "zeromap/tower.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace zeromap::tower {

namespace {

std::uint64_t level_size(int n) { return std::uint64_t{1} << n; }

/// Sorted view of one level for membership queries.
class LevelIndex {
 public:
  LevelIndex(const std::vector<Interval>& level, double margin)
      : level_(level), margin_(margin), order_(level.size()) {
    std::iota(order_.begin(), order_.end(), std::uint64_t{0});
    std::sort(order_.begin(), order_.end(),
              [&](auto a, auto b) { return level_[a].lo < level_[b].lo; });
  }

  std::optional<std::uint64_t> locate(double x) const {
    // Last interval whose inflated lower end is <= x; disjointness makes it unique.
    auto it = std::upper_bound(order_.begin(), order_.end(), x, [&](double v, auto k) {
      return v < level_[k].lo - margin_;
    });
    if (it == order_.begin()) return std::nullopt;
    const auto k = *std::prev(it);
    if (level_[k].contains(x, margin_)) return k;
    return std::nullopt;
  }

  /// Smallest gap between neighbouring inflated intervals and the pair attaining it.
  std::tuple<double, std::uint64_t, std::uint64_t> min_gap() const {
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    for (std::size_t i = 1; i < order_.size(); ++i) {
      const auto& left = level_[order_[i - 1]];
      const auto& right = level_[order_[i]];
      const double gap = (right.lo - margin_) - (left.hi + margin_);
      if (gap < best) {
        best = gap;
        a = order_[i - 1];
        b = order_[i];
      }
    }
    return {best, a, b};
  }

 private:
  const std::vector<Interval>& level_;
  double margin_;
  std::vector<std::uint64_t> order_;
};

Eigen::VectorXd post_burn_in_orbit(const MapSpec& f, double x0, std::int64_t burn_in,
                                   std::int64_t length) {
  const double start = mapengine::compose(f, x0, burn_in);
  Eigen::VectorXd orbit(length);
  double x = start;
  for (std::int64_t t = 0; t < length; ++t) {
    orbit(t) = x;
    x = f(x);
  }
  return orbit;
}

}  // namespace

CodingLabel label_of(int n, std::uint64_t k) { return CodingLabel(k, n); }

std::uint64_t Tower::label_at_time(std::int64_t t, int n) const {
  const auto mod = static_cast<std::int64_t>(level_size(n));
  return static_cast<std::uint64_t>(((t - phase_origin) % mod + mod) % mod);
}

std::optional<std::uint64_t> Tower::locate(double x) const {
  if (levels.empty()) return std::nullopt;
  return LevelIndex(levels.back(), margin).locate(x);
}

bool Tower::degenerate() const {
  if (levels.empty()) return false;
  return std::all_of(levels.back().begin(), levels.back().end(),
                     [&](const Interval& I) { return I.length() <= margin; });
}

std::int64_t default_orbit_length(int n_max) {
  return static_cast<std::int64_t>(level_size(n_max)) * 1024;
}

Tower build_tower(const MapSpec& f, double x0, int n_max, std::int64_t burn_in,
                  std::int64_t orbit_length, const TowerOptions& opts) {
  if (n_max < 1 || n_max > kMaxTowerDepth) {
    fail(ErrorKind::argument, "build_tower: n_max must be in [1, 20]");
  }
  if (burn_in < 0) fail(ErrorKind::argument, "build_tower: burn_in must be >= 0");
  if (!(opts.margin >= 0.0)) fail(ErrorKind::argument, "build_tower: margin must be >= 0");
  if (!f.domain().contains(x0)) fail(ErrorKind::domain, "build_tower: x0 outside the domain");
  if (orbit_length == 0) orbit_length = default_orbit_length(n_max);
  const auto min_length = static_cast<std::int64_t>(level_size(n_max)) * 64;
  if (orbit_length < min_length) {
    fail(ErrorKind::argument, "build_tower: orbit_length must be >= 2^n_max * 64 = " +
                                  std::to_string(min_length));
  }

  Tower T;
  T.map = f;
  T.base_point = x0;
  T.burn_in = burn_in;
  T.orbit_length = orbit_length;
  T.margin = opts.margin;
  T.requested_depth = n_max;

  const Eigen::VectorXd orbit = post_burn_in_orbit(f, x0, burn_in, orbit_length);
  Eigen::Index argmin = 0;
  orbit.minCoeff(&argmin);
  T.phase_origin = argmin % static_cast<std::int64_t>(level_size(n_max));

  for (int n = 1; n <= n_max; ++n) {
    const auto count = level_size(n);
    std::vector<Interval> level(count, Interval{std::numeric_limits<double>::infinity(),
                                                -std::numeric_limits<double>::infinity()});
    for (std::int64_t t = 0; t < orbit_length; ++t) {
      auto& I = level[T.label_at_time(t, n)];
      I.lo = std::min(I.lo, orbit(t));
      I.hi = std::max(I.hi, orbit(t));
    }
    const auto [gap, a, b] = LevelIndex(level, T.margin).min_gap();
    if (!(gap > 0.0)) {
      T.truncation = Truncation{n, std::min(a, b), std::max(a, b), -gap};
      break;
    }
    T.levels.push_back(std::move(level));
  }
  return T;
}

Eigen::VectorXd orbit_sample(const Tower& T) {
  return post_burn_in_orbit(T.map, T.base_point, T.burn_in, T.orbit_length);
}

KSample deepest_sample(const Tower& T) {
  const Eigen::VectorXd orbit = orbit_sample(T);
  std::vector<std::pair<double, std::int64_t>> by_value;
  by_value.reserve(static_cast<std::size_t>(orbit.size()));
  for (Eigen::Index t = 0; t < orbit.size(); ++t) by_value.emplace_back(orbit(t), t);
  std::sort(by_value.begin(), by_value.end());

  KSample out;
  double run_start = 0.0;
  for (const auto& [x, t] : by_value) {
    if (out.points.empty() || x - run_start > T.margin) {
      out.points.push_back(x);
      out.times.push_back(t);
      run_start = x;
    } else {
      out.times.back() = std::min(out.times.back(), t);
    }
  }
  return out;
}

bool TowerReport::all_pass() const {
  return !levels.empty() &&
         std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.pass(); });
}

TowerReport verify_tower(const Tower& T, int samples_per_interval) {
  if (T.levels.empty()) fail(ErrorKind::argument, "verify_tower: empty tower");
  if (samples_per_interval < 1) {
    fail(ErrorKind::argument, "verify_tower: samples_per_interval must be >= 1");
  }
  const double m = T.margin;
  TowerReport report;
  report.samples_per_interval = samples_per_interval;

  for (int n = 1; n <= T.depth(); ++n) {
    const auto& level = T.level(n);
    const auto count = level_size(n);
    LevelReport lr;
    lr.n = n;

    lr.gap_margin = std::get<0>(LevelIndex(level, m).min_gap());
    lr.disjoint = lr.gap_margin > 0.0;

    lr.cyclic_margin = std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 0; k < count; ++k) {
      const auto& src = level[k];
      const auto& dst = level[(k + 1) % count];
      const int samples = src.length() > 0.0 ? samples_per_interval : 1;
      for (int i = 0; i < samples; ++i) {
        const double x =
            samples == 1 ? src.lo : src.lo + src.length() * i / (samples - 1);
        const double y = T.map(x);
        lr.cyclic_margin = std::min(lr.cyclic_margin,
                                    std::min(y - (dst.lo - m), (dst.hi + m) - y));
      }
    }
    lr.cyclic = lr.cyclic_margin >= 0.0;

    // Level 0 is the whole domain.
    lr.nesting_margin = std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 0; k < count; ++k) {
      const Interval parent =
          n == 1 ? T.map.domain() : T.level(n - 1)[k % level_size(n - 1)];
      lr.nesting_margin = std::min(
          lr.nesting_margin,
          std::min(level[k].lo - (parent.lo - m), (parent.hi + m) - level[k].hi));
    }
    lr.nested = lr.nesting_margin >= 0.0;

    lr.tau = tau(T, n);
    lr.degenerate = lr.tau <= m;
    report.levels.push_back(lr);
  }
  return report;
}

double tau(const Tower& T, int n) {
  if (n < 1 || n > T.depth()) {
    fail(ErrorKind::argument, "tau: level " + std::to_string(n) + " beyond tower depth " +
                                  std::to_string(T.depth()));
  }
  double out = 0.0;
  for (const auto& I : T.level(n)) out = std::max(out, I.length());
  return out;
}

Itinerary itinerary(const Tower& T, double x, std::int64_t N) {
  if (T.levels.empty()) fail(ErrorKind::argument, "itinerary: empty tower");
  if (N < 0) fail(ErrorKind::argument, "itinerary: N must be >= 0");
  if (!T.map.domain().contains(x)) fail(ErrorKind::domain, "itinerary: x outside the domain");

  const LevelIndex index(T.levels.back(), T.margin);
  Itinerary out;
  out.depth = T.depth();
  out.labels.reserve(static_cast<std::size_t>(N) + 1);
  double y = x;
  for (std::int64_t t = 0; t <= N; ++t) {
    out.labels.push_back(index.locate(y));
    if (out.labels.back() && out.entry_time < 0) out.entry_time = t;
    y = T.map(y);
  }
  if (out.entry_time < 0) {
    fail(ErrorKind::not_attracted, "itinerary: orbit never entered the tower within " +
                                       std::to_string(N) + " steps");
  }

  std::int64_t pairs = 0;
  std::int64_t mismatches = 0;
  for (std::size_t t = 0; t + 1 < out.labels.size(); ++t) {
    const auto& cur = out.labels[t];
    const auto& next = out.labels[t + 1];
    if (cur) ++out.in_tower_steps;
    if (!cur || !next) continue;
    ++pairs;
    const auto expected = odometer::add_k(odometer::OdometerPoint(*cur, out.depth), 1);
    if (expected.value() != *next) ++mismatches;
  }
  if (out.labels.back()) ++out.in_tower_steps;
  out.conjugacy_defect =
      pairs == 0 ? 0.0 : static_cast<double>(mismatches) / static_cast<double>(pairs);
  return out;
}

}  // namespace zeromap::tower
