#ifndef ZEROMAP_MAPENGINE_HPP
#define ZEROMAP_MAPENGINE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zeromap/core.hpp"

namespace zeromap::mapengine {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x, double margin = 0.0) const {
    return x >= lo - margin && x <= hi + margin;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Family { logistic, tent, quadratic, piecewise_linear };

const char* to_string(Family f);

/// A continuous self-map of a closed interval. Invariance of the domain is
/// checked by dense sampling when the map is constructed.
class MapSpec {
 public:
  /// x -> r x (1 - x) on [0, 1], 0 <= r <= 4.
  static MapSpec logistic(double r);
  /// x -> s min(x, 1 - x) on [0, 1], 0 <= s <= 2.
  static MapSpec tent(double s);
  /// x -> x^2 + c on [-β, β], β = (1 + sqrt(1 - 4c)) / 2, -2 <= c <= 1/4.
  static MapSpec quadratic(double c);
  /// Linear interpolation of `values` at equally spaced nodes of `domain`.
  static MapSpec piecewise_linear(std::vector<double> values, Interval domain);

  /// "logistic r=3.5699 domain=[0,1]", "tent s=2", "quadratic c=-1.4",
  /// "piecewise-linear y=0,1,0 domain=[0,1]".
  static MapSpec parse(const std::string& text);
  std::string to_string() const;

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  const Interval& domain() const { return domain_; }

  /// Critical (turning) point for the unimodal families.
  std::optional<double> critical_point() const;

  template <class Scalar>
  Scalar operator()(Scalar x) const {
    const Scalar y = evaluate(x);
    // Round-off can push an image a few ulps outside an invariant domain.
    return std::clamp(y, static_cast<Scalar>(domain_.lo), static_cast<Scalar>(domain_.hi));
  }

  friend bool operator==(const MapSpec&, const MapSpec&) = default;

 private:
  MapSpec(Family family, std::vector<double> params, Interval domain);

  template <class Scalar>
  Scalar evaluate(Scalar x) const {
    switch (family_) {
      case Family::logistic:
        return static_cast<Scalar>(params_[0]) * x * (Scalar(1) - x);
      case Family::tent:
        return static_cast<Scalar>(params_[0]) * std::min(x, Scalar(1) - x);
      case Family::quadratic:
        return x * x + static_cast<Scalar>(params_[0]);
      case Family::piecewise_linear: {
        const auto segments = static_cast<Scalar>(params_.size() - 1);
        const Scalar u = (x - static_cast<Scalar>(domain_.lo)) /
                         static_cast<Scalar>(domain_.length()) * segments;
        const auto i = static_cast<std::size_t>(
            std::clamp(u, Scalar(0), segments - Scalar(1)));
        const Scalar frac = u - static_cast<Scalar>(i);
        return static_cast<Scalar>(params_[i]) +
               frac * static_cast<Scalar>(params_[i + 1] - params_[i]);
      }
    }
    return x;
  }

  void check_invariance() const;

  Family family_;
  std::vector<double> params_;
  Interval domain_;
};

/// f^n(x) by composition.
template <class Scalar>
Scalar compose(const MapSpec& f, Scalar x, std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) x = f(x);
  return x;
}

/// (x, f(x), ..., f^n(x)).
Eigen::VectorXd iterate(const MapSpec& f, double x, std::int64_t n);

struct PeriodicOrbit {
  std::vector<double> points;
  int primitive_period = 1;
};

struct PeriodicOrbitSet {
  std::vector<PeriodicOrbit> orbits;
  int search_period = 1;
  double tolerance = 0.0;
  /// Tolerance used for |f^d(x) - x| when deciding primitive periods and
  /// matching orbit points.
  double match_tolerance = 0.0;
  /// Set when |f^p(x) - x| approaches zero on the grid without a sign change,
  /// i.e. a tangential orbit or a close root pair may have been missed.
  bool completeness_caveat = false;

  std::set<int> periods() const;
};

PeriodicOrbitSet periodic_points(const MapSpec& f, int p, int grid, double tol);

enum class ScreenVerdict { zero_candidate, positive_witness };

const char* to_string(ScreenVerdict v);

struct ScreenResult {
  ScreenVerdict verdict = ScreenVerdict::zero_candidate;
  /// Smallest primitive period that is not a power of two (0 when none).
  int witness_period = 0;
  std::set<int> periods_found;
  int p_max = 0;
  bool completeness_caveat = false;
  /// Orbits found at search period p whose primitive period is exactly p.
  std::vector<PeriodicOrbit> orbits;
};

/// One-sided screen: a period outside {2^n} proves positive entropy, a clean
/// run is only evidence of zero entropy.
ScreenResult entropy_screen(const MapSpec& f, int p_max, int grid, double tol);

bool is_power_of_two(std::int64_t n);

/// Square 0-1 matrix of a subshift of finite type.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(Eigen::MatrixXi entries);
  /// Rows of '0'/'1' characters separated by newlines, ';' or ','.
  static TransitionMatrix parse(const std::string& text);

  const Eigen::MatrixXi& entries() const { return entries_; }
  int dimension() const { return static_cast<int>(entries_.rows()); }
  std::string to_string() const;

 private:
  Eigen::MatrixXi entries_;
};

struct PerronResult {
  double value = 0.0;
  bool irreducible = false;
  bool degenerate = false;
  int iterations = 0;
};

/// Maximal nonnegative eigenvalue of A.
PerronResult perron_eigenvalue(const TransitionMatrix& A, double tol = 1e-13);

/// Strongly connected components of the digraph i -> j when A(i, j) = 1.
std::vector<std::vector<int>> strongly_connected_components(const Eigen::MatrixXi& A);

struct CascadeResult {
  /// Superstable parameter s_k: the critical point has period 2^k.
  double parameter = 0.0;
  /// s_0, ..., s_k.
  std::vector<double> superstable;
  /// Geometric extrapolation of the accumulation point (k >= 2).
  std::optional<double> accumulation;
};

inline constexpr int kMaxCascadeLevel = 16;

CascadeResult locate_cascade_parameter(int k, double tol = 1e-15);

}  // namespace zeromap::mapengine

#endif  // ZEROMAP_MAPENGINE_HPP
