#ifndef ZEROMAP_ODOMETER_HPP
#define ZEROMAP_ODOMETER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zeromap/core.hpp"

namespace zeromap::odometer {

inline constexpr int kMaxDepth = 64;

/// Mask of the low `bits` bits; bits in [0, 64].
constexpr std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

/// Truncation w_D = i_0 i_1 ... i_{D-1} of a point of the dyadic coding space.
/// Bit i_0 is the least significant bit of value().
class OdometerPoint {
 public:
  OdometerPoint(std::uint64_t value, int depth);

  static OdometerPoint zeros(int depth) { return {0, depth}; }
  static OdometerPoint ones(int depth) { return {low_mask(depth), depth}; }
  /// Parses "i_0 i_1 ... i_{D-1}" written without separators, e.g. "1011".
  static OdometerPoint parse(const std::string& bits);

  std::uint64_t value() const { return value_; }
  int depth() const { return depth_; }
  int bit(int m) const { return static_cast<int>((value_ >> m) & 1U); }

  /// Drops i_0: (i_0 i_1 ...) -> (i_1 i_2 ...), depth D-1.
  OdometerPoint shift() const;

  std::string to_string() const;

  friend bool operator==(const OdometerPoint&, const OdometerPoint&) = default;

 private:
  std::uint64_t value_;
  int depth_;
};

/// The n-cylinder [w]_n: all points whose first n bits equal `prefix`.
/// Also used as the coding label w_n of a tower interval.
class Cylinder {
 public:
  Cylinder(std::uint64_t prefix, int order);

  static Cylinder of(const OdometerPoint& w, int order);
  static Cylinder parse(const std::string& bits);

  std::uint64_t prefix() const { return prefix_; }
  int order() const { return order_; }
  bool contains(const OdometerPoint& w) const;
  /// μ([w]_n) = 2^{-n}.
  double measure() const;
  std::string to_string() const;

  friend bool operator==(const Cylinder&, const Cylinder&) = default;

 private:
  std::uint64_t prefix_;
  int order_;
};

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Arithmetic progression {k >= 1 : k ≡ offset (mod modulus)} with its density.
struct Progression {
  std::uint64_t offset = 0;
  std::uint64_t modulus = 1;
  Rational density;

  bool contains(std::uint64_t k) const { return k % modulus == offset; }
};

/// add^k(w): value (value(w) + k) mod 2^D. Negative k gives the inverse iterates.
OdometerPoint add_k(const OdometerPoint& w, std::int64_t k);

/// Σ_{n=1}^{D} |i_{n-1} - i'_{n-1}| / 2^n.
double odometer_metric(const OdometerPoint& a, const OdometerPoint& b);

/// Visits of add^k(w), k = 1..N, to each n-cylinder, indexed by cylinder prefix.
std::vector<std::uint64_t> cylinder_census(const OdometerPoint& w, int n,
                                           std::uint64_t N);

/// E = {k : add^{-k}(target) = source}, i.e. k ≡ prefix(target) - prefix(source)
/// mod 2^n, whose density is μ(source) = 2^{-n}.
Progression progression_density(const Cylinder& target, const Cylinder& source);

/// Density of the union of the progressions for several targets against one source.
Rational union_density(std::span<const Cylinder> targets, const Cylinder& source);

inline constexpr int kMaxCensusOrder = 26;
inline constexpr int kMaxProgressionOrder = 63;

}  // namespace zeromap::odometer

#endif  // ZEROMAP_ODOMETER_HPP
