#include "zeromap/odometer.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace zeromap::odometer {

namespace {

void require_depth(int depth) {
  if (depth < 1 || depth > kMaxDepth) {
    fail(ErrorKind::argument, "odometer depth must be in [1, 64], got " +
                                  std::to_string(depth));
  }
}

std::uint64_t parse_bits(const std::string& bits) {
  std::uint64_t v = 0;
  for (std::size_t m = 0; m < bits.size(); ++m) {
    if (bits[m] == '1') {
      v |= std::uint64_t{1} << m;
    } else if (bits[m] != '0') {
      fail(ErrorKind::argument, "bit string may only contain '0' and '1': " + bits);
    }
  }
  return v;
}

std::string format_bits(std::uint64_t v, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int m = 0; m < n; ++m) {
    if ((v >> m) & 1U) s[static_cast<std::size_t>(m)] = '1';
  }
  return s;
}

Rational reduced(std::uint64_t num, std::uint64_t den) {
  const auto g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

}  // namespace

OdometerPoint::OdometerPoint(std::uint64_t value, int depth)
    : value_(value), depth_(depth) {
  require_depth(depth);
  if ((value & ~low_mask(depth)) != 0) {
    fail(ErrorKind::argument, "odometer value does not fit in depth " +
                                  std::to_string(depth));
  }
}

OdometerPoint OdometerPoint::parse(const std::string& bits) {
  require_depth(static_cast<int>(bits.size()));
  return {parse_bits(bits), static_cast<int>(bits.size())};
}

OdometerPoint OdometerPoint::shift() const {
  if (depth_ == 1) fail(ErrorKind::argument, "cannot shift a depth-1 point");
  return {value_ >> 1, depth_ - 1};
}

std::string OdometerPoint::to_string() const { return format_bits(value_, depth_); }

Cylinder::Cylinder(std::uint64_t prefix, int order) : prefix_(prefix), order_(order) {
  if (order < 0 || order > kMaxDepth) {
    fail(ErrorKind::argument, "cylinder order must be in [0, 64]");
  }
  if ((prefix & ~low_mask(order)) != 0) {
    fail(ErrorKind::argument, "cylinder prefix does not fit its order");
  }
}

Cylinder Cylinder::of(const OdometerPoint& w, int order) {
  if (order < 0 || order > w.depth()) {
    fail(ErrorKind::argument, "cylinder order exceeds point depth");
  }
  return {w.value() & low_mask(order), order};
}

Cylinder Cylinder::parse(const std::string& bits) {
  if (bits.size() > static_cast<std::size_t>(kMaxDepth)) {
    fail(ErrorKind::argument, "cylinder prefix longer than 64 bits");
  }
  return {parse_bits(bits), static_cast<int>(bits.size())};
}

bool Cylinder::contains(const OdometerPoint& w) const {
  return w.depth() >= order_ && (w.value() & low_mask(order_)) == prefix_;
}

double Cylinder::measure() const { return std::ldexp(1.0, -order_); }

std::string Cylinder::to_string() const { return format_bits(prefix_, order_); }

OdometerPoint add_k(const OdometerPoint& w, std::int64_t k) {
  // Unsigned wrap-around then masking is exactly arithmetic mod 2^D.
  const std::uint64_t sum = w.value() + static_cast<std::uint64_t>(k);
  return {sum & low_mask(w.depth()), w.depth()};
}

double odometer_metric(const OdometerPoint& a, const OdometerPoint& b) {
  if (a.depth() != b.depth()) {
    fail(ErrorKind::argument, "odometer_metric: depth mismatch");
  }
  const std::uint64_t diff = a.value() ^ b.value();
  double d = 0.0;
  for (int m = a.depth() - 1; m >= 0; --m) {
    if ((diff >> m) & 1U) d += std::ldexp(1.0, -(m + 1));
  }
  return d;
}

std::vector<std::uint64_t> cylinder_census(const OdometerPoint& w, int n,
                                           std::uint64_t N) {
  if (n < 1 || n > w.depth()) {
    fail(ErrorKind::argument, "cylinder_census: need 1 <= n <= depth");
  }
  if (n > kMaxCensusOrder) {
    fail(ErrorKind::size, "cylinder_census: order above 26 is not tabulated");
  }
  if (N < 1) fail(ErrorKind::argument, "cylinder_census: N must be >= 1");
  std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
  OdometerPoint p = w;
  for (std::uint64_t k = 1; k <= N; ++k) {
    p = add_k(p, 1);
    ++counts[static_cast<std::size_t>(p.value() & low_mask(n))];
  }
  return counts;
}

Progression progression_density(const Cylinder& target, const Cylinder& source) {
  if (target.order() != source.order()) {
    fail(ErrorKind::argument, "progression_density: cylinder orders differ");
  }
  const int n = target.order();
  if (n > kMaxProgressionOrder) {
    fail(ErrorKind::size, "progression_density: modulus 2^n must fit in 64 bits");
  }
  const std::uint64_t modulus = std::uint64_t{1} << n;
  Progression p;
  p.modulus = modulus;
  p.offset = (target.prefix() - source.prefix()) & low_mask(n);
  p.density = Rational{1, modulus};
  return p;
}

Rational union_density(std::span<const Cylinder> targets, const Cylinder& source) {
  if (targets.empty()) return {0, 1};
  std::set<std::uint64_t> residues;
  std::uint64_t modulus = 1;
  for (const auto& t : targets) {
    const auto p = progression_density(t, source);
    residues.insert(p.offset);
    modulus = p.modulus;
  }
  return reduced(residues.size(), modulus);
}

}  // namespace zeromap::odometer
