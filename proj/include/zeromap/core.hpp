#ifndef ZEROMAP_CORE_HPP
#define ZEROMAP_CORE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <iterator>
#include <type_traits>
#include <vector>

namespace zeromap {

enum class ErrorKind {
  argument,
  domain,
  size,
  search,
  sampling,
  not_attracted,
  io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` says which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

/// Neumaier-compensated accumulator. Summation order is the call order, so
/// results are reproducible bit-for-bit for a fixed input sequence.
template <class Scalar>
class CompensatedSum {
 public:
  void add(Scalar v) {
    const Scalar t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(Scalar v) {
    add(v);
    return *this;
  }

  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{};
  Scalar comp_{};
};

/// Complex sums compensate the real and imaginary parts independently.
template <class Real>
class CompensatedSum<std::complex<Real>> {
 public:
  void add(std::complex<Real> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }

  CompensatedSum& operator+=(std::complex<Real> v) {
    add(v);
    return *this;
  }

  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

template <class Range>
auto compensated_sum(const Range& values) {
  using Scalar = std::decay_t<decltype(*std::begin(values))>;
  CompensatedSum<Scalar> acc;
  for (const auto& v : values) acc.add(v);
  return acc.value();
}

/// `count` evenly spaced checkpoints ending at `last` (deduplicated, increasing).
std::vector<std::int64_t> linear_schedule(std::int64_t last, int count = 16);

/// 10^k checkpoints up to `last`, always ending in `last`.
std::vector<std::int64_t> decade_schedule(std::int64_t last,
                                          std::int64_t first = 10);

/// Throws ErrorKind::argument unless the schedule is non-empty, strictly
/// increasing, positive and bounded by `limit`.
void require_schedule(std::span<const std::int64_t> schedule,
                      std::int64_t limit, const char* what);

}  // namespace zeromap

#endif  // ZEROMAP_CORE_HPP
