#ifndef ZEROMAP_TEST_SUPPORT_HPP
#define ZEROMAP_TEST_SUPPORT_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "zeromap/core.hpp"

namespace test {

// Kind of the zeromap::Error thrown by f, or nothing when f returns normally.
inline std::optional<zeromap::ErrorKind> error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const zeromap::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

// Trial-division Möbius function.
inline int mobius_oracle(std::int64_t n) {
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

}  // namespace test

#define CHECK_ERROR_KIND(expr, kind) \
  CHECK(test::error_kind([&] { (void)(expr); }) == std::optional<zeromap::ErrorKind>(kind))

#endif  // ZEROMAP_TEST_SUPPORT_HPP
