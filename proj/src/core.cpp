#include "zeromap/core.hpp"

#include <algorithm>

namespace zeromap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return "argument";
    case ErrorKind::domain: return "domain";
    case ErrorKind::size: return "size";
    case ErrorKind::search: return "search";
    case ErrorKind::sampling: return "sampling";
    case ErrorKind::not_attracted: return "not-attracted";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

std::vector<std::int64_t> linear_schedule(std::int64_t last, int count) {
  if (last < 1 || count < 1) {
    fail(ErrorKind::argument, "linear_schedule needs last >= 1 and count >= 1");
  }
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 1; j <= count; ++j) {
    const std::int64_t v = std::max<std::int64_t>(1, last * j / count);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

std::vector<std::int64_t> decade_schedule(std::int64_t last, std::int64_t first) {
  if (last < 1 || first < 1) {
    fail(ErrorKind::argument, "decade_schedule needs positive bounds");
  }
  std::vector<std::int64_t> out;
  for (std::int64_t v = first; v < last; v *= 10) out.push_back(v);
  out.push_back(last);
  return out;
}

void require_schedule(std::span<const std::int64_t> schedule, std::int64_t limit,
                      const char* what) {
  if (schedule.empty()) {
    fail(ErrorKind::argument, std::string(what) + ": empty schedule");
  }
  std::int64_t prev = 0;
  for (const auto n : schedule) {
    if (n <= prev) {
      fail(ErrorKind::argument,
           std::string(what) + ": schedule must be positive and strictly increasing");
    }
    if (n > limit) {
      fail(ErrorKind::argument, std::string(what) + ": schedule entry " +
                                    std::to_string(n) + " exceeds " +
                                    std::to_string(limit));
    }
    prev = n;
  }
}

}  // namespace zeromap
