#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace carleson_kit {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when an argument lies outside the mathematical domain of an operation
/// (a point outside the open disk, a non-analytic grid where analyticity is required, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a subspace system (or Gram matrix) is numerically singular.
class LinearDependenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a vector is farther than epsilon from every member of a sphere net.
class NetValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double norm2(cplx z) { return std::norm(z); }

/// Angle of z folded into [0, 2pi).
inline double angle_of(cplx z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Worker cap from CARLESON_KIT_THREADS (falls back to the hardware count).
inline std::size_t thread_cap() {
  std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CARLESON_KIT_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return std::min<std::size_t>(hw, static_cast<std::size_t>(v));
  }
  return hw;
}

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers write
/// results into per-index slots so the merged output is independent of scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::size_t workers = std::min(thread_cap(), n);
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace carleson_kit
