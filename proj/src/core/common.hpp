#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lamlab {

// Scenario or input inconsistency; maps to process exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (non-convergence, degenerate data); exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// splitmix64: tiny, fully specified, identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [a, b)
  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(Point2 a, Point2 b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Small runtime-dimension vector, d in {2, 3}.
struct VecD {
  int d = 2;
  std::array<double, 3> v{0.0, 0.0, 0.0};

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

inline double dot(const VecD& a, const VecD& b) {
  double s = 0.0;
  for (int i = 0; i < a.d; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const VecD& a) { return std::sqrt(dot(a, a)); }

inline VecD sub(const VecD& a, const VecD& b) {
  VecD r{a.d, {}};
  for (int i = 0; i < a.d; ++i) r[i] = a[i] - b[i];
  return r;
}

inline VecD scaled(const VecD& a, double s) {
  VecD r{a.d, {}};
  for (int i = 0; i < a.d; ++i) r[i] = a[i] * s;
  return r;
}

// 64-bit FNV-1a, used for scenario content digests.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace lamlab
