#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace magweyl {

using cplx = std::complex<double>;
using std::size_t;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Thrown when an operation is asked for something the implementation
/// deliberately does not cover (e.g. d > 2 integral products).
struct capability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed inputs (shape mismatches, bad configs, ...).
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a linear solve / inversion is outside the trusted regime.
struct singular_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Japanese bracket <v> = sqrt(1 + |v|^2).
inline double jbracket(double v) { return std::sqrt(1.0 + v * v); }

inline double jbracket2(double v1, double v2) {
  return std::sqrt(1.0 + v1 * v1 + v2 * v2);
}

/// Small d-dimensional point (d = 1 or 2); unused components are zero.
struct Point {
  double c[2] = {0.0, 0.0};
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
};

inline Point operator+(Point a, Point b) { return {a.c[0] + b.c[0], a.c[1] + b.c[1]}; }
inline Point operator-(Point a, Point b) { return {a.c[0] - b.c[0], a.c[1] - b.c[1]}; }
inline Point operator*(double s, Point a) { return {s * a.c[0], s * a.c[1]}; }

/// SplitMix64: tiny deterministic PRNG for reproducible test symbols.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  /// Uniform in [-1, 1).
  double sym() { return 2.0 * uniform() - 1.0; }

 private:
  std::uint64_t state_;
};

}  // namespace magweyl
