#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace keq {

class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// Compensated sum with the terms ordered by descending magnitude; used for the
// alternating inclusion-exclusion series and for bound/entropy accumulation.
inline double sum_descending(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  KahanSum s;
  for (double t : terms) s.add(t);
  return s.value();
}

// x^e by repeated squaring. Multiplies only (no FMA contraction), so the SIMD
// kernel variant reproduces it lane-for-lane, and powers of dyadic rationals
// stay exact.
inline double pow_uint(double x, unsigned e) {
  double r = 1.0;
  double b = x;
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return r;
}

// Probability power with deep underflow reported as an exact zero.
inline double pow_prob(double x, unsigned e) {
  double v = pow_uint(x, e);
  return v < 1e-300 ? 0.0 : v;
}

// Deterministic stream-seed derivation (splitmix64 step on a per-stream
// offset). Worker counts never enter; only the stream index does.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace keq
