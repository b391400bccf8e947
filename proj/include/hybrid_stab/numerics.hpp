#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hybrid_stab::numerics {

/// Shrinks [lo, hi] around a change of the predicate f > 0, assuming it differs
/// at lo and hi. Stops when the width is <= tol or cannot shrink further.
template <typename F>
std::pair<double, double> bisect(F&& f, double lo, double hi, double tol) {
  double f_lo = f(lo);
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

/// Golden-section search for the maximum of a unimodal `f` on [a, b].
template <typename F>
std::pair<double, double> golden_section_max(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

/// Halton low-discrepancy points in [0, 1)^dim with a Cranley-Patterson
/// rotation drawn from `seed`. Same seed, same sequence on every platform.
class Halton {
 public:
  Halton(int dim, std::uint64_t seed) : shifts_(check_dim(dim)) {
    std::mt19937_64 rng(seed);
    for (auto& s : shifts_) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

  int dim() const { return static_cast<int>(shifts_.size()); }

  /// Coordinate `d` of point `index` (index >= 1 recommended).
  double operator()(std::uint64_t index, int d) const {
    const double v = radical_inverse(index, kPrimes[d]) + shifts_[d];
    return v >= 1.0 ? v - 1.0 : v;
  }

 private:
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13};

  static std::size_t check_dim(int dim) {
    if (dim < 1 || dim > 6) throw std::invalid_argument("Halton dimension must be in [1, 6]");
    return static_cast<std::size_t>(dim);
  }

  static double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
      r += f * static_cast<double>(i % base);
      i /= base;
      f *= inv;
    }
    return r;
  }

  std::vector<double> shifts_;
};

}  // namespace hybrid_stab::numerics
