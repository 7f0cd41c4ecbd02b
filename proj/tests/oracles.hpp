#pragma once

// Brute-force partial-sum classifier used as an independent cross-check of
// the library's summability verdicts.  It never looks at annotations: it
// sums |term(n)|^2 to the requested depth and closes the tail with a
// monotone comparison (geometric ratio bound, non-vanishing terms, harmonic
// comparison, or a p-series majorant), reporting Undecided otherwise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace oracle {

enum class Outcome { Converges, Diverges, Undecided };

struct Result {
  Outcome outcome = Outcome::Undecided;
  double partial_sum = 0.0;
  double tail_bound = 0.0;  // for Converges via the geometric rule
};

inline Result classify_partial_sums(const std::function<double(std::int64_t)>& magnitude,
                                    std::int64_t depth) {
  const std::int64_t window = depth / 2;
  Result res;

  double prev_mag = 0.0;
  bool saw_nonfinite = false;
  bool ratio_defined = true;
  double rmax = 0.0;
  double min_mag = std::numeric_limits<double>::infinity();
  std::int64_t last_nonzero = -1;

  bool harmonic_nondecreasing = true;
  double min_harmonic = std::numeric_limits<double>::infinity();
  double prev_harmonic = -1.0;

  bool pseries_nonincreasing = true;
  double prev_pseries = -1.0;
  double pseries_start = 0.0;

  double last_mag = 0.0;
  for (std::int64_t n = 0; n < depth; ++n) {
    double mag = std::abs(magnitude(n));
    if (!std::isfinite(mag)) saw_nonfinite = true;
    res.partial_sum += mag * mag;
    if (mag > 0.0) last_nonzero = n;
    if (n >= window) {
      min_mag = std::min(min_mag, mag);
      if (n > window) {
        if (prev_mag == 0.0)
          ratio_defined = ratio_defined && mag == 0.0;
        else
          rmax = std::max(rmax, mag / prev_mag);
      }
      double u = mag * mag * double(n + 1);
      min_harmonic = std::min(min_harmonic, u);
      if (prev_harmonic >= 0.0 && u < prev_harmonic * (1.0 - 1e-12))
        harmonic_nondecreasing = false;
      prev_harmonic = u;

      double v = mag * mag * std::pow(double(n + 1), 1.05);
      if (prev_pseries >= 0.0 && v > prev_pseries * (1.0 + 1e-12))
        pseries_nonincreasing = false;
      if (n == window) pseries_start = v;
      prev_pseries = v;
    }
    prev_mag = mag;
    if (n == depth - 1) last_mag = mag;
  }

  if (saw_nonfinite) {
    res.outcome = Outcome::Diverges;
    return res;
  }
  if (last_nonzero < window) {
    res.outcome = Outcome::Converges;
    res.tail_bound = 0.0;
    return res;
  }
  if (ratio_defined && min_mag > 0.0 && rmax <= 0.999) {
    res.outcome = Outcome::Converges;
    res.tail_bound = last_mag * last_mag * rmax * rmax / (1.0 - rmax * rmax);
    return res;
  }
  if (min_mag >= 1e-9 && harmonic_nondecreasing && min_harmonic >= 1e-12) {
    res.outcome = Outcome::Diverges;
    return res;
  }
  if (min_harmonic >= 1e-12 && harmonic_nondecreasing) {
    res.outcome = Outcome::Diverges;
    return res;
  }
  if (pseries_nonincreasing && pseries_start > 0.0) {
    // |term|^2 <= v(window) (n+1)^{-1.05}: majorized by a convergent p-series
    res.outcome = Outcome::Converges;
    res.tail_bound = pseries_start * 20.0;  // \int (n+1)^{-1.05} = 20 (n+1)^{-0.05}
    return res;
  }
  return res;
}

}  // namespace oracle
