#pragma once

// Sampled spectra and rate functions, plus the shared q-grid convention:
// default [-3, 3] in steps of 0.1 with q = -1, 0, 1 present exactly (the kink
// and normalization points must be sampled, not approximated).

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace recur {

struct SpectrumCurve {
  std::string kind;             // "exact-M" | "exact-W" | "exact-Rhat" | "est-..."
  bool exact = true;
  std::vector<double> q;
  std::vector<double> value;    // NaN marks undefined-by-paper points
  std::vector<double> stderr_;  // empty for exact curves
  unsigned n = 0;               // cylinder length (estimated curves)
  std::uint64_t samples = 0;
};

enum class DeviationSide { Above, Below };

inline const char* side_name(DeviationSide s) {
  return s == DeviationSide::Above ? "above" : "below";
}

struct RateFunction {
  DeviationSide side = DeviationSide::Above;
  std::vector<double> u;
  std::vector<double> rate;  // decay exponents, >= 0, rate(0) = 0
  double u0 = 0.0;           // below-side deviations are valid on (0, u0)
};

inline std::vector<double> make_q_grid(double lo = -3.0, double hi = 3.0,
                                       double step = 0.1) {
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    double v = lo + static_cast<double>(i) * step;
    if (v > hi + 1e-12) break;
    grid.push_back(v);
  }
  for (double anchor : {-1.0, 0.0, 1.0}) {
    if (anchor < lo - 1e-12 || anchor > hi + 1e-12) continue;
    bool placed = false;
    for (auto& v : grid) {
      if (std::abs(v - anchor) < 1e-9) {
        v = anchor;  // snap to the exact anchor
        placed = true;
        break;
      }
    }
    if (!placed) {
      auto it = grid.begin();
      while (it != grid.end() && *it < anchor) ++it;
      grid.insert(it, anchor);
    }
  }
  return grid;
}

// Finite-difference convexity / monotonicity check used by curve invariants.
inline bool convex_nondecreasing(const std::vector<double>& x,
                                 const std::vector<double>& y, double tol) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double slope = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (slope < -tol) return false;
  }
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    double left = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    double right = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (right - left < -tol) return false;
  }
  return true;
}

}  // namespace recur
