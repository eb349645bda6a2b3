// Small 1-D minimization helpers shared by the infimum searches.
#pragma once

#include <cmath>
#include <utility>

namespace tailbound {

struct Minimum {
  double arg;
  double value;
};

/// Golden-section search for a minimum of f on [a, b]. Stops when the bracket
/// is narrower than rel_tol * max(1, |x|) or after max_iter steps.
template <class F>
Minimum golden_section_min(F&& f, double a, double b, double rel_tol = 1e-12, int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > rel_tol * std::fmax(1.0, std::fabs(c)); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
}

}  // namespace tailbound
