#pragma once

// Exact segment predicates shared by the grid and tether code. Callers pass
// either small integers or dyadic doubles, so the products below are exact.

namespace riskpath::detail {

template <typename T>
constexpr T cross(T ax, T ay, T bx, T by) {
  return ax * by - ay * bx;
}

template <typename T>
constexpr int orientation(T ax, T ay, T bx, T by, T cx, T cy) {
  const T v = cross(bx - ax, by - ay, cx - ax, cy - ay);
  return (v > T(0)) - (v < T(0));
}

/// Does the open segment (a, b) meet the open box (x0, x1) x (y0, y1)?
template <typename T>
bool open_segment_hits_open_box(T ax, T ay, T bx, T by, T x0, T y0, T x1, T y1) {
  // Parametric bounds lo < t < hi kept as fractions num/den with den > 0.
  T lo_num = 0, lo_den = 1;
  T hi_num = 1, hi_den = 1;
  auto raise_lo = [&](T n, T d) {
    if (n * lo_den > lo_num * d) {
      lo_num = n;
      lo_den = d;
    }
  };
  auto lower_hi = [&](T n, T d) {
    if (n * hi_den < hi_num * d) {
      hi_num = n;
      hi_den = d;
    }
  };
  auto axis = [&](T a, T d, T lo, T hi) {
    if (d == T(0)) return lo < a && a < hi;
    if (d > T(0)) {
      raise_lo(lo - a, d);
      lower_hi(hi - a, d);
    } else {
      raise_lo(a - hi, -d);
      lower_hi(a - lo, -d);
    }
    return true;
  };
  if (!axis(ax, bx - ax, x0, x1)) return false;
  if (!axis(ay, by - ay, y0, y1)) return false;
  return lo_num * hi_den < hi_num * lo_den;
}

}  // namespace riskpath::detail
