#pragma once

#include <cstdint>
#include <vector>

#include "opgeom/jets.hpp"

namespace opgeom {

enum class Exec { serial, parallel };

// Uniform grid of per_axis points per axis, strictly interior to [lo, hi]:
// x_k = lo + (k+1)(hi-lo)/(per_axis+1). First axis varies fastest.
inline std::vector<Vec> interior_grid(const Vec& lo, const Vec& hi, int per_axis) {
  const int n = static_cast<int>(lo.size());
  std::vector<Vec> pts;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int i = 0; i < n; ++i)
      x(i) = lo(i) + (idx[i] + 1) * (hi(i) - lo(i)) / (per_axis + 1);
    pts.push_back(std::move(x));
    int k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return pts;
}

// Applies f to every point. The parallel path writes each result into its own
// slot, so output order (and content, f being pure) matches the serial path.
template <class R, class F>
std::vector<R> map_points(const std::vector<Vec>& pts, F&& f, Exec ex) {
  std::vector<R> out(pts.size());
  if (ex == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(pts.size()); ++i)
      out[static_cast<std::size_t>(i)] = f(pts[static_cast<std::size_t>(i)]);
  } else {
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = f(pts[i]);
  }
  return out;
}

}  // namespace opgeom
