#pragma once

// Small derivative-free simplex minimizer with a projection hook for box
// constraints. Every trial point goes through `project` before evaluation, so
// the simplex never leaves the feasible region.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

namespace aicsel {

template <std::size_t Dim>
struct SimplexResult {
  std::array<double, Dim> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <std::size_t Dim>
struct SimplexOptions {
  std::array<double, Dim> initialStep{};
  double diameterTolerance = 1e-7;
  int maxIterations = 5000;
};

template <std::size_t Dim, typename Objective, typename Projection>
SimplexResult<Dim> nelder_mead(Objective&& f, Projection&& project, std::array<double, Dim> start,
                               const SimplexOptions<Dim>& opts) {
  using Point = std::array<double, Dim>;
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  std::array<Point, Dim + 1> pts;
  std::array<double, Dim + 1> vals;
  pts[0] = project(start);
  for (std::size_t i = 0; i < Dim; ++i) {
    Point p = pts[0];
    p[i] += opts.initialStep[i];
    Point q = project(p);
    if (q == pts[0]) {
      // Stepped into a wall; go the other way.
      p[i] = pts[0][i] - opts.initialStep[i];
      q = project(p);
    }
    pts[i + 1] = q;
  }
  for (std::size_t i = 0; i <= Dim; ++i) vals[i] = f(pts[i]);

  auto along = [&](const Point& c, const Point& w, double t) {
    Point out;
    for (std::size_t i = 0; i < Dim; ++i) out[i] = c[i] + t * (w[i] - c[i]);
    return project(out);
  };

  SimplexResult<Dim> res;
  std::array<std::size_t, Dim + 1> order;
  for (int it = 0; it < opts.maxIterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[Dim - 1];

    double diameter = 0.0;
    for (std::size_t v = 0; v <= Dim; ++v) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < Dim; ++i) d2 += std::pow(pts[v][i] - pts[best][i], 2);
      diameter = std::max(diameter, std::sqrt(d2));
    }
    res.iterations = it;
    if (diameter < opts.diameterTolerance) {
      res.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t v = 0; v <= Dim; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < Dim; ++i) centroid[i] += pts[v][i] / Dim;
    }

    const Point xr = along(centroid, pts[worst], -kReflect);
    const double fr = f(xr);
    if (fr < vals[best]) {
      const Point xe = along(centroid, pts[worst], -kExpand);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Point xc = outside ? along(centroid, xr, kContract) : along(centroid, pts[worst], kContract);
    const double fc = f(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t v = 0; v <= Dim; ++v) {
      if (v == best) continue;
      pts[v] = along(pts[best], pts[v], kShrink);
      vals[v] = f(pts[v]);
    }
  }
  const auto bestIt = std::min_element(vals.begin(), vals.end());
  res.x = pts[static_cast<std::size_t>(bestIt - vals.begin())];
  res.value = *bestIt;
  return res;
}

}  // namespace aicsel
