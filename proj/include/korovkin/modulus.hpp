#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "korovkin/errors.hpp"
#include "korovkin/grid.hpp"
#include "korovkin/growth.hpp"
#include "korovkin/vec.hpp"

namespace korovkin {

// Open neighborhood of 0 cut out by finitely many functionals:
// { y : |<xi, y>| < delta  for all xi }.
struct WeakNeighborhood {
  std::vector<Vec> functionals;
  double delta = 0.0;
};

namespace detail {

// Pair inclusion uses dist^2 <= bound^2 * (1 + 2e-12): distances that are
// exact multiples of the grid spacing land on the threshold up to
// rounding, and the slack keeps those pairs in deterministically.
inline constexpr double kTieSlack = 2e-12;

inline double pair_diff_norm(const std::vector<Vec>& values, std::size_t a, std::size_t b) {
  double s = 0.0;
  const Vec& va = values[a];
  const Vec& vb = values[b];
  for (std::size_t i = 0; i < va.size(); ++i) {
    double d = va[i] - vb[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline std::vector<Vec> grid_values(const VectorFunction& F, const BoxGrid& grid) {
  std::vector<Vec> values;
  values.reserve(grid.size());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    Vec v = F(grid.point(f));
    if (static_cast<int>(v.size()) != F.codim)
      throw error(errc::evaluation, "target '" + F.label + "' returned a wrong-sized vector");
    values.push_back(std::move(v));
  }
  return values;
}

}  // namespace detail

// Grid supremum of ||F(u) - F(t)|| over pairs of K-grid points at
// Euclidean distance <= delta.  Nondecreasing in delta by construction.
//
// Cost is grid_size * (number of admissible offsets); fine for m <= 2 at
// the default resolution, use coarser grids in higher dimension.
inline double modulus_of_continuity(const VectorFunction& F, const Box& K, double delta,
                                    int resolution) {
  if (!(delta > 0.0)) throw error(errc::input, "modulus_of_continuity: delta must be positive");
  BoxGrid grid(K, resolution);
  if (grid.size() == 0) throw error(errc::config, "modulus_of_continuity: empty grid");
  std::vector<Vec> values = detail::grid_values(F, grid);

  const std::size_t m = grid.dim();
  std::vector<std::size_t> sizes(m), strides(m);
  std::size_t total = 1;
  for (std::size_t i = m; i-- > 0;) {
    sizes[i] = grid.axes()[i].size();
    strides[i] = total;
    total *= sizes[i];
  }
  std::vector<double> spacing(m);
  for (std::size_t i = 0; i < m; ++i) spacing[i] = grid.spacing(i);

  const double limit_sq = delta * delta * (1.0 + detail::kTieSlack);
  double best = 0.0;
  std::vector<long> offset(m, 0);

  // walk offsets in the canonical half-space (first nonzero component > 0)
  auto sweep = [&](const std::vector<long>& off) {
    long flat_off = 0;
    for (std::size_t i = 0; i < m; ++i) flat_off += off[i] * static_cast<long>(strides[i]);
    std::vector<std::size_t> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = off[i] < 0 ? static_cast<std::size_t>(-off[i]) : 0;
      hi[i] = off[i] > 0 ? sizes[i] - static_cast<std::size_t>(off[i]) : sizes[i];
    }
    std::vector<std::size_t> idx(lo);
    while (true) {
      std::size_t flat = 0;
      for (std::size_t i = 0; i < m; ++i) flat += idx[i] * strides[i];
      double d = detail::pair_diff_norm(values, flat, flat + static_cast<std::size_t>(flat_off));
      if (d > best) best = d;
      std::size_t axis = m;
      while (axis-- > 0) {
        if (++idx[axis] < hi[axis]) break;
        idx[axis] = lo[axis];
        if (axis == 0) return;
      }
      if (axis == static_cast<std::size_t>(-1)) return;
    }
  };

  std::function<void(std::size_t, double, bool)> walk = [&](std::size_t axis, double dist_sq,
                                                            bool positive_seen) {
    if (axis == m) {
      if (positive_seen) sweep(offset);
      return;
    }
    long max_step =
        spacing[axis] > 0.0
            ? static_cast<long>(std::floor(std::sqrt(std::max(0.0, limit_sq - dist_sq)) /
                                           spacing[axis] * (1.0 + detail::kTieSlack)))
            : 0;
    max_step = std::min(max_step, static_cast<long>(sizes[axis]) - 1);
    long lo_step = positive_seen ? -max_step : 0;
    for (long s = lo_step; s <= max_step; ++s) {
      double d = dist_sq + (s * spacing[axis]) * (s * spacing[axis]);
      if (d > limit_sq) continue;
      offset[axis] = s;
      walk(axis + 1, d, positive_seen || s > 0);
    }
    offset[axis] = 0;
  };
  walk(0, 0.0, false);
  return best;
}

// Grid supremum of ||F(t) - F(u)|| over t in the K grid and u in the B_nu
// grid with |<xi, u - t>| <= delta for every functional xi.  B_nu must
// contain K.
inline double weak_modulus(const VectorFunction& F, const Box& K, const WeakNeighborhood& nbhd,
                           const Box& B_nu, int resolution) {
  if (!(nbhd.delta > 0.0)) throw error(errc::input, "weak_modulus: delta must be positive");
  if (nbhd.functionals.empty())
    throw error(errc::input, "weak_modulus: at least one functional required");
  for (std::size_t i = 0; i < K.dim(); ++i)
    if (B_nu.lo[i] > K.lo[i] + 1e-12 || B_nu.hi[i] < K.hi[i] - 1e-12)
      throw error(errc::config, "weak_modulus: B_nu must contain K");

  BoxGrid tg(K, resolution);
  BoxGrid ug(B_nu, resolution);
  std::vector<Vec> tv = detail::grid_values(F, tg);
  std::vector<Vec> uv = detail::grid_values(F, ug);
  std::vector<Vec> tp = tg.points();
  std::vector<Vec> up = ug.points();

  const double limit = nbhd.delta * (1.0 + detail::kTieSlack);
  double best = 0.0;
  for (std::size_t a = 0; a < tp.size(); ++a) {
    for (std::size_t b = 0; b < up.size(); ++b) {
      bool inside = true;
      for (const Vec& xi : nbhd.functionals) {
        double s = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) s += xi[i] * (up[b][i] - tp[a][i]);
        if (std::abs(s) > limit) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      double d = 0.0;
      for (std::size_t i = 0; i < tv[a].size(); ++i) {
        double e = tv[a][i] - uv[b][i];
        d += e * e;
      }
      best = std::max(best, std::sqrt(d));
    }
  }
  return best;
}

}  // namespace korovkin
