#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "korovkin/errors.hpp"
#include "korovkin/grid.hpp"
#include "korovkin/vec.hpp"

namespace korovkin {

enum class AxisKind { box, half_line_lower, half_line_upper, line };

struct Axis {
  AxisKind kind = AxisKind::box;
  double a = 0.0;  // finite lower bound (box, half_line_lower)
  double b = 0.0;  // finite upper bound (box, half_line_upper)

  bool has_lower() const { return kind == AxisKind::box || kind == AxisKind::half_line_lower; }
  bool has_upper() const { return kind == AxisKind::box || kind == AxisKind::half_line_upper; }
  bool bounded() const { return kind == AxisKind::box; }
};

// Convex evaluation domain X in R^m: a product of intervals, with a
// distinguished compact box K and an inner closed box K1.
//
// K1 must lie in the interior of K on every axis where K has positive
// width.  One exception, for m == 1 only: when K starts (or ends) exactly
// at the closed end of a half-line axis, K1 may share that endpoint.
class Domain {
public:
  Domain(std::vector<Axis> axes, Box K, Box K1, int grid_resolution = 201,
         std::optional<double> truncation_radius = std::nullopt)
      : axes_(std::move(axes)),
        K_(std::move(K)),
        K1_(std::move(K1)),
        grid_resolution_(grid_resolution),
        truncation_radius_(truncation_radius) {
    validate();
  }

  std::size_t dim() const { return axes_.size(); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Box& K() const { return K_; }
  const Box& K1() const { return K1_; }
  int grid_resolution() const { return grid_resolution_; }
  std::optional<double> truncation_radius() const { return truncation_radius_; }

  bool bounded() const {
    for (const auto& ax : axes_)
      if (!ax.bounded()) return false;
    return true;
  }

  bool contains(const Vec& p, double tol = 1e-12) const {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i) {
      const Axis& ax = axes_[i];
      if (ax.has_lower() && p[i] < ax.a - tol) return false;
      if (ax.has_upper() && p[i] > ax.b + tol) return false;
    }
    return true;
  }

  // true when the domain is exactly the compact K (bounded-domain mode)
  bool equals_K(double tol = 0.0) const {
    for (std::size_t i = 0; i < dim(); ++i) {
      const Axis& ax = axes_[i];
      if (!ax.bounded()) return false;
      if (std::abs(ax.a - K_.lo[i]) > tol || std::abs(ax.b - K_.hi[i]) > tol) return false;
    }
    return true;
  }

  BoxGrid K_grid() const { return BoxGrid(K_, grid_resolution_); }
  BoxGrid K1_grid() const { return BoxGrid(K1_, grid_resolution_); }

  // Sampling box for the (possibly unbounded) domain.  Unbounded axis ends
  // are cut where g first exceeds 10 * max g on K along the axis ray from
  // the center of K, capped at coordinate magnitude 50; an explicit
  // truncation radius overrides the policy.
  template <typename G>
  Box truncation_box(const G& g) const {
    Box out;
    out.lo.resize(dim());
    out.hi.resize(dim());
    double cap = 50.0;
    std::optional<double> level;
    Vec center(dim());
    for (std::size_t i = 0; i < dim(); ++i) center[i] = 0.5 * (K_.lo[i] + K_.hi[i]);
    if (!truncation_radius_ && !bounded()) {
      double gmax = 0.0;
      BoxGrid kg(K_, std::min(grid_resolution_, 33));
      for (std::size_t f = 0; f < kg.size(); ++f) gmax = std::max(gmax, g(kg.point(f)));
      level = 10.0 * gmax;
    }
    for (std::size_t i = 0; i < dim(); ++i) {
      const Axis& ax = axes_[i];
      out.lo[i] = ax.has_lower() ? ax.a : cut(g, center, i, -1.0, level, cap);
      out.hi[i] = ax.has_upper() ? ax.b : cut(g, center, i, +1.0, level, cap);
    }
    return out;
  }

  template <typename G>
  BoxGrid sample_grid(const G& g) const {
    return BoxGrid(truncation_box(g), grid_resolution_);
  }

private:
  template <typename G>
  double cut(const G& g, const Vec& center, std::size_t axis, double dir,
             std::optional<double> level, double cap) const {
    if (truncation_radius_) {
      double r = *truncation_radius_;
      return dir > 0 ? std::min(center[axis] + r, cap) : std::max(center[axis] - r, -cap);
    }
    // bisect g(center + s*dir*e_axis) == level along the ray
    auto eval = [&](double s) {
      Vec p = center;
      p[axis] = center[axis] + dir * s;
      return g(p);
    };
    double hi_s = 1.0;
    double s_max = cap + std::abs(center[axis]);
    while (eval(hi_s) < *level && hi_s < s_max) hi_s *= 2.0;
    hi_s = std::min(hi_s, s_max);
    double lo_s = 0.0;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo_s + hi_s);
      (eval(mid) < *level ? lo_s : hi_s) = mid;
    }
    double coord = center[axis] + dir * hi_s;
    return dir > 0 ? std::min(coord, cap) : std::max(coord, -cap);
  }

  void validate() const {
    if (axes_.empty()) throw error(errc::config, "domain dimension must be positive");
    if (K_.dim() != dim() || K1_.dim() != dim())
      throw error(errc::config, "K and K1 must match the domain dimension");
    if (grid_resolution_ < 2) throw error(errc::config, "grid_resolution must be >= 2");
    for (std::size_t i = 0; i < dim(); ++i) {
      const Axis& ax = axes_[i];
      if (ax.bounded() && !(ax.a < ax.b))
        throw error(errc::config, "axis " + std::to_string(i + 1) + ": empty interval");
      if (!(K_.lo[i] <= K_.hi[i]))
        throw error(errc::config, "K axis " + std::to_string(i + 1) + ": empty interval");
      if (ax.has_lower() && K_.lo[i] < ax.a - 1e-12)
        throw error(errc::config, "K extends below the domain on axis " + std::to_string(i + 1));
      if (ax.has_upper() && K_.hi[i] > ax.b + 1e-12)
        throw error(errc::config, "K extends above the domain on axis " + std::to_string(i + 1));
      if (K1_.lo[i] > K1_.hi[i])
        throw error(errc::config, "K1 axis " + std::to_string(i + 1) + ": empty interval");

      bool positive_width = K_.hi[i] > K_.lo[i];
      // closed half-line end coinciding with K's edge (the dim==1 special case)
      bool lower_exempt = dim() == 1 && ax.kind == AxisKind::half_line_lower && K_.lo[i] == ax.a;
      bool upper_exempt = dim() == 1 && ax.kind == AxisKind::half_line_upper && K_.hi[i] == ax.b;
      bool lower_ok = positive_width
                          ? (K1_.lo[i] > K_.lo[i] || (lower_exempt && K1_.lo[i] >= K_.lo[i]))
                          : K1_.lo[i] >= K_.lo[i];
      bool upper_ok = positive_width
                          ? (K1_.hi[i] < K_.hi[i] || (upper_exempt && K1_.hi[i] <= K_.hi[i]))
                          : K1_.hi[i] <= K_.hi[i];
      if (!lower_ok || !upper_ok)
        throw error(errc::config,
                    "K1 must lie in the interior of K on axis " + std::to_string(i + 1));
    }
  }

  std::vector<Axis> axes_;
  Box K_;
  Box K1_;
  int grid_resolution_;
  std::optional<double> truncation_radius_;
};

// Bounded-domain helper: X = K = box.  When no inner box is given, K1
// defaults to the middle half of K so the K1-interior invariant holds.
inline Domain box_domain(const Box& box, int grid_resolution = 201,
                         std::optional<Box> K1 = std::nullopt) {
  std::vector<Axis> axes(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) axes[i] = Axis{AxisKind::box, box.lo[i], box.hi[i]};
  Box inner;
  if (K1) {
    inner = *K1;
  } else {
    inner.lo.resize(box.dim());
    inner.hi.resize(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      double w = box.hi[i] - box.lo[i];
      inner.lo[i] = box.lo[i] + 0.25 * w;
      inner.hi[i] = box.hi[i] - 0.25 * w;
    }
  }
  return Domain(std::move(axes), box, inner, grid_resolution);
}

}  // namespace korovkin
