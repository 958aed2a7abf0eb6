#pragma once

#include <cstddef>
#include <vector>

#include "korovkin/errors.hpp"
#include "korovkin/vec.hpp"

namespace korovkin {

// Axis-aligned box [lo_i, hi_i] in R^m.
struct Box {
  Vec lo, hi;

  std::size_t dim() const { return lo.size(); }

  bool contains(const Vec& p, double tol = 0.0) const {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    return true;
  }

  bool contains_strict(const Vec& p) const {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(lo[i] < p[i] && p[i] < hi[i])) return false;
    return true;
  }

  double diameter() const { return norm(sub(hi, lo)); }
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw error(errc::config, "linspace: need at least one point");
  if (n == 1) return {lo};
  std::vector<double> xs(static_cast<std::size_t>(n));
  double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + i * step;
  xs.back() = hi;
  return xs;
}

// Cartesian grid over a box, res points per axis, row-major with the last
// axis varying fastest.
class BoxGrid {
public:
  BoxGrid() = default;

  BoxGrid(const Box& box, int res) {
    if (box.dim() == 0) throw error(errc::config, "grid over empty box");
    for (std::size_t i = 0; i < box.dim(); ++i) {
      int r = box.hi[i] > box.lo[i] ? res : 1;
      axes_.push_back(linspace(box.lo[i], box.hi[i], r));
    }
  }

  std::size_t dim() const { return axes_.size(); }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.size();
    return n;
  }

  const std::vector<std::vector<double>>& axes() const { return axes_; }

  double spacing(std::size_t axis) const {
    const auto& a = axes_[axis];
    return a.size() > 1 ? (a.back() - a.front()) / static_cast<double>(a.size() - 1) : 0.0;
  }

  // smallest positive inter-point distance of the grid
  double min_spacing() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      double si = spacing(i);
      if (si > 0.0 && (s == 0.0 || si < s)) s = si;
    }
    return s;
  }

  Vec point(std::size_t flat) const {
    Vec p(dim());
    for (std::size_t i = dim(); i-- > 0;) {
      std::size_t n = axes_[i].size();
      p[i] = axes_[i][flat % n];
      flat /= n;
    }
    return p;
  }

  std::vector<Vec> points() const {
    std::vector<Vec> pts;
    pts.reserve(size());
    for (std::size_t f = 0; f < size(); ++f) pts.push_back(point(f));
    return pts;
  }

private:
  std::vector<std::vector<double>> axes_;
};

}  // namespace korovkin
