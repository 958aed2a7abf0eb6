#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "korovkin/domain.hpp"
#include "korovkin/errors.hpp"
#include "korovkin/rng.hpp"
#include "korovkin/vec.hpp"

namespace korovkin {

// Target map F : X -> R^k.
struct VectorFunction {
  int codim = 1;
  std::function<Vec(const Vec&)> eval;
  std::string label;

  Vec operator()(const Vec& u) const { return eval(u); }
};

inline VectorFunction scalar_function(std::function<double(const Vec&)> f, std::string label) {
  return VectorFunction{1, [f = std::move(f)](const Vec& u) { return Vec{f(u)}; },
                        std::move(label)};
}

inline VectorFunction constant_function(Vec c, std::string label = "const") {
  int k = static_cast<int>(c.size());
  return VectorFunction{k, [c = std::move(c)](const Vec&) { return c; }, std::move(label)};
}

// f (x) x  for scalar f and a fixed vector x
inline VectorFunction tensor_with(std::function<double(const Vec&)> f, Vec x,
                                  std::string label = "f*x") {
  int k = static_cast<int>(x.size());
  return VectorFunction{
      k,
      [f = std::move(f), x = std::move(x)](const Vec& u) {
        double v = f(u);
        Vec out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = v * x[i];
        return out;
      },
      std::move(label)};
}

// Strictly positive strictly convex control function g with its gradient.
struct GrowthFunction {
  std::function<double(const Vec&)> g;
  std::function<Vec(const Vec&)> grad;
  std::string label;

  double operator()(const Vec& u) const { return g(u); }
};

// ||u - t||^2 under the Euclidean norm
inline double psi_sq(const Vec& t, const Vec& u) {
  require_same_dim(t, u, "psi_sq");
  return norm_sq(sub(u, t));
}

// Gap between g(u) and the tangent plane of g at t; strictly positive for
// u != t when g is strictly convex.
inline double bregman_gap(const GrowthFunction& g, const Vec& t, const Vec& u) {
  require_same_dim(t, u, "bregman_gap");
  return g(u) - (g(t) + dot(g.grad(t), sub(u, t)));
}

// Checked variant: the gap is used in estimates only for t inside K.
inline double bregman_gap(const GrowthFunction& g, const Domain& domain, const Vec& t,
                          const Vec& u) {
  if (!domain.K().contains(t, 1e-12))
    throw error(errc::domain, "bregman_gap: t must lie in the compact K");
  return bregman_gap(g, t, u);
}

// membership in the sublevel set g^{-1}([0, n])
inline bool sublevel_member(const GrowthFunction& g, double n, const Vec& u) {
  if (!(n > 0)) throw error(errc::input, "sublevel_member: level must be positive");
  return g(u) <= n;
}

inline Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& u,
                            double step_scale = 1e-5) {
  Vec grad(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double h = step_scale * std::max(1.0, std::abs(u[i]));
    Vec up = u, dn = u;
    up[i] += h;
    dn[i] -= h;
    grad[i] = (f(up) - f(dn)) / (2.0 * h);
  }
  return grad;
}

// g(u) = 1 + ||u||^2;  the gap collapses to ||u-t||^2
inline GrowthFunction growth_quadratic() {
  return GrowthFunction{[](const Vec& u) { return 1.0 + norm_sq(u); },
                        [](const Vec& u) { return scaled(u, 2.0); }, "1+|u|^2"};
}

// g(u) = exp(||u||^2 / 2);  super-quadratic growth
inline GrowthFunction growth_exp_half_sq() {
  return GrowthFunction{[](const Vec& u) { return std::exp(0.5 * norm_sq(u)); },
                        [](const Vec& u) { return scaled(u, std::exp(0.5 * norm_sq(u))); },
                        "exp(|u|^2/2)"};
}

inline GrowthFunction growth_from_scalar(std::function<double(const Vec&)> f, std::string label) {
  auto grad = [f](const Vec& u) { return central_gradient(f, u); };
  return GrowthFunction{std::move(f), std::move(grad), std::move(label)};
}

// Empirical validation of the growth hypotheses on the sampled domain:
// positivity and midpoint strict convexity on random pairs, gradient
// against central differences on the K grid, and (for unbounded domains)
// g(t)/||t|| growing along the sampled axis rays.
inline void validate_growth(const GrowthFunction& g, const Domain& domain, Rng& rng,
                            int pairs = 1000, double convexity_tol = 1e-10) {
  Box sample = domain.truncation_box(g);
  for (int i = 0; i < pairs; ++i) {
    Vec u = rng.point(sample.lo, sample.hi);
    Vec v = rng.point(sample.lo, sample.hi);
    double gu = g(u), gv = g(v);
    if (!(gu > 0.0))
      throw error(errc::growth, "growth function is not strictly positive at a sampled point");
    if (norm_sq(sub(u, v)) < 1e-20) continue;
    Vec mid = scaled(add(u, v), 0.5);
    if (!(g(mid) < 0.5 * (gu + gv) + convexity_tol))
      throw error(errc::growth, "growth function fails midpoint strict convexity");
  }
  BoxGrid kg(domain.K(), std::min(domain.grid_resolution(), 17));
  for (std::size_t f = 0; f < kg.size(); ++f) {
    Vec u = kg.point(f);
    Vec an = g.grad(u);
    Vec fd = central_gradient(g.g, u);
    double diff = norm(sub(an, fd));
    if (diff > 1e-6 * std::max(1.0, norm(an)))
      throw error(errc::growth, "gradient disagrees with central differences");
  }
  if (!domain.bounded()) {
    Vec center(domain.dim());
    for (std::size_t i = 0; i < domain.dim(); ++i)
      center[i] = 0.5 * (domain.K().lo[i] + domain.K().hi[i]);
    for (std::size_t i = 0; i < domain.dim(); ++i) {
      const Axis& ax = domain.axes()[i];
      for (double dir : {-1.0, 1.0}) {
        if (dir < 0 && ax.has_lower()) continue;
        if (dir > 0 && ax.has_upper()) continue;
        double reach = dir > 0 ? sample.hi[i] - center[i] : center[i] - sample.lo[i];
        double prev = 0.0;
        for (double frac : {0.25, 0.5, 1.0}) {
          Vec p = center;
          p[i] = center[i] + dir * frac * reach;
          double ratio = g(p) / std::max(norm(p), 1e-12);
          if (ratio < prev)
            throw error(errc::growth,
                        "g(t)/|t| fails to increase along an unbounded sampled ray");
          prev = ratio;
        }
      }
    }
  }
}

}  // namespace korovkin
