#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "korovkin/family.hpp"
#include "korovkin/grid.hpp"
#include "korovkin/growth.hpp"
#include "korovkin/modulus.hpp"

namespace korovkin {

constexpr double kBoundSlack = 1e-9;       // measured <= bound + slack
constexpr double kPreserveTol = 1e-9;      // detection of preserved 1 / projections
constexpr double kGrowthRatioCap = 1e6;    // growth-certificate ceiling

// A certified pointwise (or uniform) error estimate together with the
// constants it was assembled from.  `reconstruct()` rebuilds the bound
// from the stored components.
struct BoundReport {
  std::string label;
  int n = 0;
  Vec t;  // empty for uniform reports
  double bound = 0.0;
  double measured = 0.0;
  bool valid = true;
  double const_defect = 0.0;
  double omega = 0.0;
  std::optional<double> delta;
  double s1 = 0.0;
  double gamma_sq = 0.0;
  std::optional<double> M;
  std::optional<double> snh;
  std::string variant;  // pointwise, uniform, general, const-preserving, linear-preserving

  // all applicable growth variants, for cross-checking
  std::optional<double> bound_general, bound_const, bound_linear;

  double reconstruct() const {
    double omega_term = 0.0;
    if (delta && *delta > 0.0) omega_term = omega * (s1 + gamma_sq / (*delta * *delta));
    if (variant == "const-preserving" || variant == "linear-preserving")
      return 2.0 * omega + (M ? *M : 0.0) * (snh ? *snh : 0.0);
    double growth_term = (M && snh) ? *M * *snh : 0.0;
    return const_defect + omega_term + growth_term;
  }
};

// The constant of the growth estimates, produced by grid maximization.
struct GrowthConstant {
  double M = 0.0;
  double nu = 0.0;               // accepted sublevel index (0 when domain is bounded)
  double far_ratio_max = 0.0;    // over u outside B_nu
  double mid_ratio_max = 0.0;    // over u in B_nu away from the interior of K
  double f_over_g_max = 0.0;     // growth certificate of the target
  double psi_ratio_max = 0.0;    // growth certificate of psi^2 (anchored at the K center)
  int resolution = 0;
  Box truncation;
};

struct NuPolicy {
  double eps = 0.5;  // accept nu once h(t,u) >= (1-eps) g(u) outside B_nu
};

namespace detail {

// The grid modulus cannot resolve radii below one grid step, so the
// automatic delta = gamma_n(t) is floored at that scale.  The estimate
// holds for every delta > 0, so the floored value still certifies.
inline double floored_auto_delta(double gamma, const Domain& domain) {
  if (!(gamma > 0.0)) return 0.0;
  return std::max(gamma, domain.K_grid().min_spacing() * (1.0 + 1e-9));
}

inline double point_measured(const OperatorPair& pair, const VectorFunction& F, const Vec& t) {
  return norm(sub(apply_L(pair, F, t), F(t)));
}

inline double point_const_defect(const OperatorPair& pair, const VectorFunction& F,
                                 const Vec& t) {
  Vec ft = F(t);
  return norm(sub(apply_L(pair, constant_function(ft), t), ft));
}

}  // namespace detail

struct MeasuredError {
  std::vector<std::pair<Vec, double>> per_point;
  double sup = 0.0;
};

inline MeasuredError measured_error(const OperatorPair& pair, const VectorFunction& F,
                                    const std::vector<Vec>& points) {
  MeasuredError out;
  out.per_point.reserve(points.size());
  for (const Vec& t : points) {
    double e = detail::point_measured(pair, F, t);
    out.per_point.emplace_back(t, e);
    out.sup = std::max(out.sup, e);
  }
  return out;
}

// Pointwise estimate on a bounded domain (X = K):
//   ||L(F)(t)-F(t)|| <= ||L(F(t))(t)-F(t)|| + w(F,d)[S(1)(t) + d^-2 gamma^2(t)].
// delta = nullopt picks d = gamma_n(t); a vanishing gamma drops the
// modulus term entirely.
inline BoundReport shisha_mond_bound(const OperatorPair& pair, const VectorFunction& F,
                                     const Vec& t, std::optional<double> delta = std::nullopt) {
  if (delta && !(*delta > 0.0))
    throw error(errc::input, "shisha_mond_bound: delta must be positive");
  if (!pair.domain.equals_K(1e-12))
    throw error(errc::mode,
                "shisha_mond_bound needs the bounded mode (domain = K); use growth_bound");
  BoundReport r;
  r.label = F.label;
  r.n = pair.family.n();
  r.t = t;
  r.variant = "pointwise";
  r.s1 = apply_S(pair, [](const Vec&) { return 1.0; }, t);
  r.gamma_sq = gamma_sq(pair, t);
  r.const_defect = detail::point_const_defect(pair, F, t);
  r.measured = detail::point_measured(pair, F, t);
  double d = delta ? *delta
                   : detail::floored_auto_delta(std::sqrt(std::max(0.0, r.gamma_sq)),
                                                pair.domain);
  if (d > 0.0) {
    r.delta = d;
    r.omega = modulus_of_continuity(F, pair.domain.K(), d, pair.domain.grid_resolution());
  }
  r.bound = r.reconstruct();
  r.valid = r.measured <= r.bound + kBoundSlack;
  return r;
}

// Uniform version over the K grid with d = max_t gamma_n(t):
//   ||L(F)-F||_K <= w(F, |gamma|_K) [ |S(1)|_K + 1 ]   (+ sup constant defect
// when the family does not preserve constants).
inline BoundReport uniform_bound(const OperatorPair& pair, const VectorFunction& F) {
  if (!pair.domain.equals_K(1e-12))
    throw error(errc::mode, "uniform_bound needs the bounded mode (domain = K)");
  BoundReport r;
  r.label = F.label;
  r.n = pair.family.n();
  r.variant = "uniform";
  BoxGrid grid = pair.domain.K_grid();
  double gmax_sq = 0.0, s1_max = 0.0, cd_max = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    Vec t = grid.point(f);
    gmax_sq = std::max(gmax_sq, gamma_sq(pair, t));
    s1_max = std::max(s1_max, apply_S(pair, [](const Vec&) { return 1.0; }, t));
    if (!pair.family.flags().constant_preserving)
      cd_max = std::max(cd_max, detail::point_const_defect(pair, F, t));
    r.measured = std::max(r.measured, detail::point_measured(pair, F, t));
  }
  r.s1 = s1_max;
  r.gamma_sq = gmax_sq;
  r.const_defect = cd_max;
  double d = detail::floored_auto_delta(std::sqrt(gmax_sq), pair.domain);
  if (d > 0.0) {
    r.delta = d;
    r.omega = modulus_of_continuity(F, pair.domain.K(), d, pair.domain.grid_resolution());
  }
  r.bound = r.reconstruct();
  r.valid = r.measured <= r.bound + kBoundSlack;
  return r;
}

// Grid estimator of the constant M with ||F(t)-F(u)|| <= M h(t,u) for
// t in K1 and u away from the interior of K.  nu is taken from a doubling
// schedule, accepted once the gap dominates (1-eps) g outside B_nu on the
// sampled truncation grid.
inline GrowthConstant estimate_M(const VectorFunction& F, const GrowthFunction& g,
                                 const Domain& domain, NuPolicy policy = {}) {
  GrowthConstant out;
  out.resolution = domain.grid_resolution();
  out.truncation = domain.truncation_box(g);
  BoxGrid ugrid(out.truncation, domain.grid_resolution());
  std::vector<Vec> upts = ugrid.points();
  std::vector<Vec> fvals_u;
  std::vector<double> gvals_u;
  fvals_u.reserve(upts.size());
  gvals_u.reserve(upts.size());
  for (const Vec& u : upts) {
    fvals_u.push_back(F(u));
    gvals_u.push_back(g(u));
    double ratio = norm(fvals_u.back()) / gvals_u.back();
    if (ratio > kGrowthRatioCap)
      throw error(errc::growth, "target '" + F.label + "' violates the growth certificate: |F|/g = " +
                                    std::to_string(ratio) + " at " + to_string(u));
    out.f_over_g_max = std::max(out.f_over_g_max, ratio);
  }
  Vec center(domain.dim());
  for (std::size_t i = 0; i < domain.dim(); ++i)
    center[i] = 0.5 * (domain.K().lo[i] + domain.K().hi[i]);
  for (std::size_t i = 0; i < upts.size(); ++i)
    out.psi_ratio_max = std::max(out.psi_ratio_max, psi_sq(center, upts[i]) / gvals_u[i]);

  BoxGrid tgrid = domain.K1_grid();
  std::vector<Vec> tpts = tgrid.points();
  std::vector<Vec> fvals_t, grads_t;
  std::vector<double> gvals_t;
  for (const Vec& t : tpts) {
    fvals_t.push_back(F(t));
    grads_t.push_back(g.grad(t));
    gvals_t.push_back(g(t));
  }
  auto gap = [&](std::size_t ti, std::size_t ui) {
    return gvals_u[ui] - (gvals_t[ti] + dot(grads_t[ti], sub(upts[ui], tpts[ti])));
  };

  double nu = 0.0;
  if (!domain.bounded()) {
    double gK = 0.0;
    BoxGrid kg(domain.K(), std::min(domain.grid_resolution(), 33));
    for (std::size_t f = 0; f < kg.size(); ++f) gK = std::max(gK, g(kg.point(f)));
    nu = std::max(1.0, std::ceil(gK));
    while (true) {
      std::vector<std::size_t> far;
      for (std::size_t ui = 0; ui < upts.size(); ++ui)
        if (gvals_u[ui] > nu) far.push_back(ui);
      if (far.empty())
        throw error(errc::truncation,
                    "no admissible sublevel index below the truncation radius; enlarge it");
      bool ok = true;
      for (std::size_t ui : far) {
        for (std::size_t ti = 0; ti < tpts.size() && ok; ++ti)
          if (gap(ti, ui) < (1.0 - policy.eps) * gvals_u[ui]) ok = false;
        if (!ok) break;
      }
      if (ok) break;
      nu *= 2.0;
    }
  } else {
    for (double gv : gvals_u) nu = std::max(nu, std::ceil(gv));
  }
  out.nu = nu;

  const Box& K = domain.K();
  for (std::size_t ui = 0; ui < upts.size(); ++ui) {
    bool far = gvals_u[ui] > nu;
    bool mid = !far && !K.contains_strict(upts[ui]);
    if (!far && !mid) continue;
    for (std::size_t ti = 0; ti < tpts.size(); ++ti) {
      if (norm_sq(sub(upts[ui], tpts[ti])) == 0.0) continue;
      double h = gap(ti, ui);
      double num = norm(sub(fvals_t[ti], fvals_u[ui]));
      if (h <= 0.0) {
        if (num <= 1e-14) continue;
        throw error(errc::growth, "nonpositive gap off the diagonal; g is not strictly convex");
      }
      double ratio = num / h;
      (far ? out.far_ratio_max : out.mid_ratio_max) =
          std::max(far ? out.far_ratio_max : out.mid_ratio_max, ratio);
    }
  }
  out.M = std::max(out.far_ratio_max, out.mid_ratio_max);
  return out;
}

// Growth-controlled pointwise estimate on K1:
//   general:           ||L(F)(t)-F(t)|| <= const_defect + w(F,d)(S(1) + d^-2 gamma^2) + M S(h(t,.))(t)
//   const-preserving:  2 w(F, gamma_n(t)) + M S(h(t,.))(t)          (constants preserved)
//   linear-preserving: 2 w(F, gamma_n(t)) + M (S(g)(t) - g(t))      (projections preserved too)
// Returns the tightest applicable variant; the others ride along for
// cross-checks.  The modulus is always taken on K.
inline BoundReport growth_bound(const OperatorPair& pair, const VectorFunction& F,
                                const GrowthFunction& g, const Vec& t,
                                std::optional<double> delta, const GrowthConstant& MC) {
  if (delta && !(*delta > 0.0)) throw error(errc::input, "growth_bound: delta must be positive");
  if (!pair.domain.K1().contains(t, 1e-12))
    throw error(errc::domain, "growth_bound: t must lie in the inner compact K1");
  if (MC.psi_ratio_max > kGrowthRatioCap)
    throw error(errc::growth, "psi^2 violates the growth certificate on the sampled grid");

  BoundReport r;
  r.label = F.label;
  r.n = pair.family.n();
  r.t = t;
  r.M = MC.M;
  r.s1 = apply_S(pair, [](const Vec&) { return 1.0; }, t);
  r.gamma_sq = gamma_sq(pair, t);
  r.const_defect = detail::point_const_defect(pair, F, t);
  r.measured = detail::point_measured(pair, F, t);

  bool preserves_const = std::abs(r.s1 - 1.0) <= kPreserveTol;
  Vec spr(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    spr[i] = apply_S(pair, [i](const Vec& u) { return u[i]; }, t);
  bool preserves_lin = norm(sub(spr, t)) <= kPreserveTol * (1.0 + norm(t));

  double snh_used = apply_S_h(pair, g, t, preserves_lin ? SHMode::expanded : SHMode::direct);
  double gamma = detail::floored_auto_delta(std::sqrt(std::max(0.0, r.gamma_sq)), pair.domain);
  const Box& K = pair.domain.K();
  int res = pair.domain.grid_resolution();

  double d_gen = delta ? *delta : gamma;
  double omega_gen = d_gen > 0.0 ? modulus_of_continuity(F, K, d_gen, res) : 0.0;
  double general = r.const_defect +
                   (d_gen > 0.0 ? omega_gen * (r.s1 + r.gamma_sq / (d_gen * d_gen)) : 0.0) +
                   MC.M * snh_used;
  r.bound_general = general;

  double omega_gamma = 0.0;
  if (gamma > 0.0)
    omega_gamma = (d_gen == gamma) ? omega_gen : modulus_of_continuity(F, K, gamma, res);
  std::optional<double> with_const, with_linear, sg_minus_g;
  if (preserves_const) {
    with_const = 2.0 * omega_gamma + MC.M * snh_used;
    r.bound_const = with_const;
    if (preserves_lin) {
      sg_minus_g = apply_S(pair, [&g](const Vec& u) { return g(u); }, t) - g(t);
      with_linear = 2.0 * omega_gamma + MC.M * *sg_minus_g;
      r.bound_linear = with_linear;
    }
  }

  // tightest applicable, preferring the sharper specialization on ties
  r.variant = "general";
  r.bound = general;
  r.snh = snh_used;
  r.omega = omega_gen;
  if (d_gen > 0.0) r.delta = d_gen;
  if (with_const && *with_const <= r.bound) {
    r.variant = "const-preserving";
    r.bound = *with_const;
    r.snh = snh_used;
    r.omega = omega_gamma;
    r.delta = gamma > 0.0 ? std::optional<double>(gamma) : std::nullopt;
  }
  if (with_linear && *with_linear <= r.bound) {
    r.variant = "linear-preserving";
    r.bound = *with_linear;
    r.snh = sg_minus_g;
    r.omega = omega_gamma;
    r.delta = gamma > 0.0 ? std::optional<double>(gamma) : std::nullopt;
  }
  r.valid = r.measured <= r.bound + kBoundSlack;
  return r;
}

}  // namespace korovkin
