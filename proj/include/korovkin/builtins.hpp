#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "korovkin/domain.hpp"
#include "korovkin/errors.hpp"
#include "korovkin/family.hpp"
#include "korovkin/gauss_hermite.hpp"

namespace korovkin {

namespace detail {

// Bernstein basis weights C(n,k) t^k (1-t)^{n-k}, k = 0..n.  Anchored at
// the mode in log space and spread by the exact ratio recurrence, all in
// long double, so the double weights are correct to ~1 ulp and their sum
// sits at 1 to well below 1e-12 even for n = 1000.
inline std::vector<MeasureAtom> bernstein_atoms_1d(int n, double t) {
  if (t < 0.0 || t > 1.0)
    throw error(errc::domain, "bernstein: evaluation point outside [0,1]");
  std::vector<MeasureAtom> atoms(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) atoms[static_cast<std::size_t>(k)].node = {double(k) / n};
  if (t == 0.0 || t == 1.0) {
    for (auto& a : atoms) a.weight = 0.0;
    atoms[t == 0.0 ? 0 : static_cast<std::size_t>(n)].weight = 1.0;
    return atoms;
  }
  long double lt = t, lq = 1.0L - static_cast<long double>(t);
  int mode = std::min(n, static_cast<int>((n + 1) * t));
  long double log_anchor =
      std::lgamma(n + 1.0L) - std::lgamma(mode + 1.0L) - std::lgamma(n - mode + 1.0L);
  if (mode > 0) log_anchor += mode * std::log(lt);
  if (mode < n) log_anchor += (n - mode) * std::log(lq);
  long double anchor = std::exp(log_anchor);
  long double w = anchor;
  atoms[static_cast<std::size_t>(mode)].weight = static_cast<double>(w);
  for (int k = mode; k < n; ++k) {
    w *= (static_cast<long double>(n - k) / (k + 1)) * (lt / lq);
    atoms[static_cast<std::size_t>(k) + 1].weight = static_cast<double>(w);
  }
  w = anchor;
  for (int k = mode; k > 0; --k) {
    w *= (static_cast<long double>(k) / (n - k + 1)) * (lq / lt);
    atoms[static_cast<std::size_t>(k) - 1].weight = static_cast<double>(w);
  }
  return atoms;
}

struct SzaszTail {
  std::vector<MeasureAtom> atoms;
  double dropped_mass = 0.0;
};

// Truncated Poisson weights e^{-nt} (nt)^k / k!.  The kept index window is
// chosen so the dropped mass (both tails) stays below the target.
inline SzaszTail szasz_atoms_1d(int n, double t, double tail_target) {
  if (t < 0.0) throw error(errc::domain, "szasz: evaluation point outside [0,inf)");
  SzaszTail out;
  long double lambda = static_cast<long double>(n) * t;
  if (lambda == 0.0L) {
    out.atoms.push_back({{0.0}, 1.0});
    return out;
  }
  int mode = static_cast<int>(lambda);
  long double anchor = std::exp(-lambda + mode * std::log(lambda) - std::lgamma(mode + 1.0L));
  long double budget = 0.5L * static_cast<long double>(tail_target);

  std::vector<std::pair<int, double>> upper;
  long double w = anchor;
  int k = mode;
  upper.emplace_back(k, static_cast<double>(w));
  while (true) {
    long double wn = w * lambda / (k + 1);
    ++k;
    // once past the mode the terms decay geometrically with ratio < 1
    if (static_cast<long double>(k) > lambda) {
      long double ratio = lambda / (k + 1);
      long double bound = wn / (1.0L - ratio);
      if (bound < budget) {
        out.dropped_mass += static_cast<double>(bound);
        break;
      }
    }
    w = wn;
    upper.emplace_back(k, static_cast<double>(w));
  }
  std::vector<std::pair<int, double>> lower;
  w = anchor;
  for (k = mode; k > 0; --k) {
    long double wn = w * static_cast<long double>(k) / lambda;
    long double bound = (k - 1 > 0 && static_cast<long double>(k - 1) < lambda)
                            ? wn / (1.0L - static_cast<long double>(k - 1) / lambda)
                            : wn * k;
    if (bound < budget && static_cast<long double>(k) < lambda) {
      out.dropped_mass += static_cast<double>(bound);
      break;
    }
    w = wn;
    lower.emplace_back(k - 1, static_cast<double>(w));
  }
  out.atoms.reserve(lower.size() + upper.size());
  for (auto it = lower.rbegin(); it != lower.rend(); ++it)
    out.atoms.push_back({{double(it->first) / n}, it->second});
  for (const auto& [idx, weight] : upper)
    out.atoms.push_back({{double(idx) / n}, weight});
  return out;
}

}  // namespace detail

struct SzaszPolicy {
  double tail_target = 1e-14;
};

inline Domain default_bernstein_domain(int m = 1, int grid_resolution = 201) {
  Box b{Vec(static_cast<std::size_t>(m), 0.0), Vec(static_cast<std::size_t>(m), 1.0)};
  return box_domain(b, grid_resolution);
}

inline Domain default_szasz_domain(int grid_resolution = 201) {
  return Domain({Axis{AxisKind::half_line_lower, 0.0, 0.0}}, Box{{0.0}, {2.0}},
                Box{{0.0}, {1.0}}, grid_resolution);
}

inline Domain default_gauss_weierstrass_domain(int grid_resolution = 201) {
  return Domain({Axis{AxisKind::line, 0.0, 0.0}}, Box{{-1.0}, {1.0}}, Box{{-0.5}, {0.5}},
                grid_resolution);
}

inline OperatorPair make_bernstein(int n, Domain domain) {
  if (n < 1) throw error(errc::input, "bernstein: n must be >= 1");
  std::size_t m = domain.dim();
  MeasureFamily fam(
      n, "bernstein", FamilyFlags{true, true},
      [n, m](const Vec& t) -> std::vector<MeasureAtom> {
        if (t.size() != m) throw error(errc::input, "bernstein: wrong point dimension");
        std::vector<MeasureAtom> atoms = detail::bernstein_atoms_1d(n, t[0]);
        for (std::size_t ax = 1; ax < m; ++ax) {
          std::vector<MeasureAtom> axis = detail::bernstein_atoms_1d(n, t[ax]);
          std::vector<MeasureAtom> next;
          next.reserve(atoms.size() * axis.size());
          for (const auto& a : atoms)
            for (const auto& b : axis) {
              MeasureAtom prod;
              prod.node = a.node;
              prod.node.push_back(b.node[0]);
              prod.weight = a.weight * b.weight;
              next.push_back(std::move(prod));
            }
          atoms = std::move(next);
        }
        return atoms;
      });
  return OperatorPair{std::move(fam), std::move(domain)};
}

inline OperatorPair make_bernstein(int n) { return make_bernstein(n, default_bernstein_domain()); }

inline OperatorPair make_szasz(int n, Domain domain, SzaszPolicy policy = {}) {
  if (n < 1) throw error(errc::input, "szasz: n must be >= 1");
  if (domain.dim() != 1)
    throw error(errc::config, "szasz: one-dimensional only; tensorize for boxes");
  MeasureFamily fam(n, "szasz", FamilyFlags{true, true}, nullptr);
  fam.set_atom_fn([n, policy, meta = fam](const Vec& t) -> std::vector<MeasureAtom> {
    detail::SzaszTail r = detail::szasz_atoms_1d(n, t[0], policy.tail_target);
    meta.note_truncation_tail(r.dropped_mass);
    return r.atoms;
  });
  return OperatorPair{std::move(fam), std::move(domain)};
}

inline OperatorPair make_szasz(int n, SzaszPolicy policy = {}) {
  return make_szasz(n, default_szasz_domain(), policy);
}

inline OperatorPair make_gauss_weierstrass(int n, Domain domain, int quad_points = 64) {
  if (n < 1) throw error(errc::input, "gauss_weierstrass: n must be >= 1");
  if (quad_points < 16) throw error(errc::input, "gauss_weierstrass: need at least 16 quadrature points");
  QuadratureRule rule = gauss_hermite(quad_points);
  const double inv_sqrt_pi = 0.5641895835477562869;
  std::size_t m = domain.dim();
  MeasureFamily fam(
      n, "gauss-weierstrass", FamilyFlags{true, true},
      [rule, n, m, inv_sqrt_pi](const Vec& t) -> std::vector<MeasureAtom> {
        if (t.size() != m) throw error(errc::input, "gauss_weierstrass: wrong point dimension");
        double scale = 1.0 / std::sqrt(static_cast<double>(n));
        std::vector<MeasureAtom> atoms{{Vec{}, 1.0}};
        for (std::size_t ax = 0; ax < m; ++ax) {
          std::vector<MeasureAtom> next;
          next.reserve(atoms.size() * rule.nodes.size());
          for (const auto& a : atoms)
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
              MeasureAtom prod;
              prod.node = a.node;
              prod.node.push_back(t[ax] + rule.nodes[j] * scale);
              prod.weight = a.weight * rule.weights[j] * inv_sqrt_pi;
              next.push_back(std::move(prod));
            }
          atoms = std::move(next);
        }
        return atoms;
      });
  fam.set_quadrature_order(quad_points);
  return OperatorPair{std::move(fam), std::move(domain)};
}

inline OperatorPair make_gauss_weierstrass(int n, int quad_points = 64) {
  return make_gauss_weierstrass(n, default_gauss_weierstrass_domain(), quad_points);
}

// Product family over a box in R^m built from a one-dimensional family.
inline OperatorPair make_tensor(const OperatorPair& op_1d, int m) {
  if (m < 1) throw error(errc::input, "make_tensor: dimension must be >= 1");
  if (op_1d.domain.dim() != 1)
    throw error(errc::config, "make_tensor: base family must be one-dimensional");
  const MeasureFamily base = op_1d.family;
  MeasureFamily fam(
      base.n(), base.label() + "-tensor", base.flags(),
      [base, m](const Vec& t) -> std::vector<MeasureAtom> {
        if (t.size() != static_cast<std::size_t>(m))
          throw error(errc::input, "tensor family: wrong point dimension");
        std::vector<MeasureAtom> atoms{{Vec{}, 1.0}};
        for (int ax = 0; ax < m; ++ax) {
          const auto& axis = base.atoms_at({t[static_cast<std::size_t>(ax)]});
          std::vector<MeasureAtom> next;
          next.reserve(atoms.size() * axis.size());
          for (const auto& a : atoms)
            for (const auto& b : axis) {
              MeasureAtom prod;
              prod.node = a.node;
              prod.node.push_back(b.node[0]);
              prod.weight = a.weight * b.weight;
              next.push_back(std::move(prod));
            }
          atoms = std::move(next);
        }
        return atoms;
      });

  const auto& ax1 = op_1d.domain.axes()[0];
  std::vector<Axis> axes(static_cast<std::size_t>(m), ax1);
  Box K{Vec(static_cast<std::size_t>(m)), Vec(static_cast<std::size_t>(m))};
  Box K1 = K;
  for (int i = 0; i < m; ++i) {
    K.lo[static_cast<std::size_t>(i)] = op_1d.domain.K().lo[0];
    K.hi[static_cast<std::size_t>(i)] = op_1d.domain.K().hi[0];
    K1.lo[static_cast<std::size_t>(i)] = op_1d.domain.K1().lo[0];
    K1.hi[static_cast<std::size_t>(i)] = op_1d.domain.K1().hi[0];
  }
  Domain domain(std::move(axes), std::move(K), std::move(K1), op_1d.domain.grid_resolution(),
                op_1d.domain.truncation_radius());
  return OperatorPair{std::move(fam), std::move(domain)};
}

}  // namespace korovkin
