#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "korovkin/bounds.hpp"
#include "korovkin/family.hpp"
#include "korovkin/growth.hpp"

namespace korovkin {

constexpr double kZeroDefectFloor = 1e-12;

// least-squares slope of log(defect) against log(n)
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;       // rms residual of the fit
  bool neg_infinity = false;   // all defects at numerical zero
  bool flagged = false;        // nonpositive defects were dropped
  int used_points = 0;
};

inline RateFit rate_fit(const std::vector<std::pair<int, double>>& series) {
  if (series.size() < 3)
    throw error(errc::insufficient_data, "rate_fit: need at least three process indices");
  RateFit fit;
  std::vector<double> xs, ys;
  for (const auto& [n, d] : series) {
    if (d > kZeroDefectFloor) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(d));
    }
  }
  fit.used_points = static_cast<int>(xs.size());
  if (xs.empty()) {
    fit.neg_infinity = true;
    fit.slope = -std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.flagged = xs.size() < series.size();
  if (xs.size() == 1) {
    fit.intercept = ys[0];
    return fit;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / xs.size());
  return fit;
}

struct DefectSeries {
  std::string label;
  std::vector<std::pair<int, double>> points;  // (n, sup defect)
  RateFit rate;
  bool pass = false;
  Vec worst_t;  // argmax at the largest n
};

struct StatementReport {
  std::string statement;
  std::vector<DefectSeries> series;
  bool verdict = false;
  double threshold = 0.0;
  std::vector<std::string> findings;
  std::vector<std::string> rejected;  // probes failing the growth certificate
};

// Convergence policy: defect at the largest n below the threshold, and
// decreasing over the last two steps (or already at numerical zero).
inline bool series_converges(const std::vector<std::pair<int, double>>& pts, double threshold) {
  std::size_t J = pts.size() - 1;
  double last = pts[J].second;
  if (!(last < threshold)) return false;
  if (last <= kZeroDefectFloor) return true;
  return pts[J].second < pts[J - 1].second && pts[J - 1].second < pts[J - 2].second;
}

// the k+1 well-spread constants used for the uniformity-in-c checks
inline std::vector<Vec> spread_constants(int codim) {
  std::vector<Vec> cs;
  for (int i = 0; i < codim; ++i) {
    Vec e(static_cast<std::size_t>(codim), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    cs.push_back(std::move(e));
  }
  Vec diag(static_cast<std::size_t>(codim), -1.0 / std::sqrt(static_cast<double>(codim)));
  cs.push_back(std::move(diag));
  return cs;
}

// The Korovkin test set: the constant one, every coordinate projection,
// and the growth function, plus the constant targets.
struct TestSet {
  std::vector<std::pair<std::string, std::function<double(const Vec&)>>> functions;
  std::vector<Vec> constants;
};

inline TestSet make_test_set(std::size_t m, const GrowthFunction& g, int codim = 2) {
  TestSet ts;
  ts.functions.emplace_back("one", [](const Vec&) { return 1.0; });
  for (std::size_t i = 0; i < m; ++i)
    ts.functions.emplace_back("pr" + std::to_string(i + 1),
                              [i](const Vec& u) { return u[i]; });
  ts.functions.emplace_back("g", [g](const Vec& u) { return g(u); });
  ts.constants = spread_constants(codim);
  return ts;
}

namespace detail {

inline void require_increasing_n(const std::vector<OperatorPair>& pairs) {
  if (pairs.size() < 3)
    throw error(errc::insufficient_data,
                "need at least three process indices to form a verdict");
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].family.n() <= pairs[i - 1].family.n())
      throw error(errc::config, "process indices must be strictly increasing");
}

inline DefectSeries eval_series(
    const std::vector<OperatorPair>& pairs, const std::string& label,
    const std::function<double(const OperatorPair&, const Vec&)>& defect,
    const std::vector<Vec>& grid, double threshold) {
  DefectSeries s;
  s.label = label;
  for (const OperatorPair& pair : pairs) {
    double sup = 0.0;
    Vec worst = grid.front();
    for (const Vec& t : grid) {
      double d = defect(pair, t);
      if (d > sup) {
        sup = d;
        worst = t;
      }
    }
    s.points.emplace_back(pair.family.n(), sup);
    s.worst_t = worst;
  }
  s.rate = rate_fit(s.points);
  s.pass = series_converges(s.points, threshold);
  return s;
}

inline double const_defect_at(const OperatorPair& pair, const std::vector<Vec>& constants,
                              const Vec& t) {
  double worst = 0.0;
  for (const Vec& c : constants)
    worst = std::max(worst, norm(sub(apply_L(pair, constant_function(c), t), c)));
  return worst;
}

}  // namespace detail

// statement a: L(c) -> c, S(1) -> 1, S(h(t,.))(t) -> 0
inline StatementReport check_statement_a(const std::vector<OperatorPair>& pairs,
                                         const GrowthFunction& g, const std::vector<Vec>& grid,
                                         double threshold, int codim = 2) {
  detail::require_increasing_n(pairs);
  StatementReport rep;
  rep.statement = "a";
  rep.threshold = threshold;
  auto constants = spread_constants(codim);
  rep.series.push_back(detail::eval_series(
      pairs, "const",
      [&constants](const OperatorPair& p, const Vec& t) {
        return detail::const_defect_at(p, constants, t);
      },
      grid, threshold));
  rep.series.push_back(detail::eval_series(
      pairs, "one",
      [](const OperatorPair& p, const Vec& t) {
        return std::abs(apply_S(p, [](const Vec&) { return 1.0; }, t) - 1.0);
      },
      grid, threshold));
  rep.series.push_back(detail::eval_series(
      pairs, "snh",
      [&g, &rep](const OperatorPair& p, const Vec& t) {
        double direct = apply_S_h(p, g, t, SHMode::direct);
        double expanded = apply_S_h(p, g, t, SHMode::expanded);
        if (std::abs(direct - expanded) > 1e-9 * std::max(1.0, std::abs(direct)))
          rep.findings.push_back("gap expansion identity violated at " + to_string(t) +
                                 " for n = " + std::to_string(p.family.n()));
        return std::abs(direct);
      },
      grid, threshold));
  rep.verdict = std::all_of(rep.series.begin(), rep.series.end(),
                            [](const DefectSeries& s) { return s.pass; });
  return rep;
}

// statement b': L(c) -> c, S(1) -> 1, S(pr_i) -> pr_i, S(g) -> g
inline StatementReport check_statement_b(const std::vector<OperatorPair>& pairs,
                                         const GrowthFunction& g, const std::vector<Vec>& grid,
                                         double threshold, int codim = 2,
                                         bool with_constants = true) {
  detail::require_increasing_n(pairs);
  StatementReport rep;
  rep.statement = with_constants ? "b" : "f";
  rep.threshold = threshold;
  std::size_t m = grid.front().size();
  TestSet ts = make_test_set(m, g, codim);
  if (with_constants)
    rep.series.push_back(detail::eval_series(
        pairs, "const",
        [&ts](const OperatorPair& p, const Vec& t) {
          return detail::const_defect_at(p, ts.constants, t);
        },
        grid, threshold));
  for (const auto& [label, fn] : ts.functions) {
    rep.series.push_back(detail::eval_series(
        pairs, label,
        [&fn, label](const OperatorPair& p, const Vec& t) {
          double target = label == "one" ? 1.0 : fn(t);
          return std::abs(apply_S(p, fn, t) - target);
        },
        grid, threshold));
  }
  rep.verdict = std::all_of(rep.series.begin(), rep.series.end(),
                            [](const DefectSeries& s) { return s.pass; });
  return rep;
}

// statement c (and its restrictions d and e): probe convergence inside the
// growth class; probes failing the certificate are rejected, not scored.
inline StatementReport check_statement_c(const std::vector<OperatorPair>& pairs,
                                         const GrowthFunction& g, const Domain& domain,
                                         const std::vector<VectorFunction>& probes,
                                         double threshold, const std::string& key = "c") {
  detail::require_increasing_n(pairs);
  StatementReport rep;
  rep.statement = key;
  rep.threshold = threshold;
  BoxGrid sample = domain.sample_grid(g);
  std::vector<Vec> grid = domain.K1_grid().points();
  for (const VectorFunction& F : probes) {
    if (key == "d" && F.codim < 2) continue;
    if (key == "e" && F.codim > 1) continue;
    double worst_ratio = 0.0;
    Vec worst_u;
    for (std::size_t f = 0; f < sample.size(); ++f) {
      Vec u = sample.point(f);
      double ratio = norm(F(u)) / g(u);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_u = u;
      }
    }
    if (worst_ratio > kGrowthRatioCap) {
      rep.rejected.push_back("probe '" + F.label + "' rejected: |F|/g = " +
                             std::to_string(worst_ratio) + " at " + to_string(worst_u));
      continue;
    }
    rep.series.push_back(detail::eval_series(
        pairs, F.label,
        [&F](const OperatorPair& p, const Vec& t) {
          return norm(sub(apply_L(p, F, t), F(t)));
        },
        grid, threshold));
  }
  rep.verdict = !rep.series.empty() &&
                std::all_of(rep.series.begin(), rep.series.end(),
                            [](const DefectSeries& s) { return s.pass; });
  return rep;
}

struct ConvergenceReport {
  std::vector<StatementReport> statements;
  std::vector<std::string> findings;
  double threshold = 0.0;

  const StatementReport& statement(const std::string& key) const {
    for (const auto& s : statements)
      if (s.statement == key) return s;
    throw error(errc::input, "no statement '" + key + "' in the report");
  }

  // verdict over the six equivalence statements
  bool all_true() const {
    for (const auto& s : statements)
      if (s.statement.size() == 1 && !s.verdict) return false;
    return true;
  }
};

// Runs the full statement matrix (a, b', c, d, e, f, plus the uniform
// corollary data) and cross-checks the implication structure empirically:
// a verdict may not be true while an implied statement's defects fail to
// decrease.  Inconsistencies are reported as findings, not errors.
inline ConvergenceReport equivalence_harness(const std::vector<OperatorPair>& pairs,
                                             const GrowthFunction& g, const Domain& domain,
                                             const std::vector<VectorFunction>& probes,
                                             double threshold, int codim = 2) {
  detail::require_increasing_n(pairs);
  ConvergenceReport rep;
  rep.threshold = threshold;
  std::vector<Vec> grid = domain.K1_grid().points();
  rep.statements.push_back(check_statement_a(pairs, g, grid, threshold, codim));
  rep.statements.push_back(check_statement_b(pairs, g, grid, threshold, codim, true));
  rep.statements.push_back(check_statement_c(pairs, g, domain, probes, threshold, "c"));
  rep.statements.push_back(check_statement_c(pairs, g, domain, probes, threshold, "d"));
  rep.statements.push_back(check_statement_c(pairs, g, domain, probes, threshold, "e"));
  rep.statements.push_back(check_statement_b(pairs, g, grid, threshold, codim, false));

  // corollary data: gamma_n -> 0 uniformly plus the constants
  {
    StatementReport cor;
    cor.statement = "corollary";
    cor.threshold = threshold;
    auto constants = spread_constants(codim);
    cor.series.push_back(detail::eval_series(
        pairs, "const",
        [&constants](const OperatorPair& p, const Vec& t) {
          return detail::const_defect_at(p, constants, t);
        },
        grid, threshold));
    cor.series.push_back(detail::eval_series(
        pairs, "gamma",
        [](const OperatorPair& p, const Vec& t) { return std::sqrt(std::max(0.0, gamma_sq(p, t))); },
        grid, threshold));
    cor.verdict = std::all_of(cor.series.begin(), cor.series.end(),
                              [](const DefectSeries& s) { return s.pass; });
    rep.statements.push_back(std::move(cor));
  }

  bool regular = std::all_of(pairs.begin(), pairs.end(), [](const OperatorPair& p) {
    return !p.family.split();
  });
  std::vector<std::pair<std::string, std::string>> implications = {{"b", "a"}, {"a", "c"}};
  if (regular) {
    implications.emplace_back("d", "c");
    implications.emplace_back("f", "b");
  }
  for (const auto& [from, to] : implications) {
    const StatementReport& P = rep.statement(from);
    const StatementReport& Q = rep.statement(to);
    if (!P.verdict) continue;
    for (const DefectSeries& s : Q.series) {
      std::size_t J = s.points.size() - 1;
      double last = s.points[J].second;
      if (last <= kZeroDefectFloor) continue;
      if (last > s.points[J - 1].second)
        rep.findings.push_back("statement " + from + " holds but implied statement " + to +
                               " has non-decreasing defects for '" + s.label + "'");
    }
  }
  for (const auto& s : rep.statements)
    for (const auto& f : s.findings) rep.findings.push_back(f);
  return rep;
}

}  // namespace korovkin
