#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "korovkin/family.hpp"
#include "korovkin/growth.hpp"
#include "korovkin/vec.hpp"

namespace korovkin {

constexpr double kCheckTolerance = 1e-12;

struct AtomWitness {
  std::size_t index = 0;
  Vec node;
  double weight = 0.0;
  std::string note;
};

struct CheckReport {
  std::string check;
  double max_violation = 0.0;
  bool pass = true;
  Vec worst_t;
  std::vector<AtomWitness> suspects;
};

namespace detail {

inline void collect_suspects(const OperatorPair& pair, const Vec& t, CheckReport& report) {
  if (pair.family.split()) {
    // pair L atoms with S atoms positionally; flag the one whose weights
    // disagree the most
    auto latoms = pair.family.l_atoms_at(t);
    const auto& satoms = pair.family.atoms_at(t);
    double worst = -1.0;
    AtomWitness w;
    for (std::size_t i = 0; i < latoms.size(); ++i) {
      double lmax = 0.0;
      for (double v : latoms[i].weights) lmax = std::max(lmax, std::abs(v));
      double s = i < satoms.size() ? satoms[i].weight : 0.0;
      double d = std::abs(lmax - s);
      if (d > worst) {
        worst = d;
        w = AtomWitness{i, latoms[i].node, s,
                        "L weight magnitude " + std::to_string(lmax) +
                            " vs S weight " + std::to_string(s)};
      }
    }
    if (worst >= 0.0) report.suspects.push_back(std::move(w));
    return;
  }
  const auto& atoms = pair.family.atoms_at(t);
  bool negative = false;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].weight < 0.0) {
      report.suspects.push_back(
          AtomWitness{i, atoms[i].node, atoms[i].weight, "negative weight"});
      negative = true;
    }
  }
  if (!negative && !atoms.empty()) {
    double mass = 0.0;
    std::size_t top = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      mass += atoms[i].weight;
      if (atoms[i].weight > atoms[top].weight) top = i;
    }
    report.suspects.push_back(AtomWitness{top, atoms[top].node, atoms[top].weight,
                                          "largest weight; atom mass " + std::to_string(mass)});
  }
}

}  // namespace detail

// Definition check: ||L(F)(t)|| <= S(||F||)(t) on the sample.
inline CheckReport check_domination(const OperatorPair& pair, const VectorFunction& F,
                                    const std::vector<Vec>& sample) {
  CheckReport report;
  report.check = "domination";
  auto norm_F = [&F](const Vec& u) { return norm(F(u)); };
  for (const Vec& t : sample) {
    double v = norm(apply_L(pair, F, t)) - apply_S(pair, norm_F, t);
    if (v > report.max_violation) {
      report.max_violation = v;
      report.worst_t = t;
    }
  }
  report.pass = report.max_violation <= kCheckTolerance;
  if (!report.pass) detail::collect_suspects(pair, report.worst_t, report);
  return report;
}

// Definition check: L(f(x)x) = S(f)(x)x on the sample.
inline CheckReport check_regularity(const OperatorPair& pair,
                                    const std::function<double(const Vec&)>& f, const Vec& x,
                                    const std::vector<Vec>& sample) {
  CheckReport report;
  report.check = "regularity";
  VectorFunction fx = tensor_with(f, x);
  for (const Vec& t : sample) {
    Vec left = apply_L(pair, fx, t);
    double sf = apply_S(pair, f, t);
    double v = norm(sub(left, scaled(x, sf)));
    if (v > report.max_violation) {
      report.max_violation = v;
      report.worst_t = t;
    }
  }
  report.pass = report.max_violation <= kCheckTolerance;
  if (!report.pass) detail::collect_suspects(pair, report.worst_t, report);
  return report;
}

// Definition check: L(c)(t) = c on the sample; equivalently S(1)(t) = 1.
inline CheckReport check_constants(const OperatorPair& pair, const Vec& c,
                                   const std::vector<Vec>& sample) {
  CheckReport report;
  report.check = "constants";
  VectorFunction cf = constant_function(c);
  for (const Vec& t : sample) {
    double v = norm(sub(apply_L(pair, cf, t), c));
    if (v > report.max_violation) {
      report.max_violation = v;
      report.worst_t = t;
    }
  }
  report.pass = report.max_violation <= kCheckTolerance;
  if (!report.pass) detail::collect_suspects(pair, report.worst_t, report);
  return report;
}

}  // namespace korovkin
