#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "korovkin/errors.hpp"

namespace korovkin {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // for the weight function exp(-x^2)
};

namespace detail {

// Orthonormal Hermite recurrence for weight exp(-x^2):
//   p_{k+1} = (x p_k - sqrt(k/2) p_{k-1}) / sqrt((k+1)/2),  p_0 = pi^{-1/4}.
// Returns p_q(x) and its derivative, and fills sum_{k<q} p_k(x)^2 for the
// Christoffel weight.
inline void hermite_eval(int q, long double x, long double& pq, long double& dpq,
                         long double& christoffel) {
  const long double p0 = 0.75112554446494248286L;  // pi^{-1/4}
  long double pm1 = 0.0L, p = p0, dpm1 = 0.0L, dp = 0.0L;
  christoffel = p * p;
  for (int k = 0; k < q; ++k) {
    long double bk = std::sqrt(0.5L * k);
    long double bk1 = std::sqrt(0.5L * (k + 1));
    long double pn = (x * p - bk * pm1) / bk1;
    long double dpn = (p + x * dp - bk * dpm1) / bk1;
    pm1 = p;
    p = pn;
    dpm1 = dp;
    dp = dpn;
    if (k + 1 < q) christoffel += p * p;
  }
  pq = p;
  dpq = dp;
}

}  // namespace detail

// Gauss-Hermite rule: integrates f(x) exp(-x^2) exactly for polynomials of
// degree <= 2q-1.  Nodes by Newton iteration from the usual asymptotic
// starting guesses, weights via the Christoffel function; everything in
// long double so the double-precision result is clean to the last digits.
inline QuadratureRule gauss_hermite(int q) {
  if (q < 1) throw error(errc::input, "gauss_hermite: order must be >= 1");
  std::vector<long double> x(static_cast<std::size_t>(q)), w(static_cast<std::size_t>(q));
  const int half = (q + 1) / 2;
  long double guess = 0.0L;
  long double prev1 = 0.0L, prev2 = 0.0L;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      guess = std::sqrt(2.0L * q + 1.0L) - 1.85575L * std::pow(2.0L * q + 1.0L, -1.0L / 6.0L);
    } else if (i == 1) {
      guess = prev1 - 1.14L * std::pow(static_cast<long double>(q), 0.426L) / prev1;
    } else if (i == 2) {
      guess = 1.86L * prev1 - 0.86L * prev2;
    } else if (i == 3) {
      guess = 1.91L * prev1 - 0.91L * prev2;
    } else {
      guess = 2.0L * prev1 - prev2;
    }
    long double pq, dpq, chr;
    for (int it = 0; it < 64; ++it) {
      detail::hermite_eval(q, guess, pq, dpq, chr);
      long double dx = pq / dpq;
      guess -= dx;
      if (std::abs(dx) < 1e-19L * (1.0L + std::abs(guess))) break;
    }
    detail::hermite_eval(q, guess, pq, dpq, chr);
    prev2 = prev1;
    prev1 = guess;
    std::size_t hi = static_cast<std::size_t>(i);
    std::size_t lo = static_cast<std::size_t>(q - 1 - i);
    x[hi] = guess;
    x[lo] = -guess;
    w[hi] = 1.0L / chr;
    w[lo] = w[hi];
  }
  if (q % 2 == 1) {
    long double pq, dpq, chr;
    detail::hermite_eval(q, 0.0L, pq, dpq, chr);
    x[static_cast<std::size_t>(half - 1)] = 0.0L;
    w[static_cast<std::size_t>(half - 1)] = 1.0L / chr;
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(q));
  rule.weights.resize(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    // store ascending
    rule.nodes[static_cast<std::size_t>(i)] =
        static_cast<double>(x[static_cast<std::size_t>(q - 1 - i)]);
    rule.weights[static_cast<std::size_t>(i)] =
        static_cast<double>(w[static_cast<std::size_t>(q - 1 - i)]);
  }
  return rule;
}

}  // namespace korovkin
