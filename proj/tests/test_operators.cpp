#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <thread>

#include "korovkin/builtins.hpp"
#include "korovkin/family.hpp"
#include "korovkin/gauss_hermite.hpp"
#include "korovkin/rng.hpp"

using namespace korovkin;

namespace {

const auto one = [](const Vec&) { return 1.0; };
const auto pr1 = [](const Vec& u) { return u[0]; };
const auto sq1 = [](const Vec& u) { return u[0] * u[0]; };

// Oracle weights via a Pascal-triangle binomial table (exact for small n).
std::vector<double> bernstein_oracle(int n, double t) {
  std::vector<std::vector<double>> pascal(n + 1);
  for (int i = 0; i <= n; ++i) {
    pascal[i].assign(i + 1, 1.0);
    for (int j = 1; j < i; ++j) pascal[i][j] = pascal[i - 1][j - 1] + pascal[i - 1][j];
  }
  std::vector<double> w(n + 1);
  for (int k = 0; k <= n; ++k)
    w[k] = pascal[n][k] * std::pow(t, k) * std::pow(1.0 - t, n - k);
  return w;
}

}  // namespace

TEST_CASE("gauss-hermite rule moments") {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int q : {16, 31, 64}) {
    QuadratureRule r = gauss_hermite(q);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(q));
    double m0 = 0, m1 = 0, m2 = 0, m4 = 0;
    for (int j = 0; j < q; ++j) {
      m0 += r.weights[j];
      m1 += r.weights[j] * r.nodes[j];
      m2 += r.weights[j] * r.nodes[j] * r.nodes[j];
      m4 += r.weights[j] * std::pow(r.nodes[j], 4);
    }
    CHECK(m0 == Catch::Approx(sqrt_pi).epsilon(1e-14));
    CHECK(std::abs(m1) <= 1e-14);
    CHECK(m2 == Catch::Approx(0.5 * sqrt_pi).epsilon(1e-13));
    CHECK(m4 == Catch::Approx(0.75 * sqrt_pi).epsilon(1e-13));
    // int cos(x) e^{-x^2} dx = sqrt(pi) e^{-1/4}
    double mc = 0;
    for (int j = 0; j < q; ++j) mc += r.weights[j] * std::cos(r.nodes[j]);
    CHECK(mc == Catch::Approx(sqrt_pi * std::exp(-0.25)).epsilon(1e-13));
  }
}

TEST_CASE("bernstein atoms match the binomial oracle") {
  for (int n : {1, 4, 10}) {
    auto pair = make_bernstein(n);
    for (double t : {0.1, 0.37, 0.5, 0.9}) {
      auto oracle = bernstein_oracle(n, t);
      const auto& atoms = pair.family.atoms_at({t});
      REQUIRE(atoms.size() == oracle.size());
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        CHECK(atoms[k].node[0] == Catch::Approx(double(k) / n).margin(1e-15));
        CHECK(atoms[k].weight == Catch::Approx(oracle[k]).epsilon(1e-13));
      }
    }
  }
  // n = 1: atoms at {0,1} with weights {1-t, t}
  auto b1 = make_bernstein(1);
  const auto& a = b1.family.atoms_at({0.3});
  REQUIRE(a.size() == 2);
  CHECK(a[0].weight == Catch::Approx(0.7).margin(1e-15));
  CHECK(a[1].weight == Catch::Approx(0.3).margin(1e-15));
}

TEST_CASE("bernstein test moments on a grid") {
  for (int n : {1, 10, 100}) {
    auto pair = make_bernstein(n);
    for (double t : linspace(0.0, 1.0, 41)) {
      CHECK(std::abs(apply_S(pair, one, {t}) - 1.0) <= 1e-12);
      CHECK(std::abs(apply_S(pair, pr1, {t}) - t) <= 1e-12);
      CHECK(std::abs(apply_S(pair, sq1, {t}) - (t * t + t * (1 - t) / n)) <= 1e-12);
      CHECK(std::abs(gamma_sq(pair, {t}) - t * (1 - t) / n) <= 1e-12);
    }
  }
  auto pair = make_bernstein(10);
  CHECK(apply_S(pair, sq1, {0.5}) == Catch::Approx(0.275).margin(1e-13));
}

TEST_CASE("szasz moments and truncation metadata") {
  auto pair = make_szasz(100);
  CHECK(std::abs(apply_S(pair, one, {1.0}) - 1.0) <= 1e-13);
  CHECK(std::abs(apply_S(pair, pr1, {1.0}) - 1.0) <= 1e-12);
  CHECK(gamma_sq(pair, {1.0}) == Catch::Approx(0.01).margin(1e-12));
  // analytic transform of the exponential:  S(e^{-u})(t) = exp(nt(e^{-1/n}-1))
  double got = apply_S(pair, [](const Vec& u) { return std::exp(-u[0]); }, {1.0});
  CHECK(got == Catch::Approx(std::exp(100.0 * (std::exp(-0.01) - 1.0))).margin(1e-13));
  CHECK(pair.family.metadata().truncation_tail < 1e-14);
  CHECK(pair.family.metadata().truncation_tail > 0.0);
  // t = 0 collapses to a point mass at the origin
  const auto& a0 = pair.family.atoms_at({0.0});
  REQUIRE(a0.size() == 1);
  CHECK(a0[0].weight == 1.0);
  for (int n : {10, 1000}) {
    auto p = make_szasz(n);
    for (double t : {0.25, 1.0, 1.75})
      CHECK(gamma_sq(p, {t}) == Catch::Approx(t / n).margin(1e-12));
  }
}

TEST_CASE("gauss-weierstrass moments") {
  for (int n : {10, 100}) {
    auto pair = make_gauss_weierstrass(n);
    for (double t : {-0.75, 0.0, 0.5}) {
      CHECK(std::abs(apply_S(pair, one, {t}) - 1.0) <= 1e-13);
      CHECK(std::abs(apply_S(pair, pr1, {t}) - t) <= 1e-13);
      CHECK(gamma_sq(pair, {t}) == Catch::Approx(0.5 / n).margin(1e-13));
    }
  }
}

TEST_CASE("tensor product of bernstein(2) in two dimensions") {
  auto pair = make_tensor(make_bernstein(2), 2);
  const auto& atoms = pair.family.atoms_at({0.5, 0.5});
  REQUIRE(atoms.size() == 9);
  double expected[3] = {0.25, 0.5, 0.25};
  std::size_t idx = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j, ++idx) {
      CHECK(atoms[idx].node[0] == Catch::Approx(i / 2.0).margin(1e-15));
      CHECK(atoms[idx].node[1] == Catch::Approx(j / 2.0).margin(1e-15));
      CHECK(atoms[idx].weight == Catch::Approx(expected[i] * expected[j]).margin(1e-15));
    }
  // moments factor across axes
  CHECK(std::abs(apply_S(pair, [](const Vec& u) { return u[0] * u[1]; }, {0.3, 0.7}) -
                 0.3 * 0.7) <= 1e-13);
  CHECK(gamma_sq(pair, {0.5, 0.5}) == Catch::Approx(2 * 0.25 / 2.0).margin(1e-13));
}

TEST_CASE("apply_L agrees with apply_S coordinatewise and preserves constants") {
  auto pair = make_bernstein(100);
  VectorFunction F{2, [](const Vec& u) { return Vec{u[0], u[0] * u[0]}; }, "(u,u^2)"};
  Vec got = apply_L(pair, F, {0.5});
  CHECK(got[0] == Catch::Approx(0.5).margin(1e-13));
  CHECK(got[1] == Catch::Approx(0.2525).margin(1e-13));
  // constants reproduce exactly up to the unit-mass defect
  Vec c{2.5, -3.0};
  Vec lc = apply_L(pair, constant_function(c), {0.25});
  CHECK(norm(sub(lc, c)) <= 1e-12);
  // f (x) x splits per regularity
  auto f = [](const Vec& u) { return std::sin(u[0]); };
  Vec x{1.0, -2.0};
  Vec lf = apply_L(pair, tensor_with(f, x), {0.6});
  double sf = apply_S(pair, f, {0.6});
  CHECK(norm(sub(lf, scaled(x, sf))) <= 1e-12);
}

TEST_CASE("apply_S positivity, linearity, monotonicity") {
  Rng rng(31);
  auto pair = make_bernstein(25);
  for (int trial = 0; trial < 40; ++trial) {
    double t = rng.uniform();
    double al = rng.uniform(-2, 2), be = rng.uniform(-2, 2);
    double a0 = rng.uniform(-1, 1), a1 = rng.uniform(-1, 1), a2 = rng.uniform(-1, 1);
    auto f = [&](const Vec& u) { return a0 + a1 * u[0] + a2 * u[0] * u[0]; };
    auto g = [&](const Vec& u) { return std::cos(3 * u[0]); };
    auto combo = [&](const Vec& u) { return al * f(u) + be * g(u); };
    CHECK(std::abs(apply_S(pair, combo, {t}) -
                   (al * apply_S(pair, f, {t}) + be * apply_S(pair, g, {t}))) <= 1e-12);
    auto fpos = [&](const Vec& u) { return std::abs(f(u)); };
    CHECK(apply_S(pair, fpos, {t}) >= 0.0);
    auto fbig = [&](const Vec& u) { return fpos(u) + 0.5; };
    CHECK(apply_S(pair, fpos, {t}) <= apply_S(pair, fbig, {t}) + 1e-12);
  }
}

TEST_CASE("apply_S_h: direct equals expanded and matches gamma_sq for quadratic growth") {
  GrowthFunction g = growth_quadratic();
  auto b10 = make_bernstein(10);
  CHECK(apply_S_h(b10, g, {0.5}) == Catch::Approx(0.025).margin(1e-13));
  CHECK(apply_S_h(b10, g, {0.5}, SHMode::expanded) == Catch::Approx(0.025).margin(1e-12));
  auto s100 = make_szasz(100);
  CHECK(apply_S_h(s100, g, {1.0}) == Catch::Approx(0.01).margin(1e-12));

  // random family / point / growth triples
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    int count = 2 + int(rng.index(6));
    std::vector<MeasureAtom> atoms;
    for (int i = 0; i < count; ++i)
      atoms.push_back({{rng.uniform(-2, 2)}, rng.uniform(0.0, 0.8)});
    MeasureFamily fam(1, "random", FamilyFlags{false, true},
                      [atoms](const Vec&) { return atoms; });
    OperatorPair pair{fam, box_domain(Box{{-2.0}, {2.0}})};
    GrowthFunction gg = (trial % 2 == 0) ? growth_quadratic() : growth_exp_half_sq();
    Vec t{rng.uniform(-1, 1)};
    double direct = apply_S_h(pair, gg, t, SHMode::direct);
    double expanded = apply_S_h(pair, gg, t, SHMode::expanded);
    CHECK(std::abs(direct - expanded) <= 1e-9 * std::max({1.0, std::abs(direct)}));
    CHECK(direct >= -1e-12);
  }
}

TEST_CASE("apply_S_h rejects t outside K") {
  GrowthFunction g = growth_quadratic();
  auto s = make_szasz(10);
  CHECK_THROWS_AS(apply_S_h(s, g, {2.5}), error);
}

TEST_CASE("evaluation errors carry the node") {
  auto pair = make_bernstein(4);
  auto bad = [](const Vec& u) -> double {
    if (u[0] > 0.6) throw std::runtime_error("pole");
    return u[0];
  };
  try {
    apply_S(pair, bad, {0.5});
    FAIL("expected evaluation error");
  } catch (const error& e) {
    CHECK(e.kind() == errc::evaluation);
    CHECK(std::string(e.what()).find("0.75") != std::string::npos);
  }
}

TEST_CASE("domain gate on evaluation points") {
  auto pair = make_bernstein(5);
  CHECK_THROWS_AS(apply_S(pair, one, {1.5}), error);
  auto sz = make_szasz(5);
  CHECK_THROWS_AS(apply_S(sz, one, {-0.5}), error);
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(make_bernstein(0), error);
  CHECK_THROWS_AS(make_gauss_weierstrass(10, 8), error);
  CHECK_THROWS_AS(make_tensor(make_tensor(make_bernstein(2), 2), 2), error);
}

TEST_CASE("atom cache is a pure memo under concurrent queries") {
  auto pair = make_szasz(200);
  std::vector<double> ts = linspace(0.0, 2.0, 33);
  std::vector<double> expected;
  for (double t : ts) expected.push_back(apply_S(pair, sq1, {t}));
  std::vector<std::thread> workers;
  std::vector<int> mismatches(4, 0);
  for (int w = 0; w < 4; ++w)
    workers.emplace_back([&, w] {
      for (int rep = 0; rep < 50; ++rep)
        for (std::size_t i = 0; i < ts.size(); ++i)
          if (apply_S(pair, sq1, {ts[i]}) != expected[i]) ++mismatches[w];
    });
  for (auto& t : workers) t.join();
  for (int m : mismatches) CHECK(m == 0);
}
