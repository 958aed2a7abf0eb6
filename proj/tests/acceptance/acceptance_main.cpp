// Acceptance suite: runs every shipped guarantee end to end and prints one
// pass/fail line per criterion.  Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "korovkin/bounds.hpp"
#include "korovkin/builtins.hpp"
#include "korovkin/checks.hpp"
#include "korovkin/convergence.hpp"
#include "korovkin/family_io.hpp"
#include "korovkin/modulus.hpp"
#include "korovkin/rng.hpp"
#include "korovkin/runner.hpp"

using namespace korovkin;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = fs::path(KOROVKIN_SOURCE_DIR);
const std::string kCli = KOROVKIN_CLI_PATH;

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      note = what;
    }
  }
};

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "korovkin_acceptance";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& stdout_to = {}) {
  std::string cmd = kCli + " " + args;
  cmd += stdout_to.empty() ? " > /dev/null 2>&1"
                           : " > " + stdout_to.string() + " 2>/dev/null";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

Domain szasz_domain() {
  return Domain({Axis{AxisKind::half_line_lower, 0.0, 0.0}}, Box{{0.0}, {2.0}}, Box{{0.0}, {1.0}},
                201);
}

std::vector<VectorFunction> growth_battery() {
  return {scalar_function([](const Vec& u) { return u[0] * u[0]; }, "sq"),
          scalar_function([](const Vec& u) { return std::sin(u[0]); }, "sin"),
          VectorFunction{2, [](const Vec& u) { return Vec{u[0], std::exp(-u[0])}; }, "vec"}};
}

// 1. Bernstein moments at 1e-12 on the 201-point grid, under one second.
Outcome criterion_moments() {
  Outcome out;
  auto one = [](const Vec&) { return 1.0; };
  auto pr = [](const Vec& u) { return u[0]; };
  for (int n : {1, 10, 100, 1000}) {
    auto pair = make_bernstein(n);
    for (double t : linspace(0.0, 1.0, 201)) {
      out.require(std::abs(apply_S(pair, one, {t}) - 1.0) <= 1e-12,
                  "S(1) defect at n=" + std::to_string(n));
      out.require(std::abs(apply_S(pair, pr, {t}) - t) <= 1e-12,
                  "S(u) defect at n=" + std::to_string(n));
      out.require(std::abs(gamma_sq(pair, {t}) - t * (1 - t) / n) <= 1e-12,
                  "gamma^2 defect at n=" + std::to_string(n));
    }
  }
  return out;
}

// 2. Shisha-Mond validity over >= 1e4 (pair, target, t, delta) checks.
Outcome criterion_shisha_mond() {
  Outcome out;
  std::vector<OperatorPair> pairs;
  for (int n : {1, 10, 100}) pairs.push_back(make_bernstein(n));
  for (int n : {10, 100}) pairs.push_back(make_szasz(n, box_domain(Box{{0.0}, {2.0}})));
  for (int n : {10, 100})
    pairs.push_back(make_gauss_weierstrass(n, box_domain(Box{{-1.0}, {1.0}})));
  auto battery = default_battery();
  long checks = 0;
  for (const OperatorPair& pair : pairs) {
    std::vector<Vec> grid = pair.domain.K_grid().points();
    for (const VectorFunction& F : battery) {
      for (const Vec& t : grid) {
        for (std::optional<double> d :
             {std::optional<double>{}, std::optional<double>{0.05}, std::optional<double>{0.2}}) {
          BoundReport r = shisha_mond_bound(pair, F, t, d);
          ++checks;
          out.require(r.measured <= r.bound + 1e-9,
                      "violation: " + pair.family.label() + " n=" + std::to_string(r.n) +
                          " target=" + F.label + " t=" + to_string(t));
        }
      }
    }
  }
  out.require(checks >= 10000, "only " + std::to_string(checks) + " checks");
  if (out.pass) out.note = std::to_string(checks) + " checks";
  return out;
}

// 3. Uniform specialization: exact sup error 1/(4n) and a covering bound.
Outcome criterion_uniform() {
  Outcome out;
  auto sq = scalar_function([](const Vec& u) { return u[0] * u[0]; }, "sq");
  for (int n : {10, 100, 1000}) {
    auto r = uniform_bound(make_bernstein(n), sq);
    out.require(std::abs(r.measured - 0.25 / n) <= 1e-12, "sup error at n=" + std::to_string(n));
    out.require(std::abs(r.bound - 2.0 * r.omega) <= 1e-12, "uniform bound shape");
    out.require(r.bound > r.measured, "bound does not exceed the sup error");
  }
  return out;
}

// 4. Direct and expanded gap applications agree on random triples.
Outcome criterion_identity() {
  Outcome out;
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t m = 1 + rng.index(2);
    int count = 3 + static_cast<int>(rng.index(38));
    std::vector<MeasureAtom> atoms;
    for (int i = 0; i < count; ++i) {
      Vec node(m);
      for (auto& x : node) x = rng.uniform(-2.0, 2.0);
      atoms.push_back({std::move(node), rng.uniform()});
    }
    MeasureFamily fam(1 + trial, "random", FamilyFlags{false, true},
                      [atoms](const Vec&) { return atoms; });
    OperatorPair pair{std::move(fam), box_domain(Box{Vec(m, -2.0), Vec(m, 2.0)})};
    GrowthFunction g;
    switch (trial % 3) {
      case 0: g = growth_quadratic(); break;
      case 1: g = growth_exp_half_sq(); break;
      default: {
        // random positive-definite quadratic 1 + u'(B'B + 0.1 I)u
        std::vector<double> b(m * m);
        for (auto& x : b) x = rng.uniform(-1.0, 1.0);
        auto a_entry = [b, m](std::size_t i, std::size_t j) {
          double s = i == j ? 0.1 : 0.0;
          for (std::size_t k = 0; k < m; ++k) s += b[k * m + i] * b[k * m + j];
          return s;
        };
        g = GrowthFunction{
            [a_entry, m](const Vec& u) {
              double s = 1.0;
              for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) s += u[i] * a_entry(i, j) * u[j];
              return s;
            },
            [a_entry, m](const Vec& u) {
              Vec grad(m, 0.0);
              for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) grad[i] += 2.0 * a_entry(i, j) * u[j];
              return grad;
            },
            "random quadratic"};
      }
    }
    Vec t(m);
    for (auto& x : t) x = rng.uniform(-1.0, 1.0);
    double direct = apply_S_h(pair, g, t, SHMode::direct);
    double expanded = apply_S_h(pair, g, t, SHMode::expanded);
    double scale = std::max({1.0, std::abs(direct), std::abs(expanded)});
    out.require(std::abs(direct - expanded) <= 1e-9 * scale,
                "triple " + std::to_string(trial));
  }
  return out;
}

// 5. Growth bounds on the half-line configuration, all variants valid and
// the linear form matching the constant form where projections are preserved.
Outcome criterion_growth_bounds() {
  Outcome out;
  Domain d = szasz_domain();
  GrowthFunction g = growth_quadratic();
  for (const VectorFunction& F : growth_battery()) {
    GrowthConstant MC = estimate_M(F, g, d);
    for (int n : {10, 100, 1000}) {
      auto pair = make_szasz(n, d);
      for (double t : linspace(0.0, 1.0, 201)) {
        BoundReport r = growth_bound(pair, F, g, {t}, std::nullopt, MC);
        out.require(r.measured <= r.bound + 1e-9, "violation: " + F.label + " n=" +
                                                      std::to_string(n) + " t=" + fmt_num(t));
        if (r.bound_general)
          out.require(r.measured <= *r.bound_general + 1e-9, "general-bound violation at t=" + fmt_num(t));
        if (r.bound_const)
          out.require(r.measured <= *r.bound_const + 1e-9, "const-bound violation at t=" + fmt_num(t));
        if (r.bound_const && r.bound_linear)
          out.require(std::abs(*r.bound_linear - *r.bound_const) <= 1e-9,
                      "linear vs const bound gap at t=" + fmt_num(t));
      }
    }
  }
  return out;
}

// 6. The M estimator lands in [2.9, 3.1] and scales exactly.
Outcome criterion_m_estimator() {
  Outcome out;
  Domain d = szasz_domain();
  GrowthFunction g = growth_quadratic();
  auto sq = scalar_function([](const Vec& u) { return u[0] * u[0]; }, "sq");
  GrowthConstant MC = estimate_M(sq, g, d);
  out.require(MC.M >= 2.9 && MC.M <= 3.1, "M = " + fmt_num(MC.M));
  for (double alpha : {-2.5, 3.0}) {
    auto scaled_f =
        scalar_function([alpha](const Vec& u) { return alpha * u[0] * u[0]; }, "scaled");
    GrowthConstant MCs = estimate_M(scaled_f, g, d);
    out.require(std::abs(MCs.M - std::abs(alpha) * MC.M) <= 1e-12,
                "homogeneity at alpha=" + fmt_num(alpha));
  }
  if (out.pass) out.note = "M = " + fmt_num(MC.M);
  return out;
}

// 7. The Korovkin harness: all six verdicts on the Bernstein suite, slope
// -1 +- 0.05 on the g defect, and a consistent failing fixture.
Outcome criterion_harness() {
  Outcome out;
  Domain dom(std::vector<Axis>{Axis{AxisKind::box, 0.0, 1.0}}, Box{{0.0}, {1.0}},
             Box{{0.1}, {0.9}}, 101);
  std::vector<OperatorPair> pairs;
  for (int n : {10, 100, 1000}) {
    auto p = make_bernstein(n);
    pairs.push_back(OperatorPair{p.family, dom});
  }
  auto rep = equivalence_harness(pairs, growth_quadratic(), dom, default_battery(), 0.02);
  out.require(rep.all_true(), "a verdict failed on the bernstein suite");
  out.require(rep.findings.empty(), "unexpected findings on the bernstein suite");
  for (const auto& s : rep.statement("b").series)
    if (s.label == "g")
      out.require(std::abs(s.rate.slope + 1.0) <= 0.05, "g slope " + fmt_num(s.rate.slope));

  std::vector<OperatorPair> drift;
  for (int n : {10, 100, 1000}) {
    auto base = make_bernstein(n);
    double scale = 1.0 + 0.1 * (n % 2 == 0 ? 1.0 : -1.0);
    MeasureFamily fam(n, "drift", FamilyFlags{false, true}, [base, scale](const Vec& t) {
      auto atoms = base.family.atoms_at(t);
      for (auto& a : atoms) a.weight *= scale;
      return atoms;
    });
    drift.push_back(OperatorPair{std::move(fam), dom});
  }
  auto bad = equivalence_harness(drift, growth_quadratic(), dom, default_battery(), 0.02);
  out.require(!bad.statement("b").verdict, "drifting fixture passed statement b");
  out.require(!bad.statement("c").verdict, "drifting fixture passed statement c");
  out.require(bad.findings.empty(), "drifting fixture produced inconsistent findings");
  return out;
}

// 8. Checker axioms: pass on builtins, fail on each corrupted fixture with
// a named atom.
Outcome criterion_checkers() {
  Outcome out;
  VectorFunction probe{2, [](const Vec& u) { return Vec{std::sin(u[0]), u[0]}; }, "probe"};
  auto scalar = [](const Vec& u) { return std::cos(u[0]); };
  auto points = [](double lo, double hi) {
    std::vector<Vec> pts;
    for (double x : linspace(lo, hi, 21)) pts.push_back({x});
    return pts;
  };
  {
    auto bern = make_bernstein(20);
    auto szasz = make_szasz(50);
    auto gw = make_gauss_weierstrass(30);
    out.require(check_domination(bern, probe, points(0, 1)).pass, "bernstein domination");
    out.require(check_regularity(bern, scalar, {1.0, 2.0}, points(0, 1)).pass,
                "bernstein regularity");
    out.require(check_constants(bern, {1.0, -1.0}, points(0, 1)).pass, "bernstein constants");
    out.require(check_domination(szasz, probe, points(0, 2)).pass, "szasz domination");
    out.require(check_regularity(szasz, scalar, {1.0, 2.0}, points(0, 2)).pass,
                "szasz regularity");
    out.require(check_constants(szasz, {1.0, -1.0}, points(0, 2)).pass, "szasz constants");
    out.require(check_domination(gw, probe, points(-1, 1)).pass, "gw domination");
    out.require(check_regularity(gw, scalar, {1.0, 2.0}, points(-1, 1)).pass, "gw regularity");
    out.require(check_constants(gw, {1.0, -1.0}, points(-1, 1)).pass, "gw constants");
  }
  {
    auto pair = load_family((kSource / "configs/fixtures/negative_weight.family").string());
    VectorFunction id{1, [](const Vec& u) { return Vec{u[0]}; }, "id"};
    auto rep = check_domination(pair, id, {{0.0}, {0.5}});
    out.require(!rep.pass, "negative-weight fixture passed domination");
    bool named = false;
    for (const auto& w : rep.suspects) named = named || w.note == "negative weight";
    out.require(named, "negative-weight fixture did not name the atom");
  }
  {
    auto pair = load_family((kSource / "configs/fixtures/perturbed_regularity.family").string());
    auto rep = check_regularity(pair, [](const Vec& u) { return u[0] + 1.0; }, {1.0},
                                {{0.25}, {0.75}});
    out.require(!rep.pass, "perturbed fixture passed regularity");
    out.require(!rep.suspects.empty() &&
                    rep.suspects[0].note.find("L weight") != std::string::npos,
                "perturbed fixture did not name the atom");
  }
  {
    auto pair = load_family((kSource / "configs/fixtures/scaled_mass.family").string());
    auto rep = check_constants(pair, {3.0, 4.0}, {{0.25}, {0.5}});
    out.require(!rep.pass, "scaled fixture passed constants");
    out.require(std::abs(rep.max_violation - 0.5) <= 1e-12, "scaled fixture defect");
    out.require(!rep.suspects.empty(), "scaled fixture did not name an atom");
  }
  return out;
}

// 9. Moduli: monotone in delta, zero for constants, and the weak modulus
// with coordinate functionals equals the max-norm modulus in 2d.
Outcome criterion_moduli() {
  Outcome out;
  Box unit{{0.0}, {1.0}};
  for (const VectorFunction& F : default_battery()) {
    double prev = 0.0;
    for (int i = 1; i <= 20; ++i) {
      double w = modulus_of_continuity(F, unit, 0.025 * i, 201);
      out.require(w >= prev, "modulus not monotone for " + F.label);
      prev = w;
    }
  }
  for (double d : linspace(0.01, 1.0, 20))
    out.require(modulus_of_continuity(constant_function({2.0, -1.0}), unit, d, 201) == 0.0,
                "constant modulus nonzero");

  Box K2{{0.0, 0.0}, {1.0, 1.0}};
  VectorFunction F2{
      2, [](const Vec& u) { return Vec{std::sin(u[0]) + u[1] * u[1], u[0] * u[1]}; }, "2d"};
  WeakNeighborhood nb{{Vec{1.0, 0.0}, Vec{0.0, 1.0}}, 0.16};
  double weak = weak_modulus(F2, K2, nb, K2, 41);
  BoxGrid grid(K2, 41);
  auto pts = grid.points();
  std::vector<Vec> vals;
  for (const Vec& p : pts) vals.push_back(F2(p));
  double oracle = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      double dinf = std::max(std::abs(pts[i][0] - pts[j][0]), std::abs(pts[i][1] - pts[j][1]));
      if (dinf > 0.16 * (1.0 + 2e-12)) continue;
      oracle = std::max(oracle, norm(sub(vals[i], vals[j])));
    }
  out.require(std::abs(weak - oracle) <= 1e-12, "weak modulus vs max-norm oracle");
  return out;
}

// 10. CLI determinism and the exit-code contract on the shipped configs.
Outcome criterion_cli() {
  Outcome out;
  fs::path dir = work_dir();
  struct Job {
    const char* subcommand;
    const char* config;
    int expected_exit;
  };
  const Job jobs[] = {
      {"bound", "bound_bernstein.json", 0},
      {"bound", "bound_szasz_growth.json", 0},
      {"converge", "converge_szasz.json", 0},
      {"equivalence", "equivalence_bernstein.json", 0},
      {"check-operator", "check_bernstein.json", 0},
      {"check-operator", "check_negative_weight.json", 2},
  };
  fs::path first_csv;
  for (const Job& job : jobs) {
    fs::path out1 = dir / (std::string(job.config) + ".run1.csv");
    fs::path out2 = dir / (std::string(job.config) + ".run2.csv");
    std::string base = std::string(job.subcommand) + " --config " +
                       (kSource / "configs" / job.config).string() + " --out ";
    int rc1 = run_cli(base + out1.string());
    int rc2 = run_cli(base + out2.string());
    out.require(rc1 == job.expected_exit, std::string(job.config) + ": exit " +
                                              std::to_string(rc1) + " != " +
                                              std::to_string(job.expected_exit));
    out.require(rc2 == rc1, std::string(job.config) + ": unstable exit code");
    std::string a = slurp(out1), b = slurp(out2);
    out.require(!a.empty() && a == b, std::string(job.config) + ": artifacts differ");
    if (first_csv.empty()) first_csv = out1;
  }
  fs::path t1 = dir / "table1.txt", t2 = dir / "table2.txt";
  out.require(run_cli("table --in " + first_csv.string(), t1) == 0, "table exit code");
  out.require(run_cli("table --in " + first_csv.string(), t2) == 0, "table exit code");
  out.require(slurp(t1) == slurp(t2) && !slurp(t1).empty(), "table output differs");
  out.require(run_cli("bound --config /nonexistent.json") == 64, "missing config exit code");
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;  // 0: no budget
  };
  const Entry entries[] = {
      {1, "bernstein moments at 1e-12", criterion_moments, 1.0},
      {2, "shisha-mond validity sweep", criterion_shisha_mond, 30.0},
      {3, "uniform specialization", criterion_uniform, 0.0},
      {4, "gap expansion identity", criterion_identity, 0.0},
      {5, "growth bounds on the half-line", criterion_growth_bounds, 0.0},
      {6, "M estimator", criterion_m_estimator, 0.0},
      {7, "korovkin harness", criterion_harness, 60.0},
      {8, "operator axiom checkers", criterion_checkers, 0.0},
      {9, "moduli of continuity", criterion_moduli, 0.0},
      {10, "CLI determinism and exit codes", criterion_cli, 0.0},
  };
  int failures = 0;
  for (const Entry& e : entries) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.run();
    } catch (const std::exception& ex) {
      out.pass = false;
      out.note = std::string("exception: ") + ex.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.budget_seconds > 0.0 && seconds > e.budget_seconds) {
      out.pass = false;
      out.note = "over the " + fmt_num(e.budget_seconds) + " s budget";
    }
    if (!out.pass) ++failures;
    std::printf("criterion %2d [%s] %-34s (%.2f s)%s%s\n", e.id, out.pass ? "PASS" : "FAIL",
                e.name, seconds, out.note.empty() ? "" : " -- ", out.note.c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
