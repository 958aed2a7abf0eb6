#pragma once

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "korovkin/bounds.hpp"
#include "korovkin/checks.hpp"
#include "korovkin/config.hpp"
#include "korovkin/convergence.hpp"
#include "korovkin/csv.hpp"
#include "korovkin/family_io.hpp"
#include "korovkin/rng.hpp"

namespace korovkin {

// exit codes: 0 success, 2 verdict failure, 64 configuration, 65 growth
enum exit_codes : int {
  exit_ok = 0,
  exit_verdict = 2,
  exit_config = 64,
  exit_growth = 65,
};

inline int exit_code_for(const error& e) {
  return e.kind() == errc::growth ? exit_growth : exit_config;
}

struct CommandResult {
  int exit_code = exit_ok;
  std::string csv_path;
  std::string message;
};

// the default probe battery: smooth, Lipschitz-only, and vector-valued
inline std::vector<VectorFunction> default_battery() {
  static const std::pair<const char*, const char*> defs[] = {
      {"sq", "u1^2"},
      {"sinx", "sin(u1)"},
      {"expneg", "exp(-u1)"},
      {"kink", "abs(u1 - 0.5)"},
      {"vec", "(u1, exp(-u1))"},
  };
  std::vector<VectorFunction> out;
  for (const auto& [label, text] : defs)
    out.push_back(expression_function(parse_expression(text), label));
  return out;
}

namespace detail {

inline std::vector<VectorFunction> probes_from(const RunConfig& cfg) {
  if (cfg.targets.empty()) return default_battery();
  std::vector<VectorFunction> out;
  for (const TargetSpec& t : cfg.targets) out.push_back(t.function);
  return out;
}

inline std::string out_path(const RunConfig& cfg, const std::string& fallback) {
  return cfg.out.empty() ? fallback : cfg.out;
}

inline std::vector<std::string> bound_header(std::size_t m) {
  std::vector<std::string> h{"label", "n"};
  for (std::size_t i = 0; i < m; ++i) h.push_back("t" + std::to_string(i + 1));
  for (const char* c : {"bound", "measured", "valid", "const_defect", "omega", "delta", "s1",
                        "gamma_sq", "M", "snh"})
    h.push_back(c);
  return h;
}

inline std::vector<std::string> bound_row(const BoundReport& r, std::size_t m) {
  std::vector<std::string> row{r.label, std::to_string(r.n)};
  for (std::size_t i = 0; i < m; ++i)
    row.push_back(i < r.t.size() ? fmt_num(r.t[i]) : "");
  row.push_back(fmt_num(r.bound));
  row.push_back(fmt_num(r.measured));
  row.push_back(r.valid ? "1" : "0");
  row.push_back(fmt_num(r.const_defect));
  row.push_back(fmt_num(r.omega));
  row.push_back(r.delta ? fmt_num(*r.delta) : "");
  row.push_back(fmt_num(r.s1));
  row.push_back(fmt_num(r.gamma_sq));
  row.push_back(r.M ? fmt_num(*r.M) : "");
  row.push_back(r.snh ? fmt_num(*r.snh) : "");
  return row;
}

inline std::string slope_text(const RateFit& fit) {
  if (fit.neg_infinity) return "-inf";
  std::string s = fmt_num(fit.slope);
  if (fit.flagged) s += "*";  // fitted on the positive subset only
  return s;
}

inline void append_statement_rows(CsvTable& table, const StatementReport& rep) {
  for (const DefectSeries& s : rep.series)
    for (const auto& [n, d] : s.points)
      table.rows.push_back({rep.statement, s.label, std::to_string(n), fmt_num(d),
                            slope_text(s.rate), rep.verdict ? "1" : "0"});
}

}  // namespace detail

// bound: pointwise (and uniform) certified error reports per target and n
inline CommandResult run_bound(const RunConfig& cfg, std::ostream& log = std::cout) {
  if (cfg.targets.empty())
    throw error(errc::config, "bound: config must list at least one target");
  CommandResult result;
  std::vector<OperatorPair> pairs = make_pairs(cfg);
  std::size_t m = cfg.domain.dim();
  CsvTable table;
  table.header = detail::bound_header(m);
  bool all_valid = true;
  bool bounded_mode = cfg.domain.equals_K(1e-12);

  if (bounded_mode) {
    std::vector<Vec> grid = cfg.domain.K_grid().points();
    for (const TargetSpec& target : cfg.targets) {
      for (const OperatorPair& pair : pairs) {
        for (const Vec& t : grid) {
          BoundReport r = shisha_mond_bound(pair, target.function, t, cfg.delta);
          all_valid = all_valid && r.valid;
          table.rows.push_back(detail::bound_row(r, m));
        }
        BoundReport u = uniform_bound(pair, target.function);
        all_valid = all_valid && u.valid;
        table.rows.push_back(detail::bound_row(u, m));
      }
    }
  } else {
    Rng rng(cfg.seed);
    validate_growth(cfg.growth, cfg.domain, rng);
    std::vector<Vec> grid = cfg.domain.K1_grid().points();
    for (const TargetSpec& target : cfg.targets) {
      GrowthConstant MC = estimate_M(target.function, cfg.growth, cfg.domain);
      for (const OperatorPair& pair : pairs) {
        for (const Vec& t : grid) {
          BoundReport r = growth_bound(pair, target.function, cfg.growth, t, cfg.delta, MC);
          all_valid = all_valid && r.valid;
          table.rows.push_back(detail::bound_row(r, m));
        }
      }
    }
  }
  result.csv_path = detail::out_path(cfg, "bound.csv");
  write_csv_file(result.csv_path, table);
  result.exit_code = all_valid ? exit_ok : exit_verdict;
  result.message = all_valid ? "all bounds valid" : "bound violations found";
  log << "bound: " << table.rows.size() << " rows -> " << result.csv_path << " ("
      << result.message << ")\n";
  return result;
}

// converge: test-function defects (statement b') plus probe defects
inline CommandResult run_converge(const RunConfig& cfg, std::ostream& log = std::cout) {
  CommandResult result;
  std::vector<OperatorPair> pairs = make_pairs(cfg);
  std::vector<Vec> grid = cfg.domain.K1_grid().points();
  StatementReport b = check_statement_b(pairs, cfg.growth, grid, cfg.threshold);
  StatementReport c =
      check_statement_c(pairs, cfg.growth, cfg.domain, detail::probes_from(cfg), cfg.threshold);
  CsvTable table;
  table.header = {"statement", "label", "n", "defect", "slope", "verdict"};
  detail::append_statement_rows(table, b);
  detail::append_statement_rows(table, c);
  for (const std::string& r : c.rejected) table.comments.push_back(r);
  result.csv_path = detail::out_path(cfg, "converge.csv");
  write_csv_file(result.csv_path, table);
  bool ok = b.verdict && c.verdict;
  result.exit_code = ok ? exit_ok : exit_verdict;
  result.message = ok ? "all series converge" : "convergence verdict failed";
  log << "converge: b " << (b.verdict ? "true" : "false") << ", c "
      << (c.verdict ? "true" : "false") << " -> " << result.csv_path << "\n";
  return result;
}

// equivalence: the full statement matrix with implication cross-checks
inline CommandResult run_equivalence(const RunConfig& cfg, std::ostream& log = std::cout) {
  CommandResult result;
  std::vector<OperatorPair> pairs = make_pairs(cfg);
  ConvergenceReport rep =
      equivalence_harness(pairs, cfg.growth, cfg.domain, detail::probes_from(cfg), cfg.threshold);
  CsvTable table;
  table.header = {"statement", "label", "n", "defect", "slope", "verdict"};
  for (const StatementReport& s : rep.statements) detail::append_statement_rows(table, s);
  for (const std::string& f : rep.findings) table.comments.push_back("finding: " + f);
  for (const StatementReport& s : rep.statements)
    for (const std::string& r : s.rejected) table.comments.push_back(r);
  result.csv_path = detail::out_path(cfg, "equivalence.csv");
  write_csv_file(result.csv_path, table);
  result.exit_code = rep.all_true() ? exit_ok : exit_verdict;
  for (const StatementReport& s : rep.statements)
    log << "statement " << s.statement << ": " << (s.verdict ? "true" : "false") << "\n";
  for (const std::string& f : rep.findings) log << "finding: " << f << "\n";
  log << "equivalence -> " << result.csv_path << "\n";
  return result;
}

// check-operator: domination / regularity / constants on every pair
inline CommandResult run_check_operator(const RunConfig& cfg, std::ostream& log = std::cout) {
  CommandResult result;
  std::vector<OperatorPair> pairs = make_pairs(cfg);

  std::vector<Vec> sample;
  if (!cfg.op_builtin.empty()) {
    BoxGrid grid(cfg.domain.K(), std::min(cfg.domain.grid_resolution(), 21));
    sample = grid.points();
  } else {
    for (const std::string& path : cfg.family_files)
      for (const Vec& t : listed_points(load_family_file(path))) sample.push_back(t);
  }

  std::vector<VectorFunction> targets = detail::probes_from(cfg);
  Rng rng(cfg.seed);
  for (int i = 0; i < 8; ++i) {
    double a0 = rng.uniform(-1, 1), a1 = rng.uniform(-1, 1), a2 = rng.uniform(-1, 1),
           a3 = rng.uniform(-1, 1);
    targets.push_back(VectorFunction{
        1,
        [=](const Vec& u) {
          double x = u[0];
          return Vec{a0 + x * (a1 + x * (a2 + x * a3))};
        },
        "rand" + std::to_string(i)});
  }

  CsvTable table;
  table.comments.push_back("seed=" + std::to_string(cfg.seed));
  table.header = {"check", "family", "n", "target", "max_violation", "pass", "worst_t", "note"};
  bool all_pass = true;
  auto emit = [&](const CheckReport& r, const OperatorPair& pair, const std::string& target) {
    all_pass = all_pass && r.pass;
    std::string note;
    for (const AtomWitness& w : r.suspects) {
      if (!note.empty()) note += "; ";
      note += "atom " + std::to_string(w.index) + " at " + to_string(w.node) + ": " + w.note;
    }
    table.rows.push_back({r.check, pair.family.label(), std::to_string(pair.family.n()), target,
                          fmt_num(r.max_violation), r.pass ? "1" : "0",
                          r.pass ? "" : to_string(r.worst_t), note});
  };
  for (const OperatorPair& pair : pairs) {
    // split families fix the target codim through their L weights
    int k = pair.family.split() ? pair.family.l_codim() : 2;
    for (const VectorFunction& F : targets) {
      if (pair.family.split() && F.codim != k) continue;
      emit(check_domination(pair, F, sample), pair, F.label);
    }
    Vec x(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? -2.0 : 1.0;
    emit(check_regularity(pair, [](const Vec& u) { return std::cos(u[0]); }, x, sample), pair,
         "cos*x");
    for (const Vec& c : spread_constants(k))
      emit(check_constants(pair, c, sample), pair, "c" + to_string(c));
  }
  result.csv_path = detail::out_path(cfg, "check_operator.csv");
  write_csv_file(result.csv_path, table);
  result.exit_code = all_pass ? exit_ok : exit_verdict;
  result.message = all_pass ? "all checks pass" : "check failures";
  log << "check-operator: " << result.message << " -> " << result.csv_path << "\n";
  return result;
}

// table: aligned rendering of a CSV artifact
inline CommandResult run_table(const std::string& csv_path, std::ostream& out = std::cout) {
  CommandResult result;
  out << render_table(read_csv_file(csv_path));
  return result;
}

}  // namespace korovkin
