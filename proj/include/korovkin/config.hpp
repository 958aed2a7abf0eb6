#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "korovkin/builtins.hpp"
#include "korovkin/domain.hpp"
#include "korovkin/expr.hpp"
#include "korovkin/family_io.hpp"
#include "korovkin/growth.hpp"

namespace korovkin {

struct TargetSpec {
  std::string label;
  Expression expression;
  VectorFunction function;
};

struct RunConfig {
  Domain domain;
  std::string op_builtin;  // bernstein | szasz | gauss_weierstrass (empty for files)
  std::vector<int> n_list;
  int quad_points = 64;
  double tail_target = 1e-14;
  std::vector<std::string> family_files;
  GrowthFunction growth;
  std::vector<TargetSpec> targets;
  double threshold = 1e-3;
  std::optional<double> delta;  // nullopt: auto
  std::uint64_t seed = 0;
  std::string out;
  std::string base_dir;  // directory of the config file, for relative paths
};

namespace detail {

inline error config_error(const std::string& msg) { return error(errc::config, msg); }

inline Domain parse_domain(const nlohmann::json& j) {
  if (!j.contains("domain")) throw config_error("config: missing 'domain'");
  const auto& d = j.at("domain");
  std::size_t m = d.at("dim").get<std::size_t>();
  std::vector<Axis> axes;
  if (d.contains("axes")) {
    for (const auto& a : d.at("axes")) {
      std::string kind = a.at("kind").get<std::string>();
      Axis ax;
      if (kind == "box") {
        ax = Axis{AxisKind::box, a.at("a").get<double>(), a.at("b").get<double>()};
      } else if (kind == "half_line_lower") {
        ax = Axis{AxisKind::half_line_lower, a.at("a").get<double>(), 0.0};
      } else if (kind == "half_line_upper") {
        ax = Axis{AxisKind::half_line_upper, 0.0, a.at("b").get<double>()};
      } else if (kind == "line") {
        ax = Axis{AxisKind::line, 0.0, 0.0};
      } else {
        throw config_error("config: unknown axis kind '" + kind + "'");
      }
      axes.push_back(ax);
    }
  }
  auto parse_box = [&m](const nlohmann::json& b, const char* name) {
    Box box;
    if (b.size() != m) throw config_error(std::string("config: ") + name + " needs one interval per axis");
    for (const auto& iv : b) {
      if (!iv.is_array() || iv.size() != 2)
        throw config_error(std::string("config: ") + name + " entries are [lo, hi]");
      box.lo.push_back(iv[0].get<double>());
      box.hi.push_back(iv[1].get<double>());
    }
    return box;
  };
  Box K = parse_box(d.at("K"), "K");
  if (axes.empty())  // default: the domain is the box K
    for (std::size_t i = 0; i < m; ++i) axes.push_back(Axis{AxisKind::box, K.lo[i], K.hi[i]});
  if (axes.size() != m) throw config_error("config: axes must match dim");
  Box K1 = K;
  if (d.contains("K1")) {
    K1 = parse_box(d.at("K1"), "K1");
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      double w = K.hi[i] - K.lo[i];
      K1.lo[i] = K.lo[i] + 0.25 * w;
      K1.hi[i] = K.hi[i] - 0.25 * w;
    }
  }
  int res = d.value("grid_resolution", 201);
  std::optional<double> radius;
  if (d.contains("truncation_radius") && !d.at("truncation_radius").is_null())
    radius = d.at("truncation_radius").get<double>();
  return Domain(std::move(axes), std::move(K), std::move(K1), res, radius);
}

inline GrowthFunction parse_growth(const nlohmann::json& j) {
  if (!j.contains("growth")) return growth_quadratic();
  const auto& gj = j.at("growth");
  if (gj.contains("builtin")) {
    std::string name = gj.at("builtin").get<std::string>();
    if (name == "quadratic") return growth_quadratic();
    if (name == "exp_half_sq") return growth_exp_half_sq();
    throw config_error("config: unknown growth builtin '" + name + "'");
  }
  if (gj.contains("expression")) {
    std::string text = gj.at("expression").get<std::string>();
    return growth_from_expression(parse_expression(text), text);
  }
  throw config_error("config: growth needs 'builtin' or 'expression'");
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".") {
  RunConfig cfg{detail::parse_domain(j),
                {}, {}, 64, 1e-14, {}, detail::parse_growth(j), {}, 1e-3,
                std::nullopt, 0, {}, base_dir};

  if (!j.contains("operator")) throw detail::config_error("config: missing 'operator'");
  const auto& op = j.at("operator");
  if (op.contains("builtin")) cfg.op_builtin = op.at("builtin").get<std::string>();
  if (op.contains("n")) cfg.n_list = op.at("n").get<std::vector<int>>();
  cfg.quad_points = op.value("quad_points", 64);
  cfg.tail_target = op.value("tail_target", 1e-14);
  if (op.contains("family_files"))
    cfg.family_files = op.at("family_files").get<std::vector<std::string>>();
  if (op.contains("family_file")) cfg.family_files = {op.at("family_file").get<std::string>()};

  if (cfg.op_builtin.empty() && cfg.family_files.empty())
    throw detail::config_error("config: operator needs a builtin name or family files");
  if (!cfg.op_builtin.empty() && cfg.op_builtin != "bernstein" && cfg.op_builtin != "szasz" &&
      cfg.op_builtin != "gauss_weierstrass")
    throw detail::config_error("config: unknown operator builtin '" + cfg.op_builtin + "'");
  if (!cfg.op_builtin.empty() && cfg.n_list.empty())
    throw detail::config_error("config: operator.n must list process indices");
  for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
    if (cfg.n_list[i] <= cfg.n_list[i - 1])
      throw detail::config_error("config: operator.n must be strictly increasing");
  for (std::string& f : cfg.family_files) {
    std::filesystem::path p(f);
    if (p.is_relative()) f = (std::filesystem::path(base_dir) / p).string();
    if (!std::filesystem::exists(f))
      throw detail::config_error("config: family file '" + f + "' does not exist");
  }

  if (j.contains("targets")) {
    for (const auto& tj : j.at("targets")) {
      TargetSpec ts;
      std::string text = tj.at("expression").get<std::string>();
      ts.label = tj.value("label", text);
      ts.expression = parse_expression(text);
      if (tj.contains("codim") && tj.at("codim").get<int>() != ts.expression.codim())
        throw detail::config_error("config: target '" + ts.label +
                                   "' declares codim " + std::to_string(tj.at("codim").get<int>()) +
                                   " but the expression has " +
                                   std::to_string(ts.expression.codim()));
      ts.function = expression_function(ts.expression, ts.label);
      cfg.targets.push_back(std::move(ts));
    }
  }

  if (j.contains("options")) {
    const auto& o = j.at("options");
    cfg.threshold = o.value("threshold", 1e-3);
    if (o.contains("delta") && !o.at("delta").is_null()) {
      if (o.at("delta").is_string()) {
        if (o.at("delta").get<std::string>() != "auto")
          throw detail::config_error("config: options.delta is a number or \"auto\"");
      } else {
        cfg.delta = o.at("delta").get<double>();
        if (!(*cfg.delta > 0)) throw detail::config_error("config: options.delta must be positive");
      }
    }
    cfg.seed = o.value("seed", std::uint64_t{0});
    cfg.out = o.value("out", std::string{});
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw detail::config_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::parse, "config '" + path + "': " + e.what());
  }
  std::string base = std::filesystem::path(path).parent_path().string();
  if (base.empty()) base = ".";
  try {
    return parse_config(j, base);
  } catch (const nlohmann::json::exception& e) {
    throw detail::config_error("config '" + path + "': " + e.what());
  }
}

// One operator pair per process index (or per family file).
inline std::vector<OperatorPair> make_pairs(const RunConfig& cfg) {
  std::vector<OperatorPair> pairs;
  if (!cfg.op_builtin.empty()) {
    for (int n : cfg.n_list) {
      if (cfg.op_builtin == "bernstein") {
        pairs.push_back(make_bernstein(n, cfg.domain));
      } else if (cfg.op_builtin == "szasz") {
        if (cfg.domain.dim() == 1) {
          pairs.push_back(make_szasz(n, cfg.domain, SzaszPolicy{cfg.tail_target}));
        } else {
          auto one_d = make_szasz(n, default_szasz_domain(), SzaszPolicy{cfg.tail_target});
          auto tensored = make_tensor(one_d, static_cast<int>(cfg.domain.dim()));
          pairs.push_back(OperatorPair{tensored.family, cfg.domain});
        }
      } else {
        pairs.push_back(make_gauss_weierstrass(n, cfg.domain, cfg.quad_points));
      }
    }
    return pairs;
  }
  for (const std::string& path : cfg.family_files)
    pairs.push_back(load_family(path, cfg.domain));
  std::sort(pairs.begin(), pairs.end(), [](const OperatorPair& a, const OperatorPair& b) {
    return a.family.n() < b.family.n();
  });
  return pairs;
}

}  // namespace korovkin
