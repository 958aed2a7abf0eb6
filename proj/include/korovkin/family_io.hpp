#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "korovkin/builtins.hpp"
#include "korovkin/errors.hpp"
#include "korovkin/family.hpp"

namespace korovkin {

// Line-oriented family file: a header (m, n, flags, optional k for split
// vector weights, optional label), then one block per evaluation point:
//
//   t: x1 ... xm
//   w u1 ... um            shared atoms (scalar weight first)
//   L w1 ... wk u1 ... um  split mode, vector-weighted L atom
//   S w u1 ... um          split mode, scalar S atom
//
// Whitespace separated, '#' starts a comment, UTF-8.
struct FamilyFile {
  int m = 1;
  int n = 1;
  int k = 0;  // >0 switches to split mode
  FamilyFlags flags;
  std::string label = "family";
  std::vector<std::pair<Vec, std::vector<MeasureAtom>>> blocks;
  std::vector<std::pair<Vec, std::vector<VectorAtom>>> l_blocks;
};

namespace detail {

inline error parse_error(const std::string& name, int line, const std::string& msg) {
  return error(errc::parse, name + ":" + std::to_string(line) + ": " + msg);
}

inline std::vector<double> parse_numbers(const std::string& text, const std::string& name,
                                         int line) {
  std::istringstream in(text);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw parse_error(name, line, "expected a number, got '" + tok + "'");
    }
  }
  return out;
}

inline std::string fmt_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline FamilyFile parse_family_file(std::istream& in, const std::string& name) {
  FamilyFile file;
  bool saw_m = false, saw_n = false;
  bool in_blocks = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw.substr(0, raw.find('#'));
    std::istringstream ls(text);
    std::string head;
    if (!(ls >> head)) continue;
    std::string rest;
    std::getline(ls, rest);
    if (!in_blocks && head != "t:") {
      if (head == "m" || head == "n" || head == "k") {
        auto nums = detail::parse_numbers(rest, name, line);
        if (nums.size() != 1 || nums[0] != std::floor(nums[0]) || nums[0] < (head == "k" ? 1 : 1))
          throw detail::parse_error(name, line, "'" + head + "' needs one positive integer");
        (head == "m" ? file.m : head == "n" ? file.n : file.k) = static_cast<int>(nums[0]);
        (head == "m" ? saw_m : saw_n) = true;
      } else if (head == "constant_preserving" || head == "regular") {
        auto nums = detail::parse_numbers(rest, name, line);
        if (nums.size() != 1 || (nums[0] != 0.0 && nums[0] != 1.0))
          throw detail::parse_error(name, line, "'" + head + "' needs 0 or 1");
        (head == "constant_preserving" ? file.flags.constant_preserving : file.flags.regular) =
            nums[0] == 1.0;
      } else if (head == "label") {
        std::istringstream rs(rest);
        rs >> file.label;
      } else {
        throw detail::parse_error(name, line, "unknown header entry '" + head + "'");
      }
      continue;
    }
    if (head == "t:") {
      if (!saw_m || !saw_n)
        throw detail::parse_error(name, line, "header must declare m and n before blocks");
      in_blocks = true;
      Vec t = detail::parse_numbers(rest, name, line);
      if (static_cast<int>(t.size()) != file.m)
        throw detail::parse_error(name, line, "evaluation point needs m = " +
                                                  std::to_string(file.m) + " coordinates");
      file.blocks.emplace_back(t, std::vector<MeasureAtom>{});
      if (file.k > 0) file.l_blocks.emplace_back(t, std::vector<VectorAtom>{});
      continue;
    }
    if (file.blocks.empty()) throw detail::parse_error(name, line, "atom line before any 't:' block");
    if (file.k > 0 && (head == "L" || head == "S")) {
      auto nums = detail::parse_numbers(rest, name, line);
      if (head == "L") {
        if (static_cast<int>(nums.size()) != file.k + file.m)
          throw detail::parse_error(name, line, "L atom needs k + m numbers");
        VectorAtom a;
        a.weights.assign(nums.begin(), nums.begin() + file.k);
        a.node.assign(nums.begin() + file.k, nums.end());
        file.l_blocks.back().second.push_back(std::move(a));
      } else {
        if (static_cast<int>(nums.size()) != 1 + file.m)
          throw detail::parse_error(name, line, "S atom needs 1 + m numbers");
        MeasureAtom a;
        a.weight = nums[0];
        a.node.assign(nums.begin() + 1, nums.end());
        file.blocks.back().second.push_back(std::move(a));
      }
      continue;
    }
    auto nums = detail::parse_numbers(text, name, line);
    if (static_cast<int>(nums.size()) != 1 + file.m)
      throw detail::parse_error(name, line, "atom line needs weight plus m coordinates");
    MeasureAtom a;
    a.weight = nums[0];
    a.node.assign(nums.begin() + 1, nums.end());
    file.blocks.back().second.push_back(std::move(a));
  }
  if (file.blocks.empty()) throw detail::parse_error(name, line, "no evaluation blocks found");
  return file;
}

inline FamilyFile load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config, "cannot open family file '" + path + "'");
  return parse_family_file(in, path);
}

inline void write_family_file(std::ostream& out, const FamilyFile& file) {
  out << "m " << file.m << "\n";
  out << "n " << file.n << "\n";
  if (file.k > 0) out << "k " << file.k << "\n";
  out << "constant_preserving " << (file.flags.constant_preserving ? 1 : 0) << "\n";
  out << "regular " << (file.flags.regular ? 1 : 0) << "\n";
  out << "label " << file.label << "\n";
  for (std::size_t b = 0; b < file.blocks.size(); ++b) {
    out << "t:";
    for (double x : file.blocks[b].first) out << " " << detail::fmt_exact(x);
    out << "\n";
    if (file.k > 0) {
      for (const VectorAtom& a : file.l_blocks[b].second) {
        out << "L";
        for (double w : a.weights) out << " " << detail::fmt_exact(w);
        for (double u : a.node) out << " " << detail::fmt_exact(u);
        out << "\n";
      }
      for (const MeasureAtom& a : file.blocks[b].second) {
        out << "S " << detail::fmt_exact(a.weight);
        for (double u : a.node) out << " " << detail::fmt_exact(u);
        out << "\n";
      }
    } else {
      for (const MeasureAtom& a : file.blocks[b].second) {
        out << detail::fmt_exact(a.weight);
        for (double u : a.node) out << " " << detail::fmt_exact(u);
        out << "\n";
      }
    }
  }
}

inline std::vector<Vec> listed_points(const FamilyFile& file) {
  std::vector<Vec> pts;
  pts.reserve(file.blocks.size());
  for (const auto& [t, atoms] : file.blocks) pts.push_back(t);
  return pts;
}

inline MeasureFamily family_from_file(const FamilyFile& file) {
  auto find_block = [](const auto& blocks, const Vec& t) -> std::size_t {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i].first.size() != t.size()) continue;
      bool match = true;
      for (std::size_t j = 0; j < t.size(); ++j)
        if (std::abs(blocks[i].first[j] - t[j]) > 1e-12) {
          match = false;
          break;
        }
      if (match) return i;
    }
    throw error(errc::domain, "family file has no atoms at " + to_string(t));
  };
  MeasureFamily fam(file.n, file.label, file.flags,
                    [blocks = file.blocks, find_block](const Vec& t) {
                      return blocks[find_block(blocks, t)].second;
                    });
  fam.allow_negative_weights();
  if (file.k > 0)
    fam.set_l_atoms(
        [blocks = file.l_blocks, find_block](const Vec& t) {
          return blocks[find_block(blocks, t)].second;
        },
        file.k);
  return fam;
}

// Domain: the bounding box of the listed points and nodes, padded a little.
inline OperatorPair load_family(const std::string& path) {
  FamilyFile file = load_family_file(path);
  std::size_t m = static_cast<std::size_t>(file.m);
  Vec lo(m, 1e300), hi(m, -1e300);
  auto absorb = [&](const Vec& p) {
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  };
  for (const auto& [t, atoms] : file.blocks) {
    absorb(t);
    for (const auto& a : atoms) absorb(a.node);
  }
  for (std::size_t i = 0; i < m; ++i) {
    double pad = 0.5 * std::max(1e-6, hi[i] - lo[i]);
    lo[i] -= pad;
    hi[i] += pad;
  }
  Domain domain = box_domain(Box{lo, hi});
  return OperatorPair{family_from_file(file), std::move(domain)};
}

inline OperatorPair load_family(const std::string& path, Domain domain) {
  FamilyFile file = load_family_file(path);
  return OperatorPair{family_from_file(file), std::move(domain)};
}

}  // namespace korovkin
