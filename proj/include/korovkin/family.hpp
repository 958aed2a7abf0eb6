#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "korovkin/domain.hpp"
#include "korovkin/errors.hpp"
#include "korovkin/growth.hpp"
#include "korovkin/vec.hpp"

namespace korovkin {

// One point mass of the measure attached to an evaluation point.
struct MeasureAtom {
  Vec node;
  double weight = 0.0;
};

// Atom with one weight per target coordinate (a diagonal operator-valued
// coefficient); used only by families loaded from the split file format.
struct VectorAtom {
  Vec node;
  Vec weights;
};

struct FamilyMeta {
  double const_preservation_defect = 0.0;  // worst |sum w - 1| seen, when flagged
  double truncation_tail = 0.0;            // worst dropped-mass bound seen
  int quadrature_order = 0;                // 0 when not quadrature based
};

struct FamilyFlags {
  bool constant_preserving = false;
  bool regular = false;
};

// A family member (one process index n): for every evaluation point t a
// finite list of atoms.  The scalar operator S applies the atoms to scalar
// functions, the vector operator L applies the same atoms coordinatewise,
// which makes L dominated by S and S-regular by construction.  A family
// may instead carry separate vector-weighted L atoms (split mode); then
// only the empirical checkers can certify domination.
class MeasureFamily {
public:
  using AtomFn = std::function<std::vector<MeasureAtom>(const Vec&)>;
  using VectorAtomFn = std::function<std::vector<VectorAtom>(const Vec&)>;

  MeasureFamily(int n, std::string label, FamilyFlags flags, AtomFn atoms)
      : n_(n), label_(std::move(label)), flags_(flags), atoms_(std::move(atoms)),
        state_(std::make_shared<State>()) {}

  int n() const { return n_; }
  const std::string& label() const { return label_; }
  const FamilyFlags& flags() const { return flags_; }
  bool split() const { return static_cast<bool>(l_atoms_); }

  // builder-phase only: lets the atom function capture a copy of the
  // family (copies share metadata state)
  void set_atom_fn(AtomFn fn) { atoms_ = std::move(fn); }

  void set_l_atoms(VectorAtomFn fn, int codim) {
    l_atoms_ = std::move(fn);
    l_codim_ = codim;
  }
  int l_codim() const { return l_codim_; }

  void note_truncation_tail(double tail) const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    if (tail > state_->meta.truncation_tail) state_->meta.truncation_tail = tail;
  }
  void set_quadrature_order(int q) { state_->meta.quadrature_order = q; }

  FamilyMeta metadata() const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    return state_->meta;
  }

  // Memoized per t; the memo is a pure cache (same t, same atoms).
  const std::vector<MeasureAtom>& atoms_at(const Vec& t) const {
    {
      std::lock_guard<std::mutex> lock(state_->mutex);
      auto it = state_->cache.find(t);
      if (it != state_->cache.end()) return it->second;
    }
    // build outside the lock: the builder may record truncation metadata
    std::vector<MeasureAtom> atoms = atoms_(t);
    double mass = 0.0;
    for (const auto& a : atoms) {
      if (a.weight < 0.0 && !allow_negative_)
        throw error(errc::domain,
                    "family '" + label_ + "': negative atom weight at a queried point");
      mass += a.weight;
    }
    std::lock_guard<std::mutex> lock(state_->mutex);
    if (flags_.constant_preserving) {
      double defect = std::abs(mass - 1.0);
      if (defect > 1e-12)
        throw error(errc::domain, "family '" + label_ +
                                      "': flagged constant-preserving but atom mass deviates by " +
                                      std::to_string(defect));
      if (defect > state_->meta.const_preservation_defect)
        state_->meta.const_preservation_defect = defect;
    }
    return state_->cache.emplace(t, std::move(atoms)).first->second;
  }

  std::vector<VectorAtom> l_atoms_at(const Vec& t) const {
    if (!l_atoms_) throw error(errc::config, "family '" + label_ + "' has no split L atoms");
    return (*l_atoms_)(t);
  }

  // Fixture families (deliberately corrupted) carry negative weights.
  void allow_negative_weights() { allow_negative_ = true; }

private:
  struct State {
    mutable std::mutex mutex;
    std::map<Vec, std::vector<MeasureAtom>> cache;
    FamilyMeta meta;
  };

  int n_;
  std::string label_;
  FamilyFlags flags_;
  AtomFn atoms_;
  std::optional<VectorAtomFn> l_atoms_;
  int l_codim_ = 0;
  bool allow_negative_ = false;
  std::shared_ptr<State> state_;
};

struct OperatorPair {
  MeasureFamily family;
  Domain domain;
};

namespace detail {

inline void require_in_domain(const OperatorPair& pair, const Vec& t) {
  if (!pair.domain.contains(t))
    throw error(errc::domain, "evaluation point lies outside the domain");
}

}  // namespace detail

// S(f)(t) = sum_i w_i f(u_i)
inline double apply_S(const OperatorPair& pair, const std::function<double(const Vec&)>& f,
                      const Vec& t) {
  detail::require_in_domain(pair, t);
  Kahan acc;
  for (const MeasureAtom& a : pair.family.atoms_at(t)) {
    double v;
    try {
      v = f(a.node);
    } catch (const std::exception& e) {
      throw error(errc::evaluation,
                  "scalar target undefined at node " + to_string(a.node) + ": " + e.what());
    }
    acc.add(a.weight * v);
  }
  return acc.value();
}

// L(F)(t) = sum_i w_i F(u_i), coordinatewise
inline Vec apply_L(const OperatorPair& pair, const VectorFunction& F, const Vec& t) {
  detail::require_in_domain(pair, t);
  std::vector<Kahan> acc(static_cast<std::size_t>(F.codim));
  if (pair.family.split()) {
    for (const VectorAtom& a : pair.family.l_atoms_at(t)) {
      Vec v = F(a.node);
      if (v.size() != a.weights.size())
        throw error(errc::input, "split family codim " + std::to_string(a.weights.size()) +
                                     " does not match target codim " + std::to_string(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) acc[i].add(a.weights[i] * v[i]);
    }
  } else {
    for (const MeasureAtom& a : pair.family.atoms_at(t)) {
      Vec v;
      try {
        v = F(a.node);
      } catch (const std::exception& e) {
        throw error(errc::evaluation, "target '" + F.label + "' undefined at node " +
                                          to_string(a.node) + ": " + e.what());
      }
      if (static_cast<int>(v.size()) != F.codim)
        throw error(errc::evaluation, "target '" + F.label + "' returned a wrong-sized vector");
      for (std::size_t i = 0; i < v.size(); ++i) acc[i].add(a.weight * v[i]);
    }
  }
  Vec out(static_cast<std::size_t>(F.codim));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[i].value();
  return out;
}

// gamma_n^2(t) = S_n(psi_t^2)(t)
inline double gamma_sq(const OperatorPair& pair, const Vec& t) {
  return apply_S(pair, [&t](const Vec& u) { return psi_sq(t, u); }, t);
}

enum class SHMode { direct, expanded };

// S_n(h(t,.))(t): directly from the gap, or through the algebraic
// expansion  S(g) - g(t) S(1) - S(<g'(t),.>) + <g'(t),t> S(1).
inline double apply_S_h(const OperatorPair& pair, const GrowthFunction& g, const Vec& t,
                        SHMode mode = SHMode::direct) {
  if (!pair.domain.K().contains(t, 1e-12))
    throw error(errc::domain, "apply_S_h: t must lie in the compact K");
  if (mode == SHMode::direct) {
    double gt = g(t);
    Vec gr = g.grad(t);
    return apply_S(
        pair,
        [&](const Vec& u) { return g(u) - (gt + dot(gr, sub(u, t))); }, t);
  }
  double s1 = apply_S(pair, [](const Vec&) { return 1.0; }, t);
  double sg = apply_S(pair, [&g](const Vec& u) { return g(u); }, t);
  Vec gr = g.grad(t);
  double slin = apply_S(pair, [&gr](const Vec& u) { return dot(gr, u); }, t);
  return sg - g(t) * s1 - slin + dot(gr, t) * s1;
}

}  // namespace korovkin
