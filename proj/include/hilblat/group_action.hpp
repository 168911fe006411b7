#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hilblat/arith.hpp"
#include "hilblat/k3_douady.hpp"
#include "hilblat/lattice.hpp"

namespace hilblat {

inline constexpr std::size_t kDefaultGroupCap = 10000;

/// A finite group of isometries, stored fully enumerated.
class IsometryGroup {
 public:
  const Lattice& ambient() const { return ambient_; }
  /// Elements in increasing matrix order; the identity is always present.
  const std::vector<IntMatrix>& elements() const { return elements_; }
  const std::vector<IntMatrix>& generators() const { return generators_; }
  std::size_t order() const { return elements_.size(); }

  friend IsometryGroup closure(const Lattice&, const std::vector<IntMatrix>&, std::size_t);

 private:
  Lattice ambient_;
  std::vector<IntMatrix> elements_;
  std::vector<IntMatrix> generators_;
};

/// Group generated by `generators`, by breadth-first products.
/// Throws PreconditionError for a non-isometry or if the order exceeds `cap`.
inline IsometryGroup closure(const Lattice& lattice, const std::vector<IntMatrix>& generators,
                             std::size_t cap = kDefaultGroupCap) {
  if (cap == 0) throw InputError("closure: cap must be positive");
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (auto why = isometry_violation(lattice, generators[i]))
      throw PreconditionError("generator " + std::to_string(i) + " is not an isometry: " + *why);

  const IntMatrix id = IntMatrix::identity(lattice.rank());
  std::set<IntMatrix> seen{id};
  std::deque<IntMatrix> frontier{id};
  while (!frontier.empty()) {
    const IntMatrix current = std::move(frontier.front());
    frontier.pop_front();
    for (const IntMatrix& g : generators) {
      IntMatrix next = g * current;
      if (seen.insert(next).second) {
        if (seen.size() > cap)
          throw PreconditionError("closure: group order exceeds cap " + std::to_string(cap));
        frontier.push_back(std::move(next));
      }
    }
  }
  IsometryGroup group;
  group.ambient_ = lattice;
  group.elements_.assign(seen.begin(), seen.end());
  group.generators_ = generators;
  return group;
}

/// Tr_G: the saturated sublattice of G-fixed vectors.
inline Sublattice invariant_sublattice(const IsometryGroup& group) {
  const Lattice& l = group.ambient();
  const IntMatrix id = IntMatrix::identity(l.rank());
  IntMatrix stacked(0, l.rank());
  for (const IntMatrix& g : group.generators()) stacked = stacked.stacked_over(g - id);
  if (stacked.rows() == 0) return Sublattice::full(l);
  const IntMatrix kernel = integer_kernel(stacked);
  if (kernel.cols() == 0) return Sublattice::zero(l);
  return Sublattice(l, kernel);
}

/// Ss_G = Tr_G^⊥.
inline Sublattice coinvariant_sublattice(const IsometryGroup& group) {
  return orthogonal_complement(group.ambient(), invariant_sublattice(group));
}

/// Whether every element of G maps S into itself.
inline bool is_stable(const IsometryGroup& group, const Sublattice& s) {
  if (s.rank() == 0) return true;
  for (const IntMatrix& g : group.generators())
    if (!span_contains(s.basis(), g * s.basis())) return false;
  return true;
}

/// Throws PreconditionError if S is not G-stable.
inline bool acts_trivially_on(const IsometryGroup& group, const Sublattice& s) {
  check_same_ambient(group.ambient(), s, "acts_trivially_on");
  if (!is_stable(group, s)) throw PreconditionError("acts_trivially_on: sublattice is not G-stable");
  for (const IntMatrix& g : group.generators())
    if (!(g * s.basis() == s.basis())) return false;
  return true;
}

inline bool is_negative_definite(const Sublattice& s) {
  return signature(s.gram()) == SignatureTriple{0, 0, s.rank()};
}

struct PairReport {
  Sublattice invariant;    // Tr_G
  Sublattice coinvariant;  // Ss_G
  Integer invariant_det;
  Integer coinvariant_det;
  bool trivial_intersection = false;
  bool invariant_nondegenerate = false;
  bool coinvariant_nondegenerate = false;

  bool all_pass() const {
    return trivial_intersection && invariant_nondegenerate && coinvariant_nondegenerate;
  }
};

/// Checks Tr_G ∩ Ss_G = {0} and nondegeneracy of both restricted forms.
inline PairReport verify_pair_properties(const IsometryGroup& group) {
  if (discriminant(group.ambient()) == 0)
    throw PreconditionError("verify_pair_properties: ambient lattice is degenerate");
  PairReport r;
  r.invariant = invariant_sublattice(group);
  r.coinvariant = orthogonal_complement(group.ambient(), r.invariant);
  r.invariant_det = determinant(r.invariant.gram());
  r.coinvariant_det = determinant(r.coinvariant.gram());
  r.trivial_intersection = intersect_trivially(r.invariant, r.coinvariant);
  r.invariant_nondegenerate = r.invariant_det != 0;
  r.coinvariant_nondegenerate = r.coinvariant_det != 0;
  return r;
}

/// Tr = NS^⊥.
inline Sublattice transcendental_sublattice(const Lattice& lattice, const Sublattice& ns) {
  return orthogonal_complement(lattice, ns);
}

enum class NSType { Hyperbolic, Parabolic, Elliptic };

inline std::string to_string(NSType t) {
  switch (t) {
    case NSType::Hyperbolic: return "Hyperbolic";
    case NSType::Parabolic: return "Parabolic";
    case NSType::Elliptic: return "Elliptic";
  }
  return "?";
}

enum class CompanionCheck { Matches, Mismatch, NotApplicable };

inline std::string to_string(CompanionCheck c) {
  switch (c) {
    case CompanionCheck::Matches: return "matches";
    case CompanionCheck::Mismatch: return "MISMATCH";
    case CompanionCheck::NotApplicable: return "not applicable";
  }
  return "?";
}

struct Classification {
  NSType type = NSType::Elliptic;
  SignatureTriple ns_signature;
  SignatureTriple tr_signature;
  SignatureTriple expected_tr_signature;
  // NotApplicable unless the ambient lattice has signature (3, 0, b − 3).
  CompanionCheck companion = CompanionCheck::NotApplicable;
};

/// Type of NS from the signature of the restricted form:
/// (1,0,ρ−1) hyperbolic, (0,1,ρ−1) parabolic, (0,0,ρ) elliptic. When the
/// ambient has signature (3,0,b−3) the transcendental signature is checked
/// against (2,0,b−ρ−2), (2,1,b−ρ−3) or (3,0,b−ρ−3) respectively.
inline Classification classify_ns_type(const Lattice& lattice, const Sublattice& ns) {
  check_same_ambient(lattice, ns, "classify_ns_type");
  Classification c;
  c.ns_signature = signature(ns.gram());
  const std::size_t rho = ns.rank();
  const auto& s = c.ns_signature;
  if (rho >= 1 && s == SignatureTriple{1, 0, rho - 1})
    c.type = NSType::Hyperbolic;
  else if (rho >= 1 && s == SignatureTriple{0, 1, rho - 1})
    c.type = NSType::Parabolic;
  else if (s == SignatureTriple{0, 0, rho})
    c.type = NSType::Elliptic;
  else
    throw PreconditionError("classify_ns_type: NS signature " + to_string(s) +
                            " matches no hyperbolic/parabolic/elliptic pattern");

  c.tr_signature = signature(transcendental_sublattice(lattice, ns).gram());
  const std::size_t b = lattice.rank();
  if (b >= 3 && signature(lattice) == SignatureTriple{3, 0, b - 3}) {
    // A negative expected count is reported as a mismatch.
    auto minus = [](std::size_t a, std::size_t k) -> std::optional<std::size_t> {
      if (a < k) return std::nullopt;
      return a - k;
    };
    std::optional<SignatureTriple> expected;
    switch (c.type) {
      case NSType::Hyperbolic:
        if (auto r = minus(b, rho + 2)) expected = SignatureTriple{2, 0, *r};
        break;
      case NSType::Parabolic:
        if (auto r = minus(b, rho + 3)) expected = SignatureTriple{2, 1, *r};
        break;
      case NSType::Elliptic:
        if (auto r = minus(b, rho + 3)) expected = SignatureTriple{3, 0, *r};
        break;
    }
    if (expected) c.expected_tr_signature = *expected;
    c.companion = (expected && *expected == c.tr_signature) ? CompanionCheck::Matches
                                                            : CompanionCheck::Mismatch;
  }
  return c;
}

enum class Verdict { Pass, Fail, NotApplicable };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "FAIL";
    case Verdict::NotApplicable: return "n/a";
  }
  return "?";
}

inline Verdict verdict(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

/// Conclusions of the transcendental/coinvariant lemma evaluated on given
/// (G, NS) data. A failure means the input does not model a symplectic
/// action; nothing here decides whether it does.
struct TranscendentalReport {
  Sublattice transcendental;  // Tr = NS^⊥
  Sublattice invariant;       // Tr_G
  Sublattice coinvariant;     // Ss_G
  Classification classification;
  SignatureTriple coinvariant_signature;
  Verdict acts_trivially_on_tr = Verdict::Fail;     // (1)
  Verdict tr_in_invariant = Verdict::Fail;          // (2a)
  Verdict coinvariant_in_ns = Verdict::Fail;        // (2b)
  Verdict coinvariant_negative_definite = Verdict::NotApplicable;  // (3)

  bool all_pass() const {
    for (Verdict v : {acts_trivially_on_tr, tr_in_invariant, coinvariant_in_ns,
                      coinvariant_negative_definite})
      if (v == Verdict::Fail) return false;
    return true;
  }
};

inline TranscendentalReport lemma_transcendant_report(const DouadyLattice& dl,
                                                      const IsometryGroup& group,
                                                      const Sublattice& ns) {
  if (!(group.ambient() == dl.full()))
    throw InputError("lemma report: group does not act on " + dl.full().label());
  check_same_ambient(dl.full(), ns, "lemma report");
  if (!is_stable(group, ns))
    throw PreconditionError("lemma report: NS is not G-stable; input does not model the lemma's setting");

  TranscendentalReport r;
  r.transcendental = transcendental_sublattice(dl.full(), ns);
  r.invariant = invariant_sublattice(group);
  r.coinvariant = orthogonal_complement(dl.full(), r.invariant);
  r.classification = classify_ns_type(dl.full(), ns);
  r.coinvariant_signature = signature(r.coinvariant.gram());
  r.acts_trivially_on_tr = verdict(acts_trivially_on(group, r.transcendental));
  r.tr_in_invariant = verdict(r.transcendental.is_subset_of(r.invariant));
  r.coinvariant_in_ns = verdict(r.coinvariant.is_subset_of(ns));
  if (r.classification.type != NSType::Hyperbolic)
    r.coinvariant_negative_definite = verdict(is_negative_definite(r.coinvariant));
  return r;
}

}  // namespace hilblat
