#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hilblat/arith.hpp"
#include "hilblat/lattice.hpp"

namespace hilblat {

/// Rank of the K3 lattice U³ ⊕ E8(−1)².
inline constexpr std::size_t kK3Rank = 22;

/// The K3 lattice U ⊕ U ⊕ U ⊕ E8(−1) ⊕ E8(−1), in that basis order.
inline Lattice k3_lattice() {
  const Lattice u = hyperbolic_plane();
  const Lattice e8m = rescale(e8_lattice(), -1);
  const Lattice sum = direct_sum(direct_sum(direct_sum(u, u), direct_sum(u, e8m)), e8m);
  return Lattice(sum.gram(), "K3");
}

inline Lattice e8_minus_lattice() { return Lattice(rescale(e8_lattice(), -1).gram(), "E8_MINUS"); }

/// A lattice with a distinguished class e playing the role of the
/// exceptional divisor. Index and naturality are defined relative to e.
struct MarkedLattice {
  Lattice lattice;
  LatticeVector e;

  MarkedLattice(Lattice l, LatticeVector exceptional)
      : lattice(std::move(l)), e(std::move(exceptional)) {
    if (e.size() != lattice.rank())
      throw InputError("exceptional class has " + std::to_string(e.size()) +
                       " coordinates, lattice rank is " + std::to_string(lattice.rank()));
    if (norm(lattice, e) == 0) throw PreconditionError("exceptional class has q(e) = 0");
  }
};

/// Λ_K3 ⊕ Zδ with q(δ) = −2(n−1); δ is the last basis vector and e = 2δ.
class DouadyLattice {
 public:
  explicit DouadyLattice(int n) : n_(n) {
    if (n < 2) throw PreconditionError("Douady lattice needs n >= 2, got " + std::to_string(n));
    k3_ = k3_lattice();
    const Lattice delta_line = diagonal_lattice({Integer(-2 * (n - 1))});
    full_ = Lattice(direct_sum(k3_, delta_line).gram(), "DOUADY(" + std::to_string(n) + ")");
  }

  int n() const { return n_; }
  const Lattice& full() const { return full_; }
  const Lattice& k3() const { return k3_; }
  std::size_t delta_index() const { return kK3Rank; }

  LatticeVector delta() const {
    LatticeVector d(kK3Rank + 1, Integer(0));
    d[kK3Rank] = 1;
    return d;
  }

  Sublattice k3_part() const {
    return Sublattice(full_, IntMatrix::identity(kK3Rank + 1).block(0, 0, kK3Rank + 1, kK3Rank));
  }

  MarkedLattice marked() const { return MarkedLattice(full_, e_class()); }

  /// e = 2δ.
  LatticeVector e_class() const {
    LatticeVector e = delta();
    e[kK3Rank] = 2;
    return e;
  }

  /// The pairing-preserving embedding of the K3 lattice: v ↦ (v, 0).
  template <typename T>
  std::vector<T> iota(const std::vector<T>& v) const {
    if (v.size() != kK3Rank)
      throw InputError("iota: expected " + std::to_string(kK3Rank) + " coordinates, got " +
                       std::to_string(v.size()));
    std::vector<T> out(v);
    out.push_back(T(0));
    return out;
  }

  void check_acts(const Isometry& f) const {
    if (!(f.ambient() == full_)) throw InputError("isometry does not act on " + full_.label());
  }

 private:
  int n_ = 2;
  Lattice k3_;
  Lattice full_;
};

/// Exact value of the index λ(f). For isometries of the Douady lattice the
/// denominator divides 2 (in fact λ is always an integer there).
struct IndexValue {
  Rational value;

  bool is_integral() const { return hilblat::is_integral(value); }
  friend bool operator==(const IndexValue&, const IndexValue&) = default;
  friend bool operator==(const IndexValue& a, int b) { return a.value == b; }
};

inline std::string to_string(const IndexValue& v) { return to_string(v.value); }

inline void check_acts(const MarkedLattice& m, const Isometry& f) {
  if (!(f.ambient() == m.lattice)) throw InputError("isometry acts on a different lattice");
}

/// λ(f) = q(f(e), e) / q(e).
inline IndexValue index_invariant(const MarkedLattice& m, const Isometry& f) {
  check_acts(m, f);
  return {Rational(pairing(m.lattice, f(m.e), m.e)) / Rational(norm(m.lattice, m.e))};
}

inline IndexValue index_invariant(const DouadyLattice& d, const Isometry& f) {
  return index_invariant(d.marked(), f);
}

/// f(e) = λ·e + d with d ⊥ e.
struct MarkedDecomposition {
  IndexValue lambda;
  RationalVector d;
};

inline MarkedDecomposition pullback_decomposition(const MarkedLattice& m, const Isometry& f) {
  const IndexValue lambda = index_invariant(m, f);
  const LatticeVector image = f(m.e);
  RationalVector d(image.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = Rational(image[i]) - lambda.value * Rational(m.e[i]);
  return {lambda, std::move(d)};
}

/// f(e) = λ·e + ι(d), d given in the 22 K3 coordinates.
struct PullbackDecomposition {
  IndexValue lambda;
  LatticeVector d;
};

inline PullbackDecomposition pullback_decomposition(const DouadyLattice& dl, const Isometry& f) {
  dl.check_acts(f);
  const LatticeVector image = f(dl.e_class());
  PullbackDecomposition out;
  out.lambda = {Rational(image[dl.delta_index()]) / 2};
  out.d.assign(image.begin(), image.begin() + kK3Rank);
  return out;
}

/// Isometry acting as φ on ι(Λ_K3) and fixing δ.
inline Isometry natural_lift(const DouadyLattice& dl, const Isometry& phi) {
  if (!(phi.ambient() == dl.k3())) throw InputError("natural_lift: φ must act on the K3 lattice");
  IntMatrix m(kK3Rank + 1, kK3Rank + 1);
  for (std::size_t i = 0; i < kK3Rank; ++i)
    for (std::size_t j = 0; j < kK3Rank; ++j) m(i, j) = phi.matrix()(i, j);
  m(kK3Rank, kK3Rank) = 1;
  return Isometry(dl.full(), std::move(m));
}

/// f(e) = e, i.e. f preserves the exceptional class.
inline bool is_natural_on_lattice(const MarkedLattice& m, const Isometry& f) {
  check_acts(m, f);
  return f(m.e) == m.e;
}

/// f(δ) = δ.
inline bool is_natural_on_lattice(const DouadyLattice& dl, const Isometry& f) {
  dl.check_acts(f);
  return f(dl.delta()) == dl.delta();
}

/// The block φ with f = (φ, id). Requires f(δ) = δ.
inline Isometry extract_surface_isometry(const DouadyLattice& dl, const Isometry& f) {
  if (!is_natural_on_lattice(dl, f))
    throw PreconditionError("extract_surface_isometry: f moves delta to " +
                            to_string(f(dl.delta())));
  return Isometry(dl.k3(), f.matrix().block(0, 0, kK3Rank, kK3Rank));
}

/// Restriction of a natural f to e^⊥, in the canonical basis of e^⊥.
/// For the Douady lattice this is exactly the K3 block.
inline IntMatrix restrict_to_complement(const MarkedLattice& m, const Isometry& f) {
  if (!is_natural_on_lattice(m, f))
    throw PreconditionError("restrict_to_complement: f moves the exceptional class");
  const Sublattice line(m.lattice, IntMatrix::from_columns({m.e}));
  const Sublattice perp = orthogonal_complement(m.lattice, line);
  const IntMatrix& b = perp.basis();
  const IntMatrix image = f.matrix() * b;
  // Solve b * X = image column by column: b has full column rank and its
  // HNF pivots give a triangular system.
  IntMatrix x(b.cols(), b.cols());
  for (std::size_t col = 0; col < image.cols(); ++col) {
    LatticeVector rest = image.column(col);
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::size_t pivot = 0;
      while (b(pivot, j) == 0) ++pivot;
      if (rest[pivot] % b(pivot, j) != 0)
        throw PreconditionError("restrict_to_complement: image leaves the complement");
      const Integer c = rest[pivot] / b(pivot, j);
      x(j, col) = c;
      for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= c * b(i, j);
    }
    if (std::any_of(rest.begin(), rest.end(), [](const Integer& v) { return v != 0; }))
      throw PreconditionError("restrict_to_complement: image leaves the complement");
  }
  return x;
}

/// c₁ of ψ(L^{kn}): k·n·ι(c) − e.
inline LatticeVector psi_first_chern(const DouadyLattice& dl, const LatticeVector& c, int k) {
  if (k < 1) throw PreconditionError("psi_first_chern: k must be positive");
  LatticeVector out = dl.iota(c);
  const Integer scale = Integer(k) * dl.n();
  for (auto& x : out) x *= scale;
  const LatticeVector e = dl.e_class();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= e[i];
  return out;
}

/// All integer (λ, μ) with |λ|, |μ| ≤ bound and −8(n−1) = −8(n−1)λ² + μ²·d2,
/// sorted lexicographically.
inline std::vector<std::pair<Integer, Integer>> index_norm_solutions(int n, const Integer& d2,
                                                                     const Integer& bound) {
  if (n < 2) throw PreconditionError("index_norm_solutions: n must be >= 2");
  if (d2 == 0) throw PreconditionError("index_norm_solutions: d2 must be nonzero");
  if (bound < 1) throw PreconditionError("index_norm_solutions: bound must be positive");
  const Integer qe = Integer(-8) * (n - 1);
  std::vector<std::pair<Integer, Integer>> out;
  for (Integer lambda = -bound; lambda <= bound; ++lambda)
    for (Integer mu = -bound; mu <= bound; ++mu)
      if (qe == qe * lambda * lambda + mu * mu * d2) out.emplace_back(lambda, mu);
  return out;
}

/// Whether x and y lie in the same component of {q > 0} for a lattice of
/// signature (1, 0, k).
template <typename T>
bool same_positive_cone_component(const Lattice& lattice, const std::vector<T>& x,
                                  const std::vector<T>& y) {
  const SignatureTriple s = signature(lattice);
  if (s.pos != 1 || s.zero != 0)
    throw PreconditionError("positive cone: lattice signature " + to_string(s) +
                            " is not (1, 0, k)");
  if (norm(lattice, x) <= 0 || norm(lattice, y) <= 0)
    throw PreconditionError("positive cone: vectors must have positive norm");
  return pairing(lattice, x, y) > 0;
}

/// Lattice-level necessary conditions for ω = ι(ω₀) + λe to be Kähler.
/// Says nothing about actual Kählerness.
struct KahlerDiagnostic {
  Rational q_omega;     // q(ω) = ω₀² − 8λ²(n−1)
  Rational q_omega_e;   // q(ω, e) = −8λ(n−1)
  Rational q_omega0;    // ω₀²
  bool positive_norm() const { return q_omega > 0; }
  bool pairs_positively_with_e() const { return q_omega_e > 0; }
  bool surface_part_positive() const { return q_omega0 > 0; }
  bool all_pass() const {
    return positive_norm() && pairs_positively_with_e() && surface_part_positive();
  }
};

inline KahlerDiagnostic kahler_candidate_check(const DouadyLattice& dl,
                                               const RationalVector& omega0,
                                               const Rational& lambda) {
  RationalVector omega = dl.iota(omega0);
  omega[dl.delta_index()] = 2 * lambda;
  const RationalVector e = to_rational(dl.e_class());
  return {norm(dl.full(), omega), pairing(dl.full(), omega, e), norm(dl.k3(), omega0)};
}

/// Same, with ω given in the 23 coordinates of the Douady lattice.
inline KahlerDiagnostic kahler_candidate_check(const DouadyLattice& dl,
                                               const RationalVector& omega) {
  if (omega.size() != kK3Rank + 1)
    throw InputError("kahler_candidate_check: expected 23 coordinates");
  RationalVector omega0(omega.begin(), omega.begin() + kK3Rank);
  return kahler_candidate_check(dl, omega0, omega[dl.delta_index()] / 2);
}

}  // namespace hilblat
