#pragma once

// Random inputs and independent oracles shared by the unit and acceptance
// suites. Oracles here avoid the library's HNF/kernel code paths.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "hilblat/group_action.hpp"
#include "hilblat/k3_douady.hpp"
#include "hilblat/lattice.hpp"

namespace hilblat::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline IntMatrix random_symmetric(Rng& rng, std::size_t n, long lo, long hi) {
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = uniform(rng, lo, hi);
  return g;
}

inline Lattice random_nondegenerate_lattice(Rng& rng, std::size_t n) {
  while (true) {
    IntMatrix g = random_symmetric(rng, n, -3, 3);
    if (determinant(g) != 0) return Lattice(std::move(g));
  }
}

inline LatticeVector random_vector(Rng& rng, std::size_t n, long lo, long hi) {
  LatticeVector v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

/// k independent columns with entries in [lo, hi].
inline IntMatrix random_independent_columns(Rng& rng, std::size_t n, std::size_t k, long lo,
                                            long hi) {
  while (true) {
    std::vector<LatticeVector> cols;
    for (std::size_t j = 0; j < k; ++j) cols.push_back(random_vector(rng, n, lo, hi));
    IntMatrix b = k == 0 ? IntMatrix(n, 0) : IntMatrix::from_columns(cols);
    if (rank(b) == k) return b;
  }
}

/// Sparse ±1 vector of the K3 lattice with q(v) = ±2.
inline LatticeVector random_k3_root(Rng& rng, const Lattice& k3) {
  while (true) {
    LatticeVector v(kK3Rank, Integer(0));
    const long support = uniform(rng, 1, 3);
    for (long s = 0; s < support; ++s) v[uniform(rng, 0, kK3Rank - 1)] = uniform(rng, 0, 1) ? 1 : -1;
    const Integer q = norm(k3, v);
    if (q == 2 || q == -2) return v;
  }
}

/// Product of 1..max_length reflections in norm ±2 vectors.
inline Isometry random_k3_isometry(Rng& rng, const Lattice& k3, int max_length = 6) {
  Isometry f = Isometry::identity(k3);
  const long length = uniform(rng, 1, max_length);
  for (long i = 0; i < length; ++i) f = reflection_isometry(k3, random_k3_root(rng, k3)) * f;
  return f;
}

/// Norm ±2 vector of Λ₂ with a nonzero δ coefficient: ι(w) ± δ with q(w) ∈ {0, 4}.
inline LatticeVector random_douady_root_moving_delta(Rng& rng, const DouadyLattice& dl) {
  const Integer qd = norm(dl.full(), dl.delta());
  while (true) {
    LatticeVector w(kK3Rank, Integer(0));
    const long support = uniform(rng, 0, 3);
    for (long s = 0; s < support; ++s) w[uniform(rng, 0, kK3Rank - 1)] = uniform(rng, -2, 2);
    LatticeVector v = dl.iota(w);
    v[dl.delta_index()] = uniform(rng, 0, 1) ? 1 : -1;
    const Integer q = norm(dl.full(), v);
    if (q == 2 || q == -2 || q == qd) {
      try {
        (void)reflection_isometry(dl.full(), v);
        return v;
      } catch (const PreconditionError&) {
      }
    }
  }
}

/// Arbitrary isometry of a Douady lattice: a product of lifted K3 reflections
/// and reflections that move δ.
inline Isometry random_douady_isometry(Rng& rng, const DouadyLattice& dl, int max_length = 6) {
  Isometry f = Isometry::identity(dl.full());
  const long length = uniform(rng, 1, max_length);
  for (long i = 0; i < length; ++i) {
    if (uniform(rng, 0, 1)) {
      f = reflection_isometry(dl.full(), random_douady_root_moving_delta(rng, dl)) * f;
    } else {
      const Isometry r = reflection_isometry(dl.k3(), random_k3_root(rng, dl.k3()));
      f = natural_lift(dl, r) * f;
    }
  }
  return f;
}

inline IntMatrix random_signed_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(perm[i], i) = uniform(rng, 0, 1) ? 1 : -1;
  return m;
}

/// Lattice built from diagonal entries and hyperbolic planes, so that signed
/// permutations and small reflections have a fair chance to be isometries.
inline Lattice random_symmetric_lattice(Rng& rng, std::size_t n) {
  static const long diag_values[] = {-2, -1, 1, 2};
  IntMatrix g(n, n);
  std::size_t i = 0;
  while (i < n) {
    if (i + 1 < n && uniform(rng, 0, 3) == 0) {
      g(i, i + 1) = g(i + 1, i) = 1;
      i += 2;
    } else {
      g(i, i) = diag_values[uniform(rng, 0, 3)];
      ++i;
    }
  }
  return Lattice(std::move(g));
}

struct RandomGroup {
  Lattice lattice;
  IsometryGroup group;
};

/// Finite group of order ≤ max_order generated by 1–2 signed permutations or
/// reflections that are isometries of a random lattice of rank ≤ 6.
inline RandomGroup random_finite_group(Rng& rng, std::size_t max_order = 8) {
  while (true) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 6));
    const Lattice lattice = random_symmetric_lattice(rng, n);
    std::vector<IntMatrix> gens;
    const long wanted = uniform(rng, 1, 2);
    for (int attempt = 0; attempt < 200 && static_cast<long>(gens.size()) < wanted; ++attempt) {
      IntMatrix candidate;
      if (uniform(rng, 0, 1)) {
        candidate = random_signed_permutation(rng, n);
        if (!is_isometry(lattice, candidate)) continue;
      } else {
        try {
          candidate = reflection_isometry(lattice, random_vector(rng, n, -1, 1)).matrix();
        } catch (const PreconditionError&) {
          continue;
        }
      }
      if (candidate == IntMatrix::identity(n)) continue;
      gens.push_back(candidate);
    }
    if (gens.empty()) continue;
    try {
      IsometryGroup g = closure(lattice, gens, max_order);
      return {lattice, std::move(g)};
    } catch (const PreconditionError&) {
      // too large; try again
    }
  }
}

// -- independent oracles ----------------------------------------------------

/// Rank over Q by plain fraction elimination (separate from hilblat::rank).
inline std::size_t oracle_rank(const IntMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = Rational(m(i, j));
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p >= a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

/// Determinant by cofactor expansion (tiny matrices only).
inline Integer oracle_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(i - 1, cc++) = m(i, c);
    const Integer term = m(0, j) * oracle_det(minor);
    total += (j % 2 == 0) ? term : Integer(-term);
  }
  return total;
}

/// gcd of the maximal minors of an n×k matrix; 1 iff the columns span a
/// saturated sublattice.
inline Integer oracle_minor_gcd(const IntMatrix& b) {
  const std::size_t n = b.rows(), k = b.cols();
  if (k == 0) return 1;
  std::vector<bool> choose(n, false);
  std::fill(choose.begin(), choose.begin() + static_cast<long>(k), true);
  Integer g = 0;
  do {
    IntMatrix sub(k, k);
    for (std::size_t i = 0, r = 0; i < n; ++i)
      if (choose[i]) {
        for (std::size_t j = 0; j < k; ++j) sub(r, j) = b(i, j);
        ++r;
      }
    g = gcd(g, oracle_det(sub));
  } while (std::prev_permutation(choose.begin(), choose.end()));
  return g;
}

/// Tr_G equals the integral points of the image of Σ g (the rational
/// 1-eigenspace of the averaging projector), tested without kernels/HNF:
/// fixed basis, equal rank, image contained in the span, saturated.
inline bool invariant_matches_average_oracle(const IsometryGroup& group, const Sublattice& tr) {
  const std::size_t n = group.ambient().rank();
  IntMatrix total(n, n);
  for (const IntMatrix& g : group.elements()) total = total + g;
  for (const IntMatrix& g : group.elements())
    if (!(g * tr.basis() == tr.basis())) return false;
  const std::size_t r = oracle_rank(total);
  if (r != tr.rank()) return false;
  if (tr.rank() > 0 && oracle_rank(tr.basis().beside(total)) != r) return false;
  return oracle_minor_gcd(tr.basis()) == 1;
}

/// All x with |x_i| ≤ height orthogonal to every column of S.
inline std::vector<LatticeVector> brute_force_orthogonal(const Lattice& l, const IntMatrix& s,
                                                         long height) {
  const std::size_t n = l.rank();
  std::vector<LatticeVector> out;
  LatticeVector x(n, Integer(-height));
  const IntMatrix conditions = s.transposed() * l.gram();
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < conditions.rows() && ok; ++i) {
      Integer dot = 0;
      for (std::size_t j = 0; j < n; ++j) dot += conditions(i, j) * x[j];
      ok = dot == 0;
    }
    if (ok) out.push_back(x);
    std::size_t k = 0;
    while (k < n && x[k] == height) x[k++] = -height;
    if (k == n) break;
    ++x[k];
  }
  return out;
}

}  // namespace hilblat::testing
