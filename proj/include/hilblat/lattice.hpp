#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hilblat/arith.hpp"
#include "hilblat/matrix.hpp"
#include "hilblat/normal_form.hpp"

namespace hilblat {

/// Free Z-module with a symmetric integral bilinear form, given by its Gram
/// matrix in a fixed basis. Degenerate forms and rank 0 are allowed.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(IntMatrix gram, std::string label = {})
      : gram_(std::move(gram)), label_(std::move(label)) {
    if (!gram_.is_square()) throw InputError("Gram matrix must be square");
    if (!gram_.is_symmetric()) throw InputError("Gram matrix must be symmetric");
  }

  std::size_t rank() const { return gram_.rows(); }
  const IntMatrix& gram() const { return gram_; }
  const std::string& label() const { return label_; }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.gram_ == b.gram_;
  }

 private:
  IntMatrix gram_;
  std::string label_;
};

/// Counts of positive, zero and negative eigenvalues.
struct SignatureTriple {
  std::size_t pos = 0;
  std::size_t zero = 0;
  std::size_t neg = 0;

  std::size_t total() const { return pos + zero + neg; }
  friend bool operator==(const SignatureTriple&, const SignatureTriple&) = default;
  friend SignatureTriple operator+(const SignatureTriple& a, const SignatureTriple& b) {
    return {a.pos + b.pos, a.zero + b.zero, a.neg + b.neg};
  }
};

inline std::string to_string(const SignatureTriple& s) {
  return "(" + std::to_string(s.pos) + ", " + std::to_string(s.zero) + ", " +
         std::to_string(s.neg) + ")";
}

inline Lattice diagonal_lattice(const std::vector<Integer>& entries,
                                std::string label = {}) {
  IntMatrix g(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) g(i, i) = entries[i];
  return Lattice(std::move(g), std::move(label));
}

/// The hyperbolic plane U.
inline Lattice hyperbolic_plane() { return Lattice(IntMatrix{{0, 1}, {1, 0}}, "U"); }

/// Positive definite E8 (Cartan matrix, Bourbaki labelling).
inline Lattice e8_lattice() {
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = 2;
  const std::pair<std::size_t, std::size_t> edges[] = {{0, 2}, {2, 3}, {3, 4}, {4, 5},
                                                       {5, 6}, {6, 7}, {1, 3}};
  for (auto [a, b] : edges) g(a, b) = g(b, a) = -1;
  return Lattice(std::move(g), "E8");
}

// -- forms ------------------------------------------------------------------

template <typename T>
T pairing(const Lattice& lattice, const std::vector<T>& x, const std::vector<T>& y) {
  if (x.size() != lattice.rank() || y.size() != lattice.rank())
    throw InputError("pairing: vector length " + std::to_string(x.size()) + "/" +
                     std::to_string(y.size()) + " does not match rank " +
                     std::to_string(lattice.rank()));
  T total(0);
  const IntMatrix& g = lattice.gram();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (g(i, j) != 0 && y[j] != 0) total += x[i] * T(g(i, j)) * y[j];
  }
  return total;
}

template <typename T>
T norm(const Lattice& lattice, const std::vector<T>& x) {
  return pairing(lattice, x, x);
}

/// Signature of a symmetric matrix by exact symmetric elimination over Q.
inline SignatureTriple signature(const IntMatrix& gram) {
  if (!gram.is_symmetric()) throw InputError("signature: matrix not symmetric");
  RationalMatrix a = to_rational(gram);
  const std::size_t n = a.rows();
  SignatureTriple s;
  auto swap_sym = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    a.swap_rows(i, j);
    a = a.transposed();
    a.swap_rows(i, j);
  };
  std::size_t k = 0;
  for (; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, p) == 0) ++p;
    if (p == n) {
      // All remaining diagonal entries vanish: use an off-diagonal one.
      std::size_t oi = n, oj = n;
      for (std::size_t i = k; i < n && oi == n; ++i)
        for (std::size_t j = k; j < n; ++j)
          if (a(i, j) != 0) {
            oi = i;
            oj = j;
            break;
          }
      if (oi == n) break;  // remaining block is zero
      // row/col i += row/col j gives a(i,i) = 2 a(i,j) != 0.
      a.add_row_multiple(oi, oj, Rational(1));
      for (std::size_t r = 0; r < n; ++r) a(r, oi) += a(r, oj);
      p = oi;
    }
    swap_sym(k, p);
    const Rational pivot = a(k, k);
    (pivot > 0 ? s.pos : s.neg) += 1;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (a(r, k) == 0) continue;
      const Rational f = a(r, k) / pivot;
      a.add_row_multiple(r, k, -f);
      for (std::size_t c = 0; c < n; ++c) a(c, r) -= f * a(c, k);
    }
  }
  s.zero = n - s.pos - s.neg;
  return s;
}

inline SignatureTriple signature(const Lattice& lattice) {
  return signature(lattice.gram());
}

inline Integer discriminant(const Lattice& lattice) { return determinant(lattice.gram()); }

inline Lattice direct_sum(const Lattice& a, const Lattice& b) {
  IntMatrix g(a.rank() + b.rank(), a.rank() + b.rank());
  for (std::size_t i = 0; i < a.rank(); ++i)
    for (std::size_t j = 0; j < a.rank(); ++j) g(i, j) = a.gram()(i, j);
  for (std::size_t i = 0; i < b.rank(); ++i)
    for (std::size_t j = 0; j < b.rank(); ++j)
      g(a.rank() + i, a.rank() + j) = b.gram()(i, j);
  std::string label;
  if (!a.label().empty() && !b.label().empty()) label = a.label() + "+" + b.label();
  return Lattice(std::move(g), std::move(label));
}

inline Lattice rescale(const Lattice& lattice, const Integer& k) {
  if (k == 0) throw PreconditionError("rescale: factor must be nonzero");
  std::string label;
  if (!lattice.label().empty()) label = lattice.label() + "(" + k.str() + ")";
  return Lattice(lattice.gram().scaled(k), std::move(label));
}

// -- sublattices ------------------------------------------------------------

/// Sublattice of an ambient lattice, stored by a canonical (column HNF) basis.
class Sublattice {
 public:
  Sublattice() = default;

  /// Throws InputError if the generators are dependent or of the wrong length.
  Sublattice(Lattice ambient, const IntMatrix& independent_columns)
      : ambient_(std::move(ambient)) {
    if (independent_columns.rows() != ambient_.rank() &&
        !(independent_columns.cols() == 0))
      throw InputError("sublattice basis has " + std::to_string(independent_columns.rows()) +
                       " rows, ambient rank is " + std::to_string(ambient_.rank()));
    if (hilblat::rank(independent_columns) != independent_columns.cols())
      throw InputError("sublattice generators are linearly dependent");
    basis_ = independent_columns.cols() == 0 ? IntMatrix(ambient_.rank(), 0)
                                             : canonical_basis(independent_columns);
    saturated_ = saturation_index(basis_) == 1;
  }

  /// Span of arbitrary (possibly dependent) generators.
  static Sublattice spanned_by(Lattice ambient, const IntMatrix& generators) {
    if (generators.cols() == 0) return Sublattice(std::move(ambient), IntMatrix(0, 0));
    if (generators.rows() != ambient.rank())
      throw InputError("generator length does not match ambient rank");
    return Sublattice(std::move(ambient), canonical_basis(generators));
  }

  static Sublattice full(Lattice ambient) {
    const std::size_t n = ambient.rank();
    return Sublattice(std::move(ambient), IntMatrix::identity(n));
  }

  static Sublattice zero(Lattice ambient) {
    return Sublattice(std::move(ambient), IntMatrix(0, 0));
  }

  const Lattice& ambient() const { return ambient_; }
  const IntMatrix& basis() const { return basis_; }
  std::size_t rank() const { return basis_.cols(); }
  bool saturated() const { return saturated_; }
  LatticeVector basis_vector(std::size_t j) const { return basis_.column(j); }

  /// Gram matrix of the restricted form in this basis.
  IntMatrix gram() const { return basis_.transposed() * ambient_.gram() * basis_; }
  Lattice as_lattice() const { return Lattice(gram()); }

  bool contains(const LatticeVector& v) const {
    if (v.size() != ambient_.rank()) throw InputError("contains: dimension mismatch");
    return span_contains(basis_, IntMatrix::from_columns({v}));
  }

  bool same_span(const Sublattice& other) const { return basis_ == other.basis_; }
  bool is_subset_of(const Sublattice& other) const {
    return span_contains(other.basis_, basis_);
  }

 private:
  Lattice ambient_;
  IntMatrix basis_;
  bool saturated_ = true;
};

inline void check_same_ambient(const Lattice& lattice, const Sublattice& s,
                               const char* what) {
  if (!(s.ambient() == lattice))
    throw InputError(std::string(what) + ": sublattice lives in a different lattice");
}

inline Sublattice saturate(const Lattice& lattice, const Sublattice& s) {
  check_same_ambient(lattice, s, "saturate");
  if (s.rank() == 0) return s;
  return Sublattice(lattice, saturation(s.basis()));
}

/// {x in L : (x, s) = 0 for all s in S}; always saturated.
inline Sublattice orthogonal_complement(const Lattice& lattice, const Sublattice& s) {
  check_same_ambient(lattice, s, "orthogonal_complement");
  if (s.rank() == 0) return Sublattice::full(lattice);
  const IntMatrix conditions = s.basis().transposed() * lattice.gram();
  const IntMatrix kernel = integer_kernel(conditions);
  if (kernel.cols() == 0) return Sublattice::zero(lattice);
  return Sublattice(lattice, kernel);
}

/// Sublattices A, B with A ∩ B = {0} (over Q, hence over Z).
inline bool intersect_trivially(const Sublattice& a, const Sublattice& b) {
  if (a.rank() == 0 || b.rank() == 0) return true;
  return rank(a.basis().beside(b.basis())) == a.rank() + b.rank();
}

// -- isometries -------------------------------------------------------------

/// First failed isometry condition, or nullopt when M is an isometry of L.
inline std::optional<std::string> isometry_violation(const Lattice& lattice,
                                                     const IntMatrix& m) {
  if (m.rows() != lattice.rank() || m.cols() != lattice.rank())
    throw InputError("isometry: matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", lattice rank is " +
                     std::to_string(lattice.rank()));
  const IntMatrix pulled = m.transposed() * lattice.gram() * m;
  for (std::size_t i = 0; i < lattice.rank(); ++i)
    for (std::size_t j = i; j < lattice.rank(); ++j)
      if (pulled(i, j) != lattice.gram()(i, j))
        return "(M^T G M)[" + std::to_string(i) + "][" + std::to_string(j) +
               "] = " + pulled(i, j).str() + ", expected " +
               lattice.gram()(i, j).str();
  const Integer det = determinant(m);
  if (det != 1 && det != -1) return "det(M) = " + det.str() + ", expected +1 or -1";
  return std::nullopt;
}

inline bool is_isometry(const Lattice& lattice, const IntMatrix& m) {
  return !isometry_violation(lattice, m).has_value();
}

/// Integral matrix M with Mᵀ G M = G and det M = ±1, acting on column vectors.
class Isometry {
 public:
  Isometry() = default;
  Isometry(Lattice ambient, IntMatrix matrix)
      : ambient_(std::move(ambient)), matrix_(std::move(matrix)) {
    if (auto why = isometry_violation(ambient_, matrix_))
      throw PreconditionError("not an isometry: " + *why);
  }

  static Isometry identity(Lattice ambient) {
    const std::size_t n = ambient.rank();
    return Isometry(std::move(ambient), IntMatrix::identity(n));
  }

  const Lattice& ambient() const { return ambient_; }
  const IntMatrix& matrix() const { return matrix_; }

  LatticeVector operator()(const LatticeVector& v) const { return matrix_ * v; }

  /// (this ∘ other)(x) = this(other(x)).
  Isometry operator*(const Isometry& other) const {
    if (!(ambient_ == other.ambient_))
      throw InputError("composing isometries of different lattices");
    Isometry out;
    out.ambient_ = ambient_;
    out.matrix_ = matrix_ * other.matrix_;
    return out;
  }

  friend bool operator==(const Isometry& a, const Isometry& b) {
    return a.ambient_ == b.ambient_ && a.matrix_ == b.matrix_;
  }

 private:
  Lattice ambient_;
  IntMatrix matrix_;
};

/// Reflection x ↦ x − (2(x,v)/q(v))·v.
inline Isometry reflection_isometry(const Lattice& lattice, const LatticeVector& v) {
  const Integer qv = norm(lattice, v);
  if (qv == 0) throw PreconditionError("reflection: q(v) = 0");
  const LatticeVector gv = lattice.gram() * v;  // (e_j, v) = (G v)_j
  const std::size_t n = lattice.rank();
  IntMatrix m = IntMatrix::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Integer twice = 2 * gv[j];
    if (twice % qv != 0)
      throw PreconditionError("reflection: q(v) = " + qv.str() +
                              " does not divide 2(e_" + std::to_string(j) +
                              ", v) = " + twice.str());
    const Integer c = twice / qv;
    for (std::size_t i = 0; i < n; ++i) m(i, j) -= c * v[i];
  }
  return Isometry(lattice, std::move(m));
}

}  // namespace hilblat
