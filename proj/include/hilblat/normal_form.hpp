#pragma once

#include <cstddef>
#include <utility>

#include "hilblat/arith.hpp"
#include "hilblat/matrix.hpp"

namespace hilblat {

struct HermiteResult {
  IntMatrix form;       // U * A, zero rows at the bottom
  IntMatrix transform;  // unimodular U
  std::size_t rank = 0;
};

/// Row-style Hermite normal form with transformation matrix.
///
/// The nonzero rows of `form` are in echelon shape with positive pivots and
/// every entry above a pivot reduced into [0, pivot). The nonzero rows are
/// therefore a canonical basis of the row lattice of A.
inline HermiteResult hermite_form(const IntMatrix& a) {
  HermiteResult r{a, IntMatrix::identity(a.rows()), 0};
  IntMatrix& h = r.form;
  IntMatrix& u = r.transform;
  const std::size_t m = h.rows();
  auto add_row = [&](std::size_t dst, std::size_t src, const Integer& f) {
    h.add_row_multiple(dst, src, f);
    u.add_row_multiple(dst, src, f);
  };
  auto swap_row = [&](std::size_t a_, std::size_t b_) {
    h.swap_rows(a_, b_);
    u.swap_rows(a_, b_);
  };

  std::size_t row = 0;
  for (std::size_t col = 0; col < h.cols() && row < m; ++col) {
    // Euclid on the column: repeatedly move the smallest nonzero entry up.
    while (true) {
      std::size_t best = m;
      for (std::size_t i = row; i < m; ++i) {
        if (h(i, col) == 0) continue;
        if (best == m || abs(h(i, col)) < abs(h(best, col))) best = i;
      }
      if (best == m) break;
      swap_row(row, best);
      bool done = true;
      for (std::size_t i = row + 1; i < m; ++i) {
        if (h(i, col) == 0) continue;
        add_row(i, row, -floor_div(h(i, col), h(row, col)));
        if (h(i, col) != 0) done = false;
      }
      if (done) break;
    }
    if (h(row, col) == 0) continue;
    if (h(row, col) < 0) {
      for (std::size_t j = 0; j < h.cols(); ++j) h(row, j) = -h(row, j);
      for (std::size_t j = 0; j < u.cols(); ++j) u(row, j) = -u(row, j);
    }
    for (std::size_t i = 0; i < row; ++i)
      add_row(i, row, -floor_div(h(i, col), h(row, col)));
    ++row;
  }
  r.rank = row;
  return r;
}

/// Canonical basis (as columns) of the lattice spanned by the columns of B.
///
/// Columns of the result are the transposed nonzero rows of the row HNF of
/// Bᵀ, so two generating sets of the same lattice give bit-equal output.
inline IntMatrix canonical_basis(const IntMatrix& columns) {
  const HermiteResult r = hermite_form(columns.transposed());
  return r.form.block(0, 0, r.rank, columns.rows()).transposed();
}

/// Basis (as columns, canonical form) of {x in Z^n : M x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& m) {
  const HermiteResult r = hermite_form(m.transposed());
  const std::size_t n = m.cols();
  IntMatrix kernel_rows = r.transform.block(r.rank, 0, n - r.rank, n);
  return canonical_basis(kernel_rows.transposed());
}

/// Columns spanning (Q-span of B) ∩ Z^n, in canonical form.
inline IntMatrix saturation(const IntMatrix& columns) {
  const IntMatrix orthogonal = integer_kernel(columns.transposed());
  if (orthogonal.cols() == 0) return IntMatrix::identity(columns.rows());
  return integer_kernel(orthogonal.transposed());
}

namespace detail {
inline Integer pivot_product(const IntMatrix& canonical_columns) {
  // HNF pivots are the leading nonzero entry of each canonical column.
  Integer product = 1;
  for (std::size_t j = 0; j < canonical_columns.cols(); ++j) {
    std::size_t i = 0;
    while (canonical_columns(i, j) == 0) ++i;
    product *= canonical_columns(i, j);
  }
  return product;
}
}  // namespace detail

/// Index of the lattice spanned by B inside its saturation.
inline Integer saturation_index(const IntMatrix& columns) {
  const IntMatrix basis = canonical_basis(columns);
  return detail::pivot_product(basis) / detail::pivot_product(saturation(basis));
}

inline bool spans_equal(const IntMatrix& a, const IntMatrix& b) {
  return canonical_basis(a) == canonical_basis(b);
}

/// Whether the lattice spanned by the columns of `outer` contains every
/// column of `inner`.
inline bool span_contains(const IntMatrix& outer, const IntMatrix& inner) {
  if (inner.cols() == 0) return true;
  return canonical_basis(outer.beside(inner)) == canonical_basis(outer);
}

}  // namespace hilblat
