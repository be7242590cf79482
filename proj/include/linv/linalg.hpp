#pragma once

// Dense linear algebra over Q and over p-adic fields.
//
// Matrices are plain Eigen containers.  Eigen's own decompositions assume an
// ordered real scalar, so elimination lives here: pivots are chosen by
// minimal valuation (p-adic) or first nonzero (rational), and every zero
// decision for a p-adic entry is made against a ceiling C.  An entry is
// treated as zero when its valuation is at least C, or when it is zero to at
// least C digits; a zero known to fewer than C digits is ambiguous and raises
// PrecisionError instead of guessing.

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

#include "linv/padic.hpp"

namespace Eigen {

template <>
struct NumTraits<linv::FieldElement> : GenericNumTraits<linv::FieldElement> {
  using Real = linv::FieldElement;
  using NonInteger = linv::FieldElement;
  using Literal = linv::FieldElement;
  using Nested = linv::FieldElement;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 50,
    MulCost = 200
  };
};

template <>
struct NumTraits<linv::Rational> : GenericNumTraits<linv::Rational> {
  using Real = linv::Rational;
  using NonInteger = linv::Rational;
  using Literal = linv::Rational;
  using Nested = linv::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 20,
    MulCost = 40
  };
};

}  // namespace Eigen

namespace linv {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using PMatrix = Mat<FieldElement>;
using PVector = Vec<FieldElement>;
using QMatrix = Mat<Rational>;
using QVector = Vec<Rational>;

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ZeroClass { NonZero, Zero, Ambiguous };

/// Use the default ceiling (half the working precision).
inline constexpr long kDefaultCeiling = -1;

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static ZeroClass classify(const Rational& x, long) {
    return x == 0 ? ZeroClass::Zero : ZeroClass::NonZero;
  }
  // Smaller is a better pivot; rationals take the first nonzero entry.
  static long pivot_key(const Rational&) { return 0; }
  static Rational zero_like(const Rational&, long) { return Rational(0); }
  static long default_ceiling(const QMatrix&) { return 0; }
  static bool is_exact_zero(const Rational& x) { return x == 0; }
  static void adopt_field(QMatrix&, const QMatrix&) {}
};

template <>
struct ScalarOps<FieldElement> {
  static ZeroClass classify(const FieldElement& x, long ceiling) {
    if (x.is_zero())
      return x.absolute_precision() >= ceiling ? ZeroClass::Zero : ZeroClass::Ambiguous;
    if (!x.is_typed()) return ZeroClass::NonZero;
    const long e = x.field()->ramification_index();
    return x.valuation_pi() >= ceiling * e ? ZeroClass::Zero : ZeroClass::NonZero;
  }
  static long pivot_key(const FieldElement& x) { return x.is_typed() ? x.valuation_pi() : 0; }
  /// A zero standing in for an entry classified as zero: known as far as x
  /// itself is (its precision, or its valuation when nonzero), and at least
  /// to `ceiling`.
  static FieldElement zero_like(const FieldElement& x, long ceiling) {
    if (!x.is_typed()) return FieldElement();
    const long known = x.is_zero() ? x.absolute_precision()
                                   : x.valuation_pi() / x.field()->ramification_index();
    return x.field()->zero().truncated(std::max(ceiling, known));
  }
  static long default_ceiling(const PMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
      if (m.data()[i].is_typed()) return std::max<long>(1, m.data()[i].field()->precision() / 2);
    return 1;
  }
  static bool is_exact_zero(const FieldElement& x) { return x.is_exact_zero(); }
  /// Untyped constants in m take the field of the first typed entry of like.
  static void adopt_field(PMatrix& m, const PMatrix& like) {
    FieldPtr k;
    for (Eigen::Index i = 0; i < like.size() && !k; ++i)
      if (like.data()[i].is_typed()) k = like.data()[i].field();
    if (!k) return;
    for (Eigen::Index i = 0; i < m.size(); ++i)
      if (!m.data()[i].is_typed()) m.data()[i] = m.data()[i].typed_like(k);
  }
};

namespace detail {

template <class S>
long resolve_ceiling(const Mat<S>& m, long ceiling) {
  return ceiling == kDefaultCeiling ? ScalarOps<S>::default_ceiling(m) : ceiling;
}

template <class S>
[[noreturn]] void ambiguous(Eigen::Index r, Eigen::Index c, long ceiling) {
  throw PrecisionError("ambiguous rank: cannot decide whether entry (" + std::to_string(r) + "," +
                           std::to_string(c) + ") vanishes at ceiling " +
                           std::to_string(ceiling) + "; raise the precision",
                       2 * ceiling);
}

}  // namespace detail

template <class S>
struct Echelon {
  Mat<S> reduced;            // reduced row echelon form
  std::vector<int> pivots;   // pivot column of each nonzero row
  long ceiling = 0;
};

/// Gauss-Jordan elimination.  Rows below the rank are zero.
template <class S>
Echelon<S> row_reduce(Mat<S> m, long ceiling = kDefaultCeiling) {
  using Ops = ScalarOps<S>;
  ceiling = detail::resolve_ceiling(m, ceiling);
  Ops::adopt_field(m, m);
  Echelon<S> out;
  out.ceiling = ceiling;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = -1;
    long best = 0;
    for (Eigen::Index i = r; i < rows; ++i) {
      switch (Ops::classify(m(i, c), ceiling)) {
        case ZeroClass::Ambiguous:
          detail::ambiguous<S>(i, c, ceiling);
        case ZeroClass::Zero:
          if (!Ops::is_exact_zero(m(i, c))) m(i, c) = Ops::zero_like(m(i, c), ceiling);
          break;
        case ZeroClass::NonZero: {
          const long k = Ops::pivot_key(m(i, c));
          if (piv < 0 || k < best) {
            piv = i;
            best = k;
          }
          break;
        }
      }
    }
    if (piv < 0) continue;
    if (piv != r) m.row(piv).swap(m.row(r));
    const S inv = S(1) / m(r, c);
    for (Eigen::Index j = c; j < cols; ++j)
      if (!Ops::is_exact_zero(m(r, j))) m(r, j) = m(r, j) * inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || Ops::is_exact_zero(m(i, c))) continue;
      const S factor = m(i, c);
      for (Eigen::Index j = c; j < cols; ++j)
        if (!Ops::is_exact_zero(m(r, j))) m(i, j) = m(i, j) - factor * m(r, j);
      m(i, c) = S(0);
    }
    out.pivots.push_back(static_cast<int>(c));
    ++r;
  }
  // Clean entries that are numerically zero so later passes see them as such.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!Ops::is_exact_zero(m(i, j)) && Ops::classify(m(i, j), ceiling) == ZeroClass::Zero)
        m(i, j) = Ops::zero_like(m(i, j), ceiling);
  out.reduced = std::move(m);
  return out;
}

template <class S>
int rank(const Mat<S>& m, long ceiling = kDefaultCeiling) {
  return static_cast<int>(row_reduce(m, ceiling).pivots.size());
}

/// Columns form a basis of the right kernel {x : m x = 0}.
template <class S>
Mat<S> kernel_basis(const Mat<S>& m, long ceiling = kDefaultCeiling) {
  const auto ech = row_reduce(m, ceiling);
  const Eigen::Index cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (int c : ech.pivots) is_pivot[c] = true;
  std::vector<Eigen::Index> free;
  for (Eigen::Index c = 0; c < cols; ++c)
    if (!is_pivot[c]) free.push_back(c);
  Mat<S> k(cols, static_cast<Eigen::Index>(free.size()));
  for (Eigen::Index i = 0; i < k.size(); ++i) k.data()[i] = S(0);
  for (std::size_t t = 0; t < free.size(); ++t) {
    const Eigen::Index fc = free[t];
    k(fc, t) = S(1);
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) k(ech.pivots[r], t) = -ech.reduced(r, fc);
  }
  ScalarOps<S>::adopt_field(k, m);
  return k;
}

/// Determinant by elimination.  A column that is numerically zero gives a
/// zero known to (valuation of the pivots so far) + ceiling.
template <class S>
S determinant(Mat<S> m, long ceiling = kDefaultCeiling) {
  using Ops = ScalarOps<S>;
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  ceiling = detail::resolve_ceiling(m, ceiling);
  const Eigen::Index n = m.rows();
  S det = S(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    long best = 0;
    S zero_witness = S(0);
    for (Eigen::Index i = c; i < n; ++i) {
      switch (Ops::classify(m(i, c), ceiling)) {
        case ZeroClass::Ambiguous:
          detail::ambiguous<S>(i, c, ceiling);
        case ZeroClass::Zero:
          if (!Ops::is_exact_zero(m(i, c))) zero_witness = m(i, c);
          break;
        case ZeroClass::NonZero: {
          const long k = Ops::pivot_key(m(i, c));
          if (piv < 0 || k < best) {
            piv = i;
            best = k;
          }
          break;
        }
      }
    }
    if (piv < 0) {
      if (Ops::is_exact_zero(zero_witness)) {
        // Every entry is an exact zero.
        for (Eigen::Index i = 0; i < m.size(); ++i)
          if (!Ops::is_exact_zero(m.data()[i])) return det * Ops::zero_like(m.data()[i], ceiling);
        return det * S(0);
      }
      return det * Ops::zero_like(zero_witness, ceiling);
    }
    if (piv != c) {
      m.row(piv).swap(m.row(c));
      det = -det;
    }
    det = det * m(c, c);
    const S inv = S(1) / m(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (Ops::is_exact_zero(m(i, c))) continue;
      const S factor = m(i, c) * inv;
      for (Eigen::Index j = c + 1; j < n; ++j)
        if (!Ops::is_exact_zero(m(c, j))) m(i, j) = m(i, j) - factor * m(c, j);
      m(i, c) = S(0);
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan; throws SingularMatrix.
template <class S>
Mat<S> inverse(const Mat<S>& m, long ceiling = kDefaultCeiling) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const Eigen::Index n = m.rows();
  Mat<S> aug(n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      aug(i, j) = m(i, j);
      aug(i, n + j) = S(i == j ? 1 : 0);
    }
  ceiling = detail::resolve_ceiling(m, ceiling);
  auto ech = row_reduce(std::move(aug), ceiling);
  if (static_cast<Eigen::Index>(ech.pivots.size()) < n || ech.pivots[n - 1] != n - 1)
    throw SingularMatrix("matrix is singular");
  return ech.reduced.rightCols(n);
}

/// Solves m x = b for square nonsingular m.
template <class S>
Mat<S> solve(const Mat<S>& m, const Mat<S>& b, long ceiling = kDefaultCeiling) {
  const Mat<S> inv = inverse(m, ceiling);
  return inv * b;
}

/// Indices of columns of `candidates` chosen greedily (in order) to extend
/// the column space of `base` to a space of dimension `target_dim` (or as
/// far as possible when target_dim < 0).
template <class S>
std::vector<int> complete_basis_indices(const Mat<S>& base, const Mat<S>& candidates,
                                        int target_dim = -1, long ceiling = kDefaultCeiling) {
  Mat<S> cur = base;
  int r = cur.cols() == 0 ? 0 : rank(cur, ceiling);
  if (r < cur.cols()) throw std::invalid_argument("complete_basis: input vectors are dependent");
  std::vector<int> chosen;
  for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
    if (target_dim >= 0 && r >= target_dim) break;
    Mat<S> trial(candidates.rows(), cur.cols() + 1);
    if (cur.cols() > 0) trial.leftCols(cur.cols()) = cur;
    trial.col(cur.cols()) = candidates.col(c);
    const int rt = rank(trial, ceiling);
    if (rt > r) {
      cur = std::move(trial);
      r = rt;
      chosen.push_back(static_cast<int>(c));
    }
  }
  return chosen;
}

/// [base | chosen candidates].
template <class S>
Mat<S> complete_basis(const Mat<S>& base, const Mat<S>& candidates, int target_dim = -1,
                      long ceiling = kDefaultCeiling) {
  const auto idx = complete_basis_indices(base, candidates, target_dim, ceiling);
  Mat<S> out(base.rows(), base.cols() + static_cast<Eigen::Index>(idx.size()));
  if (base.cols() > 0) out.leftCols(base.cols()) = base;
  for (std::size_t t = 0; t < idx.size(); ++t) out.col(base.cols() + t) = candidates.col(idx[t]);
  return out;
}

/// Completion of `base` to the whole space by standard basis vectors.
template <class S>
Mat<S> complete_basis(const Mat<S>& base, long ceiling = kDefaultCeiling) {
  Mat<S> id(base.rows(), base.rows());
  for (Eigen::Index i = 0; i < id.rows(); ++i)
    for (Eigen::Index j = 0; j < id.cols(); ++j) id(i, j) = S(i == j ? 1 : 0);
  return complete_basis(base, id, static_cast<int>(base.rows()), ceiling);
}

/// A maximal set of independent columns, kept in order.
template <class S>
Mat<S> column_basis(const Mat<S>& m, long ceiling = kDefaultCeiling) {
  return complete_basis(Mat<S>(m.rows(), 0), m, -1, ceiling);
}

/// Basis of the intersection of the column spaces of a and b.
template <class S>
Mat<S> intersect(const Mat<S>& a, const Mat<S>& b, long ceiling = kDefaultCeiling) {
  Mat<S> joint(a.rows(), a.cols() + b.cols());
  joint.leftCols(a.cols()) = a;
  joint.rightCols(b.cols()) = -b;
  const Mat<S> k = kernel_basis(joint, ceiling);
  const Mat<S> ka = k.topRows(a.cols());
  const Mat<S> v = a * ka;
  return column_basis(v, ceiling);
}

/// Identity of size n.
template <class S>
Mat<S> identity(Eigen::Index n) {
  Mat<S> id(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) id(i, j) = S(i == j ? 1 : 0);
  return id;
}

/// Entrywise image of a rational matrix in a p-adic field.
inline PMatrix to_field(const QMatrix& m, const FieldPtr& k) {
  PMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = k->from_rational(m(i, j));
  return out;
}

}  // namespace linv
