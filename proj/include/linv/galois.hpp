#pragma once

// Finite groups as multiplication tables, matrix representations,
// fixed subspaces, equivariant Hom spaces and group-algebra idempotents.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linv/linalg.hpp"

namespace linv {

struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> mult;  // mult[a][b] = index of a*b; identity is 0
  std::vector<int> inverse;
  std::vector<int> Gp;                 // decomposition group, as listed in the input
  int frobenius = 0;
  int conjugation = 0;

  int mul(int a, int b) const { return mult[a][b]; }
  int inv(int a) const { return inverse[a]; }
  int element_order(int a) const;
  /// a, a^2, ..., identity.
  std::vector<int> cyclic_subgroup(int a) const;
  /// Smallest subgroup containing the given elements.
  std::vector<int> generated_subgroup(const std::vector<int>& gens) const;
  /// A small generating set chosen greedily by index.
  std::vector<int> generators() const;
  /// The index [G : G_p].
  int gp_index() const { return order / static_cast<int>(Gp.size()); }
};

struct Report {
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty(); }
};

/// Checks the group law exhaustively, G_p = <frobenius> and conjugation^2 = 1.
/// Fills group.inverse when the table is a group.
Report validate_group(FiniteGroup& group);

template <class S>
struct Representation {
  std::shared_ptr<const FiniteGroup> group;
  int dim = 0;
  std::vector<Mat<S>> matrices;  // one per group element
  std::string name;

  const Mat<S>& operator()(int g) const { return matrices[g]; }
  S character(int g) const {
    S t = S(0);
    for (int i = 0; i < dim; ++i) t = t + matrices[g](i, i);
    return t;
  }
};

using PRep = Representation<FieldElement>;
using QRep = Representation<Rational>;

namespace detail {

template <class S>
bool matrices_equal(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if constexpr (std::is_same_v<S, FieldElement>) {
      if (!a.data()[i].agrees_with(b.data()[i])) return false;
    } else {
      if (a.data()[i] != b.data()[i]) return false;
    }
  }
  return true;
}

}  // namespace detail

/// First pair (g, h) with rho(g) rho(h) != rho(gh), or nullopt.  Also checks
/// rho(1) = 1 (reported as (0, 0)).
template <class S>
std::optional<std::pair<int, int>> homomorphism_failure(const Representation<S>& rep) {
  const auto& g = *rep.group;
  if (!detail::matrices_equal<S>(rep(0), identity<S>(rep.dim))) return std::make_pair(0, 0);
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b) {
      const Mat<S> prod = rep(a) * rep(b);
      if (!detail::matrices_equal<S>(prod, rep(g.mul(a, b)))) return std::make_pair(a, b);
    }
  return std::nullopt;
}

/// Basis (columns) of the common fixed space of rep(g), g in elements.
template <class S>
Mat<S> fixed_subspace(const Representation<S>& rep, const std::vector<int>& elements,
                      long ceiling = kDefaultCeiling) {
  if (elements.empty()) throw std::invalid_argument("fixed_subspace: no elements");
  const int d = rep.dim;
  Mat<S> stacked(d * static_cast<Eigen::Index>(elements.size()), d);
  const Mat<S> id = identity<S>(d);
  for (std::size_t t = 0; t < elements.size(); ++t)
    stacked.block(static_cast<Eigen::Index>(t) * d, 0, d, d) = rep(elements[t]) - id;
  return kernel_basis(stacked, ceiling);
}

/// d+ = dim of the +1 eigenspace of complex conjugation.
template <class S>
int plus_dimension(const Representation<S>& rep, long ceiling = kDefaultCeiling) {
  return static_cast<int>(fixed_subspace(rep, {rep.group->conjugation}, ceiling).cols());
}

/// Basis of Hom_G(W, U) = {X : U(g) X = X W(g)}, solved over generators.
template <class S>
std::vector<Mat<S>> equivariant_homs(const Representation<S>& w, const Representation<S>& u,
                                     long ceiling = kDefaultCeiling) {
  const int d = w.dim, r = u.dim;
  const auto gens = w.group->generators();
  const Eigen::Index unknowns = static_cast<Eigen::Index>(r) * d;
  Mat<S> sys(static_cast<Eigen::Index>(gens.size()) * unknowns, unknowns);
  for (Eigen::Index i = 0; i < sys.size(); ++i) sys.data()[i] = S(0);
  // X(i, j) is unknown i + r * j.
  for (std::size_t t = 0; t < gens.size(); ++t) {
    const Mat<S>& a = u(gens[t]);
    const Mat<S>& b = w(gens[t]);
    const Eigen::Index base = static_cast<Eigen::Index>(t) * unknowns;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < d; ++j) {
        const Eigen::Index row = base + i + static_cast<Eigen::Index>(r) * j;
        for (int k = 0; k < r; ++k) sys(row, k + r * j) = sys(row, k + r * j) + a(i, k);
        for (int k = 0; k < d; ++k) sys(row, i + r * k) = sys(row, i + r * k) - b(k, j);
      }
  }
  if (unknowns == 0) return {};
  const Mat<S> ker = kernel_basis(sys, ceiling);
  std::vector<Mat<S>> out;
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    Mat<S> x(r, d);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < d; ++j) x(i, j) = ker(i + r * j, c);
    out.push_back(std::move(x));
  }
  return out;
}

/// Entrywise image of a rational representation in a p-adic field.
inline PRep to_field(const QRep& rep, const FieldPtr& k) {
  PRep out{rep.group, rep.dim, {}, rep.name};
  for (const auto& m : rep.matrices) out.matrices.push_back(to_field(m, k));
  return out;
}

enum class IdempotentKind { Isotypic, WPlus, WOne };

/// Group-algebra element acting on the unit module, as a matrix.
///   Isotypic: (dim rho / |G|) sum_g chi_rho(g^-1) g
///   WPlus:    sum_i beta^-i Frob^i
///   WOne:     sum_i Frob^i
/// with i running over 0 .. |G_p| - 1.
PMatrix idempotent_matrix(IdempotentKind kind, const PRep& units, const PRep* rho = nullptr,
                          const FieldElement* beta = nullptr);

PVector apply_idempotent(IdempotentKind kind, const PRep& units, const PVector& u,
                         const PRep* rho = nullptr, const FieldElement* beta = nullptr);

}  // namespace linv
