#pragma once

// L-invariants of a refinement W+ of an Artin representation W, computed
// from unit data by a block determinant and, independently, by a Schur
// complement.
//
// A homomorphism kappa in Hom_G(W, U) is an R x d matrix X.  For w in W,
//   log kappa(w) = logs^T X w   and   ord kappa(w) = ord^T X w,
// so each kappa is carried around as a pair of row vectors (log row, ord row).

#include <optional>
#include <string>
#include <vector>

#include "linv/fixtures.hpp"

namespace linv {

/// Homomorphisms W -> U, stored by their log and ord rows (one row each).
struct KappaSet {
  std::vector<PMatrix> X;  // R x d matrices (may be empty for derived sets)
  PMatrix log_rows;        // k x d
  PMatrix ord_rows;        // k x d
  int size() const { return static_cast<int>(log_rows.rows()); }
};

/// Everything about a problem that does not depend on the refinement.
struct Analysis {
  const GaloisProblem* prob = nullptr;
  long ceiling = 0;
  int d = 0;
  int dplus = 0;
  int f = 0;                // dim W_1 = dim W^{G_p}
  PMatrix W1;               // d x f, Frobenius-fixed subspace
  KappaSet units;           // basis of Hom_G(W, U_H), size d+
  KappaSet punits;          // basis of Hom_G(W, U_H^(p)) starting with `units`
  PMatrix W_circle;         // d x dim, common kernel of the unit logs
  bool leopoldt = false;    // dim W_circle == d - d+
};

Analysis analyze(const GaloisProblem& prob, long ceiling = kDefaultCeiling);

PMatrix w_circle(const GaloisProblem& prob);

/// det(log kappa_j(w+_i)) in the refinement's own basis; 1 when d+ = 0.
FieldElement regulator(const Analysis& an, const Refinement& ref);
FieldElement regulator(const GaloisProblem& prob, const Refinement& ref);

struct RegularityVerdict {
  bool regular = false;
  std::string reason;
  FieldElement reg;             // Reg_p(W, W+)
  bool reg_nonzero = false;     // first criterion
  bool direct_sum = false;      // second criterion: W = W+ (+) W_circle
  int dim_w_circle = 0;
  int rank_sum = 0;             // rank [W+ | W_circle]
};

RegularityVerdict is_regular(const Analysis& an, const Refinement& ref);
RegularityVerdict is_regular(const GaloisProblem& prob, const Refinement& ref);

struct ExtraZeros {
  int e = 0;
  PMatrix W1_plus;       // basis of W+ ∩ W_1
  PMatrix W1_minus;      // e vectors completing W1_plus to W_1
  PMatrix Wm1_minus;     // lifts completing W+ (+) W1_minus to W
};

ExtraZeros extra_zero_order(const Analysis& an, const Refinement& ref);

/// The bases fixed in the construction of A+-, B+-, O-.
struct NotationBases {
  PMatrix w_plus;    // d x d+, first (f - e) columns span W+ ∩ W_1
  PMatrix w_minus;   // d x e, completes W+ ∩ W_1 to W_1
  KappaSet kappas;   // basis of Hom_G(W, U_H)
  KappaSet kappa_primes;  // e elements completing kappas inside the ord-kernel
  nlohmann::json audit;
};

class SingularRefinement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel of kappa -> (ord kappa restricted to W+ ∩ W_1), complement of the
/// units part.  `attempt` rotates the candidate order.
KappaSet kappa_prime_basis(const Analysis& an, const ExtraZeros& ez, int attempt = 0,
                           nlohmann::json* audit = nullptr);

/// Deterministic bases; retries the kappa' completion while O- is singular.
NotationBases default_bases(const Analysis& an, const Refinement& ref);

struct LMatrices {
  int e = 0;
  PMatrix A_plus, A_minus, B_plus, B_minus, O_minus;
};

LMatrices assemble_matrices(const NotationBases& bases);

struct LValues {
  FieldElement block;
  FieldElement schur;
  long certified_precision = 0;
};

/// (-1)^e det[[A+, B+], [A-, B-]] / (det A+ det O-) and
/// (-1)^e det(B- - A- A+^-1 B+) / det O-.
LValues l_invariant_from_matrices(const LMatrices& m, long ceiling = kDefaultCeiling);

struct LInvariantReport {
  std::string refinement;
  RegularityVerdict verdict;
  int e = 0;
  LMatrices matrices;
  FieldElement value_block;
  FieldElement value_schur;
  long certified_precision = 0;
  nlohmann::json basis_audit;

  bool singular() const { return !verdict.regular; }
  const FieldElement& value() const { return value_block; }
};

/// Structured result; a singular refinement is reported, not thrown.
LInvariantReport l_invariant(const Analysis& an, const Refinement& ref);
LInvariantReport l_invariant(const GaloisProblem& prob, const Refinement& ref);

/// (-1)^e det(Jf Jc^-1).
FieldElement dual_l_invariant(const PMatrix& Jf, const PMatrix& Jc);

nlohmann::json report_to_json(const LInvariantReport& r);

}  // namespace linv
