#pragma once

// Synthetic Galois problems.  Groups come from a small catalog of rational
// representations; unit modules are the standard models
//   U_H ~ augmentation kernel of Q[G/<tau>],   U_H^(p)/U_H ~ Q[G/G_p],
// with random Frobenius-compatible logs.  Digits are drawn from a seeded
// stream whose output does not depend on the working precision, so a
// fixture at precision 80 extends the same fixture at precision 40.

#include <cstdint>
#include <random>

#include "linv/special.hpp"

namespace linv {

struct CatalogGroup {
  std::string name;
  FiniteGroup table;  // mult and inverse only
  std::vector<std::string> irrep_names;
  std::vector<std::vector<QMatrix>> irreps;  // irreps[k][g], none trivial
};

const std::vector<CatalogGroup>& group_catalog();
const CatalogGroup& catalog_group(const std::string& name);

/// Seeded p-adic digits; every draw consumes a fixed number of digits.
class DigitSource {
 public:
  static constexpr long kDigits = 256;
  DigitSource(std::uint64_t seed, long p) : rng_(seed), p_(p) {}
  /// p^shift times a random integral element with unit leading coordinate.
  FieldElement element(const FieldPtr& k, long shift);
  std::mt19937_64& rng() { return rng_; }

 private:
  Integer draw_integer();
  std::mt19937_64 rng_;
  long p_;
};

struct SyntheticSpec {
  std::string group;
  std::vector<int> irreps;  // indices into the catalog entry, W is their sum
  int tau = 0;
  int frob = 0;
  long p = 0;
  long precision = 40;
  std::uint64_t seed = 0;
};

/// Random valid spec with d <= max_dim; p avoids |G| and splits the
/// Frobenius eigenvalues.
SyntheticSpec random_spec(std::mt19937_64& rng, long precision, int max_dim = 4);

/// Fixture JSON (logs only, no refinements).
nlohmann::json synthetic_fixture(const SyntheticSpec& spec);

/// Random G_p-stable refinement with e <= max_e, or nullopt when none
/// exists.  With want_singular, tries to put a vector of W° into W+.
std::optional<Refinement> random_refinement(const Analysis& an, std::mt19937_64& rng, int max_e,
                                            bool want_singular = false);

/// Random changes of all bases that respect the filtration: W+ keeps
/// W+ ∩ W_1 first, W1_minus moves by W1_plus, kappa' moves by kappa.
NotationBases random_rebase(const NotationBases& b, int dim_w1_plus, const FieldPtr& k,
                            std::mt19937_64& rng);

/// Q(i), p = 5: odd quadratic character, p-units 2 - i and 2 + i given by
/// their images under i -> teichmuller(2).
nlohmann::json qi_fixture(long precision);

/// Odd character of order 2 of a quadratic field, p split (minimal case).
nlohmann::json c2_split_fixture(long precision, std::uint64_t seed);

/// S3, W = Ind psi in the dihedral basis, p = 7 split completely; carries
/// the family e1 + s e2 and the CM scalars.
nlohmann::json cm_fixture(long precision, std::uint64_t seed);

/// S3, W = eps_K (+) Ind phi in the basis (w1, w2, w3), p = 7 split
/// completely; carries the family t w1 + w2 + s w3 and the adjoint scalars.
nlohmann::json adjoint_cm_fixture(long precision, std::uint64_t seed);

/// S3 standard representation, Frobenius a reflection (eigenvalues 1, -1),
/// refinement the (-1)-line: the p-regular weight-one case with e = 1.
nlohmann::json weight1_regular_fixture(long precision, std::uint64_t seed);

/// Frobenius eigenvectors of the weight-one fixture: (w_alpha, w_beta).
std::pair<PVector, PVector> weight1_eigenvectors(const GaloisProblem& prob);

}  // namespace linv
