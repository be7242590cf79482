#pragma once

// Input data model and JSON ingestion.  Loading is validation: every
// structural invariant is checked and failures are itemized.

#include "json.hpp"

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linv/galois.hpp"

namespace linv {

/// A point of the projective line: a field element or infinity.
struct ProjectiveParam {
  FieldElement value;
  bool infinite = false;

  static ProjectiveParam at(FieldElement v) { return {std::move(v), false}; }
  static ProjectiveParam infinity() { return {FieldElement(), true}; }
  std::string to_string() const { return infinite ? "inf" : value.to_string(); }
};

struct UnitModule {
  int rank_units = 0;  // r: basis u_1..u_r of global units
  int rank_total = 0;  // R: basis of p-units extends the unit basis
  QRep action;         // R x R rational matrices, columns are images
  std::vector<long> ord_p;
  std::vector<FieldElement> embeddings;  // in E, empty if logs were given
  std::vector<FieldElement> logs;        // in the coefficient field K
  bool has_embeddings() const { return !embeddings.empty(); }
};

struct Refinement {
  std::string name;
  PMatrix basis;  // d x d+, columns span W+
  bool motivic = false;
  std::optional<ProjectiveParam> s;
  std::optional<FieldElement> t;
};

/// A one-parameter (or two-parameter) family of lines
///   W+_{s,t} = span(base + s * s_direction + t * t_direction),
///   W+_{inf,t} = span(s_direction + t * t_direction).
struct RefinementFamily {
  PVector base;
  PVector s_direction;
  std::optional<PVector> t_direction;
};

struct CMSpecial {
  FieldElement slope, slope_bar, l_psi, l_psi_bar;
};

struct AdjointCMSpecial {
  FieldElement L_p, l_phi, l_phi_bar, slope_phi, slope_phi_bar;
};

struct GaloisProblem {
  long p = 0;
  long precision = 0;
  FieldPtr field_E;
  FieldPtr coeff_field;
  std::shared_ptr<const FiniteGroup> group;
  PRep W;
  bool W_motivic = false;
  UnitModule units;
  std::vector<Refinement> refinements;
  std::optional<RefinementFamily> family;
  std::optional<CMSpecial> cm;
  std::optional<AdjointCMSpecial> adjoint_cm;
  std::optional<std::string> H_polynomial;

  int dim() const { return W.dim; }
  const Refinement& refinement(const std::string& name) const;
  /// Unit module restricted to the global units (first r coordinates).
  PRep unit_rep() const;
  /// The full p-unit module over the coefficient field.
  PRep punit_rep() const;
  /// Member of the family at (s, t); t defaults to 0.
  Refinement family_member(const ProjectiveParam& s,
                           const std::optional<FieldElement>& t = std::nullopt) const;
};

/// Schema or invariant violation; what() joins the itemized failures.
class LoadError : public std::runtime_error {
 public:
  explicit LoadError(std::vector<std::string> failures);
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

struct LoadOptions {
  std::optional<long> precision_override;
};

GaloisProblem load_fixture(const nlohmann::json& j, const LoadOptions& opts = {});
GaloisProblem load_fixture(std::istream& in, const LoadOptions& opts = {});
GaloisProblem load_fixture_file(const std::string& path, const LoadOptions& opts = {});

nlohmann::json serialize(const GaloisProblem& prob);

/// Element encoding: {"shift", "prec", "coeffs"}; exact coordinates may be
/// plain integers, inexact ones are little-endian base-p digit lists.
nlohmann::json element_to_json(const FieldElement& x);
FieldElement element_from_json(const nlohmann::json& j, const FieldPtr& k);
nlohmann::json vector_to_json(const PVector& v);
nlohmann::json matrix_to_json(const PMatrix& m);
nlohmann::json rational_to_json(const Rational& q);

/// Hom-space dimensions, rank accounting, ord/embedding consistency.
Report validate_arithmetic(const GaloisProblem& prob);

/// Resolves a fixture name against LINV_FIXTURE_DIR when it is not a path
/// to an existing file.
std::string resolve_fixture_path(const std::string& name);

}  // namespace linv
