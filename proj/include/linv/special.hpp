#pragma once

// Closed-form L-invariants: Gross' regulator for totally odd W, the CM
// weight-one formulas, the adjoint CM formula and the 2x2 weight-one
// expressions.  Each is independent of the engine's general bases.

#include "linv/engine.hpp"

namespace linv {

/// R_p(W*) = det(log o ord^-1) on Hom(W_1, Q_p), from the full p-unit Hom
/// basis evaluated on a basis of W_1.  Requires d+ = 0.
FieldElement gross_regulator(const Analysis& an);
FieldElement gross_regulator(const GaloisProblem& prob);

/// S = -log(eps) / log(tau eps).
FieldElement cm_slope(const FieldElement& log_eps, const FieldElement& log_tau_eps);

/// -(log tau(u) + S_bar log u) / ord tau(u).
FieldElement cm_char_l_invariant(const FieldElement& log_tau_u, const FieldElement& log_u,
                                 const FieldElement& slope_bar, const FieldElement& ord_tau_u);

/// Logs and ords of eps_psi, u_psi and their tau-images.
struct CMUnitData {
  FieldElement log_eps, log_tau_eps;
  FieldElement log_u, log_tau_u;
  FieldElement ord_tau_u;
};

struct CMCharRoutes {
  FieldElement explicit_form;    // via S_bar
  FieldElement normalized_form;  // via u° = u (x) log eps - eps (x) log u
};

/// Both routes for L(psi); throws std::logic_error if they disagree.
CMCharRoutes cm_char_l_invariant(const CMUnitData& d);

enum class CMCase { Regular, Irregular };

/// Irregular: (s L(psi_bar) - S L(psi)) / (s - S), L(psi_bar) at s = inf.
/// Regular: L(psi) at s = 0, L(psi_bar) at s = inf; other s are singular.
FieldElement cm_line_l_invariant(const ProjectiveParam& s, const CMSpecial& data,
                                 CMCase kind = CMCase::Irregular);

struct AdjointCMMatrices {
  PMatrix Jf, Jc;  // 2 x 2, columns kappa_Theta, kappa_F
};

/// The evaluated cocycle matrices on the line W+_{s,t}; at s = inf the
/// second row of both is divided by -s.
AdjointCMMatrices adjoint_cm_matrices(const ProjectiveParam& s, const FieldElement& t,
                                      const AdjointCMSpecial& data);

/// 2 L_p (S L(phi) - s L(phi_bar)) / (S - s); 2 L_p L(phi_bar) at s = inf.
FieldElement adjoint_cm_l_invariant(const ProjectiveParam& s, const FieldElement& t,
                                    const AdjointCMSpecial& data);

/// L(phi) - 2 L_p and L(phi_bar) - 2 L_p.
std::pair<FieldElement, FieldElement> anticyclotomic(const AdjointCMSpecial& data);

/// L-(phi) L-(phi_bar) (L-(phi) + L-(phi_bar)) != 0.
bool adjoint_cm_generic(const AdjointCMSpecial& data);

/// Closed form on the non-CM family lines:
/// 2 L_p (L-(phi_bar) L(phi) + L-(phi) L(phi_bar)) / (L-(phi_bar) + L-(phi)).
FieldElement adjoint_cm_family_value(const AdjointCMSpecial& data);

/// xi with xi^2 = L-(phi_bar) L-(phi)^-1 S_phi_bar, when it exists in the
/// coefficient field.
std::optional<FieldElement> adjoint_cm_xi(const AdjointCMSpecial& data);

/// Scalars of a CM-type pair e1, e2 = tau(e1), read off the unit data.  Only
/// homs whose unit-module matrix kills the columns of vanish_on are used.
/// Needs d+ = 1; the line u° (log and ord vanishing at e1) must be unique.
CMSpecial cm_data_from_units(const Analysis& an, const PVector& e1, const PVector& e2,
                             const PMatrix& vanish_on);
/// eps_psi = kappa(e1) and a non-unit u_psi with ord u_psi = 0.
CMUnitData cm_unit_data(const Analysis& an, const PVector& e1, const PVector& e2,
                        const PMatrix& vanish_on);

/// For W = eps_K (+) Ind phi in the basis (w1, w2, w3 = tau w2).
AdjointCMSpecial adjoint_cm_data_from_units(const Analysis& an);

/// (log eps_a log u_b - log eps_b log u_a) / (log eps_b ord u_a).  The
/// irregular case reads a = -, b = +.
FieldElement weight1_l_invariant(CMCase kind, const FieldElement& log_eps_a,
                                 const FieldElement& log_eps_b, const FieldElement& log_u_a,
                                 const FieldElement& log_u_b, const FieldElement& ord_u_a);

}  // namespace linv
