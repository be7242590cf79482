#include "linv/special.hpp"

namespace linv {

namespace {

long ceiling_of(const FieldElement& x) {
  return x.is_typed() ? std::max<long>(1, x.field()->precision() / 2) : 1;
}

void require_nonzero(const FieldElement& x, const std::string& what) {
  switch (ScalarOps<FieldElement>::classify(x, ceiling_of(x))) {
    case ZeroClass::NonZero:
      return;
    case ZeroClass::Zero:
      throw std::domain_error(what + " vanishes");
    case ZeroClass::Ambiguous:
      break;
  }
  throw PrecisionError("cannot decide whether " + what + " vanishes", 2 * ceiling_of(x));
}

bool is_zero_to_ceiling(const FieldElement& x) {
  return ScalarOps<FieldElement>::classify(x, ceiling_of(x)) != ZeroClass::NonZero;
}

}  // namespace

FieldElement gross_regulator(const Analysis& an) {
  if (an.dplus != 0) throw std::invalid_argument("gross_regulator: W must be totally odd (d+ = 0)");
  const FieldPtr& k = an.prob->coeff_field;
  if (an.f == 0) return k->one();
  const PMatrix l = (an.punits.log_rows * an.W1).transpose();
  const PMatrix o = (an.punits.ord_rows * an.W1).transpose();
  const FieldElement det_o = determinant(o, an.ceiling);
  if (ScalarOps<FieldElement>::classify(det_o, an.ceiling) != ZeroClass::NonZero)
    throw SingularRefinement("ord map on Hom(W_1, Q_p) is singular");
  return determinant(l, an.ceiling) / det_o;
}

FieldElement gross_regulator(const GaloisProblem& prob) { return gross_regulator(analyze(prob)); }

FieldElement cm_slope(const FieldElement& log_eps, const FieldElement& log_tau_eps) {
  require_nonzero(log_tau_eps, "log tau(eps)");
  return -(log_eps / log_tau_eps);
}

FieldElement cm_char_l_invariant(const FieldElement& log_tau_u, const FieldElement& log_u,
                                 const FieldElement& slope_bar, const FieldElement& ord_tau_u) {
  require_nonzero(ord_tau_u, "ord tau(u)");
  return -((log_tau_u + slope_bar * log_u) / ord_tau_u);
}

CMCharRoutes cm_char_l_invariant(const CMUnitData& d) {
  CMCharRoutes r;
  // eps_bar = tau(eps), so S_bar = -log tau(eps) / log eps.
  require_nonzero(d.log_eps, "log eps");
  const FieldElement slope_bar = -(d.log_tau_eps / d.log_eps);
  r.explicit_form = cm_char_l_invariant(d.log_tau_u, d.log_u, slope_bar, d.ord_tau_u);
  // tau(u°) has log  log tau(u) log eps - log tau(eps) log u  and ord  ord tau(u) log eps.
  const FieldElement log_tau_u0 = d.log_tau_u * d.log_eps - d.log_tau_eps * d.log_u;
  const FieldElement ord_tau_u0 = d.ord_tau_u * d.log_eps;
  require_nonzero(ord_tau_u0, "ord tau(u°)");
  r.normalized_form = -(log_tau_u0 / ord_tau_u0);
  if (!(r.explicit_form - r.normalized_form).is_zero())
    throw std::logic_error("L(psi) routes disagree: " + r.explicit_form.to_string() + " vs " +
                           r.normalized_form.to_string());
  return r;
}

FieldElement cm_line_l_invariant(const ProjectiveParam& s, const CMSpecial& data, CMCase kind) {
  if (kind == CMCase::Regular) {
    if (s.infinite) return data.l_psi_bar;
    if (s.value.is_exact_zero() || s.value.is_zero()) return data.l_psi;
    throw SingularRefinement("p-regular CM case: only s = 0 and s = inf are regular");
  }
  if (s.infinite) return data.l_psi_bar;
  const FieldElement den = s.value - data.slope;
  if (is_zero_to_ceiling(den)) throw SingularRefinement("singular refinement: s = S_psi");
  return (s.value * data.l_psi_bar - data.slope * data.l_psi) / den;
}

AdjointCMMatrices adjoint_cm_matrices(const ProjectiveParam& s, const FieldElement& t,
                                      const AdjointCMSpecial& data) {
  const FieldPtr k = data.L_p.field();
  const FieldElement two = k->from_integer(2);
  AdjointCMMatrices m;
  m.Jf = PMatrix(2, 2);
  m.Jc = PMatrix(2, 2);
  m.Jf(0, 0) = two * data.L_p;
  m.Jf(1, 0) = k->zero();
  m.Jf(0, 1) = -(t * data.l_phi_bar);
  m.Jc(0, 0) = k->one();
  m.Jc(1, 0) = k->zero();
  m.Jc(0, 1) = -t;
  if (s.infinite) {
    m.Jf(1, 1) = data.l_phi_bar;
    m.Jc(1, 1) = k->one();
  } else {
    m.Jf(1, 1) = data.slope_phi * data.l_phi - s.value * data.l_phi_bar;
    m.Jc(1, 1) = data.slope_phi - s.value;
  }
  return m;
}

FieldElement adjoint_cm_l_invariant(const ProjectiveParam& s, const FieldElement& t,
                                    const AdjointCMSpecial& data) {
  (void)t;  // the value does not depend on t
  const FieldElement two = data.L_p.field()->from_integer(2);
  if (s.infinite) return two * data.L_p * data.l_phi_bar;
  const FieldElement den = data.slope_phi - s.value;
  if (is_zero_to_ceiling(den)) throw SingularRefinement("singular refinement: s = S_phi");
  return two * data.L_p * (data.slope_phi * data.l_phi - s.value * data.l_phi_bar) / den;
}

std::pair<FieldElement, FieldElement> anticyclotomic(const AdjointCMSpecial& data) {
  const FieldElement two_lp = data.L_p.field()->from_integer(2) * data.L_p;
  return {data.l_phi - two_lp, data.l_phi_bar - two_lp};
}

bool adjoint_cm_generic(const AdjointCMSpecial& data) {
  const auto [m, mb] = anticyclotomic(data);
  return !is_zero_to_ceiling(m) && !is_zero_to_ceiling(mb) && !is_zero_to_ceiling(m + mb);
}

FieldElement adjoint_cm_family_value(const AdjointCMSpecial& data) {
  const auto [m, mb] = anticyclotomic(data);
  require_nonzero(m + mb, "L-(phi) + L-(phi_bar)");
  const FieldElement two = data.L_p.field()->from_integer(2);
  return two * data.L_p * (mb * data.l_phi + m * data.l_phi_bar) / (mb + m);
}

std::optional<FieldElement> adjoint_cm_xi(const AdjointCMSpecial& data) {
  const auto [m, mb] = anticyclotomic(data);
  require_nonzero(m, "L-(phi)");
  return square_root(mb / m * data.slope_phi_bar);
}

namespace {

/// Coefficient vectors (over an.punits) of the homs whose matrices kill vanish_on.
PMatrix restricted_homs(const Analysis& an, const PMatrix& vanish_on) {
  const int n = an.punits.size();
  const FieldPtr& k = an.prob->coeff_field;
  if (vanish_on.cols() == 0) {
    PMatrix id(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) id(i, j) = i == j ? k->one() : k->zero();
    return id;
  }
  const Eigen::Index R = an.prob->units.rank_total;
  PMatrix sys(R * vanish_on.cols(), n);
  for (int kk = 0; kk < n; ++kk)
    for (Eigen::Index c = 0; c < vanish_on.cols(); ++c)
      sys.block(c * R, kk, R, 1) = an.punits.X[kk] * vanish_on.col(c);
  return kernel_basis(sys, an.ceiling);
}

struct PairRows {
  PVector log1, log2, ord1, ord2;  // per punit: log/ord at e1 and e2
};

PairRows pair_rows(const Analysis& an, const PVector& e1, const PVector& e2) {
  return {an.punits.log_rows * e1, an.punits.log_rows * e2, an.punits.ord_rows * e1,
          an.punits.ord_rows * e2};
}

FieldElement dot(const PVector& a, const PVector& b) { return (a.transpose() * b)(0, 0); }

/// -log kappa(e2) / ord kappa(e2) for the kappa with log and ord zero at e1.
FieldElement char_l_invariant(const Analysis& an, const PMatrix& c, const PairRows& r) {
  PMatrix cond(2, c.cols());
  cond.row(0) = r.log1.transpose() * c;
  cond.row(1) = r.ord1.transpose() * c;
  const PMatrix y = kernel_basis(cond, an.ceiling);
  if (y.cols() != 1)
    throw std::runtime_error("the line u° is not unique (dimension " + std::to_string(y.cols()) +
                             ")");
  const PVector u = c * y.col(0);
  const FieldElement ord = dot(r.ord2, u);
  require_nonzero(ord, "ord tau(u°)");
  return -(dot(r.log2, u) / ord);
}

void require_one_unit(const Analysis& an) {
  if (an.dplus != 1) throw std::invalid_argument("CM data needs d+ = 1");
}

}  // namespace

CMSpecial cm_data_from_units(const Analysis& an, const PVector& e1, const PVector& e2,
                             const PMatrix& vanish_on) {
  require_one_unit(an);
  const PMatrix c = restricted_homs(an, vanish_on);
  const PairRows r = pair_rows(an, e1, e2);
  const PairRows rb = pair_rows(an, e2, e1);
  CMSpecial out;
  out.slope = cm_slope(r.log1(0), r.log2(0));
  out.slope_bar = cm_slope(r.log2(0), r.log1(0));
  out.l_psi = char_l_invariant(an, c, r);
  out.l_psi_bar = char_l_invariant(an, c, rb);
  return out;
}

CMUnitData cm_unit_data(const Analysis& an, const PVector& e1, const PVector& e2,
                        const PMatrix& vanish_on) {
  require_one_unit(an);
  const PMatrix c = restricted_homs(an, vanish_on);
  const PairRows r = pair_rows(an, e1, e2);
  PMatrix cond(1, c.cols());
  cond.row(0) = r.ord1.transpose() * c;
  const PMatrix ker = c * kernel_basis(cond, an.ceiling);
  // Drop the unit direction: the first punit is the unit hom.
  const FieldPtr& k = an.prob->coeff_field;
  PMatrix unit(c.rows(), 1);
  for (Eigen::Index i = 0; i < unit.rows(); ++i) unit(i, 0) = i == 0 ? k->one() : k->zero();
  const auto idx = complete_basis_indices(unit, ker, 2, an.ceiling);
  if (idx.empty()) throw std::runtime_error("no p-unit with ord 0 at e1 beyond the units");
  const PVector u = ker.col(idx[0]);
  CMUnitData d;
  d.log_eps = r.log1(0);
  d.log_tau_eps = r.log2(0);
  d.log_u = dot(r.log1, u);
  d.log_tau_u = dot(r.log2, u);
  d.ord_tau_u = dot(r.ord2, u);
  return d;
}

AdjointCMSpecial adjoint_cm_data_from_units(const Analysis& an) {
  const GaloisProblem& prob = *an.prob;
  if (an.d != 3) throw std::invalid_argument("adjoint CM data needs d = 3");
  const FieldPtr& k = prob.coeff_field;
  PVector w1(3), w2(3), w3(3);
  for (int i = 0; i < 3; ++i) {
    w1(i) = i == 0 ? k->one() : k->zero();
    w2(i) = i == 1 ? k->one() : k->zero();
    w3(i) = i == 2 ? k->one() : k->zero();
  }
  PMatrix vanish(3, 1);
  vanish.col(0) = w1;
  const CMSpecial phi = cm_data_from_units(an, w2, w3, vanish);

  // L_p from a p-unit of K = fixed field of ker(eps_K) that is a unit at tau(p).
  std::vector<int> kernel_eps;
  for (int g = 0; g < prob.group->order; ++g)
    if ((prob.W(g)(0, 0) - k->one()).is_zero()) kernel_eps.push_back(g);
  const PRep pu = prob.punit_rep();
  const PMatrix fixed = fixed_subspace(pu, kernel_eps, an.ceiling);
  const int R = prob.units.rank_total;
  PVector ord(R), logs(R);
  for (int i = 0; i < R; ++i) {
    ord(i) = k->from_integer(prob.units.ord_p[i]);
    logs(i) = prob.units.logs[i];
  }
  PMatrix cond(1, fixed.cols());
  cond.row(0) = ord.transpose() * pu(prob.group->conjugation) * fixed;
  const PMatrix up = kernel_basis(cond, an.ceiling);
  if (up.cols() != 1) throw std::runtime_error("no unique p-unit of K with ord 0 at tau(p)");
  const PVector u = fixed * up.col(0);
  const FieldElement ord_u = dot(ord, u);
  require_nonzero(ord_u, "ord u_p");

  AdjointCMSpecial out;
  out.L_p = -(dot(logs, u) / ord_u);
  out.l_phi = phi.l_psi;
  out.l_phi_bar = phi.l_psi_bar;
  out.slope_phi = phi.slope;
  out.slope_phi_bar = phi.slope_bar;
  return out;
}

FieldElement weight1_l_invariant(CMCase kind, const FieldElement& log_eps_a,
                                 const FieldElement& log_eps_b, const FieldElement& log_u_a,
                                 const FieldElement& log_u_b, const FieldElement& ord_u_a) {
  (void)kind;  // both cases share the expression
  const FieldElement den = log_eps_b * ord_u_a;
  require_nonzero(den, "log eps * ord u");
  return (log_eps_a * log_u_b - log_eps_b * log_u_a) / den;
}

}  // namespace linv
