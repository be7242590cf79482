#include "linv/engine.hpp"

#include <sstream>

namespace linv {

using nlohmann::json;

namespace {

PMatrix empty_cols(Eigen::Index rows) { return PMatrix(rows, 0); }

PMatrix typed_identity(const FieldPtr& k, Eigen::Index n) {
  PMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = i == j ? k->one() : k->zero();
  return m;
}

PVector vectorize(const PMatrix& x) {
  PVector v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) v(i) = x.data()[i];
  return v;
}

KappaSet kappa_set(const std::vector<PMatrix>& xs, const PVector& logs, const PVector& ords,
                   int d) {
  KappaSet k;
  k.X = xs;
  k.log_rows = PMatrix(static_cast<Eigen::Index>(xs.size()), d);
  k.ord_rows = PMatrix(static_cast<Eigen::Index>(xs.size()), d);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    k.log_rows.row(i) = logs.transpose() * xs[i];
    k.ord_rows.row(i) = ords.transpose() * xs[i];
  }
  return k;
}

/// kappa'_j = sum_k c(k, j) P_k.
KappaSet combine(const KappaSet& p, const PMatrix& c) {
  KappaSet out;
  out.log_rows = c.transpose() * p.log_rows;
  out.ord_rows = c.transpose() * p.ord_rows;
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    if (p.X.empty()) break;
    PMatrix x = p.X[0] * c(0, j);
    for (int k = 1; k < p.size(); ++k) x += p.X[k] * c(k, j);
    out.X.push_back(std::move(x));
  }
  return out;
}

bool certified_nonzero(const FieldElement& x, long ceiling) {
  switch (ScalarOps<FieldElement>::classify(x, ceiling)) {
    case ZeroClass::NonZero:
      return true;
    case ZeroClass::Zero:
      return false;
    case ZeroClass::Ambiguous:
      break;
  }
  throw PrecisionError("cannot decide whether a determinant vanishes; raise the precision",
                       2 * ceiling);
}

FieldElement det_or_one(const PMatrix& m, const FieldPtr& k, long ceiling) {
  if (m.rows() == 0) return k->one();
  return determinant(m, ceiling);
}

void check_refinement_shape(const Analysis& an, const Refinement& ref) {
  if (ref.basis.rows() != an.d)
    throw std::invalid_argument("refinement '" + ref.name + "': vectors must have length d");
  if (ref.basis.cols() != an.dplus)
    throw std::invalid_argument("refinement '" + ref.name + "': refinement dim ≠ d⁺");
  if (an.dplus > 0) {
    if (rank(ref.basis, an.ceiling) != an.dplus)
      throw std::invalid_argument("refinement '" + ref.name + "': basis vectors are dependent");
    const PMatrix& frob = an.prob->W(an.prob->group->frobenius);
    PMatrix both(an.d, 2 * an.dplus);
    both.leftCols(an.dplus) = ref.basis;
    both.rightCols(an.dplus) = frob * ref.basis;
    if (rank(both, an.ceiling) != an.dplus)
      throw std::invalid_argument("refinement '" + ref.name + "': not stable under G_p");
  }
}

json matrix_json_or_empty(const PMatrix& m) { return matrix_to_json(m); }

}  // namespace

Analysis analyze(const GaloisProblem& prob, long ceiling) {
  Analysis an;
  an.prob = &prob;
  an.ceiling = ceiling == kDefaultCeiling ? std::max<long>(1, prob.precision / 2) : ceiling;
  an.d = prob.dim();
  an.dplus = plus_dimension(prob.W, an.ceiling);
  an.W1 = fixed_subspace(prob.W, {prob.group->frobenius}, an.ceiling);
  an.f = static_cast<int>(an.W1.cols());

  const FieldPtr& K = prob.coeff_field;
  const int R = prob.units.rank_total, r = prob.units.rank_units;
  PVector logs(R), ords(R);
  for (int i = 0; i < R; ++i) {
    logs(i) = prob.units.logs[i];
    ords(i) = K->from_integer(prob.units.ord_p[i]);
  }

  std::vector<PMatrix> hu;
  if (r > 0) {
    for (const auto& x : equivariant_homs(prob.W, prob.unit_rep(), an.ceiling)) {
      PMatrix padded(R, an.d);
      for (Eigen::Index i = 0; i < padded.size(); ++i) padded.data()[i] = K->zero();
      padded.topRows(r) = x;
      hu.push_back(std::move(padded));
    }
  }
  if (static_cast<int>(hu.size()) != an.dplus)
    throw std::runtime_error("dim Hom_G(W, U_H) = " + std::to_string(hu.size()) +
                             " differs from d+ = " + std::to_string(an.dplus));
  const auto hp = equivariant_homs(prob.W, prob.punit_rep(), an.ceiling);
  if (static_cast<int>(hp.size()) != an.dplus + an.f)
    throw std::runtime_error("dim Hom_G(W, U_H^(p)) = " + std::to_string(hp.size()) +
                             " differs from d+ + f = " + std::to_string(an.dplus + an.f));

  // Basis of the p-unit Hom space whose first d+ members are the unit homs.
  const Eigen::Index len = static_cast<Eigen::Index>(R) * an.d;
  PMatrix base(len, static_cast<Eigen::Index>(hu.size()));
  for (std::size_t i = 0; i < hu.size(); ++i) base.col(i) = vectorize(hu[i]);
  PMatrix cand(len, static_cast<Eigen::Index>(hp.size()));
  for (std::size_t i = 0; i < hp.size(); ++i) cand.col(i) = vectorize(hp[i]);
  const auto idx = complete_basis_indices(base, cand, an.dplus + an.f, an.ceiling);
  std::vector<PMatrix> all = hu;
  for (int i : idx) all.push_back(hp[i]);

  an.units = kappa_set(hu, logs, ords, an.d);
  an.punits = kappa_set(all, logs, ords, an.d);
  an.W_circle = an.dplus == 0 ? typed_identity(K, an.d)
                              : kernel_basis(an.units.log_rows, an.ceiling);
  an.leopoldt = an.W_circle.cols() == an.d - an.dplus;
  return an;
}

PMatrix w_circle(const GaloisProblem& prob) { return analyze(prob).W_circle; }

FieldElement regulator(const Analysis& an, const Refinement& ref) {
  const FieldPtr& K = an.prob->coeff_field;
  if (an.dplus == 0) return K->one();
  const PMatrix a = (an.units.log_rows * ref.basis).transpose();
  return determinant(a, an.ceiling);
}

FieldElement regulator(const GaloisProblem& prob, const Refinement& ref) {
  return regulator(analyze(prob), ref);
}

RegularityVerdict is_regular(const Analysis& an, const Refinement& ref) {
  check_refinement_shape(an, ref);
  RegularityVerdict v;
  v.reg = regulator(an, ref);
  v.reg_nonzero = certified_nonzero(v.reg, an.ceiling);
  v.dim_w_circle = static_cast<int>(an.W_circle.cols());
  PMatrix both(an.d, ref.basis.cols() + an.W_circle.cols());
  if (ref.basis.cols() > 0) both.leftCols(ref.basis.cols()) = ref.basis;
  if (an.W_circle.cols() > 0) both.rightCols(an.W_circle.cols()) = an.W_circle;
  v.rank_sum = both.cols() == 0 ? 0 : rank(both, an.ceiling);
  v.direct_sum = v.rank_sum == an.d && both.cols() == an.d;
  if (v.reg_nonzero != v.direct_sum) {
    std::ostringstream os;
    os << "internal consistency failure: Reg_p " << (v.reg_nonzero ? "!= 0" : "= 0")
       << " but W " << (v.direct_sum ? "=" : "!=") << " W+ (+) W°"
       << " (bug or precision shortfall)";
    throw PrecisionError(os.str(), 2 * an.prob->precision);
  }
  v.regular = v.reg_nonzero;
  if (!an.leopoldt) {
    v.reason = "no regular refinement exists: dim W° = " + std::to_string(v.dim_w_circle) +
               " exceeds d - d+ = " + std::to_string(an.d - an.dplus);
  } else if (!v.regular) {
    v.reason = "singular refinement: Reg_p(W, W+) = 0 and W+ meets W° (rank " +
               std::to_string(v.rank_sum) + " < " + std::to_string(an.d) + ")";
  } else {
    v.reason = "regular";
  }
  return v;
}

RegularityVerdict is_regular(const GaloisProblem& prob, const Refinement& ref) {
  return is_regular(analyze(prob), ref);
}

ExtraZeros extra_zero_order(const Analysis& an, const Refinement& ref) {
  ExtraZeros ez;
  const int d = an.d;
  if (ref.basis.cols() == 0 || an.W1.cols() == 0)
    ez.W1_plus = empty_cols(d);
  else
    ez.W1_plus = intersect(ref.basis, an.W1, an.ceiling);
  ez.e = an.f - static_cast<int>(ez.W1_plus.cols());
  const PMatrix w1 = complete_basis(ez.W1_plus, an.W1, an.f, an.ceiling);
  ez.W1_minus = w1.rightCols(w1.cols() - ez.W1_plus.cols());

  PMatrix base(d, ref.basis.cols() + ez.W1_minus.cols());
  if (ref.basis.cols() > 0) base.leftCols(ref.basis.cols()) = ref.basis;
  if (ez.W1_minus.cols() > 0) base.rightCols(ez.W1_minus.cols()) = ez.W1_minus;
  const PMatrix frob = an.prob->W(an.prob->group->frobenius);
  const PMatrix moved = frob - identity<FieldElement>(d);
  const PMatrix full = complete_basis(base, moved, d, an.ceiling);
  ez.Wm1_minus = full.rightCols(full.cols() - base.cols());
  return ez;
}

KappaSet kappa_prime_basis(const Analysis& an, const ExtraZeros& ez, int attempt, json* audit) {
  const KappaSet& p = an.punits;
  const int n = p.size();
  const FieldPtr& K = an.prob->coeff_field;
  PMatrix ker;
  if (ez.W1_plus.cols() == 0) {
    ker = typed_identity(K, n);
  } else {
    const PMatrix m = (p.ord_rows * ez.W1_plus).transpose();
    ker = kernel_basis(m, an.ceiling);
  }
  if (ker.cols() != an.dplus + ez.e)
    throw std::runtime_error("kernel of the ord map has dimension " + std::to_string(ker.cols()) +
                             ", expected d+ + e = " + std::to_string(an.dplus + ez.e));
  if (ez.e == 0) {
    KappaSet empty;
    empty.log_rows = PMatrix(0, an.d);
    empty.ord_rows = PMatrix(0, an.d);
    return empty;
  }
  const Eigen::Index kc = ker.cols();
  PMatrix rotated(n, kc);
  std::vector<int> order;
  for (Eigen::Index j = 0; j < kc; ++j) {
    const int src = static_cast<int>((j + attempt) % kc);
    order.push_back(src);
    rotated.col(j) = ker.col(src);
  }
  PMatrix base(n, an.dplus);
  for (Eigen::Index i = 0; i < base.size(); ++i) base.data()[i] = K->zero();
  for (int i = 0; i < an.dplus; ++i) base(i, i) = K->one();
  const auto idx = complete_basis_indices(base, rotated, an.dplus + ez.e, an.ceiling);
  if (static_cast<int>(idx.size()) != ez.e)
    throw std::runtime_error("could not complete the units inside the ord kernel");
  PMatrix c(n, ez.e);
  std::vector<int> chosen;
  for (int j = 0; j < ez.e; ++j) {
    c.col(j) = rotated.col(idx[j]);
    chosen.push_back(order[idx[j]]);
  }
  if (audit) {
    (*audit)["kappa_prime_kernel_columns"] = chosen;
    (*audit)["kappa_prime_attempt"] = attempt;
  }
  return combine(p, c);
}

NotationBases default_bases(const Analysis& an, const Refinement& ref) {
  check_refinement_shape(an, ref);
  NotationBases b;
  const ExtraZeros ez = extra_zero_order(an, ref);
  const auto wp_idx = complete_basis_indices(ez.W1_plus, ref.basis, an.dplus, an.ceiling);
  b.w_plus = PMatrix(an.d, an.dplus);
  if (ez.W1_plus.cols() > 0) b.w_plus.leftCols(ez.W1_plus.cols()) = ez.W1_plus;
  for (std::size_t t = 0; t < wp_idx.size(); ++t)
    b.w_plus.col(ez.W1_plus.cols() + t) = ref.basis.col(wp_idx[t]);
  b.w_minus = ez.W1_minus;
  b.kappas = an.units;
  b.audit["e"] = ez.e;
  b.audit["dim_W1_plus"] = ez.W1_plus.cols();
  b.audit["w_plus_completion_from_refinement"] = wp_idx;
  b.audit["w_plus"] = matrix_to_json(b.w_plus);
  b.audit["w_minus"] = matrix_to_json(b.w_minus);

  const int attempts = std::max(1, an.dplus + ez.e);
  for (int a = 0; a < attempts; ++a) {
    json audit;
    KappaSet kp = kappa_prime_basis(an, ez, a, &audit);
    if (ez.e == 0) {
      b.kappa_primes = std::move(kp);
      return b;
    }
    const PMatrix o = (kp.ord_rows * b.w_minus).transpose();
    if (certified_nonzero(determinant(o, an.ceiling), an.ceiling)) {
      b.kappa_primes = std::move(kp);
      for (auto it = audit.begin(); it != audit.end(); ++it) b.audit[it.key()] = it.value();
      b.audit["kappa_prime_attempts"] = a + 1;
      return b;
    }
  }
  throw SingularRefinement("O⁻ singular for every kappa' completion tried (" +
                           std::to_string(attempts) + " attempts)");
}

LMatrices assemble_matrices(const NotationBases& b) {
  LMatrices m;
  m.e = static_cast<int>(b.w_minus.cols());
  m.A_plus = (b.kappas.log_rows * b.w_plus).transpose();
  m.A_minus = (b.kappas.log_rows * b.w_minus).transpose();
  m.B_plus = (b.kappa_primes.log_rows * b.w_plus).transpose();
  m.B_minus = (b.kappa_primes.log_rows * b.w_minus).transpose();
  m.O_minus = (b.kappa_primes.ord_rows * b.w_minus).transpose();
  return m;
}

namespace {

FieldPtr field_of(const LMatrices& m) {
  for (const PMatrix* x : {&m.A_plus, &m.B_minus, &m.O_minus, &m.A_minus, &m.B_plus})
    for (Eigen::Index i = 0; i < x->size(); ++i)
      if (x->data()[i].is_typed()) return x->data()[i].field();
  return nullptr;
}

}  // namespace

LValues l_invariant_from_matrices(const LMatrices& m, long ceiling) {
  LValues v;
  const FieldPtr k = field_of(m);
  if (m.e == 0) {
    v.block = k ? k->one() : FieldElement(1);
    v.schur = v.block;
    v.certified_precision = k ? k->precision() : kExact;
    return v;
  }
  if (!k) throw std::invalid_argument("matrices carry no field");
  if (ceiling == kDefaultCeiling) ceiling = std::max<long>(1, k->precision() / 2);
  const Eigen::Index dp = m.A_plus.rows(), e = m.e;
  const FieldElement sign = k->from_integer(e % 2 == 0 ? 1 : -1);

  const FieldElement det_a = det_or_one(m.A_plus, k, ceiling);
  const FieldElement det_o = determinant(m.O_minus, ceiling);
  if (!certified_nonzero(det_a, ceiling)) throw SingularRefinement("det A⁺ = 0: singular refinement");
  if (!certified_nonzero(det_o, ceiling)) throw SingularRefinement("O⁻ singular");

  PMatrix big(dp + e, dp + e);
  if (dp > 0) {
    big.topLeftCorner(dp, dp) = m.A_plus;
    big.topRightCorner(dp, e) = m.B_plus;
    big.bottomLeftCorner(e, dp) = m.A_minus;
  }
  big.bottomRightCorner(e, e) = m.B_minus;
  v.block = sign * determinant(big, ceiling) / (det_a * det_o);

  PMatrix s = m.B_minus;
  if (dp > 0) s = m.B_minus - m.A_minus * inverse(m.A_plus, ceiling) * m.B_plus;
  v.schur = sign * determinant(s, ceiling) / det_o;

  v.certified_precision = std::min(v.block.absolute_precision(), v.schur.absolute_precision());
  if (!(v.block - v.schur).is_zero())
    throw std::logic_error("block and Schur routes disagree: " + v.block.to_string() + " vs " +
                           v.schur.to_string());
  return v;
}

LInvariantReport l_invariant(const Analysis& an, const Refinement& ref) {
  LInvariantReport rep;
  rep.refinement = ref.name;
  rep.verdict = is_regular(an, ref);
  const ExtraZeros ez = extra_zero_order(an, ref);
  rep.e = ez.e;
  if (!rep.verdict.regular) return rep;
  NotationBases b = default_bases(an, ref);
  rep.matrices = assemble_matrices(b);
  rep.basis_audit = b.audit;
  try {
    const LValues v = l_invariant_from_matrices(rep.matrices, an.ceiling);
    rep.value_block = v.block;
    rep.value_schur = v.schur;
    rep.certified_precision = v.certified_precision;
  } catch (const SingularRefinement& e) {
    rep.verdict.regular = false;
    rep.verdict.reason = e.what();
  }
  if (rep.e == 0 && !rep.value_block.is_typed()) rep.value_block = an.prob->coeff_field->one();
  return rep;
}

LInvariantReport l_invariant(const GaloisProblem& prob, const Refinement& ref) {
  return l_invariant(analyze(prob), ref);
}

FieldElement dual_l_invariant(const PMatrix& jf, const PMatrix& jc) {
  if (jf.rows() != jf.cols() || jc.rows() != jc.cols() || jf.rows() != jc.rows())
    throw std::invalid_argument("dual_l_invariant: Jf and Jc must be square of equal size");
  const Eigen::Index e = jf.rows();
  if (e == 0) return FieldElement(1);
  const PMatrix q = jf * inverse(jc);
  FieldElement det = determinant(q);
  return e % 2 == 0 ? det : -det;
}

json report_to_json(const LInvariantReport& r) {
  json j;
  j["refinement"] = r.refinement;
  j["regular"] = r.verdict.regular;
  j["verdict"] = r.verdict.reason;
  j["regulator"] = element_to_json(r.verdict.reg);
  j["criteria"] = {{"reg_nonzero", r.verdict.reg_nonzero},
                   {"direct_sum", r.verdict.direct_sum},
                   {"dim_W_circle", r.verdict.dim_w_circle},
                   {"rank_W_plus_W_circle", r.verdict.rank_sum}};
  j["e"] = r.e;
  if (r.verdict.regular) {
    j["value"] = r.value_block.to_string();
    j["value_block"] = element_to_json(r.value_block);
    j["value_schur"] = element_to_json(r.value_schur);
    j["certified_precision"] = r.certified_precision;
    j["matrices"] = {{"A_plus", matrix_json_or_empty(r.matrices.A_plus)},
                     {"A_minus", matrix_json_or_empty(r.matrices.A_minus)},
                     {"B_plus", matrix_json_or_empty(r.matrices.B_plus)},
                     {"B_minus", matrix_json_or_empty(r.matrices.B_minus)},
                     {"O_minus", matrix_json_or_empty(r.matrices.O_minus)}};
    j["basis_audit"] = r.basis_audit;
  }
  return j;
}

}  // namespace linv
