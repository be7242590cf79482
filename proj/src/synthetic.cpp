#include "linv/synthetic.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace linv {

using nlohmann::json;

namespace {

using IMat = std::vector<std::vector<long>>;

IMat imul(const IMat& a, const IMat& b) {
  const std::size_t n = a.size();
  IMat c(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

IMat ieye(std::size_t n) {
  IMat m(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IMat scalar1(long v) { return {{v}}; }

struct GroupDef {
  std::string name;
  std::vector<std::string> names;
  std::vector<std::vector<IMat>> gens;  // gens[irrep][generator]
};

CatalogGroup close_group(const GroupDef& def) {
  using Elem = std::vector<IMat>;
  const std::size_t ni = def.names.size(), ng = def.gens[0].size();
  auto key = [](const Elem& e) {
    std::vector<long> k;
    for (const auto& m : e)
      for (const auto& row : m) k.insert(k.end(), row.begin(), row.end());
    return k;
  };
  std::vector<Elem> elems;
  std::map<std::vector<long>, int> index;
  Elem id;
  for (std::size_t i = 0; i < ni; ++i) id.push_back(ieye(def.gens[i][0].size()));
  elems.push_back(id);
  index[key(id)] = 0;
  for (std::size_t at = 0; at < elems.size(); ++at)
    for (std::size_t g = 0; g < ng; ++g) {
      Elem next;
      for (std::size_t i = 0; i < ni; ++i) next.push_back(imul(elems[at][i], def.gens[i][g]));
      if (index.emplace(key(next), static_cast<int>(elems.size())).second) elems.push_back(next);
    }
  const int n = static_cast<int>(elems.size());
  CatalogGroup cg;
  cg.name = def.name;
  cg.irrep_names = def.names;
  cg.table.order = n;
  cg.table.mult.assign(n, std::vector<int>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Elem prod;
      for (std::size_t i = 0; i < ni; ++i) prod.push_back(imul(elems[a][i], elems[b][i]));
      cg.table.mult[a][b] = index.at(key(prod));
    }
  cg.table.inverse.assign(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (cg.table.mult[a][b] == 0) cg.table.inverse[a] = b;
  cg.irreps.assign(ni, {});
  for (std::size_t i = 0; i < ni; ++i)
    for (int g = 0; g < n; ++g) {
      const IMat& m = elems[g][i];
      QMatrix q(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.size()));
      for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < m.size(); ++c) q(r, c) = Rational(m[r][c]);
      cg.irreps[i].push_back(q);
    }
  return cg;
}

std::vector<CatalogGroup> build_catalog() {
  const IMat rot3 = {{0, -1}, {1, -1}}, rot4 = {{0, -1}, {1, 0}};
  const IMat swap = {{0, 1}, {1, 0}}, refl = {{1, 0}, {0, -1}};
  const IMat i2 = ieye(2), m2 = {{-1, 0}, {0, -1}};
  const IMat p1 = scalar1(1), m1 = scalar1(-1);
  std::vector<GroupDef> defs = {
      {"C2", {"sign"}, {{m1}}},
      {"C2xC2", {"chi_a", "chi_c", "chi_ac"}, {{m1, p1}, {p1, m1}, {m1, m1}}},
      {"C6", {"chi_c", "rho3", "rho3_c"}, {{p1, m1}, {rot3, i2}, {rot3, m2}}},
      {"C2xC4",
       {"chi_c", "chi_a2", "chi_a2c", "rho4", "rho4_c"},
       {{p1, m1}, {m1, p1}, {m1, m1}, {rot4, i2}, {rot4, m2}}},
      {"S3", {"sign", "std"}, {{p1, m1}, {rot3, swap}}},
      {"D4", {"chi_s", "chi_r", "chi_rs", "std"}, {{p1, m1}, {m1, p1}, {m1, m1}, {rot4, refl}}},
  };
  std::vector<CatalogGroup> out;
  for (const auto& d : defs) out.push_back(close_group(d));
  return out;
}

int element_order(const FiniteGroup& g, int a) {
  int n = 1;
  for (int x = a; x != 0; x = g.mul(x, a)) ++n;
  return n;
}

int power(const FiniteGroup& g, int a, int k) {
  int x = 0;
  for (int i = 0; i < k; ++i) x = g.mul(x, a);
  return x;
}

/// Left cosets xH: coset index of every element, and representatives.
std::pair<std::vector<int>, std::vector<int>> cosets(const FiniteGroup& g,
                                                     const std::vector<int>& h) {
  std::vector<int> of(g.order, -1), reps;
  for (int x = 0; x < g.order; ++x) {
    if (of[x] >= 0) continue;
    const int c = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int y : h) of[g.mul(x, y)] = c;
  }
  return {of, reps};
}

struct UnitModel {
  int r = 0, R = 0;
  std::vector<QMatrix> action;
  std::vector<long> ord;
  std::vector<FieldElement> logs;
};

QMatrix qzero(Eigen::Index n) {
  QMatrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Rational(0);
  return m;
}

UnitModel unit_model(const FiniteGroup& g, int tau, int frob, const FieldPtr& k,
                     DigitSource& ds) {
  UnitModel u;
  const auto [cof_t, reps_t] = cosets(g, g.cyclic_subgroup(tau));
  const auto gp = g.cyclic_subgroup(frob);
  const auto [cof_p, reps_p] = cosets(g, gp);
  const int m1 = static_cast<int>(reps_t.size()), m2 = static_cast<int>(reps_p.size());
  u.r = m1 - 1;
  u.R = u.r + m2;
  for (int x = 0; x < g.order; ++x) {
    QMatrix a = qzero(u.R);
    const int last = cof_t[g.mul(x, reps_t[m1 - 1])];
    for (int i = 0; i < u.r; ++i) {
      const int img = cof_t[g.mul(x, reps_t[i])];
      if (img < u.r) a(img, i) += 1;
      if (last < u.r) a(last, i) -= 1;
    }
    for (int c = 0; c < m2; ++c) a(u.r + cof_p[g.mul(x, reps_p[c])], u.r + c) = Rational(1);
    u.action.push_back(a);
  }
  u.ord.assign(u.R, 0);
  u.ord[u.r] = 1;

  // lambda: Q_p-valued, zero on the norm element sum of cosets (log p = 0).
  const FieldPtr base = k->base_field() ? k->base_field() : k;
  const FieldEmbedding up(base, k);
  std::vector<FieldElement> lambda;
  for (int i = 0; i < u.R; ++i) lambda.push_back(ds.element(base, 1));
  FieldElement mean = base->zero();
  for (int c = 0; c < m2; ++c) mean += lambda[u.r + c];
  mean = mean.divided_by(m2);
  for (int c = 0; c < m2; ++c) lambda[u.r + c] -= mean;
  const FieldElement c0 = ds.element(k, 0);

  // l_j = sum_i sigma^i(c) (lambda^T A(F^-i))_j makes l(F m) = sigma(l(m)).
  const int n = element_order(g, frob);
  u.logs.assign(u.R, k->zero());
  FieldElement ci = c0;
  for (int i = 0; i < n; ++i) {
    const QMatrix& a = u.action[power(g, g.inv(frob), i)];
    for (int j = 0; j < u.R; ++j) {
      FieldElement acc = k->zero();
      for (int t = 0; t < u.R; ++t)
        if (a(t, j) != 0) acc += k->from_rational(a(t, j)) * up(lambda[t]);
      u.logs[j] += ci * acc;
    }
    ci = k->frobenius(ci);
  }
  return u;
}

json qmatrix_json(const QMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(rational_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json group_json(const FiniteGroup& g, int frob, int tau) {
  auto gp = g.cyclic_subgroup(frob);
  std::sort(gp.begin(), gp.end());
  return {{"order", g.order}, {"mult", g.mult}, {"frobenius", frob}, {"conjugation", tau},
          {"Gp", gp}};
}

json units_json(const UnitModel& u, bool with_logs) {
  json action = json::array();
  for (const auto& a : u.action) action.push_back(qmatrix_json(a));
  json j = {{"rank_units", u.r}, {"rank_total", u.R}, {"action", action}, {"ord_p", u.ord}};
  if (with_logs) {
    json logs = json::array();
    for (const auto& l : u.logs) logs.push_back(element_to_json(l));
    j["logs"] = logs;
  }
  return j;
}

json header_json(long p, long precision, int degree) {
  return {{"p", p},
          {"precision", precision},
          {"E", {{"unramified_degree", degree}}},
          {"coeff_field", {{"unramified_degree", degree}, {"eisenstein", nullptr}}}};
}

PMatrix random_int_matrix(Eigen::Index rows, Eigen::Index cols, const FieldPtr& k,
                          std::mt19937_64& rng, long bound = 9) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  PMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = k->from_integer(dist(rng));
  return m;
}

/// Random invertible matrix; entries in lower_left (rows >= split, cols < split) are zero.
PMatrix random_invertible(Eigen::Index n, Eigen::Index split, const FieldPtr& k,
                          std::mt19937_64& rng) {
  if (n == 0) return PMatrix(0, 0);
  for (;;) {
    PMatrix m = random_int_matrix(n, n, k, rng);
    for (Eigen::Index i = split; i < n; ++i)
      for (Eigen::Index j = 0; j < split; ++j) m(i, j) = k->zero();
    if (rank(m) == n) return m;
  }
}

/// n-th roots of unity of K (n | p - 1).
std::vector<FieldElement> roots_of_unity(const FieldPtr& k, int n) {
  std::vector<FieldElement> out;
  const long p = k->prime();
  for (long a = 1; a < p; ++a) {
    long x = 1;
    for (int i = 0; i < n; ++i) x = x * a % p;
    if (x == 1) out.push_back(teichmuller(k->from_integer(a)));
  }
  return out;
}

struct S3Words {
  int r = 0, s = 0;
  std::vector<std::pair<int, int>> word;  // g = r^a s^b
};

S3Words s3_words(const CatalogGroup& cg) {
  S3Words w;
  const auto& std_rep = cg.irreps[1];
  const QMatrix rot = (QMatrix(2, 2) << Rational(0), Rational(-1), Rational(1), Rational(-1)).finished();
  const QMatrix swp = (QMatrix(2, 2) << Rational(0), Rational(1), Rational(1), Rational(0)).finished();
  for (int g = 0; g < cg.table.order; ++g) {
    if (detail::matrices_equal<Rational>(std_rep[g], rot)) w.r = g;
    if (detail::matrices_equal<Rational>(std_rep[g], swp)) w.s = g;
  }
  w.word.assign(cg.table.order, {0, 0});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 2; ++b) {
      const int g = cg.table.mul(power(cg.table, w.r, a), power(cg.table, w.s, b));
      w.word[g] = {a, b};
    }
  return w;
}

PMatrix pmat_pow(const PMatrix& m, int k, const FieldPtr& f) {
  PMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = i == j ? f->one() : f->zero();
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

/// S3 fixture skeleton with W given by images of r and s over K.
json s3_fixture(long p, long precision, std::uint64_t seed, const PMatrix& wr, const PMatrix& ws,
                const FieldPtr& k) {
  const CatalogGroup& cg = catalog_group("S3");
  const S3Words w = s3_words(cg);
  json wm = json::array();
  for (int g = 0; g < cg.table.order; ++g) {
    const auto [a, b] = w.word[g];
    wm.push_back(matrix_to_json(pmat_pow(wr, a, k) * pmat_pow(ws, b, k)));
  }
  DigitSource ds(seed, p);
  const UnitModel u = unit_model(cg.table, w.s, 0, k, ds);
  json j = header_json(p, precision, 1);
  j["group"] = group_json(cg.table, 0, w.s);
  j["W"] = {{"dim", wr.rows()}, {"matrices", wm}, {"motivic", true}};
  j["units"] = units_json(u, true);
  return j;
}

PVector unit_vector(Eigen::Index n, Eigen::Index i, const FieldPtr& k) {
  PVector v(n);
  for (Eigen::Index t = 0; t < n; ++t) v(t) = t == i ? k->one() : k->zero();
  return v;
}

}  // namespace

const std::vector<CatalogGroup>& group_catalog() {
  static const std::vector<CatalogGroup> catalog = build_catalog();
  return catalog;
}

const CatalogGroup& catalog_group(const std::string& name) {
  for (const auto& g : group_catalog())
    if (g.name == name) return g;
  throw std::invalid_argument("unknown catalog group '" + name + "'");
}

Integer DigitSource::draw_integer() {
  Integer acc = 0, pw = 1;
  for (long i = 0; i < kDigits; ++i) {
    acc += pw * static_cast<long>(rng_() % static_cast<std::uint64_t>(p_));
    pw *= p_;
  }
  return acc;
}

FieldElement DigitSource::element(const FieldPtr& k, long shift) {
  std::vector<Integer> c(k->degree(), 0);
  for (int i = 0; i < k->unramified_degree(); ++i) c[i] = draw_integer();
  // Unit leading digit.
  const Integer r = c[0] % p_;
  if (r == 0) c[0] += 1 + static_cast<long>(rng_() % static_cast<std::uint64_t>(p_ - 1));
  const long prec = k->precision();
  const Integer mod = k->prime_power(std::max<long>(0, prec - shift));
  for (auto& x : c) x %= mod;
  return k->from_coords(shift, prec, std::move(c));
}

SyntheticSpec random_spec(std::mt19937_64& rng, long precision, int max_dim) {
  const auto& cat = group_catalog();
  for (;;) {
    SyntheticSpec s;
    const CatalogGroup& cg = cat[rng() % cat.size()];
    s.group = cg.name;
    const int picks = 1 + static_cast<int>(rng() % 3);
    int dim = 0;
    for (int t = 0; t < picks; ++t) {
      const int i = static_cast<int>(rng() % cg.irreps.size());
      const int di = static_cast<int>(cg.irreps[i][0].rows());
      if (dim + di > max_dim) continue;
      s.irreps.push_back(i);
      dim += di;
    }
    if (s.irreps.empty()) continue;
    std::vector<int> invol;
    for (int g = 0; g < cg.table.order; ++g)
      if (cg.table.mul(g, g) == 0) invol.push_back(g);
    s.tau = invol[rng() % invol.size()];
    s.frob = static_cast<int>(rng() % cg.table.order);
    const int n = element_order(cg.table, s.frob);
    if (n > 4) continue;
    std::vector<long> primes;
    for (long p : {5L, 7L, 11L, 13L})
      if (cg.table.order % p != 0 && (p - 1) % n == 0) primes.push_back(p);
    if (primes.empty()) continue;
    s.p = primes[rng() % primes.size()];
    s.precision = precision;
    s.seed = rng();
    return s;
  }
}

json synthetic_fixture(const SyntheticSpec& spec) {
  const CatalogGroup& cg = catalog_group(spec.group);
  const int n = element_order(cg.table, spec.frob);
  const FieldPtr k = make_field(spec.p, n, {}, spec.precision);
  DigitSource ds(spec.seed, spec.p);
  const UnitModel u = unit_model(cg.table, spec.tau, spec.frob, k, ds);
  int d = 0;
  for (int i : spec.irreps) d += static_cast<int>(cg.irreps[i][0].rows());
  json wm = json::array();
  for (int g = 0; g < cg.table.order; ++g) {
    QMatrix m = qzero(d);
    int at = 0;
    for (int i : spec.irreps) {
      const QMatrix& b = cg.irreps[i][g];
      m.block(at, at, b.rows(), b.cols()) = b;
      at += static_cast<int>(b.rows());
    }
    wm.push_back(qmatrix_json(m));
  }
  json j = header_json(spec.p, spec.precision, n);
  j["group"] = group_json(cg.table, spec.frob, spec.tau);
  j["W"] = {{"dim", d}, {"matrices", wm}, {"motivic", true}};
  j["units"] = units_json(u, true);
  std::string w;
  for (int i : spec.irreps) w += (w.empty() ? "" : "+") + cg.irrep_names[i];
  j["description"] = spec.group + ": W = " + w + ", p = " + std::to_string(spec.p);
  return j;
}

std::optional<Refinement> random_refinement(const Analysis& an, std::mt19937_64& rng, int max_e,
                                            bool want_singular) {
  const GaloisProblem& prob = *an.prob;
  const FieldPtr& k = prob.coeff_field;
  const int d = an.d;
  Refinement ref;
  ref.name = "random";
  if (an.dplus == 0) {
    ref.basis = PMatrix(d, 0);
    return an.f <= max_e ? std::optional<Refinement>(ref) : std::nullopt;
  }
  const int n = element_order(*prob.group, prob.group->frobenius);
  const PMatrix& frob = prob.W(prob.group->frobenius);
  std::vector<PMatrix> spaces;
  int one_index = -1;
  int total = 0;
  for (const auto& z : roots_of_unity(k, n)) {
    PMatrix shifted = frob;
    for (int i = 0; i < d; ++i) shifted(i, i) -= z;
    PMatrix v = kernel_basis(shifted, an.ceiling);
    if (v.cols() == 0) continue;
    if ((z - k->one()).is_zero()) one_index = static_cast<int>(spaces.size());
    total += static_cast<int>(v.cols());
    spaces.push_back(std::move(v));
  }
  if (total != d) return std::nullopt;
  const int m1 = one_index >= 0 ? static_cast<int>(spaces[one_index].cols()) : 0;

  // Dimensions per eigenspace: the fixed part needs at least m1 - max_e.
  std::vector<int> dims(spaces.size(), 0);
  const int lo = std::max(0, m1 - max_e), hi = std::min(m1, an.dplus);
  if (lo > hi) return std::nullopt;
  bool found = false;
  for (int attempt = 0; attempt < 64 && !found; ++attempt) {
    std::fill(dims.begin(), dims.end(), 0);
    int left = an.dplus;
    if (one_index >= 0) {
      dims[one_index] = lo + static_cast<int>(rng() % (hi - lo + 1));
      left -= dims[one_index];
    }
    std::vector<int> order(spaces.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i : order) {
      if (i == one_index) continue;
      const int cap = static_cast<int>(spaces[i].cols());
      const int take = std::min(cap, static_cast<int>(rng() % (left + 1)));
      dims[i] = take;
      left -= take;
    }
    for (int i : order) {
      if (i == one_index || left == 0) continue;
      const int extra = std::min(left, static_cast<int>(spaces[i].cols()) - dims[i]);
      dims[i] += extra;
      left -= extra;
    }
    found = left == 0;
  }
  if (!found) return std::nullopt;

  ref.basis = PMatrix(d, an.dplus);
  int at = 0;
  bool planted = !want_singular;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    if (dims[i] == 0) continue;
    PMatrix part = spaces[i] * random_int_matrix(spaces[i].cols(), dims[i], k, rng);
    if (!planted && an.W_circle.cols() > 0) {
      const PMatrix meet = intersect(spaces[i], an.W_circle, an.ceiling);
      if (meet.cols() > 0) {
        part.col(0) = meet * random_int_matrix(meet.cols(), 1, k, rng);
        planted = true;
      }
    }
    ref.basis.middleCols(at, dims[i]) = part;
    at += dims[i];
  }
  if (rank(ref.basis, an.ceiling) != an.dplus) return std::nullopt;
  return ref;
}

NotationBases random_rebase(const NotationBases& b, int dim_w1_plus, const FieldPtr& k,
                            std::mt19937_64& rng) {
  NotationBases out;
  const Eigen::Index dp = b.w_plus.cols(), e = b.w_minus.cols();
  out.w_plus = b.w_plus * random_invertible(dp, dim_w1_plus, k, rng);
  out.w_minus = b.w_minus * random_invertible(e, 0, k, rng);
  if (dim_w1_plus > 0 && e > 0)
    out.w_minus += b.w_plus.leftCols(dim_w1_plus) * random_int_matrix(dim_w1_plus, e, k, rng);
  const PMatrix a = random_invertible(dp, 0, k, rng);
  out.kappas.log_rows = a.transpose() * b.kappas.log_rows;
  out.kappas.ord_rows = a.transpose() * b.kappas.ord_rows;
  const PMatrix bb = random_invertible(e, 0, k, rng);
  out.kappa_primes.log_rows = bb.transpose() * b.kappa_primes.log_rows;
  out.kappa_primes.ord_rows = bb.transpose() * b.kappa_primes.ord_rows;
  if (dp > 0 && e > 0) {
    const PMatrix c = random_int_matrix(dp, e, k, rng);
    out.kappa_primes.log_rows += c.transpose() * b.kappas.log_rows;
    out.kappa_primes.ord_rows += c.transpose() * b.kappas.ord_rows;
  }
  out.audit = {{"rebased", true}};
  return out;
}

json qi_fixture(long precision) {
  const long p = 5;
  const FieldPtr k = make_field(p, 1, {}, precision);
  const FieldElement i = teichmuller(k->from_integer(2));
  const FieldElement two = k->from_integer(2);
  json j = header_json(p, precision, 1);
  j["description"] = "Q(i), p = 5, W = odd quadratic character; iota(i) = teichmuller(2)";
  j["group"] = {{"order", 2}, {"mult", {{0, 1}, {1, 0}}}, {"frobenius", 0}, {"conjugation", 1},
                {"Gp", {0}}};
  j["W"] = {{"dim", 1}, {"matrices", {{{1}}, {{-1}}}}, {"motivic", true}};
  // Basis of the p-units: 2 - i generates the prime above 5 selected by iota,
  // 2 + i = tau(2 - i).
  j["units"] = {{"rank_units", 0},
                {"rank_total", 2},
                {"action", {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}}},
                {"ord_p", {1, 0}},
                {"embeddings", {element_to_json(two - i), element_to_json(two + i)}}};
  j["refinements"] = {{{"name", "default"}, {"basis", json::array()}, {"motivic", true}}};
  return j;
}

json c2_split_fixture(long precision, std::uint64_t seed) {
  SyntheticSpec s{"C2", {0}, 1, 0, 7, precision, seed};
  json j = synthetic_fixture(s);
  j["refinements"] = {{{"name", "default"}, {"basis", json::array()}, {"motivic", true}}};
  return j;
}

json cm_fixture(long precision, std::uint64_t seed) {
  const long p = 7;
  const FieldPtr k = make_field(p, 1, {}, precision);
  const FieldElement z = teichmuller(k->from_integer(2));  // primitive cube root of 1
  PMatrix wr(2, 2), ws(2, 2);
  wr << z, k->zero(), k->zero(), z * z;
  ws << k->zero(), k->one(), k->one(), k->zero();
  json j = s3_fixture(p, precision, seed, wr, ws, k);
  j["description"] =
      "S3, W = Ind psi (psi of order 3) in the basis e1, e2 = tau(e1); p = 7 splits completely";
  j["family"] = {{"base", {1, 0}}, {"s_direction", {0, 1}}};
  j["refinements"] = {{{"name", "s=0"}, {"basis", {{1, 0}}}, {"motivic", false}, {"s", 0}},
                      {{"name", "s=inf"}, {"basis", {{0, 1}}}, {"motivic", false}, {"s", "inf"}},
                      {{"name", "s=1"}, {"basis", {{1, 1}}}, {"motivic", false}, {"s", 1}}};
  const GaloisProblem prob = load_fixture(j);
  const Analysis an = analyze(prob);
  const CMSpecial cm = cm_data_from_units(an, unit_vector(2, 0, prob.coeff_field),
                                          unit_vector(2, 1, prob.coeff_field), PMatrix(2, 0));
  j["special"] = {{"cm",
                   {{"slope", element_to_json(cm.slope)},
                    {"slope_bar", element_to_json(cm.slope_bar)},
                    {"l_psi", element_to_json(cm.l_psi)},
                    {"l_psi_bar", element_to_json(cm.l_psi_bar)}}}};
  j["refinements"].push_back({{"name", "W_circle"},
                              {"basis", {{1, element_to_json(cm.slope)}}},
                              {"motivic", false},
                              {"s", element_to_json(cm.slope)}});
  return j;
}

json adjoint_cm_fixture(long precision, std::uint64_t seed) {
  const long p = 7;
  const FieldPtr k = make_field(p, 1, {}, precision);
  const FieldElement z = teichmuller(k->from_integer(2));
  const FieldElement o = k->one(), n0 = k->zero();
  PMatrix wr(3, 3), ws(3, 3);
  wr << o, n0, n0, n0, z * z, n0, n0, n0, z;
  ws << -o, n0, n0, n0, n0, o, n0, o, n0;
  json j = s3_fixture(p, precision, seed, wr, ws, k);
  j["description"] =
      "S3, W = ad0 of Ind psi = eps_K + Ind phi in the basis w1, w2, w3 = tau(w2); p = 7 "
      "splits completely";
  j["family"] = {{"base", {0, 1, 0}}, {"s_direction", {0, 0, 1}}, {"t_direction", {1, 0, 0}}};
  j["refinements"] = {{{"name", "theta"}, {"basis", {{0, 1, 0}}}, {"motivic", false}, {"s", 0}, {"t", 0}},
                      {{"name", "theta_bar"}, {"basis", {{0, 0, 1}}}, {"motivic", false}, {"s", "inf"}, {"t", 0}}};
  const GaloisProblem prob = load_fixture(j);
  const AdjointCMSpecial a = adjoint_cm_data_from_units(analyze(prob));
  j["special"] = {{"adjoint_cm",
                   {{"L_p", element_to_json(a.L_p)},
                    {"l_phi", element_to_json(a.l_phi)},
                    {"l_phi_bar", element_to_json(a.l_phi_bar)},
                    {"slope_phi", element_to_json(a.slope_phi)},
                    {"slope_phi_bar", element_to_json(a.slope_phi_bar)}}}};
  return j;
}

json weight1_regular_fixture(long precision, std::uint64_t seed) {
  const CatalogGroup& cg = catalog_group("S3");
  const S3Words w = s3_words(cg);
  SyntheticSpec s{"S3", {1}, cg.table.mul(w.s, w.r), w.s, 5, precision, seed};
  json j = synthetic_fixture(s);
  j["description"] = "S3 standard representation, Frobenius a reflection, p = 5";
  j["refinements"] = {{{"name", "beta"}, {"basis", {{1, -1}}}, {"motivic", true}}};
  return j;
}

std::pair<PVector, PVector> weight1_eigenvectors(const GaloisProblem& prob) {
  const FieldPtr& k = prob.coeff_field;
  PVector a(2), b(2);
  a << k->one(), k->one();
  b << k->one(), -k->one();
  return {a, b};
}

}  // namespace linv
