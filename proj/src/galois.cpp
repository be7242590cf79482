#include "linv/galois.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace linv {

int FiniteGroup::element_order(int a) const {
  int x = a, n = 1;
  while (x != 0) {
    x = mul(x, a);
    if (++n > order) return 0;  // not a group element of finite order here
  }
  return n;
}

std::vector<int> FiniteGroup::cyclic_subgroup(int a) const {
  std::vector<int> out{a};
  int x = a;
  while (x != 0 && static_cast<int>(out.size()) <= order) {
    x = mul(x, a);
    out.push_back(x);
  }
  return out;
}

std::vector<int> FiniteGroup::generated_subgroup(const std::vector<int>& gens) const {
  std::set<int> seen{0};
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int g : gens) {
        const int y = mul(x, g);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<int> FiniteGroup::generators() const {
  std::vector<int> gens;
  std::vector<int> sub{0};
  for (int g = 1; g < order && static_cast<int>(sub.size()) < order; ++g) {
    if (std::binary_search(sub.begin(), sub.end(), g)) continue;
    gens.push_back(g);
    sub = generated_subgroup(gens);
  }
  return gens;
}

Report validate_group(FiniteGroup& g) {
  Report rep;
  const int n = g.order;
  auto fail = [&rep](const std::string& s) { rep.failures.push_back(s); };
  if (n < 1) {
    fail("group order must be positive");
    return rep;
  }
  if (static_cast<int>(g.mult.size()) != n) {
    fail("mult must have " + std::to_string(n) + " rows");
    return rep;
  }
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(g.mult[a].size()) != n) {
      fail("mult row " + std::to_string(a) + " has wrong length");
      return rep;
    }
    for (int b = 0; b < n; ++b)
      if (g.mult[a][b] < 0 || g.mult[a][b] >= n) {
        fail("mult[" + std::to_string(a) + "][" + std::to_string(b) + "] out of range");
        return rep;
      }
  }
  for (int a = 0; a < n; ++a)
    if (g.mult[0][a] != a || g.mult[a][0] != a) {
      fail("index 0 is not the identity (fails at " + std::to_string(a) + ")");
      return rep;
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.mult[g.mult[a][b]][c] != g.mult[a][g.mult[b][c]]) {
          fail("associativity fails at (" + std::to_string(a) + "," + std::to_string(b) + "," +
               std::to_string(c) + ")");
          return rep;
        }
  g.inverse.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (g.mult[a][b] == 0 && g.mult[b][a] == 0) {
        g.inverse[a] = b;
        break;
      }
    if (g.inverse[a] < 0) {
      fail("element " + std::to_string(a) + " has no inverse");
      return rep;
    }
  }
  auto in_range = [n](int x) { return x >= 0 && x < n; };
  if (!in_range(g.frobenius)) fail("frobenius index out of range");
  if (!in_range(g.conjugation)) fail("conjugation index out of range");
  if (!rep.ok()) return rep;
  if (g.mul(g.conjugation, g.conjugation) != 0) fail("conjugation does not have order <= 2");
  std::vector<int> gp = g.Gp;
  std::sort(gp.begin(), gp.end());
  gp.erase(std::unique(gp.begin(), gp.end()), gp.end());
  if (gp.size() != g.Gp.size()) fail("Gp lists an element twice");
  for (int x : gp)
    if (!in_range(x)) fail("Gp element out of range");
  if (!rep.ok()) return rep;
  auto cyc = g.generated_subgroup({g.frobenius});
  if (cyc != gp) {
    std::ostringstream os;
    os << "Gp is not generated by frobenius (<frob> has order " << cyc.size() << ", Gp has "
       << gp.size() << " elements)";
    fail(os.str());
  } else {
    rep.notes.push_back("Gp is cyclic of order " + std::to_string(gp.size()) +
                        ", generated by frobenius");
  }
  return rep;
}

PMatrix idempotent_matrix(IdempotentKind kind, const PRep& units, const PRep* rho,
                          const FieldElement* beta) {
  const auto& g = *units.group;
  const int r = units.dim;
  PMatrix acc(r, r);
  for (Eigen::Index i = 0; i < acc.size(); ++i) acc.data()[i] = FieldElement(0);
  switch (kind) {
    case IdempotentKind::Isotypic: {
      if (!rho) throw std::invalid_argument("isotypic idempotent needs a representation");
      for (int x = 0; x < g.order; ++x) {
        const FieldElement c = rho->character(g.inv(x));
        acc += units(x) * c;
      }
      const FieldPtr& k = units(0)(0, 0).is_typed() ? units(0)(0, 0).field()
                                                     : rho->matrices[0](0, 0).field();
      const FieldElement scale = k->from_rational(Rational(rho->dim, g.order));
      acc *= scale;
      break;
    }
    case IdempotentKind::WPlus: {
      if (!beta) throw std::invalid_argument("W+ idempotent needs beta");
      if (beta->is_zero()) throw std::invalid_argument("beta must be nonzero");
      const FieldElement binv = beta->inverse();
      FieldElement c = FieldElement(1);
      int x = 0;
      for (std::size_t i = 0; i < g.Gp.size(); ++i) {
        acc += units(x) * c;
        c *= binv;
        x = g.mul(x, g.frobenius);
      }
      break;
    }
    case IdempotentKind::WOne: {
      int x = 0;
      for (std::size_t i = 0; i < g.Gp.size(); ++i) {
        acc += units(x);
        x = g.mul(x, g.frobenius);
      }
      break;
    }
  }
  return acc;
}

PVector apply_idempotent(IdempotentKind kind, const PRep& units, const PVector& u, const PRep* rho,
                         const FieldElement* beta) {
  return idempotent_matrix(kind, units, rho, beta) * u;
}

}  // namespace linv
