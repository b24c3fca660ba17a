#include "fanocpx/accomplex.hpp"

#include <algorithm>
#include <set>

namespace fanocpx {

namespace {

struct IntLess {
  bool operator()(const IntVector& a, const IntVector& b) const {
    return a.size() != b.size() ? a.size() < b.size() : lex_less(a, b);
  }
};

struct RatLess {
  bool operator()(const RatVector& a, const RatVector& b) const {
    return a.size() != b.size() ? a.size() < b.size() : lex_less(a, b);
  }
};

RatVector lower_part(const RatVector& v, int r) { return v.tail(v.size() - r); }

// Integer row (a0, a) for the rational inequality c0 + c.x >= 0.
IntVector scaled_inequality(const Rational& c0, const RatVector& c) {
  Integer den = denom(c0);
  for (Eigen::Index i = 0; i < c.size(); ++i) den = lcm(den, denom(c(i)));
  IntVector out(c.size() + 1);
  out(0) = numer(c0 * den);
  for (Eigen::Index i = 0; i < c.size(); ++i) out(i + 1) = numer(c(i) * den);
  return out;
}

bool column_in_leaf(const DefiningPair& dp, int col, int i) { return dp.is_free(col) || dp.block_of(col) == i; }

}  // namespace

IntVector leaf_direction(int r, int i) {
  IntVector e = zero_vector<Integer>(r);
  if (i == 0)
    e.setConstant(-1);
  else
    e(i - 1) = 1;
  return e;
}

RatVector leaf_to_ambient(int r, int i, const RatVector& p) {
  const Eigen::Index s = p.size() - 1;
  RatVector v(r + s);
  v.head(r) = to_rational(leaf_direction(r, i)) * p(0);
  v.tail(s) = p.tail(s);
  return v;
}

IntVector leaf_to_ambient(int r, int i, const IntVector& p) {
  const Eigen::Index s = p.size() - 1;
  IntVector v(r + s);
  v.head(r) = leaf_direction(r, i) * p(0);
  v.tail(s) = p.tail(s);
  return v;
}

int tropical_position(int r, const RatVector& v) {
  RatVector u = v.head(r);
  if (is_zero(u)) return -1;
  bool all_negative_equal = true;
  for (int k = 0; k < r; ++k) all_negative_equal = all_negative_equal && u(k) == u(0) && u(k) < 0;
  if (all_negative_equal) return 0;
  int nonzero = -1;
  for (int k = 0; k < r; ++k) {
    if (u(k) == 0) continue;
    if (nonzero >= 0 || u(k) < 0) return -2;
    nonzero = k;
  }
  return nonzero + 1;
}

bool meets_leaf_interior(const DefiningPair& dp, FaceMask cone, int i) {
  const int r = dp.r;
  const Eigen::Index d = r + dp.s;
  std::vector<IntVector> span;
  IntVector e = zero_vector<Integer>(d);
  e.head(r) = leaf_direction(r, i);
  span.push_back(e);
  span.push_back(IntVector(-e));
  for (int k = 0; k < dp.s; ++k) {
    IntVector u = zero_vector<Integer>(d);
    u(r + k) = 1;
    span.push_back(u);
    span.push_back(IntVector(-u));
  }
  RationalCone C = intersect(column_cone(dp, cone), RationalCone::from_generators(d, span));
  for (const auto& v : C.rays())
    if (tropical_position(r, to_rational(v)) == i) return true;
  for (const auto& v : C.lineality())
    if (!is_zero(IntVector(v.head(r)))) return true;
  return false;
}

std::string to_string(ConeType t) {
  switch (t) {
    case ConeType::big:
      return "big";
    case ConeType::elementary_big:
      return "elementary-big";
    case ConeType::leaf:
      return "leaf";
    case ConeType::other:
      return "other";
  }
  return "?";
}

ConeType classify_cone(const DefiningPair& dp, const RelevantData& rd, FaceMask cone) {
  if (!rd.in_sigma(cone)) throw PreconditionError("cone is not in Sigma");
  std::vector<int> cols = mask_columns(cone);
  for (int i = 0; i <= dp.r; ++i)
    if (std::all_of(cols.begin(), cols.end(), [&](int c) { return column_in_leaf(dp, c, i); })) return ConeType::leaf;
  for (int i = 0; i <= dp.r; ++i)
    if (!meets_leaf_interior(dp, cone, i)) return ConeType::other;
  std::vector<int> per_block(dp.r + 1, 0);
  for (int c : cols) {
    if (dp.is_free(c)) return ConeType::big;
    ++per_block[dp.block_of(c)];
  }
  bool one_each = std::all_of(per_block.begin(), per_block.end(), [](int k) { return k == 1; });
  return one_each ? ConeType::elementary_big : ConeType::big;
}

bool has_big_cone(const DefiningPair& dp, const RelevantData& rd) {
  for (FaceMask s : rd.sigma_maximal) {
    ConeType t = classify_cone(dp, rd, s);
    if (t == ConeType::big || t == ConeType::elementary_big) return true;
  }
  return false;
}

ExponentChecks platonic_and_terminal_exponent_checks(std::vector<Integer> l) {
  std::sort(l.begin(), l.end(), std::greater<>());
  while (l.size() < 3) l.push_back(1);
  ExponentChecks out;
  out.at_most_two_nontrivial = std::count_if(l.begin(), l.end(), [](const Integer& x) { return x > 1; }) <= 2;
  bool tail_ones = std::all_of(l.begin() + 3, l.end(), [](const Integer& x) { return x == 1; });
  const Integer &x = l[0], &y = l[1], &z = l[2];
  bool triple = z == 1 || (y == 2 && z == 2) || (x == 3 && y == 3 && z == 2) || (x == 4 && y == 3 && z == 2) ||
                (x == 5 && y == 3 && z == 2);
  out.platonic = tail_ones && triple;
  return out;
}

FaceMask PElementaryCone::mask() const {
  FaceMask f = 0;
  for (int c : columns) f |= FaceMask(1) << c;
  return f;
}

PElementaryCone elementary_invariants(const DefiningPair& dp, const std::vector<int>& columns) {
  if (static_cast<int>(columns.size()) != dp.r + 1) throw PreconditionError("need one column per block");
  PElementaryCone e;
  e.columns = columns;
  Integer prod = 1;
  for (int i = 0; i <= dp.r; ++i) {
    if (dp.block_of(columns[i]) != i) throw PreconditionError("need one column per block");
    e.exponents.push_back(dp.l_of(columns[i]));
    prod *= e.exponents.back();
  }
  e.ell = -(dp.r - 1) * prod;
  e.v_sigma = zero_vector<Integer>(dp.r + dp.s);
  for (int i = 0; i <= dp.r; ++i) {
    e.ell_rho.push_back(prod / e.exponents[i]);
    e.ell += e.ell_rho.back();
    e.v_sigma += e.ell_rho.back() * dp.column_vector(columns[i]);
  }
  if (!is_zero(IntVector(e.v_sigma.head(dp.r)))) throw std::logic_error("v_sigma leaves the lineality space");
  if (e.ell > 0) e.v_prime = to_rational(e.v_sigma) / Rational(e.ell);
  return e;
}

RatVector elementary_vertex(const DefiningPair& dp, const std::vector<int>& columns) {
  PElementaryCone e = elementary_invariants(dp, columns);
  if (!e.v_prime) throw PreconditionError("ell_sigma <= 0: the anticanonical complex is unbounded");
  return *e.v_prime;
}

std::vector<PElementaryCone> all_elementary_cones(const DefiningPair& dp) {
  std::vector<PElementaryCone> out;
  std::vector<int> idx(dp.r + 1, 0);
  for (;;) {
    std::vector<int> cols;
    for (int i = 0; i <= dp.r; ++i) cols.push_back(dp.column(i, idx[i]));
    out.push_back(elementary_invariants(dp, cols));
    int i = dp.r;
    while (i >= 0 && ++idx[i] == dp.ns[i]) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

std::vector<PElementaryCone> contributing_elementary_cones(const DefiningPair& dp, const RelevantData& rd) {
  std::vector<PElementaryCone> out;
  for (auto& e : all_elementary_cones(dp)) {
    FaceMask f = e.mask();
    if (std::any_of(rd.sigma_maximal.begin(), rd.sigma_maximal.end(), [&](FaceMask s) { return (s & f) == f; }))
      out.push_back(std::move(e));
  }
  return out;
}

std::optional<PElementaryCone> log_terminal_witness(const DefiningPair& dp, const RelevantData& rd) {
  for (auto& e : contributing_elementary_cones(dp, rd)) {
    bool platonic = platonic_and_terminal_exponent_checks(e.exponents).platonic;
    if (platonic != (e.ell > 0)) throw std::logic_error("platonic test disagrees with the sign of ell_sigma");
    if (e.ell <= 0) return e;
  }
  return std::nullopt;
}

bool is_log_terminal(const DefiningPair& dp, const RelevantData& rd) { return !log_terminal_witness(dp, rd); }

LeafComplex build_leaf_complex(const DefiningPair& dp, const RelevantData& rd, LeafComplexOptions opt) {
  std::vector<PElementaryCone> cones =
      opt.restrict_to_sigma ? contributing_elementary_cones(dp, rd) : all_elementary_cones(dp);
  const int r = dp.r, s = dp.s;
  std::set<RatVector, RatLess> lin;
  for (int k = 0; k < dp.m; ++k) lin.insert(lower_part(to_rational(dp.column_vector(dp.free_column(k))), r));
  for (auto& e : cones) {
    if (!e.v_prime) throw PreconditionError("ell_sigma <= 0: the anticanonical complex is unbounded");
    lin.insert(lower_part(*e.v_prime, r));
  }
  LeafComplex lc;
  lc.lineality_points.assign(lin.begin(), lin.end());
  if (!lc.lineality_points.empty()) lc.lineality = RationalPolytope::from_points(s, lc.lineality_points);
  for (int i = 0; i <= r; ++i) {
    std::vector<RatVector> pts;
    std::vector<IntVector> allowed{zero_vector<Integer>(1 + s)};
    for (auto& u : lc.lineality_points) {
      RatVector p(1 + s);
      p(0) = 0;
      p.tail(s) = u;
      pts.push_back(p);
    }
    for (int c = 0; c < dp.columns(); ++c) {
      if (!column_in_leaf(dp, c, i)) continue;
      IntVector v = dp.column_vector(c);
      IntVector p(1 + s);
      p(0) = dp.is_free(c) ? Integer(0) : dp.l_of(c);
      p.tail(s) = v.tail(s);
      allowed.push_back(p);
      if (!dp.is_free(c)) pts.push_back(to_rational(p));
    }
    lc.leaves.push_back(RationalPolytope::from_points(1 + s, pts));
    std::sort(allowed.begin(), allowed.end(), IntLess{});
    lc.allowed.push_back(allowed);
  }
  return lc;
}

std::optional<LatticeWitness> terminal_witness(const DefiningPair& dp, const LeafComplex& lc) {
  std::optional<LatticeWitness> later;
  for (int i = 0; i <= dp.r; ++i) {
    for (auto& p : lattice_points(lc.leaves[i])) {
      if (std::binary_search(lc.allowed[i].begin(), lc.allowed[i].end(), p, IntLess{})) continue;
      LatticeWitness w{i, p(0) == 0, p, leaf_to_ambient(dp.r, i, p)};
      if (w.in_lineality) return w;
      if (!later) later = w;
    }
  }
  return later;
}

bool is_terminal(const DefiningPair& dp, const RelevantData& rd) {
  if (!is_log_terminal(dp, rd)) return false;
  return !terminal_witness(dp, build_leaf_complex(dp, rd));
}

std::vector<IntVector> leaf_complex_lattice_points(const DefiningPair& dp, const LeafComplex& lc) {
  std::set<IntVector, IntLess> out;
  for (int i = 0; i <= dp.r; ++i)
    for (auto& p : lattice_points(lc.leaves[i])) out.insert(leaf_to_ambient(dp.r, i, p));
  return {out.begin(), out.end()};
}

std::vector<IntVector> dual_polytope_oracle(const DefiningPair& dp, const GradingData& g, const RelevantData& rd,
                                            int max_columns) {
  const int N = dp.columns(), r = dp.r, s = dp.s;
  if (N > max_columns) throw PreconditionError("instance too large for the dual polytope oracle");
  RationalPolytope F = fiber_polytope(g.Q, g.kappa.free);
  if (F.empty()) throw PreconditionError("empty anticanonical fiber");

  std::vector<RatVector> B{RatVector::Zero(N)};
  auto exponent_vector = [&](int i) {
    RatVector e = RatVector::Zero(N);
    for (int j = 0; j < dp.ns[i]; ++j) e(dp.column(i, j)) = Rational(dp.l[i][j]);
    return e;
  };
  for (int k = 0; k + 2 <= r; ++k) {
    std::set<RatVector, RatLess> next;
    for (auto& b : B)
      for (int a = k; a <= k + 2; ++a) next.insert(RatVector(b + exponent_vector(a)));
    B.assign(next.begin(), next.end());
  }

  const RatMatrix Pt = to_rational(IntMatrix(dp.P().transpose()));
  std::set<RatVector, RatLess> BX;
  for (auto& f : F.vertices())
    for (auto& b : B) {
      RatVector x = f + b - RatVector::Ones(N);
      auto u = solve(Pt, x);
      if (!u) throw std::logic_error("shifted fiber point outside the image of P*");
      BX.insert(*u);
    }

  std::vector<RationalCone> maximal;
  for (FaceMask f : rd.sigma_maximal) maximal.push_back(column_cone(dp, f));

  std::set<IntVector, IntLess> out;
  for (int i = 0; i <= r; ++i) {
    const RatVector e = to_rational(leaf_direction(r, i));
    std::vector<IntVector> ineqs;
    for (auto& u : BX) {
      RatVector c(1 + s);
      c(0) = dot(RatVector(u.head(r)), e);
      c.tail(s) = u.tail(s);
      ineqs.push_back(scaled_inequality(Rational(1), c));
    }
    IntVector t_nonneg = zero_vector<Integer>(2 + s);
    t_nonneg(1) = 1;
    ineqs.push_back(t_nonneg);
    RationalPolytope leaf;
    try {
      leaf = RationalPolytope::from_inequalities(1 + s, ineqs);
    } catch (const GeometryError&) {
      throw PreconditionError("anticanonical polyhedron is unbounded on a leaf");
    }
    for (auto& p : lattice_points(leaf)) {
      IntVector v = leaf_to_ambient(r, i, p);
      if (std::any_of(maximal.begin(), maximal.end(), [&](const RationalCone& C) { return contains(C, v); }))
        out.insert(v);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace fanocpx
