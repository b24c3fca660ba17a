#include "fanocpx/polyhedral.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace fanocpx {

namespace {

class Bits {
 public:
  explicit Bits(size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(size_t i) {
    if (i / 64 >= w_.size()) w_.resize(i / 64 + 1, 0);
    w_[i / 64] |= (std::uint64_t{1} << (i % 64));
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.w_.resize(std::min(w_.size(), o.w_.size()));
    for (size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  bool superset_of(const Bits& o) const {
    for (size_t i = 0; i < o.w_.size(); ++i) {
      std::uint64_t mine = i < w_.size() ? w_[i] : 0;
      if ((o.w_[i] & ~mine) != 0) return false;
    }
    return true;
  }
  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }

 private:
  std::vector<std::uint64_t> w_;
};

struct DDRay {
  IntVector v;
  Bits zeros;
};

IntMatrix stack_rows(const std::vector<IntVector>& rows, Eigen::Index dim) {
  IntMatrix M(static_cast<Eigen::Index>(rows.size()), dim);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw GeometryError("dimension mismatch");
    M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return M;
}

std::vector<IntVector> columns_of(const IntMatrix& M) {
  std::vector<IntVector> out;
  for (Eigen::Index j = 0; j < M.cols(); ++j) out.push_back(M.col(j));
  return out;
}

std::vector<IntVector> rows_of(const IntMatrix& M) {
  std::vector<IntVector> out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) out.push_back(M.row(i).transpose());
  return out;
}

void sort_unique(std::vector<IntVector>& vs) {
  std::sort(vs.begin(), vs.end(), [](const IntVector& a, const IntVector& b) { return lex_less(a, b); });
  vs.erase(std::unique(vs.begin(), vs.end(), [](const IntVector& a, const IntVector& b) { return a == b; }),
           vs.end());
}

// Extreme rays of the pointed full-dimensional cone {y in Q^k : A y >= 0}.
std::vector<IntVector> pointed_rays(const std::vector<IntVector>& A, Eigen::Index k) {
  if (k == 0) return {};
  std::vector<size_t> basis;
  {
    RatMatrix acc(0, k);
    for (size_t i = 0; i < A.size() && static_cast<Eigen::Index>(basis.size()) < k; ++i) {
      RatMatrix next(acc.rows() + 1, k);
      next.topRows(acc.rows()) = acc;
      next.row(acc.rows()) = to_rational(A[i]).transpose();
      if (rank(next) > acc.rows()) {
        acc = next;
        basis.push_back(i);
      }
    }
    if (static_cast<Eigen::Index>(basis.size()) < k) throw GeometryError("internal: cone not pointed");
  }
  RatMatrix R0(k, k);
  for (Eigen::Index i = 0; i < k; ++i) R0.row(i) = to_rational(A[basis[static_cast<size_t>(i)]]).transpose();
  // Columns of R0^{-1}.
  std::vector<DDRay> rays;
  for (Eigen::Index j = 0; j < k; ++j) {
    RatVector e = zero_vector<Rational>(k);
    e(j) = 1;
    auto sol = solve(R0, e);
    DDRay r{primitive(*sol), Bits(A.size())};
    for (Eigen::Index i = 0; i < k; ++i)
      if (i != j) r.zeros.set(basis[static_cast<size_t>(i)]);
    rays.push_back(std::move(r));
  }
  std::vector<bool> in_basis(A.size(), false);
  for (auto b : basis) in_basis[b] = true;

  for (size_t ci = 0; ci < A.size(); ++ci) {
    if (in_basis[ci]) continue;
    const IntVector& a = A[ci];
    std::vector<Integer> val(rays.size());
    std::vector<size_t> pos, neg, zer;
    for (size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(a, rays[r].v);
      if (val[r] > 0)
        pos.push_back(r);
      else if (val[r] < 0)
        neg.push_back(r);
      else
        zer.push_back(r);
    }
    if (neg.empty()) {
      for (auto r : zer) rays[r].zeros.set(ci);
      continue;
    }
    std::vector<DDRay> next;
    for (auto p : pos) {
      for (auto n : neg) {
        Bits common = rays[p].zeros & rays[n].zeros;
        if (common.count() < k - 2) continue;
        bool adjacent = true;
        for (size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == n) continue;
          if (rays[o].zeros.superset_of(common)) adjacent = false;
        }
        if (!adjacent) continue;
        IntVector v = IntVector(rays[n].v * val[p] - rays[p].v * val[n]);
        DDRay nr{primitive(v), common};
        nr.zeros.set(ci);
        next.push_back(std::move(nr));
      }
    }
    for (auto p : pos) next.push_back(rays[p]);
    for (auto z : zer) {
      DDRay r = rays[z];
      r.zeros.set(ci);
      next.push_back(std::move(r));
    }
    rays = std::move(next);
  }
  std::vector<IntVector> out;
  for (auto& r : rays) out.push_back(r.v);
  return out;
}

}  // namespace

ConeRays rays_from_inequalities(Eigen::Index dim, const std::vector<IntVector>& inequalities,
                                const std::vector<IntVector>& equations) {
  ConeRays out;
  std::vector<IntVector> all = inequalities;
  all.insert(all.end(), equations.begin(), equations.end());
  IntMatrix AE = stack_rows(all, dim);
  IntMatrix Lin = rational_kernel(to_rational(AE));  // columns
  if (Lin.cols() > 0) out.lineality = rows_of(saturation(Lin.transpose()));
  // Subspace {E x = 0} intersected with the orthogonal complement of the lineality.
  std::vector<IntVector> cut = equations;
  for (auto& l : out.lineality) cut.push_back(l);
  IntMatrix B;
  if (cut.empty())
    B = identity<Integer>(dim);
  else
    B = rational_kernel(to_rational(stack_rows(cut, dim)));
  const Eigen::Index k = B.cols();
  std::vector<IntVector> Ay;
  for (const auto& a : inequalities) {
    IntVector row = B.transpose() * a;
    if (!is_zero(row)) Ay.push_back(row);
  }
  std::vector<IntVector> ys = pointed_rays(Ay, k);
  for (auto& y : ys) out.rays.push_back(primitive(IntVector(B * y)));
  sort_unique(out.rays);
  return out;
}

// ---- cones ----------------------------------------------------------------

void RationalCone::finish_from_rays() {
  // Halfspaces from the dual cone.
  std::vector<IntVector> g = generators();
  ConeRays d = rays_from_inequalities(dim_, g);
  equations_ = d.lineality;
  facets_ = d.rays;
}

std::vector<IntVector> RationalCone::generators() const {
  std::vector<IntVector> g;
  for (const auto& l : lineality_) {
    g.push_back(l);
    g.push_back(IntVector(-l));
  }
  for (const auto& r : rays_) g.push_back(r);
  return g;
}

RationalCone RationalCone::from_generators(Eigen::Index dim, const std::vector<IntVector>& gens) {
  RationalCone C;
  C.dim_ = dim;
  std::vector<IntVector> gs;
  for (const auto& g : gens) {
    if (g.size() != dim) throw GeometryError("dimension mismatch");
    if (!is_zero(g)) gs.push_back(primitive(g));
  }
  // dual cone first, then the cone's own minimal V-description from it
  ConeRays d = rays_from_inequalities(dim, gs);
  C.equations_ = d.lineality;
  C.facets_ = d.rays;
  ConeRays v = rays_from_inequalities(dim, C.facets_, C.equations_);
  C.lineality_ = v.lineality;
  C.rays_ = v.rays;
  return C;
}

RationalCone RationalCone::from_generators(Eigen::Index dim, const std::vector<RatVector>& gens) {
  std::vector<IntVector> g;
  for (const auto& v : gens) g.push_back(primitive(v));
  return from_generators(dim, g);
}

RationalCone RationalCone::from_inequalities(Eigen::Index dim, const std::vector<IntVector>& ineqs,
                                             const std::vector<IntVector>& eqs) {
  RationalCone C;
  C.dim_ = dim;
  ConeRays v = rays_from_inequalities(dim, ineqs, eqs);
  C.lineality_ = v.lineality;
  C.rays_ = v.rays;
  C.finish_from_rays();
  return C;
}

namespace {

IntVector scaled(const RatVector& v) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) l = lcm(l, denom(v(i)));
  IntVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = numer(v(i)) * (l / denom(v(i)));
  return out;
}

}  // namespace

bool contains(const RationalCone& C, const IntVector& v) {
  if (v.size() != C.ambient_dim()) throw GeometryError("dimension mismatch");
  for (const auto& e : C.equations())
    if (dot(e, v) != 0) return false;
  for (const auto& f : C.facets())
    if (dot(f, v) < 0) return false;
  return true;
}

bool contains(const RationalCone& C, const RatVector& v) { return contains(C, scaled(v)); }

bool relint_contains(const RationalCone& C, const IntVector& v) {
  if (v.size() != C.ambient_dim()) throw GeometryError("dimension mismatch");
  for (const auto& e : C.equations())
    if (dot(e, v) != 0) return false;
  for (const auto& f : C.facets())
    if (dot(f, v) <= 0) return false;
  return true;
}

bool relint_contains(const RationalCone& C, const RatVector& v) { return relint_contains(C, scaled(v)); }

RationalCone dual(const RationalCone& C) {
  std::vector<IntVector> g = C.facets();
  for (const auto& e : C.equations()) {
    g.push_back(e);
    g.push_back(IntVector(-e));
  }
  return RationalCone::from_generators(C.ambient_dim(), g);
}

RationalCone intersect(const RationalCone& a, const RationalCone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw GeometryError("dimension mismatch");
  std::vector<IntVector> ineq = a.facets(), eq = a.equations();
  ineq.insert(ineq.end(), b.facets().begin(), b.facets().end());
  eq.insert(eq.end(), b.equations().begin(), b.equations().end());
  return RationalCone::from_inequalities(a.ambient_dim(), ineq, eq);
}

bool is_full_dimensional(const RationalCone& C) { return C.equations().empty(); }

bool is_all_of_space(const RationalCone& C) { return C.equations().empty() && C.facets().empty(); }

bool is_pointed(const RationalCone& C) { return C.lineality().empty(); }

bool same_cone(const RationalCone& a, const RationalCone& b) {
  if (a.ambient_dim() != b.ambient_dim()) return false;
  for (const auto& g : a.generators())
    if (!contains(b, g)) return false;
  for (const auto& g : b.generators())
    if (!contains(a, g)) return false;
  return true;
}

// ---- polytopes ------------------------------------------------------------

namespace {

IntVector homogenize(const RatVector& p) {
  RatVector h(p.size() + 1);
  h(0) = 1;
  h.tail(p.size()) = p;
  return primitive(h);
}

}  // namespace

void RationalPolytope::build_from_homogeneous(const RationalCone& hc) {
  vertices_.clear();
  for (const auto& r : hc.rays()) {
    RatVector v(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) v(i) = Rational(r(i + 1)) / Rational(r(0));
    vertices_.push_back(v);
  }
  std::sort(vertices_.begin(), vertices_.end(), [](const RatVector& a, const RatVector& b) { return lex_less(a, b); });
  inequalities_ = hc.facets();
  equations_ = hc.equations();
}

RationalPolytope RationalPolytope::from_points(Eigen::Index dim, const std::vector<RatVector>& points) {
  RationalPolytope P;
  P.dim_ = dim;
  if (points.empty()) return P;
  std::vector<IntVector> h;
  for (const auto& p : points) {
    if (p.size() != dim) throw GeometryError("dimension mismatch");
    h.push_back(homogenize(p));
  }
  P.build_from_homogeneous(RationalCone::from_generators(dim + 1, h));
  return P;
}

RationalPolytope RationalPolytope::from_points(Eigen::Index dim, const std::vector<IntVector>& points) {
  std::vector<RatVector> q;
  for (const auto& p : points) q.push_back(to_rational(p));
  return from_points(dim, q);
}

RationalPolytope RationalPolytope::from_inequalities(Eigen::Index dim, const std::vector<IntVector>& ineqs,
                                                     const std::vector<IntVector>& eqs) {
  std::vector<IntVector> hin = ineqs;
  IntVector t = zero_vector<Integer>(dim + 1);
  t(0) = 1;
  hin.push_back(t);
  for (const auto& a : hin)
    if (a.size() != dim + 1) throw GeometryError("dimension mismatch");
  ConeRays cr = rays_from_inequalities(dim + 1, hin, eqs);
  bool any_vertex = false;
  for (const auto& r : cr.rays)
    if (r(0) > 0) any_vertex = true;
  RationalPolytope P;
  P.dim_ = dim;
  if (!any_vertex) return P;
  if (!cr.lineality.empty()) throw GeometryError("unbounded");
  std::vector<IntVector> verts;
  for (const auto& r : cr.rays) {
    if (r(0) == 0) throw GeometryError("unbounded");
    verts.push_back(r);
  }
  P.build_from_homogeneous(RationalCone::from_generators(dim + 1, verts));
  return P;
}

Eigen::Index RationalPolytope::dimension() const {
  if (vertices_.empty()) return -1;
  return dim_ - static_cast<Eigen::Index>(equations_.size());
}

namespace {

// a0 * t + a.x over an integral point x (t = 1), or over a scaled rational point.
Integer affine_value(const IntVector& a, const IntVector& x) {
  Integer s = a(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) s += a(i + 1) * x(i);
  return s;
}

Integer affine_value(const IntVector& a, const RatVector& x) {
  IntVector h = homogenize(x);
  return dot(a, h);
}

}  // namespace

bool contains(const RationalPolytope& P, const IntVector& x) {
  if (P.empty()) return false;
  for (const auto& e : P.equations())
    if (affine_value(e, x) != 0) return false;
  for (const auto& f : P.inequalities())
    if (affine_value(f, x) < 0) return false;
  return true;
}

bool contains(const RationalPolytope& P, const RatVector& x) {
  if (P.empty()) return false;
  for (const auto& e : P.equations())
    if (affine_value(e, x) != 0) return false;
  for (const auto& f : P.inequalities())
    if (affine_value(f, x) < 0) return false;
  return true;
}

bool interior_contains(const RationalPolytope& P, const RatVector& x) {
  if (P.empty() || !P.equations().empty()) return false;
  for (const auto& f : P.inequalities())
    if (affine_value(f, x) <= 0) return false;
  return true;
}

std::vector<IntVector> lattice_points(const RationalPolytope& P) {
  std::vector<IntVector> out;
  if (P.empty()) return out;
  const Eigen::Index d = P.ambient_dim();
  IntVector lo(d), hi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    lo(i) = ceil_q(P.vertices()[0](i));
    hi(i) = floor_q(P.vertices()[0](i));
    for (const auto& v : P.vertices()) {
      lo(i) = std::min(lo(i), ceil_q(v(i)));
      hi(i) = std::max(hi(i), floor_q(v(i)));
    }
    if (lo(i) > hi(i)) return out;
  }
  if (d == 0) {
    out.push_back(IntVector(0));
    return out;
  }
  IntVector x = lo;
  for (;;) {
    if (contains(P, x)) out.push_back(x);
    Eigen::Index i = d - 1;
    while (i >= 0 && x(i) == hi(i)) {
      x(i) = lo(i);
      --i;
    }
    if (i < 0) break;
    x(i) += 1;
  }
  return out;
}

RationalPolytope dual_polytope(const RationalPolytope& P) {
  RatVector origin = zero_vector<Rational>(P.ambient_dim());
  if (!interior_contains(P, origin)) throw GeometryError("origin not interior");
  std::vector<IntVector> ineqs;
  for (const auto& b : P.vertices()) ineqs.push_back(homogenize(b));
  return RationalPolytope::from_inequalities(P.ambient_dim(), ineqs);
}

RationalPolytope fiber_polytope(const IntMatrix& Qfree, const IntVector& w) {
  const Eigen::Index n = Qfree.cols();
  std::vector<IntVector> ineqs, eqs;
  for (Eigen::Index i = 0; i < n; ++i) {
    IntVector a = zero_vector<Integer>(n + 1);
    a(i + 1) = 1;
    ineqs.push_back(a);
  }
  for (Eigen::Index j = 0; j < Qfree.rows(); ++j) {
    IntVector a(n + 1);
    a(0) = -w(j);
    a.tail(n) = Qfree.row(j).transpose();
    eqs.push_back(a);
  }
  RationalPolytope F = RationalPolytope::from_inequalities(n, ineqs, eqs);
  if (F.empty()) throw GeometryError("empty fiber");
  return F;
}

RationalPolytope fiber_polytope(const ClassGroup& Q, const KElement& w) {
  // Torsion coordinates vanish over Q; they do not cut the rational fiber.
  return fiber_polytope(IntMatrix(Q.projection.topRows(Q.free_rank)), w.free);
}

}  // namespace fanocpx
