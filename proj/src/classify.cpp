#include "fanocpx/classify.hpp"

#include "fanocpx/accomplex.hpp"
#include "fanocpx/report.hpp"
#include "fanocpx/table.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace fanocpx {

const std::vector<Constellation>& constellations() {
  static const std::vector<Constellation> list = {
      {"1a", 3, 0, 2, {3, 3, 1}},       {"1b", 3, 0, 3, {3, 3, 1, 1}},       {"1c", 3, 0, 3, {2, 2, 2, 2}},
      {"1d", 3, 0, 4, {2, 2, 2, 2, 1}}, {"1e", 3, 0, 5, {2, 2, 2, 2, 1, 1}}, {"2a", 2, 0, 2, {2, 2, 2}},
      {"2b", 2, 0, 3, {2, 2, 2, 1}},    {"2c", 2, 0, 4, {2, 2, 2, 1, 1}},    {"2d", 2, 0, 2, {3, 2, 1}},
      {"2e", 2, 0, 3, {3, 2, 1, 1}},    {"2f", 2, 0, 2, {4, 1, 1}},          {"2g", 2, 1, 2, {2, 2, 1}},
      {"2h", 2, 1, 3, {2, 2, 1, 1}},    {"2i", 2, 1, 2, {3, 1, 1}},          {"2j", 2, 2, 2, {2, 1, 1}},
  };
  return list;
}

const Constellation& constellation(const std::string& name) {
  for (const auto& c : constellations())
    if (c.name == name) return c;
  throw std::invalid_argument("unknown constellation " + name);
}

SearchBudget SearchBudget::from_env() {
  SearchBudget b;
  if (const char* env = std::getenv("FANOCPX_BUDGET"); env && *env) b.d_cap = std::atoi(env);
  return b;
}

namespace {

using i64 = long long;
using Exponents = std::vector<std::vector<i64>>;

struct W2 {
  i64 x = 0, y = 0;
  auto operator<=>(const W2&) const = default;
  W2 operator+(W2 o) const { return {x + o.x, y + o.y}; }
  W2 operator-(W2 o) const { return {x - o.x, y - o.y}; }
};
W2 operator*(i64 k, W2 w) { return {k * w.x, k * w.y}; }
i64 det(W2 a, W2 b) { return a.x * b.y - a.y * b.x; }

struct Shape {
  int r = 0, m = 0, N = 0;
  std::vector<int> ns, offset;
  std::vector<FaceMask> f_faces;  // nonzero F-faces
};

Shape make_shape(const Constellation& c) {
  Shape sh;
  sh.r = c.r;
  sh.m = c.m;
  sh.ns = c.ns;
  int off = 0;
  for (int n : c.ns) {
    sh.offset.push_back(off);
    off += n;
  }
  sh.N = off + c.m;
  DefiningPair probe;
  probe.r = c.r;
  probe.ns = c.ns;
  probe.m = c.m;
  for (FaceMask f = 1; f <= full_mask(sh.N); ++f)
    if (is_F_face(probe, f)) sh.f_faces.push_back(f);
  return sh;
}

// Sorted tuples per block; size-one blocks need an exponent >= 2; blocks of equal size ordered.
std::vector<Exponents> exponent_assignments(const Shape& sh, int cap) {
  auto tuples = [&](int n) {
    std::vector<std::vector<i64>> out;
    std::vector<i64> cur(static_cast<std::size_t>(n), 1);
    for (;;) {
      if (!(n == 1 && cur[0] == 1)) out.push_back(cur);
      int k = n - 1;
      while (k >= 0 && cur[k] == cap) --k;
      if (k < 0) break;
      ++cur[k];
      for (int t = k + 1; t < n; ++t) cur[t] = cur[k];
    }
    return out;
  };
  std::vector<Exponents> out;
  Exponents cur(sh.ns.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == sh.ns.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& t : tuples(sh.ns[i])) {
      if (i > 0 && sh.ns[i] == sh.ns[i - 1] && t < cur[i - 1]) continue;
      cur[i] = t;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

i64 gcd_minors(const std::vector<W2>& w, FaceMask f) {
  i64 g = 0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (!has_column(f, static_cast<int>(a))) continue;
    for (std::size_t b = a + 1; b < w.size(); ++b)
      if (has_column(f, static_cast<int>(b))) g = std::gcd(g, det(w[a], w[b]));
    if (g == 1) return 1;
  }
  return g;
}

std::string exponents_str(const Exponents& l) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < l.size(); ++i) {
    os << (i ? "," : "") << "(";
    for (std::size_t j = 0; j < l[i].size(); ++j) os << (j ? "," : "") << l[i][j];
    os << ")";
  }
  os << "]";
  return os.str();
}

struct QData {
  std::vector<W2> w;
  std::vector<FaceMask> rlv, cov;
};

// Elementary cones inside a maximal cone: at most two exponents differ from one.
bool exponent_criterion(const Shape& sh, const Exponents& l, const std::vector<FaceMask>& cov) {
  const FaceMask all = full_mask(sh.N);
  for (FaceMask f : cov) {
    const FaceMask comp = all & ~f;
    int nontrivial = 0;
    bool every_block = true;
    for (std::size_t i = 0; i < sh.ns.size(); ++i) {
      bool any = false, high = false;
      for (int j = 0; j < sh.ns[i]; ++j)
        if (has_column(comp, sh.offset[i] + j)) {
          any = true;
          high = high || l[i][j] != 1;
        }
      every_block = every_block && any;
      nontrivial += high;
    }
    if (every_block && nontrivial > 2) return false;
  }
  return true;
}

// Grading-level filters: combinatorial minimality, generation, Fano, Q-factoriality, positive
// strata factorial on the free part, and the exponent condition for terminal elementary cones.
bool grading_filters(const Shape& sh, const Exponents& l, W2 ray2, QData& qd) {
  const auto& w = qd.w;
  int on1 = 0, on2 = 0;
  for (const auto& v : w) {
    on1 += v.y == 0;
    on2 += det(ray2, v) == 0;
  }
  if (on1 < 2 || on2 < 2) return false;
  if (gcd_minors(w, full_mask(sh.N)) != 1) return false;
  W2 mu;
  for (int j = 0; j < sh.ns[0]; ++j) mu = mu + l[0][j] * w[sh.offset[0] + j];
  W2 kappa = W2{} - (sh.r - 1) * mu;
  for (const auto& v : w) kappa = kappa + v;
  if (kappa.y <= 0 || det(ray2, kappa) >= 0) return false;  // det(ray2, kappa) < 0 inside the cone
  FaceMask pos = 0, neg = 0, zero = 0;
  for (int c = 0; c < sh.N; ++c) {
    i64 s = det(w[c], kappa);
    (s > 0 ? pos : s < 0 ? neg : zero) |= FaceMask(1) << c;
  }
  qd.rlv.clear();
  for (FaceMask f : sh.f_faces) {
    if ((f & ~zero) == 0) return false;  // relevant with a one-dimensional weight cone
    if ((f & pos) && (f & neg)) qd.rlv.push_back(f);
  }
  qd.cov.clear();
  for (FaceMask f : qd.rlv)
    if (std::none_of(qd.rlv.begin(), qd.rlv.end(), [&](FaceMask h) { return h != f && (h & f) == h; }))
      qd.cov.push_back(f);
  for (FaceMask f : qd.rlv)
    if (!std::binary_search(qd.cov.begin(), qd.cov.end(), f) && gcd_minors(w, f) != 1) return false;
  return exponent_criterion(sh, l, qd.cov);
}

int disposition_from(const Shape& sh, const std::vector<W2>& w, W2 ray2) {
  if (sh.ns != std::vector<int>{2, 2, 2} || sh.m != 0) return 0;
  std::vector<int> inner;
  for (int c = 0; c < sh.N; ++c)
    if (w[c].y != 0 && det(ray2, w[c]) != 0) inner.push_back(c);
  if (inner.empty()) return 1;
  if (inner.size() == 1) return 2;
  if (inner.size() > 2) return 0;
  if (inner[0] / 2 != inner[1] / 2) return 5;
  return det(w[inner[0]], w[inner[1]]) == 0 ? 4 : 3;
}

bool columns_primitive_and_distinct(const IntMatrix& P) {
  for (Eigen::Index c = 0; c < P.cols(); ++c) {
    Integer g = 0;
    for (Eigen::Index i = 0; i < P.rows(); ++i) g = gcd(g, P(i, c));
    if (g != 1) return false;
    for (Eigen::Index d = 0; d < c; ++d)
      if (P.col(c) == P.col(d)) return false;
  }
  return true;
}

struct UnitResult {
  std::vector<DefiningPair> survivors;
  SearchCounters counters;
  bool exhausted = false;
  std::string frontier;
};

bool pair_filters(const Shape& sh, const DefiningPair& dp, const std::vector<FaceMask>& rlv,
                  const std::vector<FaceMask>& cov) {
  const IntMatrix P = dp.P();
  ClassGroup K = cokernel(P.transpose());
  if (!K.torsion.empty()) {
    for (FaceMask f : rlv) {
      if (std::binary_search(cov.begin(), cov.end(), f)) continue;
      std::vector<KElement> w;
      for (int c : mask_columns(f)) w.push_back(K.project(IntVector::Unit(sh.N, c)));
      if (!generates_full_group(w, K)) return false;
    }
  }
  RelevantData rd;
  rd.columns = sh.N;
  rd.rlv = rlv;
  complete_relevant_data(dp, rd, false);
  if (log_terminal_witness(dp, rd)) return false;
  // A lattice vertex v'_sigma in the lineality part is a non-column lattice point.
  for (const auto& e : contributing_elementary_cones(dp, rd)) {
    if (!e.v_prime) continue;
    bool integral = true;
    for (Eigen::Index i = 0; i < e.v_prime->size(); ++i) integral = integral && denom((*e.v_prime)(i)) == 1;
    if (!integral || e.v_prime->isZero()) continue;
    bool column = false;
    for (Eigen::Index c = 0; c < P.cols() && !column; ++c) column = P.col(c).cast<Rational>() == *e.v_prime;
    if (!column) return false;
  }
  return is_terminal(dp, rd);
}

// Row lattices of P inside the saturated kernel of Q.
void lattice_stage(const Shape& sh, const SearchBudget& budget, const Exponents& l, const IntMatrix& Q,
                   const std::vector<FaceMask>& rlv, const std::vector<FaceMask>& cov, UnitResult& res) {
  const int N = sh.N, r = sh.r;
  IntMatrix B = lattice_kernel(Q).transpose();  // (r+2) x N
  IntMatrix U = IntMatrix::Zero(r, N);
  for (int i = 1; i <= r; ++i) {
    for (int j = 0; j < sh.ns[0]; ++j) U(i - 1, sh.offset[0] + j) = -l[0][j];
    for (int j = 0; j < sh.ns[i]; ++j) U(i - 1, sh.offset[i] + j) = l[i][j];
  }
  // U = X B
  IntMatrix X(r, r + 2);
  {
    RatMatrix Bt = B.transpose().cast<Rational>();
    for (int i = 0; i < r; ++i) {
      auto x = solve(Bt, RatVector(U.row(i).transpose().cast<Rational>()));
      if (!x) throw std::logic_error("relation rows outside the kernel of Q");
      for (int k = 0; k < r + 2; ++k) {
        if (denom((*x)(k)) != 1) throw std::logic_error("kernel basis is not saturated");
        X(i, k) = numer((*x)(k));
      }
    }
  }
  SmithForm sf = smith_normal_form(X);
  const IntMatrix Bp = unimodular_inverse(sf.V) * B;  // rows b'_0..b'_{r+1}
  std::vector<Integer> tors;
  std::vector<int> tors_row;
  Integer Forder = 1;
  for (int i = 0; i < r; ++i)
    if (sf.D(i, i) > 1) {
      tors.push_back(sf.D(i, i));
      tors_row.push_back(i);
      Forder *= sf.D(i, i);
    }
  if (Forder > budget.d_cap) return;
  const long long fo = static_cast<long long>(Forder);
  // All elements of F as coefficient vectors.
  std::vector<std::vector<long long>> Fel{{}};
  for (const auto& t : tors) {
    std::vector<std::vector<long long>> next;
    for (const auto& e : Fel)
      for (long long v = 0; v < static_cast<long long>(t); ++v) {
        next.push_back(e);
        next.back().push_back(v);
      }
    Fel = next;
  }
  auto torsion_part = [&](const std::vector<long long>& f) {
    IntVector v = IntVector::Zero(N);
    for (std::size_t k = 0; k < f.size(); ++k) v += Integer(f[k]) * IntVector(Bp.row(tors_row[k]).transpose());
    return v;
  };
  const IntVector br = Bp.row(r).transpose(), bs = Bp.row(r + 1).transpose();
  for (long long a = 1; a * fo <= budget.d_cap; ++a)
    for (long long c = 1; a * c * fo <= budget.d_cap; ++c)
      for (long long bb = 0; bb < c; ++bb)
        for (const auto& f1 : Fel)
          for (const auto& f2 : Fel) {
            IntVector g1 = Integer(a) * br + Integer(bb) * bs + torsion_part(f1);
            IntVector g2 = Integer(c) * bs + torsion_part(f2);
            IntMatrix P(r + 2, N);
            P.topRows(r) = U;
            P.row(r) = g1.transpose();
            P.row(r + 1) = g2.transpose();
            ++res.counters.pairs;
            if (!columns_primitive_and_distinct(P)) continue;
            DefiningPair dp = from_P(r, sh.ns, sh.m, P);
            if (pair_filters(sh, dp, rlv, cov)) {
              ++res.counters.survivors;
              res.survivors.push_back(canonical_form(dp));
            }
          }
}


class Search {
 public:
  Search(const Constellation& c, const SearchBudget& b, const EnumerationFilter& f)
      : c_(c), b_(b), filter_(f), sh_(make_shape(c)) {}

  std::vector<Exponents> units() const { return exponent_assignments(sh_, b_.exponent_cap); }

  UnitResult run_unit(const Exponents& l) const {
    UnitResult res;
    ++res.counters.exponent_tuples;
    if (filter_.configuration == 'A' &&
        std::none_of(l.begin(), l.end(), [](const auto& t) { return std::all_of(t.begin(), t.end(), [](i64 x) { return x == 1; }); }))
      return res;
    const int W = b_.weight_cap;
    for (int q = 1; q <= W; ++q)
      for (int p = 0; p < q; ++p) {
        if (std::gcd(p, q) != 1) continue;
        const W2 ray2{p, q};
        std::vector<W2> C;
        for (i64 y = 0; y <= W; ++y)
          for (i64 x = 0; x <= W; ++x)
            if ((x || y) && q * x - p * y >= 0) C.push_back({x, y});
        if (!run_cone(l, ray2, C, res)) {
          res.exhausted = true;
          res.frontier = "exponents " + exponents_str(l) + " from Eff = cone((1,0),(" + std::to_string(p) + "," +
                         std::to_string(q) + "))";
          return res;
        }
      }
    return res;
  }

 private:
  using Tuples = std::map<W2, std::vector<std::vector<W2>>>;

  Tuples block_tuples(const std::vector<i64>& l, const std::vector<W2>& C) const {
    Tuples out;
    const int n = static_cast<int>(l.size());
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
      bool ordered = true;
      for (int j = 0; j + 1 < n; ++j)
        if (l[j] == l[j + 1] && idx[j] > idx[j + 1]) ordered = false;
      if (ordered) {
        std::vector<W2> t(static_cast<std::size_t>(n));
        W2 mu;
        for (int j = 0; j < n; ++j) {
          t[j] = C[idx[j]];
          mu = mu + l[j] * t[j];
        }
        out[mu].push_back(t);
      }
      int k = n - 1;
      while (k >= 0 && idx[k] + 1 == C.size()) idx[k--] = 0;
      if (k < 0) break;
      ++idx[k];
    }
    return out;
  }

  // Returns false when the per-unit budget ran out.
  bool run_cone(const Exponents& l, W2 ray2, const std::vector<W2>& C, UnitResult& res) const {
    const int nb = static_cast<int>(sh_.ns.size());
    std::vector<Tuples> tuples;
    for (int i = 0; i < nb; ++i) tuples.push_back(block_tuples(l[i], C));
    QData qd;
    qd.w.resize(static_cast<std::size_t>(sh_.N));
    std::vector<const std::vector<std::vector<W2>>*> lists(static_cast<std::size_t>(nb));
    for (const auto& [mu, first] : tuples[0]) {
      bool ok = true;
      lists[0] = &first;
      for (int i = 1; i < nb && ok; ++i) {
        auto it = tuples[i].find(mu);
        ok = it != tuples[i].end();
        if (ok) lists[i] = &it->second;
      }
      if (!ok) continue;
      std::vector<std::size_t> pick(static_cast<std::size_t>(nb), 0);
      for (;;) {
        bool ordered = true;
        for (int i = 1; i < nb; ++i)
          if (l[i] == l[i - 1] && (*lists[i])[pick[i]] < (*lists[i - 1])[pick[i - 1]]) ordered = false;
        if (ordered) {
          for (int i = 0; i < nb; ++i)
            for (int j = 0; j < sh_.ns[i]; ++j) qd.w[sh_.offset[i] + j] = (*lists[i])[pick[i]][j];
          if (!run_free(l, ray2, C, qd, 0, res)) return false;
        }
        int k = nb - 1;
        while (k >= 0 && pick[k] + 1 == lists[k]->size()) pick[k--] = 0;
        if (k < 0) break;
        ++pick[k];
      }
    }
    return true;
  }

  bool run_free(const Exponents& l, W2 ray2, const std::vector<W2>& C, QData& qd, int k, UnitResult& res) const {
    const int n = sh_.N - sh_.m;
    if (k < sh_.m) {
      for (std::size_t a = 0; a < C.size(); ++a) {
        if (k > 0 && C[a] < qd.w[n + k - 1]) continue;
        qd.w[n + k] = C[a];
        if (!run_free(l, ray2, C, qd, k + 1, res)) return false;
      }
      return true;
    }
    if (!grading_filters(sh_, l, ray2, qd)) return true;
    if (filter_.disposition && disposition_from(sh_, qd.w, ray2) != *filter_.disposition) return true;
    if (b_.max_degree_matrices > 0 && res.counters.degree_matrices >= b_.max_degree_matrices) return false;
    ++res.counters.degree_matrices;
    IntMatrix Q(2, sh_.N);
    for (int c = 0; c < sh_.N; ++c) {
      Q(0, c) = qd.w[c].x;
      Q(1, c) = qd.w[c].y;
    }
    lattice_stage(sh_, b_, l, Q, qd.rlv, qd.cov, res);
    return true;
  }

  Constellation c_;
  SearchBudget b_;
  EnumerationFilter filter_;
  Shape sh_;
};

struct W3 {
  i64 x = 0, y = 0, z = 0;
  auto operator<=>(const W3&) const = default;
  W3 operator+(W3 o) const { return {x + o.x, y + o.y, z + o.z}; }
  bool is_zero() const { return x == 0 && y == 0 && z == 0; }
};
W3 operator*(i64 k, W3 w) { return {k * w.x, k * w.y, k * w.z}; }
i64 dot(W3 a, W3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
W3 cross(W3 a, W3 b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
i64 det(W3 a, W3 b, W3 c) { return dot(cross(a, b), c); }

// Inward facet normals of cone(g), full-dimensional in Q^3.
std::vector<W3> facet_normals(const std::vector<W3>& g) {
  std::vector<W3> out;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      W3 n = cross(g[a], g[b]);
      if (n.is_zero()) continue;
      bool pos = true, neg = true;
      for (const auto& v : g) {
        i64 d = dot(n, v);
        pos = pos && d >= 0;
        neg = neg && d <= 0;
      }
      if (!pos && !neg) continue;
      if (!pos) n = (-1) * n;
      i64 c = std::gcd(std::gcd(n.x, n.y), n.z);
      n = {n.x / c, n.y / c, n.z / c};
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
  return out;
}

int rank3(const std::vector<W3>& g) {
  int rk = 0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    if (g[a].is_zero()) continue;
    rk = std::max(rk, 1);
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      if (cross(g[a], g[b]).is_zero()) continue;
      rk = std::max(rk, 2);
      for (std::size_t c = b + 1; c < g.size(); ++c)
        if (det(g[a], g[b], g[c]) != 0) return 3;
    }
  }
  return rk;
}

i64 gcd_minors3(const std::vector<W3>& g) {
  i64 d = 0;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      for (std::size_t c = b + 1; c < g.size(); ++c) {
        d = std::gcd(d, det(g[a], g[b], g[c]));
        if (d == 1) return 1;
      }
  return d;
}

// k in the relative interior of cone(g) for g of rank at most two.
bool in_low_relint(const std::vector<W3>& g, W3 k) {
  const int rk = rank3(g);
  if (rk == 1) {
    for (const auto& v : g)
      if (!v.is_zero()) return cross(v, k).is_zero() && dot(v, k) > 0;
    return false;
  }
  W3 n;
  for (std::size_t a = 0; a < g.size() && n.is_zero(); ++a)
    for (std::size_t b = a + 1; b < g.size() && n.is_zero(); ++b) n = cross(g[a], g[b]);
  if (dot(n, k) != 0) return false;
  // Orientation inside the plane; the cones here are pointed.
  auto orient = [&](W3 a, W3 b) { return det(a, b, n); };
  std::optional<W3> lo, hi;
  for (const auto& v : g) {
    if (v.is_zero()) continue;
    if (std::all_of(g.begin(), g.end(), [&](W3 u) { return orient(v, u) >= 0; })) lo = v;
    if (std::all_of(g.begin(), g.end(), [&](W3 u) { return orient(u, v) >= 0; })) hi = v;
  }
  if (!lo || !hi) return false;
  return orient(*lo, k) > 0 && orient(k, *hi) > 0;
}

// The rank three analogue of grading_filters, without a normal form for Eff beyond Q^3_{>=0}.
bool grading_filters3(const Shape& sh, const Exponents& l, const std::vector<W3>& w, std::vector<FaceMask>& rlv,
                      std::vector<FaceMask>& cov) {
  if (gcd_minors3(w) != 1) return false;
  const std::vector<W3> eff = facet_normals(w);
  // Every extremal ray of Eff carries at least two weights.
  std::vector<W3> rays;
  std::vector<int> count;
  for (const auto& v : w) {
    int on = 0;
    for (const auto& n : eff) on += dot(n, v) == 0;
    if (on < 2) continue;
    auto it = std::find_if(rays.begin(), rays.end(), [&](W3 u) { return cross(u, v).is_zero(); });
    if (it == rays.end()) {
      rays.push_back(v);
      count.push_back(1);
    } else {
      ++count[static_cast<std::size_t>(it - rays.begin())];
    }
  }
  if (std::any_of(count.begin(), count.end(), [](int c) { return c < 2; })) return false;
  W3 mu;
  for (int j = 0; j < sh.ns[0]; ++j) mu = mu + l[0][j] * w[static_cast<std::size_t>(sh.offset[0] + j)];
  W3 kappa = (-(sh.r - 1)) * mu;
  for (const auto& v : w) kappa = kappa + v;
  for (const auto& n : eff)
    if (dot(n, kappa) <= 0) return false;
  rlv.clear();
  std::vector<W3> g;
  for (FaceMask f : sh.f_faces) {
    g.clear();
    for (int c : mask_columns(f)) g.push_back(w[static_cast<std::size_t>(c)]);
    if (rank3(g) < 3) {
      if (in_low_relint(g, kappa)) return false;
      continue;
    }
    const auto nf = facet_normals(g);
    if (std::all_of(nf.begin(), nf.end(), [&](W3 n) { return dot(n, kappa) > 0; })) rlv.push_back(f);
  }
  cov.clear();
  for (FaceMask f : rlv)
    if (std::none_of(rlv.begin(), rlv.end(), [&](FaceMask h) { return h != f && (h & f) == h; })) cov.push_back(f);
  for (FaceMask f : rlv) {
    if (std::binary_search(cov.begin(), cov.end(), f)) continue;
    g.clear();
    for (int c : mask_columns(f)) g.push_back(w[static_cast<std::size_t>(c)]);
    if (gcd_minors3(g) != 1) return false;
  }
  return exponent_criterion(sh, l, cov);
}

class Search3 {
 public:
  Search3(const Constellation& c, const SearchBudget& b, const EnumerationFilter& f)
      : b_(b), filter_(f), sh_(make_shape(c)) {
    const i64 W = b.weight_cap_rank3;
    for (i64 z = 0; z <= W; ++z)
      for (i64 y = 0; y <= W; ++y)
        for (i64 x = 0; x <= W; ++x)
          if (x || y || z) box_.push_back({x, y, z});
  }

  std::vector<Exponents> units() const { return exponent_assignments(sh_, b_.exponent_cap); }

  UnitResult run_unit(const Exponents& l) const {
    UnitResult res;
    ++res.counters.exponent_tuples;
    if (filter_.disposition) return res;  // dispositions only exist for n = (2,2,2), m = 0
    if (filter_.configuration == 'A' &&
        std::none_of(l.begin(), l.end(), [](const auto& t) { return std::all_of(t.begin(), t.end(), [](i64 x) { return x == 1; }); }))
      return res;
    const int nb = static_cast<int>(sh_.ns.size());
    std::vector<std::map<W3, std::vector<std::vector<W3>>>> tuples(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) {
      if (i > 0 && l[i] == l[i - 1]) {
        tuples[i] = tuples[i - 1];
        continue;
      }
      const int n = sh_.ns[i];
      std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
      for (;;) {
        bool ordered = true;
        for (int j = 0; j + 1 < n; ++j)
          if (l[i][j] == l[i][j + 1] && idx[j] > idx[j + 1]) ordered = false;
        if (ordered) {
          std::vector<W3> t(static_cast<std::size_t>(n));
          W3 mu;
          for (int j = 0; j < n; ++j) {
            t[j] = box_[idx[j]];
            mu = mu + l[i][j] * t[j];
          }
          tuples[i][mu].push_back(t);
        }
        int k = n - 1;
        while (k >= 0 && idx[k] + 1 == box_.size()) idx[k--] = 0;
        if (k < 0) break;
        ++idx[k];
      }
    }
    std::vector<W3> w(static_cast<std::size_t>(sh_.N));
    std::vector<FaceMask> rlv, cov;
    std::vector<const std::vector<std::vector<W3>>*> lists(static_cast<std::size_t>(nb));
    for (const auto& [mu, first] : tuples[0]) {
      bool ok = true;
      lists[0] = &first;
      for (int i = 1; i < nb && ok; ++i) {
        auto it = tuples[i].find(mu);
        ok = it != tuples[i].end();
        if (ok) lists[i] = &it->second;
      }
      if (!ok) continue;
      std::vector<std::size_t> pick(static_cast<std::size_t>(nb), 0);
      for (;;) {
        bool ordered = true;
        for (int i = 1; i < nb; ++i)
          if (l[i] == l[i - 1] && (*lists[i])[pick[i]] < (*lists[i - 1])[pick[i - 1]]) ordered = false;
        if (ordered) {
          for (int i = 0; i < nb; ++i)
            for (int j = 0; j < sh_.ns[i]; ++j) w[sh_.offset[i] + j] = (*lists[i])[pick[i]][j];
          if (grading_filters3(sh_, l, w, rlv, cov)) {
            if (b_.max_degree_matrices > 0 && res.counters.degree_matrices >= b_.max_degree_matrices) {
              res.exhausted = true;
              res.frontier = "exponents " + exponents_str(l) + " from mu = (" + std::to_string(mu.x) + "," +
                             std::to_string(mu.y) + "," + std::to_string(mu.z) + ")";
              return res;
            }
            ++res.counters.degree_matrices;
            IntMatrix Q(3, sh_.N);
            for (int c = 0; c < sh_.N; ++c) {
              Q(0, c) = w[c].x;
              Q(1, c) = w[c].y;
              Q(2, c) = w[c].z;
            }
            lattice_stage(sh_, b_, l, Q, rlv, cov, res);
          }
        }
        int k = nb - 1;
        while (k >= 0 && pick[k] + 1 == lists[k]->size()) pick[k--] = 0;
        if (k < 0) break;
        ++pick[k];
      }
    }
    return res;
  }

 private:
  SearchBudget b_;
  EnumerationFilter filter_;
  Shape sh_;
  std::vector<W3> box_;
};

bool passes_pipeline(const DefiningPair& dp) {
  VarietyReport rep = analyze(dp);
  return rep.valid && rep.fano && rep.q_factorial == true && rep.log_terminal == true &&
         rep.positive_strata_factorial == true && rep.terminal == true && rep.combinatorially_minimal &&
         dp.r >= 2 && rep.redundant_blocks.empty();
}

std::string pair_key(const DefiningPair& dp) { return pair_to_json(dp).dump(); }

}  // namespace

int disposition_of(const std::vector<int>& ns, const IntMatrix& Q) {
  if (Q.rows() != 2) return 0;
  Shape sh;
  sh.ns = ns;
  sh.N = static_cast<int>(Q.cols());
  sh.m = sh.N - std::accumulate(ns.begin(), ns.end(), 0);
  RationalCone eff = RationalCone::from_generators(2, [&] {
    std::vector<IntVector> g;
    for (Eigen::Index k = 0; k < Q.cols(); ++k) g.push_back(Q.col(k));
    return g;
  }());
  if (eff.rays().size() != 2) return 0;
  std::vector<W2> w;
  for (Eigen::Index k = 0; k < Q.cols(); ++k) w.push_back({static_cast<i64>(Q(0, k)), static_cast<i64>(Q(1, k))});
  // Move the first ray to the x-axis: only incidence with the rays and collinearity matter.
  W2 u1{static_cast<i64>(eff.rays()[0](0)), static_cast<i64>(eff.rays()[0](1))};
  W2 u2{static_cast<i64>(eff.rays()[1](0)), static_cast<i64>(eff.rays()[1](1))};
  std::vector<int> inner;
  for (int k = 0; k < sh.N; ++k)
    if (det(u1, w[k]) != 0 && det(u2, w[k]) != 0) inner.push_back(k);
  if (ns != std::vector<int>{2, 2, 2} || sh.m != 0) return 0;
  if (inner.empty()) return 1;
  if (inner.size() == 1) return 2;
  if (inner.size() > 2) return 0;
  if (inner[0] / 2 != inner[1] / 2) return 5;
  return det(w[inner[0]], w[inner[1]]) == 0 ? 4 : 3;
}

bool grading_admissible(const Constellation& c, const std::vector<std::vector<Integer>>& l, const IntMatrix& Q) {
  const Shape sh = make_shape(c);
  if (Q.cols() != sh.N || l.size() != sh.ns.size()) throw std::invalid_argument("grading does not fit the constellation");
  Exponents e(l.size());
  for (std::size_t i = 0; i < l.size(); ++i)
    for (const auto& x : l[i]) e[i].push_back(static_cast<i64>(x));
  std::vector<FaceMask> rlv, cov;
  if (Q.rows() == 3) {
    std::vector<W3> w;
    for (Eigen::Index k = 0; k < Q.cols(); ++k)
      w.push_back({static_cast<i64>(Q(0, k)), static_cast<i64>(Q(1, k)), static_cast<i64>(Q(2, k))});
    return grading_filters3(sh, e, w, rlv, cov);
  }
  if (Q.rows() != 2) throw std::invalid_argument("grading of rank two or three expected");
  std::vector<IntVector> gens;
  for (Eigen::Index k = 0; k < Q.cols(); ++k) gens.push_back(Q.col(k));
  const RationalCone eff = RationalCone::from_generators(2, gens);
  if (eff.rays().size() != 2) return false;
  // Unimodular U with U u1 = (1,0) and U u2 in the upper half plane.
  IntVector u1 = eff.rays()[0], u2 = eff.rays()[1];
  SmithForm sf = smith_normal_form(IntMatrix(u1.transpose()));
  IntMatrix U = sf.V.transpose();  // u1^T V = (+-1,0)
  if ((U * u1)(0) < 0) U = -U;
  if ((U * u1)(0) != 1 || (U * u1)(1) != 0) throw std::logic_error("normalising the effective cone failed");
  IntVector v = U * u2;
  if (v(1) < 0) {
    U.row(1) *= -1;
    v(1) = -v(1);
  }
  // Shear so that 0 <= p < q.
  Integer k = v(0) >= 0 ? Integer(v(0) / v(1)) : Integer(-((-v(0) + v(1) - 1) / v(1)));
  IntMatrix S = IntMatrix::Identity(2, 2);
  S(0, 1) = -k;
  U = S * U;
  v = U * u2;
  const IntMatrix Qn = U * Q;
  QData qd;
  for (Eigen::Index c2 = 0; c2 < Qn.cols(); ++c2) qd.w.push_back({static_cast<i64>(Qn(0, c2)), static_cast<i64>(Qn(1, c2))});
  return grading_filters(sh, e, {static_cast<i64>(v(0)), static_cast<i64>(v(1))}, qd);
}

std::string class_signature(const DefiningPair& dp) {
  ClassGroup K = cokernel(dp.P().transpose());
  std::ostringstream os;
  os << "Z^" << K.free_rank;
  for (const auto& t : K.torsion) os << "+Z/" << t;
  std::vector<std::vector<Integer>> l = dp.l;
  for (auto& t : l) std::sort(t.begin(), t.end());
  std::sort(l.begin(), l.end());
  os << " l=";
  for (const auto& t : l) {
    os << "(";
    for (std::size_t j = 0; j < t.size(); ++j) os << (j ? "," : "") << t[j];
    os << ")";
  }
  os << " m=" << dp.m << " " << pair_key(canonical_form(dp));
  return os.str();
}

EnumerationResult enumerate_constellation(const Constellation& c, const SearchBudget& b, const EnumerationFilter& filter,
                                          int jobs) {
  EnumerationResult out;
  out.constellation = c.name;
  if (!b.valid()) {
    out.exhausted = true;
    return out;
  }
  if (c.delta != 2 && c.delta != 3) throw PreconditionError("constellations have delta 2 or 3");
  std::vector<UnitResult> results;
  auto run = [&](const auto& search) {
    const std::vector<Exponents> units = search.units();
    results.assign(units.size(), {});
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < units.size();) results[k] = search.run_unit(units[k]);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  };
  if (c.delta == 2) run(Search(c, b, filter));
  else run(Search3(c, b, filter));

  std::map<std::string, DefiningPair> unique;
  for (const auto& r : results) {
    out.counters.exponent_tuples += r.counters.exponent_tuples;
    out.counters.degree_matrices += r.counters.degree_matrices;
    out.counters.pairs += r.counters.pairs;
    out.counters.survivors += r.counters.survivors;
    if (r.exhausted) {
      out.exhausted = true;
      out.frontier.push_back(r.frontier);
    }
    for (const auto& dp : r.survivors) unique.emplace(pair_key(dp), dp);
  }
  std::map<std::string, DefiningPair> classes;
  for (const auto& [key, dp] : unique) {
    if (!passes_pipeline(dp)) throw std::logic_error("search survivor fails the pipeline: " + key);
    classes.emplace(class_signature(dp), dp);
  }
  for (auto& [sig, dp] : classes) out.classes.push_back(dp);
  return out;
}

TableComparison compare_with_table(const std::vector<EnumerationResult>& runs, const Table& table) {
  TableComparison cmp;
  std::set<std::string> found;
  for (const auto& run : runs) {
    if (run.exhausted) cmp.exhausted.push_back(run.constellation);
    for (const auto& dp : run.classes) {
      auto id = table.match(dp);
      if (id) found.insert(*id);
      else cmp.extra.push_back(dp);
    }
  }
  for (const auto& row : table.rows()) (found.count(row.id) ? cmp.matched : cmp.missing).push_back(row.id);
  cmp.runs = runs;
  return cmp;
}

TableComparison reproduce_table(const SearchBudget& b, const Table& table, int jobs, const std::vector<std::string>& names) {
  std::vector<EnumerationResult> runs;
  for (const auto& c : constellations()) {
    if (!names.empty() && std::find(names.begin(), names.end(), c.name) == names.end()) continue;
    runs.push_back(enumerate_constellation(c, b, {}, jobs));
  }
  return compare_with_table(runs, table);
}

}  // namespace fanocpx
