#include "fanocpx/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fanocpx {

// ---- scalar helpers -------------------------------------------------------

Integer content(const IntVector& v) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v(i));
  return g;
}

IntVector primitive(const IntVector& v) {
  Integer g = content(v);
  if (g == 0) return v;
  IntVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) / g;
  return out;
}

IntVector primitive(const RatVector& v) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) l = lcm(l, denom(v(i)));
  IntVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = numer(v(i)) * (l / denom(v(i)));
  return primitive(out);
}

bool lex_less(const IntVector& a, const IntVector& b) {
  const Eigen::Index n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return a.size() < b.size();
}

bool lex_less(const RatVector& a, const RatVector& b) {
  const Eigen::Index n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return a.size() < b.size();
}

bool is_zero(const IntVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) return false;
  return true;
}

bool is_zero(const RatVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) return false;
  return true;
}

Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

IntVector int_vector(std::initializer_list<long long> xs) {
  IntVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long long x : xs) v(i++) = Integer(x);
  return v;
}

RatVector rat_vector(std::initializer_list<Rational> xs) {
  RatVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const Rational& x : xs) v(i++) = x;
  return v;
}

IntMatrix int_matrix(std::initializer_list<std::initializer_list<long long>> rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
  IntMatrix m = zeros<Integer>(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != c) throw std::invalid_argument("ragged matrix");
    Eigen::Index j = 0;
    for (long long x : row) m(i, j++) = Integer(x);
    ++i;
  }
  return m;
}

std::string to_string(const Integer& a) { return a.str(); }
std::string to_string(const Rational& q) { return q.str(); }

std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i).str();
  os << ")";
  return os.str();
}

std::string to_string(const RatVector& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i).str();
  os << ")";
  return os.str();
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << (i ? "," : "") << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---- normal forms ---------------------------------------------------------

namespace {

void add_row(IntMatrix& M, Eigen::Index dst, Eigen::Index src, const Integer& c) {
  if (c == 0) return;
  for (Eigen::Index j = 0; j < M.cols(); ++j) M(dst, j) += c * M(src, j);
}
void add_col(IntMatrix& M, Eigen::Index dst, Eigen::Index src, const Integer& c) {
  if (c == 0) return;
  for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, dst) += c * M(i, src);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& M) {
  const Eigen::Index m = M.rows(), n = M.cols();
  SmithForm f;
  f.D = M;
  f.U = identity<Integer>(m);
  f.V = identity<Integer>(n);
  IntMatrix& D = f.D;
  const Eigen::Index k = std::min(m, n);
  Eigen::Index t = 0;
  for (; t < k; ++t) {
    for (;;) {
      Eigen::Index pi = -1, pj = -1;
      Integer best = 0;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j) {
          if (D(i, j) == 0) continue;
          Integer a = abs(D(i, j));
          if (pi < 0 || a < best) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) goto done;
      if (pi != t) {
        D.row(t).swap(D.row(pi));
        f.U.row(t).swap(f.U.row(pi));
      }
      if (pj != t) {
        D.col(t).swap(D.col(pj));
        f.V.col(t).swap(f.V.col(pj));
      }
      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Integer q = D(i, t) / D(t, t);
        add_row(D, i, t, -q);
        add_row(f.U, i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Integer q = D(t, j) / D(t, t);
        add_col(D, j, t, -q);
        add_col(f.V, j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      add_row(D, t, bad, Integer(1));
      add_row(f.U, t, bad, Integer(1));
    }
    if (D(t, t) < 0) {
      D.row(t) *= Integer(-1);
      f.U.row(t) *= Integer(-1);
    }
  }
done:
  f.rank = t;
  return f;
}

IntMatrix hermite_normal_form(const IntMatrix& M, IntMatrix* transform) {
  IntMatrix H = M;
  const Eigen::Index m = H.rows(), n = H.cols();
  IntMatrix T = identity<Integer>(m);
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < n && r < m; ++c) {
    for (;;) {
      Eigen::Index piv = -1;
      for (Eigen::Index i = r; i < m; ++i)
        if (H(i, c) != 0 && (piv < 0 || abs(H(i, c)) < abs(H(piv, c)))) piv = i;
      if (piv < 0) break;
      if (piv != r) {
        H.row(r).swap(H.row(piv));
        T.row(r).swap(T.row(piv));
      }
      bool clean = true;
      for (Eigen::Index i = r + 1; i < m; ++i) {
        if (H(i, c) == 0) continue;
        Integer q = H(i, c) / H(r, c);
        add_row(H, i, r, -q);
        add_row(T, i, r, -q);
        if (H(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (H(r, c) == 0) continue;
    if (H(r, c) < 0) {
      H.row(r) *= Integer(-1);
      T.row(r) *= Integer(-1);
    }
    for (Eigen::Index i = 0; i < r; ++i) {
      Integer q = floor_div(H(i, c), H(r, c));
      add_row(H, i, r, -q);
      add_row(T, i, r, -q);
    }
    ++r;
  }
  if (transform) *transform = T;
  return H.topRows(r);
}

Eigen::Index rank(const IntMatrix& M) { return rank(to_rational(M)); }

Eigen::Index rank(const RatMatrix& M0) {
  RatMatrix M = M0;
  const Eigen::Index m = M.rows(), n = M.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < n && r < m; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < m; ++i)
      if (M(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) M.row(r).swap(M.row(piv));
    for (Eigen::Index i = r + 1; i < m; ++i) {
      if (M(i, c) == 0) continue;
      Rational q = M(i, c) / M(r, c);
      for (Eigen::Index j = c; j < n; ++j) M(i, j) -= q * M(r, j);
    }
    ++r;
  }
  return r;
}

namespace {

// Reduced row echelon form; returns pivot columns.
std::vector<Eigen::Index> rref(RatMatrix& M) {
  const Eigen::Index m = M.rows(), n = M.cols();
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < n && r < m; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < m; ++i)
      if (M(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) M.row(r).swap(M.row(piv));
    Rational inv = Rational(1) / M(r, c);
    for (Eigen::Index j = c; j < n; ++j) M(r, j) *= inv;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == r || M(i, c) == 0) continue;
      Rational q = M(i, c);
      for (Eigen::Index j = c; j < n; ++j) M(i, j) -= q * M(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

IntMatrix lattice_kernel(const IntMatrix& M) {
  SmithForm f = smith_normal_form(M);
  return f.V.rightCols(M.cols() - f.rank);
}

IntMatrix rational_kernel(const RatMatrix& M0) {
  RatMatrix M = M0;
  const Eigen::Index n = M.cols();
  auto pivots = rref(M);
  std::vector<bool> is_piv(static_cast<size_t>(n), false);
  for (auto p : pivots) is_piv[static_cast<size_t>(p)] = true;
  std::vector<IntVector> cols;
  for (Eigen::Index fcol = 0; fcol < n; ++fcol) {
    if (is_piv[static_cast<size_t>(fcol)]) continue;
    RatVector v = zero_vector<Rational>(n);
    v(fcol) = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v(pivots[i]) = -M(static_cast<Eigen::Index>(i), fcol);
    cols.push_back(primitive(v));
  }
  IntMatrix K(n, static_cast<Eigen::Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) K.col(static_cast<Eigen::Index>(j)) = cols[j];
  return K;
}

std::optional<RatVector> solve(const RatMatrix& A, const RatVector& b) {
  const Eigen::Index m = A.rows(), n = A.cols();
  RatMatrix aug(m, n + 1);
  aug.leftCols(n) = A;
  aug.col(n) = b;
  auto pivots = rref(aug);
  RatVector x = zero_vector<Rational>(n);
  for (size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == n) return std::nullopt;
    x(pivots[i]) = aug(static_cast<Eigen::Index>(i), n);
  }
  return x;
}

Rational determinant(const RatMatrix& M0) {
  if (M0.rows() != M0.cols()) throw std::invalid_argument("determinant of non-square matrix");
  RatMatrix M = M0;
  const Eigen::Index n = M.rows();
  Rational det = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = c; i < n; ++i)
      if (M(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      M.row(c).swap(M.row(piv));
      det = -det;
    }
    det *= M(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (M(i, c) == 0) continue;
      Rational q = M(i, c) / M(c, c);
      for (Eigen::Index j = c; j < n; ++j) M(i, j) -= q * M(c, j);
    }
  }
  return det;
}

IntMatrix unimodular_inverse(const IntMatrix& U) {
  const Eigen::Index n = U.rows();
  RatMatrix aug(n, 2 * n);
  aug.leftCols(n) = to_rational(U);
  aug.rightCols(n) = to_rational(identity<Integer>(n));
  auto piv = rref(aug);
  if (static_cast<Eigen::Index>(piv.size()) != n || piv.back() >= n)
    throw std::invalid_argument("matrix not invertible");
  IntMatrix inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Rational& q = aug(i, n + j);
      if (denom(q) != 1) throw std::invalid_argument("matrix not unimodular");
      inv(i, j) = numer(q);
    }
  return inv;
}

IntMatrix saturation(const IntMatrix& rows) {
  // The saturated lattice is the kernel of the kernel.
  if (rows.rows() == 0) return IntMatrix(0, rows.cols());
  IntMatrix K = lattice_kernel(rows);  // columns
  if (K.cols() == 0) return identity<Integer>(rows.cols());
  IntMatrix Kt = K.transpose();
  IntMatrix S = lattice_kernel(Kt);  // columns spanning the saturation
  return hermite_normal_form(S.transpose());
}

bool same_row_lattice(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) return false;
  IntMatrix ha = hermite_normal_form(a), hb = hermite_normal_form(b);
  return ha.rows() == hb.rows() && ha == hb;
}

// ---- class groups ---------------------------------------------------------

bool KElement::operator==(const KElement& o) const {
  return free.size() == o.free.size() && free == o.free && torsion == o.torsion;
}

KElement ClassGroup::project(const IntVector& x) const {
  if (x.size() != ambient) throw std::invalid_argument("project: dimension mismatch");
  IntVector y = projection * x;
  KElement e;
  e.free = y.head(free_rank);
  for (size_t i = 0; i < torsion.size(); ++i)
    e.torsion.push_back(mod_pos(y(free_rank + static_cast<Eigen::Index>(i)), torsion[i]));
  return e;
}

KElement ClassGroup::reduce(const IntVector& free, std::vector<Integer> tors) const {
  KElement e;
  e.free = free;
  for (size_t i = 0; i < torsion.size(); ++i) tors[i] = mod_pos(tors[i], torsion[i]);
  e.torsion = std::move(tors);
  return e;
}

KElement ClassGroup::zero() const {
  return reduce(zero_vector<Integer>(free_rank), std::vector<Integer>(torsion.size(), 0));
}

KElement ClassGroup::add(const KElement& a, const KElement& b) const {
  std::vector<Integer> t(torsion.size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = a.torsion[i] + b.torsion[i];
  return reduce(IntVector(a.free + b.free), t);
}

KElement ClassGroup::scale(const Integer& c, const KElement& a) const {
  std::vector<Integer> t(torsion.size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = c * a.torsion[i];
  return reduce(IntVector(a.free * c), t);
}

IntMatrix ClassGroup::kernel_lattice() const {
  // x in ker  <=>  exists y: [F 0; T diag(d)] (x, y) = 0.
  const Eigen::Index t = static_cast<Eigen::Index>(torsion.size());
  IntMatrix big = zeros<Integer>(free_rank + t, ambient + t);
  big.leftCols(ambient) = projection;
  for (Eigen::Index i = 0; i < t; ++i) big(free_rank + i, ambient + i) = torsion[static_cast<size_t>(i)];
  IntMatrix K = lattice_kernel(big);
  IntMatrix X = K.topRows(ambient).transpose();
  return hermite_normal_form(X);
}

namespace {

// Normalizes free rows to HNF and reduces torsion rows against them.
void normalize_presentation(ClassGroup& G) {
  const Eigen::Index f = G.free_rank;
  const Eigen::Index n = G.ambient;
  if (f > 0) {
    IntMatrix H = hermite_normal_form(G.projection.topRows(f));
    G.projection.topRows(f) = H;
  }
  for (size_t ti = 0; ti < G.torsion.size(); ++ti) {
    const Eigen::Index row = f + static_cast<Eigen::Index>(ti);
    const Integer& d = G.torsion[ti];
    for (Eigen::Index j = 0; j < n; ++j) G.projection(row, j) = mod_pos(G.projection(row, j), d);
    // Adding multiples of free rows to a torsion row does not change the group map.
    for (Eigen::Index k = 0; k < f; ++k) {
      Eigen::Index pc = 0;
      while (pc < n && G.projection(k, pc) == 0) ++pc;
      if (pc == n) continue;
      Integer best_c = 0;
      Integer best = mod_pos(G.projection(row, pc), d);
      for (Integer c = 1; c < d; ++c) {
        Integer v = mod_pos(G.projection(row, pc) - c * G.projection(k, pc), d);
        if (v < best) {
          best = v;
          best_c = c;
        }
      }
      if (best_c != 0)
        for (Eigen::Index j = 0; j < n; ++j)
          G.projection(row, j) = mod_pos(G.projection(row, j) - best_c * G.projection(k, j), d);
    }
  }
}

}  // namespace

ClassGroup cokernel(const IntMatrix& M) {
  SmithForm f = smith_normal_form(M);
  ClassGroup G;
  G.ambient = M.rows();
  G.free_rank = M.rows() - f.rank;
  std::vector<Eigen::Index> tors_rows;
  for (Eigen::Index i = 0; i < f.rank; ++i)
    if (f.D(i, i) > 1) {
      tors_rows.push_back(i);
      G.torsion.push_back(f.D(i, i));
    }
  G.projection = IntMatrix(G.free_rank + static_cast<Eigen::Index>(tors_rows.size()), G.ambient);
  for (Eigen::Index i = 0; i < G.free_rank; ++i) G.projection.row(i) = f.U.row(f.rank + i);
  for (size_t i = 0; i < tors_rows.size(); ++i)
    G.projection.row(G.free_rank + static_cast<Eigen::Index>(i)) = f.U.row(tors_rows[i]);
  normalize_presentation(G);
  return G;
}

ClassGroup group_from_rows(const IntMatrix& free_rows, const IntMatrix& torsion_rows,
                           const std::vector<Integer>& factors) {
  ClassGroup G;
  G.ambient = free_rows.cols();
  G.free_rank = free_rows.rows();
  G.torsion = factors;
  G.projection = IntMatrix(free_rows.rows() + torsion_rows.rows(), G.ambient);
  G.projection.topRows(free_rows.rows()) = free_rows;
  if (torsion_rows.rows() > 0) G.projection.bottomRows(torsion_rows.rows()) = torsion_rows;
  normalize_presentation(G);
  return G;
}

bool generates_full_group(const std::vector<KElement>& vectors, const ClassGroup& G) {
  const Eigen::Index f = G.free_rank;
  const Eigen::Index t = static_cast<Eigen::Index>(G.torsion.size());
  const Eigen::Index dim = f + t;
  if (dim == 0) return true;
  const Eigen::Index k = static_cast<Eigen::Index>(vectors.size());
  IntMatrix M = zeros<Integer>(dim, k + t);
  for (Eigen::Index j = 0; j < k; ++j) {
    const KElement& e = vectors[static_cast<size_t>(j)];
    for (Eigen::Index i = 0; i < f; ++i) M(i, j) = e.free(i);
    for (Eigen::Index i = 0; i < t; ++i) M(f + i, j) = e.torsion[static_cast<size_t>(i)];
  }
  for (Eigen::Index i = 0; i < t; ++i) M(f + i, k + i) = G.torsion[static_cast<size_t>(i)];
  SmithForm s = smith_normal_form(M);
  if (s.rank != dim) return false;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (s.D(i, i) != 1) return false;
  return true;
}

}  // namespace fanocpx
