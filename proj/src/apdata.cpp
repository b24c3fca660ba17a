#include "fanocpx/apdata.hpp"

#include "fanocpx/polyhedral.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace fanocpx {

int DefiningPair::n() const { return std::accumulate(ns.begin(), ns.end(), 0); }

int DefiningPair::offset(int block) const {
  int o = 0;
  for (int i = 0; i < block; ++i) o += ns[i];
  return o;
}

int DefiningPair::block_of(int col) const {
  int o = 0;
  for (int i = 0; i <= r; ++i) {
    if (col < o + ns[i]) return i;
    o += ns[i];
  }
  return -1;
}

int DefiningPair::index_in_block(int col) const {
  int b = block_of(col);
  return b < 0 ? col - n() : col - offset(b);
}

Integer DefiningPair::l_of(int col) const {
  int b = block_of(col);
  return b < 0 ? Integer(1) : l[b][index_in_block(col)];
}

IntMatrix DefiningPair::L() const {
  IntMatrix out = zeros<Integer>(r, n());
  for (int i = 1; i <= r; ++i) {
    for (int j = 0; j < ns[0]; ++j) out(i - 1, column(0, j)) = -l[0][j];
    for (int j = 0; j < ns[i]; ++j) out(i - 1, column(i, j)) = l[i][j];
  }
  return out;
}

IntMatrix DefiningPair::P() const {
  const int nn = n();
  IntMatrix out = zeros<Integer>(r + s, nn + m);
  out.topLeftCorner(r, nn) = L();
  if (s > 0) {
    out.bottomLeftCorner(s, nn) = d;
    if (m > 0) out.bottomRightCorner(s, m) = dprime;
  }
  return out;
}

IntVector DefiningPair::column_vector(int col) const { return P().col(col); }

bool DefiningPair::operator==(const DefiningPair& o) const {
  return r == o.r && ns == o.ns && m == o.m && s == o.s && l == o.l && d == o.d && dprime == o.dprime &&
         A.rows() == o.A.rows() && A.cols() == o.A.cols() && A == o.A;
}

RatMatrix default_A(int r) {
  RatMatrix A(2, r + 1);
  for (int i = 0; i <= r; ++i) {
    A(0, i) = 1;
    A(1, i) = i;
  }
  return A;
}

DefiningPair from_P(int r, const std::vector<int>& ns, int m, const IntMatrix& P) {
  DefiningPair dp;
  dp.r = r;
  dp.ns = ns;
  dp.m = m;
  if (static_cast<int>(ns.size()) != r + 1) throw InvalidPair("block count does not match r");
  const int nn = dp.n();
  if (P.cols() != nn + m || P.rows() <= r) throw InvalidPair("P has wrong shape");
  dp.s = static_cast<int>(P.rows()) - r;
  dp.l.resize(r + 1);
  for (int j = 0; j < ns[0]; ++j) dp.l[0].push_back(-P(0, j));
  for (int i = 1; i <= r; ++i)
    for (int j = 0; j < ns[i]; ++j) dp.l[i].push_back(P(i - 1, dp.column(i, j)));
  dp.d = P.bottomLeftCorner(dp.s, nn);
  dp.dprime = P.bottomRightCorner(dp.s, m);
  dp.A = default_A(r);
  if (dp.P() != P) throw InvalidPair("upper rows of P are not of the form [L, 0]");
  return dp;
}

ValidationReport validate(const DefiningPair& dp) {
  ValidationReport rep;
  auto err = [&](const std::string& s) { rep.errors.push_back(s); };
  if (dp.r < 1) err("r must be at least 1");
  if (static_cast<int>(dp.ns.size()) != dp.r + 1 || static_cast<int>(dp.l.size()) != dp.r + 1) {
    err("expected r+1 blocks");
    return rep;
  }
  for (int i = 0; i <= dp.r; ++i) {
    if (dp.ns[i] < 1) err("block " + std::to_string(i) + " is empty");
    if (static_cast<int>(dp.l[i].size()) != dp.ns[i]) err("exponent tuple " + std::to_string(i) + " has wrong length");
    for (auto& x : dp.l[i])
      if (x < 1) err("exponent below 1 in block " + std::to_string(i));
  }
  if (dp.m < 0) err("m must be nonnegative");
  if (!rep.errors.empty()) return rep;
  const int nn = dp.n();
  if (dp.s < 1 || dp.s >= nn + dp.m - dp.r) err("need 0 < s < n+m-r");
  if (dp.d.rows() != dp.s || dp.d.cols() != nn) err("d block has wrong shape");
  if (dp.dprime.rows() != dp.s || dp.dprime.cols() != dp.m) {
    if (!(dp.m == 0 && dp.dprime.size() == 0)) err("d' block has wrong shape");
  }
  if (dp.A.rows() != 2 || dp.A.cols() != dp.r + 1) {
    err("A has wrong shape");
  } else {
    for (int i = 0; i <= dp.r; ++i)
      for (int k = i + 1; k <= dp.r; ++k)
        if (dp.A(0, i) * dp.A(1, k) - dp.A(1, i) * dp.A(0, k) == 0) err("columns of A not pairwise linearly independent");
  }
  if (!rep.errors.empty()) return rep;

  IntMatrix P = dp.P();
  std::set<std::vector<std::string>> seen;
  bool dup = false;
  std::vector<IntVector> cols;
  for (int c = 0; c < P.cols(); ++c) {
    IntVector v = P.col(c);
    cols.push_back(v);
    std::vector<std::string> key;
    for (Eigen::Index i = 0; i < v.size(); ++i) key.push_back(to_string(v(i)));
    if (!seen.insert(key).second) dup = true;
    if (content(v) != 1) err("column not primitive: " + to_string(v));
  }
  if (dup) err("columns not pairwise distinct");
  if (!rep.errors.empty()) return rep;
  if (!is_all_of_space(RationalCone::from_generators(dp.r + dp.s, cols)))
    err("columns do not generate Q^(r+s) as a cone");
  for (int i = 0; i <= dp.r; ++i) {
    if (dp.ns[i] == 1 && dp.l[i][0] == 1) {
      rep.redundant_blocks.push_back(i);
      rep.warnings.push_back("block " + std::to_string(i) + " is redundant (n_i = 1, l_i1 = 1); it can be eliminated");
    }
  }
  return rep;
}

void require_valid(const DefiningPair& dp) {
  ValidationReport rep = validate(dp);
  if (!rep.valid()) throw InvalidPair(rep.errors.front());
}

namespace {

DefiningPair permute_columns(const DefiningPair& dp, const std::vector<int>& perm, const std::vector<int>& block_order) {
  DefiningPair out = dp;
  out.ns.clear();
  out.l.clear();
  for (int b : block_order) out.ns.push_back(dp.ns[b]);
  for (int b : block_order) {
    std::vector<Integer> t;
    for (int j = 0; j < dp.ns[b]; ++j) t.push_back(0);
    out.l.push_back(t);
  }
  const int nn = dp.n();
  for (int c = 0; c < nn; ++c) {
    int b = out.block_of(c);
    out.l[b][out.index_in_block(c)] = dp.l_of(perm[c]);
  }
  for (int c = 0; c < nn; ++c) out.d.col(c) = dp.d.col(perm[c]);
  for (int k = 0; k < dp.m; ++k) out.dprime.col(k) = dp.dprime.col(perm[nn + k] - nn);
  for (int i = 0; i <= dp.r; ++i) out.A.col(i) = dp.A.col(block_order[i]);
  return out;
}

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

void check_block(const DefiningPair& dp, int b) {
  if (b < 0 || b > dp.r) throw std::out_of_range("block index out of range");
}

}  // namespace

std::vector<int> column_permutation(const DefiningPair& dp, const AdmissibleOp& o) {
  std::vector<int> perm = identity_perm(dp.columns());
  if (auto* p = std::get_if<op::SwapInBlock>(&o)) {
    check_block(dp, p->block);
    if (p->j1 < 0 || p->j2 < 0 || p->j1 >= dp.ns[p->block] || p->j2 >= dp.ns[p->block])
      throw std::out_of_range("column index out of range");
    std::swap(perm[dp.column(p->block, p->j1)], perm[dp.column(p->block, p->j2)]);
  } else if (auto* p = std::get_if<op::SwapBlocks>(&o)) {
    check_block(dp, p->i1);
    check_block(dp, p->i2);
    std::vector<int> order = identity_perm(dp.r + 1);
    std::swap(order[p->i1], order[p->i2]);
    perm.clear();
    for (int b : order)
      for (int j = 0; j < dp.ns[b]; ++j) perm.push_back(dp.column(b, j));
    for (int k = 0; k < dp.m; ++k) perm.push_back(dp.free_column(k));
  } else if (auto* p = std::get_if<op::SwapFreeColumns>(&o)) {
    if (p->k1 < 0 || p->k2 < 0 || p->k1 >= dp.m || p->k2 >= dp.m) throw std::out_of_range("free column index out of range");
    std::swap(perm[dp.free_column(p->k1)], perm[dp.free_column(p->k2)]);
  }
  return perm;
}

DefiningPair apply(const DefiningPair& dp, const AdmissibleOp& o) {
  if (auto* p = std::get_if<op::AddUpperRowMultiple>(&o)) {
    if (p->upper < 0 || p->upper >= dp.r || p->lower < 0 || p->lower >= dp.s) throw std::out_of_range("row index out of range");
    DefiningPair out = dp;
    IntMatrix L = dp.L();
    for (int c = 0; c < dp.n(); ++c) out.d(p->lower, c) += p->factor * L(p->upper, c);
    return out;
  }
  if (auto* p = std::get_if<op::LowerRowOp>(&o)) {
    if (p->U.rows() != dp.s || p->U.cols() != dp.s) throw std::invalid_argument("lower row operation has wrong size");
    Rational det = determinant(to_rational(p->U));
    if (det != 1 && det != -1) throw std::invalid_argument("lower row operation is not unimodular");
    DefiningPair out = dp;
    out.d = p->U * dp.d;
    if (dp.m > 0) out.dprime = p->U * dp.dprime;
    return out;
  }
  std::vector<int> perm = column_permutation(dp, o);
  std::vector<int> order = identity_perm(dp.r + 1);
  if (auto* p = std::get_if<op::SwapBlocks>(&o)) std::swap(order[p->i1], order[p->i2]);
  return permute_columns(dp, perm, order);
}

namespace {

bool matrix_less(const IntMatrix& a, const IntMatrix& b) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
  return false;
}

// Advances an odometer of independent permutation groups; false when exhausted.
bool next_combination(std::vector<std::vector<int>>& groups) {
  for (int g = static_cast<int>(groups.size()) - 1; g >= 0; --g)
    if (std::next_permutation(groups[g].begin(), groups[g].end())) return true;
  return false;
}

}  // namespace

DefiningPair canonical_form(const DefiningPair& dp) {
  require_valid(dp);
  const int R = dp.r;
  auto sorted_l = [&](int b) {
    std::vector<Integer> t = dp.l[b];
    std::sort(t.begin(), t.end(), std::greater<>());
    return t;
  };
  std::vector<int> blocks = identity_perm(R + 1);
  auto block_key_less = [&](int a, int b) {
    if (dp.ns[a] != dp.ns[b]) return dp.ns[a] > dp.ns[b];
    return sorted_l(a) > sorted_l(b);
  };
  std::stable_sort(blocks.begin(), blocks.end(), block_key_less);

  // groups: equal blocks (positions), equal exponents inside each block, free columns
  std::vector<std::vector<int>> groups;
  std::vector<int> block_groups;
  for (int p = 0; p <= R;) {
    int q = p;
    while (q <= R && !block_key_less(blocks[p], blocks[q]) && !block_key_less(blocks[q], blocks[p])) ++q;
    std::vector<int> g(blocks.begin() + p, blocks.begin() + q);
    std::sort(g.begin(), g.end());
    block_groups.push_back(static_cast<int>(groups.size()));
    groups.push_back(g);
    p = q;
  }
  std::vector<std::vector<int>> exp_groups_of_block(R + 1);
  for (int b = 0; b <= R; ++b) {
    std::vector<int> idx = identity_perm(dp.ns[b]);
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return dp.l[b][x] > dp.l[b][y]; });
    for (int p = 0; p < dp.ns[b];) {
      int q = p;
      while (q < dp.ns[b] && dp.l[b][idx[q]] == dp.l[b][idx[p]]) ++q;
      std::vector<int> g(idx.begin() + p, idx.begin() + q);
      std::sort(g.begin(), g.end());
      exp_groups_of_block[b].push_back(static_cast<int>(groups.size()));
      groups.push_back(g);
      p = q;
    }
  }
  int free_group = static_cast<int>(groups.size());
  groups.push_back(identity_perm(dp.m));

  const IntMatrix P = dp.P();
  bool have = false;
  IntMatrix best;
  std::vector<int> best_perm, best_order;
  do {
    std::vector<int> order;
    for (int gi : block_groups) order.insert(order.end(), groups[gi].begin(), groups[gi].end());
    std::vector<int> perm;
    for (int b : order)
      for (int gi : exp_groups_of_block[b])
        for (int j : groups[gi]) perm.push_back(dp.column(b, j));
    for (int k : groups[free_group]) perm.push_back(dp.free_column(k));
    IntMatrix Pp(P.rows(), P.cols());
    for (int c = 0; c < P.cols(); ++c) Pp.col(c) = P.col(perm[c]);
    IntMatrix H = hermite_normal_form(Pp);
    if (!have || matrix_less(H, best)) {
      have = true;
      best = H;
      best_perm = perm;
      best_order = order;
    }
  } while (next_combination(groups));

  DefiningPair shape = permute_columns(dp, best_perm, best_order);
  return pair_from_lattice(shape.r, shape.ns, shape.m, shape.l, best);
}

DefiningPair pair_from_lattice(int r, const std::vector<int>& ns, int m, const std::vector<std::vector<Integer>>& l,
                               const IntMatrix& lattice) {
  DefiningPair out;
  out.r = r;
  out.ns = ns;
  out.m = m;
  out.l = l;
  out.A = default_A(r);
  const IntMatrix H = hermite_normal_form(lattice);
  const int nn = out.n();
  if (H.cols() != nn + m) throw InvalidPair("lattice has the wrong number of columns");
  if (H.rows() <= r) throw InvalidPair("lattice rank too small");
  out.s = static_cast<int>(H.rows()) - r;
  IntMatrix Lp = zeros<Integer>(r, nn + m);
  Lp.leftCols(nn) = out.L();
  // Complete the L rows to a lattice basis; the complement gives d and d'.
  RatMatrix Ht = to_rational(IntMatrix(H.transpose()));
  IntMatrix X(r, H.rows());
  for (int i = 0; i < r; ++i) {
    auto sol = solve(Ht, to_rational(IntVector(Lp.row(i).transpose())));
    if (!sol) throw InvalidPair("L rows do not lie in the lattice");
    for (Eigen::Index j = 0; j < H.rows(); ++j) {
      if (denom((*sol)(j)) != 1) throw InvalidPair("L rows do not lie in the lattice");
      X(i, j) = numer((*sol)(j));
    }
  }
  SmithForm f = smith_normal_form(X);
  for (int i = 0; i < r; ++i)
    if (i >= f.rank || f.D(i, i) != 1) throw InvalidPair("L rows do not span a direct summand of the lattice");
  IntMatrix Vinv = unimodular_inverse(f.V);
  IntMatrix lower = hermite_normal_form(IntMatrix(Vinv.bottomRows(H.rows() - r) * H));
  out.d = lower.leftCols(nn);
  out.dprime = lower.rightCols(m);
  if (!same_row_lattice(out.P(), H)) throw std::logic_error("pair_from_lattice: lattice changed");
  return out;
}

DefiningPair eliminate_redundant_block(const DefiningPair& dp, int block) {
  check_block(dp, block);
  if (dp.ns[block] != 1 || dp.l[block][0] != 1) throw std::invalid_argument("block is not redundant");
  if (dp.r < 2) throw std::invalid_argument("eliminating the block would leave no relation");
  DefiningPair cur = block == dp.r ? dp : apply(dp, op::SwapBlocks{block, dp.r});
  const int c = cur.column(cur.r, 0);
  for (int t = 0; t < cur.s; ++t) {
    Integer f = cur.d(t, c);
    if (f != 0) cur = apply(cur, op::AddUpperRowMultiple{cur.r - 1, t, Integer(-f)});
  }
  DefiningPair out;
  out.r = cur.r - 1;
  out.ns.assign(cur.ns.begin(), cur.ns.end() - 1);
  out.l.assign(cur.l.begin(), cur.l.end() - 1);
  out.m = cur.m;
  out.s = cur.s;
  out.d = cur.d.leftCols(c);
  out.dprime = cur.dprime;
  out.A = cur.A.leftCols(cur.r);
  return out;
}

}  // namespace fanocpx
