#pragma once

// Brute-force oracles shared by the unit tests and the acceptance suite.

#include "fanocpx/linalg.hpp"
#include "fanocpx/polyhedral.hpp"
#include "fanocpx/stratification.hpp"

#include <functional>
#include <set>
#include <vector>

namespace oracles {

using namespace fanocpx;

// Independent oracle: invariant factors from determinantal divisors.
inline Integer minor_det(const IntMatrix& M, const std::vector<int>& rs, const std::vector<int>& cs) {
  const int k = static_cast<int>(rs.size());
  RatMatrix S(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) S(i, j) = Rational(M(rs[i], cs[j]));
  return numer(determinant(S));
}

inline void subsets(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

inline std::vector<Integer> invariant_factors_oracle(const IntMatrix& M) {
  std::vector<Integer> out;
  Integer prev = 1;
  const int kmax = static_cast<int>(std::min(M.rows(), M.cols()));
  for (int k = 1; k <= kmax; ++k) {
    std::vector<std::vector<int>> rs, cs;
    subsets(static_cast<int>(M.rows()), k, rs);
    subsets(static_cast<int>(M.cols()), k, cs);
    Integer g = 0;
    for (auto& r : rs)
      for (auto& c : cs) g = gcd(g, minor_det(M, r, c));
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

// Facet oracle: affine hyperplanes through d affinely independent input points
// that leave every point on one side. Returns (a0, a) with a0 + a.x >= 0.
inline std::vector<IntVector> supporting_planes(const std::vector<IntVector>& pts, int d) {
  std::set<std::vector<long long>> seen;
  std::vector<IntVector> out;
  std::vector<int> idx;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(idx.size()) == d) {
      RatMatrix M(d, d + 1);
      for (int i = 0; i < d; ++i) {
        M(i, 0) = 1;
        for (int j = 0; j < d; ++j) M(i, j + 1) = Rational(pts[idx[i]](j));
      }
      IntMatrix K = rational_kernel(M);
      if (K.cols() != 1) return;
      IntVector h = K.col(0);
      int pos = 0, neg = 0;
      for (auto& p : pts) {
        Integer v = h(0);
        for (int j = 0; j < d; ++j) v += h(j + 1) * p(j);
        if (v > 0) ++pos;
        if (v < 0) ++neg;
      }
      if (pos && neg) return;
      if (neg) h = -h;
      std::vector<long long> key;
      for (Eigen::Index i = 0; i < h.size(); ++i) key.push_back(to_i64(h(i)));
      if (seen.insert(key).second) out.push_back(h);
      return;
    }
    for (int i = start; i < static_cast<int>(pts.size()); ++i) {
      idx.push_back(i);
      rec(i + 1);
      idx.pop_back();
    }
  };
  rec(0);
  return out;
}

inline std::vector<IntVector> brute_lattice_points(const std::vector<IntVector>& pts, int d) {
  auto planes = supporting_planes(pts, d);
  std::vector<long long> lo(d, 1000), hi(d, -1000);
  for (auto& p : pts)
    for (int j = 0; j < d; ++j) {
      lo[j] = std::min<long long>(lo[j], to_i64(p(j)));
      hi[j] = std::max<long long>(hi[j], to_i64(p(j)));
    }
  std::vector<IntVector> out;
  std::vector<long long> x(lo);
  while (true) {
    bool ok = true;
    for (auto& h : planes) {
      Integer v = h(0);
      for (int j = 0; j < d; ++j) v += h(j + 1) * x[j];
      if (v < 0) ok = false;
    }
    if (ok) {
      IntVector v(d);
      for (int j = 0; j < d; ++j) v(j) = x[j];
      out.push_back(v);
    }
    int j = d - 1;
    while (j >= 0 && x[j] == hi[j]) x[j] = lo[j], --j;
    if (j < 0) break;
    ++x[j];
  }
  return out;
}

// Linear-form oracle: gamma_0 is an F-face iff some lambda on Q^2 is nonzero at a_i exactly for
// the blocks i whose variables all lie in gamma_0. Candidates: zero, the kernels of single
// a_i, and enough generic forms to avoid the finitely many bad lines.
inline bool f_face_oracle(const RatMatrix& A, const std::vector<int>& ns, FaceMask f) {
  const int blocks = static_cast<int>(ns.size());
  std::vector<bool> full(blocks);
  int off = 0;
  for (int i = 0; i < blocks; ++i) {
    bool all = true;
    for (int j = 0; j < ns[i]; ++j) all = all && has_column(f, off + j);
    full[i] = all;
    off += ns[i];
  }
  std::vector<RatVector> lambdas;
  lambdas.push_back(RatVector::Zero(2));
  for (int i = 0; i < blocks; ++i) {
    RatVector v(2);
    v << -A(1, i), A(0, i);
    lambdas.push_back(v);
  }
  for (int k = 0; k <= 2 * blocks + 2; ++k) {
    RatVector v(2);
    v << 1, k;
    lambdas.push_back(v);
  }
  for (auto& lam : lambdas) {
    bool match = true;
    for (int i = 0; i < blocks && match; ++i) {
      Rational z = lam(0) * A(0, i) + lam(1) * A(1, i);
      match = (z != 0) == full[i];
    }
    if (match) return true;
  }
  return false;
}

}  // namespace oracles
