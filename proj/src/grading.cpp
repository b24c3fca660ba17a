#include "fanocpx/grading.hpp"

#include <algorithm>
#include <sstream>

namespace fanocpx {

GradingData grading_of(const DefiningPair& dp) {
  GradingData g;
  const IntMatrix P = dp.P();
  const int N = dp.columns();
  g.K = cokernel(IntMatrix(P.transpose()));
  g.Q = IntMatrix(g.K.free_rank, N);
  for (int c = 0; c < N; ++c) {
    IntVector e = zero_vector<Integer>(N);
    e(c) = 1;
    g.weights.push_back(g.K.project(e));
    g.Q.col(c) = g.weights.back().free;
  }
  auto block_degree = [&](int i) {
    KElement acc = g.K.zero();
    for (int j = 0; j < dp.ns[i]; ++j) acc = g.K.add(acc, g.K.scale(dp.l[i][j], g.weights[dp.column(i, j)]));
    return acc;
  };
  g.mu = block_degree(0);
  for (int i = 1; i <= dp.r; ++i)
    if (block_degree(i) != g.mu) throw std::logic_error("relations are not homogeneous");
  KElement sum = g.K.zero();
  for (auto& w : g.weights) sum = g.K.add(sum, w);
  g.kappa = g.K.add(sum, g.K.scale(Integer(-(dp.r - 1)), g.mu));

  const Eigen::Index delta = g.K.free_rank;
  std::vector<IntVector> all;
  for (int c = 0; c < N; ++c) all.push_back(g.Q.col(c));
  g.eff = RationalCone::from_generators(delta, all);
  bool first = true;
  for (int c = 0; c < N; ++c) {
    std::vector<IntVector> rest;
    for (int k = 0; k < N; ++k)
      if (k != c) rest.push_back(g.Q.col(k));
    RationalCone C = RationalCone::from_generators(delta, rest);
    g.mov = first ? C : intersect(g.mov, C);
    first = false;
  }
  return g;
}

bool is_fano(const GradingData& g) { return relint_contains(g.mov, g.kappa.free); }

std::vector<int> exceptional_weights(const DefiningPair& dp) {
  const IntMatrix P = dp.P();
  std::vector<int> out;
  for (int c = 0; c < P.cols(); ++c) {
    std::vector<IntVector> rest;
    for (int k = 0; k < P.cols(); ++k)
      if (k != c) rest.push_back(P.col(k));
    if (is_all_of_space(RationalCone::from_generators(P.rows(), rest))) out.push_back(c);
  }
  return out;
}

bool is_extremal_variable(const GradingData& g, int col) {
  IntVector w = g.Q.col(col);
  if (is_zero(w)) return false;
  IntVector p = primitive(w);
  return std::any_of(g.eff.rays().begin(), g.eff.rays().end(), [&](const IntVector& r) { return r == p; });
}

std::vector<int> exceptional_weights_from_grading(const GradingData& g) {
  std::vector<int> out;
  const int N = static_cast<int>(g.Q.cols());
  for (int c = 0; c < N; ++c) {
    if (!is_extremal_variable(g, c)) continue;
    IntVector p = primitive(IntVector(g.Q.col(c)));
    bool alone = true;
    for (int k = 0; k < N; ++k)
      if (k != c && !is_zero(IntVector(g.Q.col(k))) && primitive(IntVector(g.Q.col(k))) == p) alone = false;
    if (alone) out.push_back(c);
  }
  return out;
}

bool is_combinatorially_minimal(const DefiningPair& dp) {
  std::vector<int> a = exceptional_weights(dp);
  std::vector<int> b = exceptional_weights_from_grading(grading_of(dp));
  if (a != b) throw std::logic_error("exceptional weights disagree between P and Q");
  return a.empty();
}

bool mu_interior_free_column_criterion(const DefiningPair& dp) {
  const IntMatrix P = dp.P();
  if (dp.m > 20) throw std::invalid_argument("too many free columns for subset enumeration");
  for (unsigned mask = 1; mask < (1u << dp.m); ++mask) {
    std::vector<IntVector> gens;
    for (int k = 0; k < dp.m; ++k)
      if (mask & (1u << k)) gens.push_back(P.col(dp.free_column(k)));
    RationalCone C = RationalCone::from_generators(P.rows(), gens);
    if (C.rays().empty()) return false;
  }
  return true;
}

bool mu_in_eff_interior(const DefiningPair& dp, const GradingData& g) {
  bool a = relint_contains(g.eff, g.mu.free) && is_full_dimensional(g.eff);
  bool b = mu_interior_free_column_criterion(dp);
  if (a != b) throw std::logic_error("mu interior criteria disagree");
  return a;
}

bool mu_in_eff_interior(const DefiningPair& dp) { return mu_in_eff_interior(dp, grading_of(dp)); }

GaleSplit gale_split(const std::vector<IntVector>& generators) {
  if (generators.empty()) throw GeometryError("no generators");
  const Eigen::Index d = generators[0].size();
  if (static_cast<Eigen::Index>(generators.size()) != d + 1)
    throw GeometryError("expected d+1 generators in dimension d");
  RatMatrix M(d, d + 1);
  for (Eigen::Index j = 0; j <= d; ++j) M.col(j) = to_rational(generators[j]);
  IntMatrix K = rational_kernel(M);
  if (K.cols() != 1) throw GeometryError("kernel dimension is not 1");
  RationalCone C = RationalCone::from_generators(d, generators);
  if (!is_pointed(C) || !is_full_dimensional(C)) throw GeometryError("cone not pointed");
  IntVector w = K.col(0);
  int pos = 0, neg = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0) ++pos;
    if (w(i) < 0) ++neg;
  }
  bool flip = neg > pos;
  if (neg == pos)
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (w(i) != 0) {
        flip = w(i) < 0;
        break;
      }
  if (flip) w = -w;
  GaleSplit g;
  g.scalars = w;
  std::vector<IntVector> mz, pz;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    int idx = static_cast<int>(i);
    if (w(i) < 0) g.minus.push_back(idx);
    if (w(i) == 0) g.zero.push_back(idx);
    if (w(i) > 0) g.plus.push_back(idx);
    if (w(i) <= 0) mz.push_back(generators[i]);
    if (w(i) >= 0) pz.push_back(generators[i]);
  }
  g.sigma_minus = RationalCone::from_generators(d, mz);
  g.sigma_plus = RationalCone::from_generators(d, pz);
  return g;
}

ClassificationStats classification_stats(const DefiningPair& dp, const GradingData& g) {
  ClassificationStats s;
  s.delta = g.delta();
  s.alpha = static_cast<int>(g.eff.rays().size()) - s.delta;
  for (int c = 0; c < dp.n(); ++c)
    if (is_extremal_variable(g, c)) ++s.eta;
  s.zeta = dp.n() - s.eta;
  return s;
}

std::string to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::holds:
      return "holds";
    case BoundStatus::violated:
      return "violated";
    case BoundStatus::hypotheses_not_satisfied:
      return "hypotheses_not_satisfied";
  }
  return "?";
}

const BoundCheck* BoundReport::find(const std::string& name) const {
  for (auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool BoundReport::any_violated() const {
  return std::any_of(checks.begin(), checks.end(), [](auto& c) { return c.status == BoundStatus::violated; });
}

BoundReport bound_predicates(const DefiningPair& dp, const GradingData& g, const BoundInputs& in) {
  BoundReport rep;
  rep.stats = classification_stats(dp, g);
  rep.m = dp.m;
  rep.r = dp.r;
  rep.n = dp.n();
  rep.dim = dp.dim();
  const int delta = rep.stats.delta, alpha = rep.stats.alpha, zeta = rep.stats.zeta;
  const int m = dp.m, r = dp.r, dim = rep.dim, n = rep.n;
  auto add = [&](const std::string& name, bool hyp, bool claim, const std::string& statement) {
    BoundStatus st = !hyp ? BoundStatus::hypotheses_not_satisfied : (claim ? BoundStatus::holds : BoundStatus::violated);
    rep.checks.push_back({name, st, statement});
  };
  auto lt_fano = in.log_terminal && in.fano;

  add("picard_bound_general", in.combinatorially_minimal,
      (dim >= delta && m >= 2 * delta - 2) || (2 * dim >= 2 * alpha + 4 + m && m < 2 * delta - 2),
      "(dim >= delta and m >= 2 delta - 2) or (dim >= alpha + 2 + m/2 and m < 2 delta - 2)");
  add("picard_bound_zeta", in.combinatorially_minimal, delta <= dim + r - 1 - zeta - 2 * alpha,
      "delta <= dim + r - 1 - zeta - 2 alpha");
  add("big_cone_exists", lt_fano && m < dim, in.big_cone_exists, "Sigma contains a big cone");
  add("relation_count_bound", in.q_factorial && lt_fano && m < dim, n + m <= 2 * (dim + delta),
      "(n + m)/2 <= dim + delta");
  add("picard_bound_alpha0", lt_fano && in.mu_in_eff_interior && alpha == 0 && zeta <= r - 2 && m < dim,
      delta * (r - 1 - zeta) <= 2 * dim - m - zeta, "delta (r - 1 - zeta) <= 2 dim - m - zeta");
  add("picard_bound_alpha1", lt_fano && in.mu_in_eff_interior && alpha == 1 && zeta <= r - 2,
      delta <= dim + 3 + zeta - r - m && dim + 3 + zeta - r - m <= dim + 1 - m,
      "delta <= dim + 3 + zeta - r - m <= dim + 1 - m");
  add("picard_bound_threefold", dim == 3 && in.log_terminal && in.combinatorially_minimal && in.fano, delta <= 3,
      "delta <= 3");
  add("mu_interior_threefold",
      r >= 2 && in.irredundant && dim == 3 && in.combinatorially_minimal && in.terminal && in.fano,
      in.mu_in_eff_interior, "mu lies in the interior of Eff");
  return rep;
}

}  // namespace fanocpx
