#include "fanocpx/stratification.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace fanocpx {

std::vector<int> mask_columns(FaceMask f) {
  std::vector<int> out;
  for (int c = 0; f; ++c, f >>= 1)
    if (f & 1u) out.push_back(c);
  return out;
}

std::vector<int> nonvanishing_blocks(const DefiningPair& dp, FaceMask f) {
  std::vector<int> out;
  for (int i = 0; i <= dp.r; ++i) {
    bool all = true;
    for (int j = 0; j < dp.ns[i]; ++j) all = all && has_column(f, dp.column(i, j));
    if (all) out.push_back(i);
  }
  return out;
}

bool is_F_face(const DefiningPair& dp, FaceMask f) {
  const int M = static_cast<int>(nonvanishing_blocks(dp, f).size());
  return M == 0 || dp.r + 1 - M <= 1;
}

RationalCone weight_cone(const GradingData& g, FaceMask f) {
  std::vector<IntVector> gens;
  for (int c : mask_columns(f)) gens.push_back(g.Q.col(c));
  return RationalCone::from_generators(g.delta(), gens);
}

RationalCone column_cone(const DefiningPair& dp, FaceMask f) {
  const IntMatrix P = dp.P();
  std::vector<IntVector> gens;
  for (int c : mask_columns(f)) gens.push_back(P.col(c));
  return RationalCone::from_generators(P.rows(), gens);
}

bool RelevantData::is_relevant(FaceMask f) const { return std::binary_search(rlv.begin(), rlv.end(), f); }

bool RelevantData::in_sigma(FaceMask cone) const { return std::binary_search(sigma.begin(), sigma.end(), cone); }

namespace {

FaceMask columns_in(const IntMatrix& P, const RationalCone& C) {
  FaceMask inside = 0;
  for (int c = 0; c < P.cols(); ++c)
    if (contains(C, IntVector(P.col(c)))) inside |= FaceMask(1) << c;
  return inside;
}

}  // namespace

std::vector<FaceMask> cone_faces(const DefiningPair& dp, FaceMask cone) {
  const IntMatrix P = dp.P();
  RationalCone C = column_cone(dp, cone);
  FaceMask inside = columns_in(P, C);
  std::set<FaceMask> seen{inside};
  std::vector<FaceMask> todo{inside};
  while (!todo.empty()) {
    FaceMask cur = todo.back();
    todo.pop_back();
    for (const auto& a : C.facets()) {
      FaceMask next = 0;
      for (int c : mask_columns(cur))
        if (dot(a, IntVector(P.col(c))) == 0) next |= FaceMask(1) << c;
      if (seen.insert(next).second) todo.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

RelevantData relevant_and_covering(const DefiningPair& dp, const GradingData& g) {
  if (!is_fano(g)) throw PreconditionError("not Fano: the anticanonical class is not in the interior of Mov");
  const int N = dp.columns();
  if (N > 20) throw PreconditionError("too many columns for face enumeration");
  RelevantData rd;
  rd.columns = N;
  const FaceMask all = full_mask(N);
  for (FaceMask f = 0;; ++f) {
    if (is_F_face(dp, f)) {
      rd.f_faces.push_back(f);
      if (f != 0 && relint_contains(weight_cone(g, f), g.kappa.free)) rd.rlv.push_back(f);
    }
    if (f == all) break;
  }
  complete_relevant_data(dp, rd);
  return rd;
}

void complete_relevant_data(const DefiningPair& dp, RelevantData& rd, bool with_faces) {
  std::sort(rd.rlv.begin(), rd.rlv.end());
  rd.cov.clear();
  for (FaceMask f : rd.rlv) {
    bool minimal = std::none_of(rd.rlv.begin(), rd.rlv.end(),
                                [&](FaceMask h) { return h != f && (h & f) == h; });
    if (minimal) rd.cov.push_back(f);
  }
  const IntMatrix P = dp.P();
  const FaceMask all = full_mask(rd.columns);
  std::set<FaceMask> sigma;
  rd.sigma_maximal.clear();
  for (FaceMask f : rd.cov) {
    rd.sigma_maximal.push_back(columns_in(P, column_cone(dp, all & ~f)));
    if (with_faces) {
      std::vector<FaceMask> faces = cone_faces(dp, all & ~f);
      sigma.insert(faces.begin(), faces.end());
    }
  }
  std::sort(rd.sigma_maximal.begin(), rd.sigma_maximal.end());
  rd.sigma.assign(sigma.begin(), sigma.end());
}

std::optional<FaceMask> non_Q_factorial_witness(const RelevantData& rd, const GradingData& g) {
  for (FaceMask f : rd.rlv)
    if (!is_full_dimensional(weight_cone(g, f))) return f;
  return std::nullopt;
}

bool is_Q_factorial(const RelevantData& rd, const GradingData& g) { return !non_Q_factorial_witness(rd, g); }

int stratum_dimension(const RelevantData& rd, FaceMask f) {
  if (!rd.is_relevant(f)) throw PreconditionError("face is not relevant");
  std::map<FaceMask, int> depth;
  std::vector<FaceMask> order(rd.rlv.begin(), rd.rlv.end());
  std::stable_sort(order.begin(), order.end(),
                   [](FaceMask a, FaceMask b) { return std::popcount(a) < std::popcount(b); });
  for (FaceMask h : order) {
    if ((h & f) != h) continue;
    int best = 0;
    for (auto& [k, d] : depth)
      if (k != h && (k & h) == k) best = std::max(best, d + 1);
    depth[h] = best;
  }
  return depth.at(f);
}

bool is_factorial_face(const GradingData& g, FaceMask f) {
  std::vector<KElement> w;
  for (int c : mask_columns(f)) w.push_back(g.weights[c]);
  return generates_full_group(w, g.K);
}

std::optional<FaceMask> positive_strata_witness(const RelevantData& rd, const GradingData& g) {
  for (FaceMask f : rd.rlv) {
    if (std::binary_search(rd.cov.begin(), rd.cov.end(), f)) continue;
    if (!is_factorial_face(g, f)) return f;
  }
  return std::nullopt;
}

bool positive_strata_factorial(const RelevantData& rd, const GradingData& g) {
  return !positive_strata_witness(rd, g);
}

std::vector<int> critical_blocks(const DefiningPair& dp, FaceMask f) {
  std::vector<int> out;
  for (int i = 0; i <= dp.r; ++i) {
    int zeros = 0;
    bool high = false;
    for (int j = 0; j < dp.ns[i]; ++j) {
      if (has_column(f, dp.column(i, j))) continue;
      ++zeros;
      high = high || dp.l[i][j] >= 2;
    }
    if (zeros >= 2 || (zeros == 1 && high)) out.push_back(i);
  }
  return out;
}

std::optional<SmoothnessFailure> smoothness_witness(const DefiningPair& dp, const RelevantData& rd,
                                                    const GradingData& g) {
  for (FaceMask f : rd.rlv) {
    SmoothnessFailure w;
    w.face = f;
    w.factorial = is_factorial_face(g, f);
    w.critical = critical_blocks(dp, f);
    if (!w.factorial || (dp.r >= 2 && w.critical.size() > 2)) return w;
  }
  return std::nullopt;
}

bool is_smooth(const DefiningPair& dp, const RelevantData& rd, const GradingData& g) {
  return !smoothness_witness(dp, rd, g);
}

}  // namespace fanocpx
