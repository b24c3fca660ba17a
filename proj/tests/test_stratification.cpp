#include <doctest.h>

#include "oracles.hpp"

#include "corpus.hpp"
#include "fanocpx/stratification.hpp"

#include <bit>
#include <random>

using namespace fanocpx;
using namespace oracles;
using namespace corpus;

namespace {

FaceMask mask_of(std::initializer_list<int> cols) {
  FaceMask f = 0;
  for (int c : cols) f |= FaceMask(1) << c;
  return f;
}

RatMatrix random_A(int r, std::mt19937& rng) {
  std::uniform_int_distribution<int> val(-5, 5);
  for (;;) {
    RatMatrix A(2, r + 1);
    for (int i = 0; i <= r; ++i) A(0, i) = val(rng), A(1, i) = val(rng);
    bool ok = true;
    for (int i = 0; i <= r && ok; ++i)
      for (int j = i + 1; j <= r && ok; ++j) ok = A(0, i) * A(1, j) - A(1, i) * A(0, j) != 0;
    if (ok) return A;
  }
}

Rational monomial(const DefiningPair& dp, int i, const std::vector<Rational>& t) {
  Rational v = 1;
  for (int j = 0; j < dp.ns[i]; ++j)
    for (Integer e = 0; e < dp.l[i][j]; ++e) v *= t[dp.column(i, j)];
  return v;
}

Rational monomial_derivative(const DefiningPair& dp, int i, int j, const std::vector<Rational>& t) {
  Rational v = Rational(dp.l[i][j]);
  for (int k = 0; k < dp.ns[i]; ++k) {
    Integer e = dp.l[i][k] - (k == j ? 1 : 0);
    for (Integer a = 0; a < e; ++a) v *= t[dp.column(i, k)];
  }
  return v;
}

// Rank of the Jacobian of the trinomial relations at a point with the zero pattern of f.
// The coefficient matrix A is chosen so that the sampled point lies on the total coordinate
// space; predicates do not depend on the choice of A.
int jacobian_rank_at_sample(const DefiningPair& dp, FaceMask f, std::mt19937& rng) {
  std::uniform_int_distribution<int> val(1, 7);
  const int N = dp.columns();
  std::vector<Rational> t(N, Rational(0));
  for (int c = 0; c < N; ++c)
    if (has_column(f, c)) t[c] = Rational(val(rng)) * (val(rng) % 2 ? 1 : -1);
  std::vector<Rational> z(dp.r + 1);
  int zeros = 0;
  for (int i = 0; i <= dp.r; ++i) {
    z[i] = monomial(dp, i, t);
    if (z[i] == 0) ++zeros;
  }
  RatMatrix A(2, dp.r + 1);
  if (zeros == dp.r + 1) {
    A = default_A(dp.r);
  } else {
    REQUIRE(zeros <= 1);
    for (int i = 0; i <= dp.r; ++i) {
      if (z[i] == 0) {
        A(0, i) = 0;
        A(1, i) = 1;
      } else {
        A(0, i) = z[i];
        A(1, i) = z[i] * (i + 1);
      }
    }
  }
  auto det2 = [&](int a, int b) { return A(0, a) * A(1, b) - A(1, a) * A(0, b); };
  RatMatrix J = RatMatrix::Zero(dp.r - 1, N);
  for (int k = 0; k + 2 <= dp.r; ++k) {
    int idx[3] = {k, k + 1, k + 2};
    Rational coeff[3] = {det2(k + 1, k + 2), det2(k + 2, k), det2(k, k + 1)};
    Rational value = 0;
    for (int a = 0; a < 3; ++a) {
      value += coeff[a] * z[idx[a]];
      for (int j = 0; j < dp.ns[idx[a]]; ++j)
        J(k, dp.column(idx[a], j)) += coeff[a] * monomial_derivative(dp, idx[a], j, t);
    }
    CHECK(value == 0);
  }
  return static_cast<int>(rank(J));
}

bool smooth_oracle(const DefiningPair& dp, const RelevantData& rd, const GradingData& g) {
  std::mt19937 rng(99);
  for (FaceMask f : rd.rlv) {
    if (!is_factorial_face(g, f)) return false;
    if (dp.r < 2) continue;
    for (int sample = 0; sample < 3; ++sample)
      if (jacobian_rank_at_sample(dp, f, rng) < dp.r - 1) return false;
  }
  return true;
}

DefiningPair candidate_4B() {
  return make(2, {2, 2, 2}, 0, {{-2, -1, 1, 2, 0, 0}, {-2, -1, 0, 0, 1, 1}, {-1, -1, 0, 1, 0, 1}, {-2, 0, 1, 0, 0, 0}});
}

std::vector<Named> fano_corpus() {
  std::vector<Named> out;
  for (auto& x : small_corpus())
    if (is_fano(grading_of(x.dp))) out.push_back(x);
  return out;
}

}  // namespace

TEST_CASE("F-faces") {
  DefiningPair dp = no_201();
  CHECK(is_F_face(dp, full_mask(6)));
  CHECK_FALSE(is_F_face(dp, mask_of({0, 1})));
  CHECK(is_F_face(dp, mask_of({0, 2, 4})));
  CHECK(is_F_face(dp, 0));
  CHECK(is_F_face(dp, mask_of({0, 1, 2, 3, 4})));
  CHECK(is_F_face(dp, mask_of({0, 1, 2, 3})));
  CHECK_FALSE(is_F_face(dp, mask_of({0, 1, 2})));

  for (auto& [name, x] : small_corpus()) {
    INFO(name);
    for (FaceMask f = 0; f <= full_mask(x.columns()); ++f)
      CHECK(is_F_face(x, f) == f_face_oracle(x.A, x.ns, f));
  }

  std::mt19937 rng(5);
  for (int r = 1; r <= 5; ++r) {
    for (int trial = 0; trial < 4; ++trial) {
      DefiningPair syn;
      syn.r = r;
      syn.m = static_cast<int>(rng() % 2);
      for (int i = 0; i <= r; ++i) {
        syn.ns.push_back(1 + static_cast<int>(rng() % 2));
        syn.l.push_back(std::vector<Integer>(syn.ns.back(), 1));
      }
      syn.A = random_A(r, rng);
      if (syn.columns() > 12) continue;
      for (FaceMask f = 0; f <= full_mask(syn.columns()); ++f)
        REQUIRE(is_F_face(syn, f) == f_face_oracle(syn.A, syn.ns, f));
    }
  }
}

TEST_CASE("relevant faces of 2.01") {
  DefiningPair dp = no_201();
  GradingData g = grading_of(dp);
  RelevantData rd = relevant_and_covering(dp, g);
  CHECK(rd.is_relevant(mask_of({0, 3, 4})));
  CHECK_FALSE(rd.is_relevant(mask_of({0, 2, 4})));
  CHECK_FALSE(rd.is_relevant(0));
  CHECK(rd.is_relevant(full_mask(6)));
  CHECK(stratum_dimension(rd, full_mask(6)) == 3);
  for (FaceMask f : rd.cov) CHECK(stratum_dimension(rd, f) == 0);
  CHECK_THROWS_AS(stratum_dimension(rd, mask_of({0, 2, 4})), PreconditionError);
  CHECK(is_Q_factorial(rd, g));
  CHECK(positive_strata_factorial(rd, g));

  GradingData bad = g;
  bad.kappa.free = int_vector({0, 0});
  CHECK_THROWS_AS(relevant_and_covering(dp, bad), PreconditionError);
}

TEST_CASE("relevant data on the corpus") {
  for (auto& [name, dp] : fano_corpus()) {
    INFO(name);
    GradingData g = grading_of(dp);
    RelevantData rd = relevant_and_covering(dp, g);
    for (FaceMask f : rd.cov) CHECK(rd.is_relevant(f));
    for (FaceMask f : rd.rlv) {
      CHECK(std::binary_search(rd.f_faces.begin(), rd.f_faces.end(), f));
      int dimf = stratum_dimension(rd, f);
      for (FaceMask h : rd.rlv)
        if (h != f && (h & f) == h) CHECK(dimf > stratum_dimension(rd, h));
    }
    // rays of Sigma are exactly the columns of P
    const IntMatrix P = dp.P();
    for (int c = 0; c < dp.columns(); ++c) CHECK(rd.in_sigma(FaceMask(1) << c));
    for (FaceMask s : rd.sigma)
      if (s != 0 && column_cone(dp, s).dimension() == 1) CHECK(std::popcount(s) == 1);
    // Sigma is closed under faces
    for (FaceMask s : rd.sigma)
      for (FaceMask t : cone_faces(dp, s)) CHECK(rd.in_sigma(t));
    if (is_Q_factorial(rd, g)) {
      for (FaceMask f : rd.rlv)
        for (FaceMask h : rd.f_faces)
          if ((f & h) == f) CHECK(rd.is_relevant(h));
    }
  }
}

TEST_CASE("Q-factoriality of the table entries") {
  for (auto dp : {no_201(), no_202(), no_203(), no_204(), no_205(), no_206()}) {
    GradingData g = grading_of(dp);
    RelevantData rd = relevant_and_covering(dp, g);
    CHECK(is_Q_factorial(rd, g));
    CHECK(positive_strata_factorial(rd, g));
  }
}

TEST_CASE("positive-dimensional strata of the 4B candidate") {
  DefiningPair dp = candidate_4B();
  REQUIRE(validate(dp).valid());
  GradingData g = grading_of(dp);
  FaceMask f = mask_of({1, 2, 4});
  CHECK_FALSE(is_factorial_face(g, f));
  std::vector<IntVector> w = {g.Q.col(1), g.Q.col(2), g.Q.col(4)};
  for (auto& x : w) CHECK(x.sum() == 2);
  REQUIRE(is_fano(g));
  RelevantData rd = relevant_and_covering(dp, g);
  CHECK(rd.is_relevant(f));
  CHECK(stratum_dimension(rd, f) >= 1);
  CHECK_FALSE(positive_strata_factorial(rd, g));
}

TEST_CASE("smoothness") {
  auto smooth = [](const DefiningPair& dp) {
    GradingData g = grading_of(dp);
    return is_smooth(dp, relevant_and_covering(dp, g), g);
  };
  CHECK(smooth(no_201()));
  CHECK(smooth(no_202()));
  CHECK_FALSE(smooth(no_203()));
  CHECK_FALSE(smooth(no_204()));
  CHECK_FALSE(smooth(no_205()));
  CHECK_FALSE(smooth(no_206()));

  for (auto& [name, dp] : fano_corpus()) {
    INFO(name);
    GradingData g = grading_of(dp);
    RelevantData rd = relevant_and_covering(dp, g);
    CHECK(is_smooth(dp, rd, g) == smooth_oracle(dp, rd, g));
  }
}

TEST_CASE("stratification is invariant under admissible operations") {
  std::mt19937 rng(21);
  for (auto& [name, dp0] : fano_corpus()) {
    INFO(name);
    GradingData g0 = grading_of(dp0);
    RelevantData rd0 = relevant_and_covering(dp0, g0);
    DefiningPair dp = dp0;
    std::vector<int> total(dp.columns());
    for (int k = 0; k < dp.columns(); ++k) total[k] = k;
    for (int step = 0; step < 10; ++step) {
      AdmissibleOp o = random_op(dp, rng);
      std::vector<int> perm = column_permutation(dp, o);
      std::vector<int> next(total.size());
      for (size_t k = 0; k < total.size(); ++k) next[k] = total[perm[k]];
      total = next;
      dp = fanocpx::apply(dp, o);
    }
    GradingData g = grading_of(dp);
    RelevantData rd = relevant_and_covering(dp, g);
    auto pull = [&](FaceMask f) {
      FaceMask out = 0;
      for (int c : mask_columns(f)) out |= FaceMask(1) << total[c];
      return out;
    };
    std::vector<FaceMask> rlv;
    for (FaceMask f : rd.rlv) rlv.push_back(pull(f));
    std::sort(rlv.begin(), rlv.end());
    CHECK(rlv == rd0.rlv);
    CHECK(is_Q_factorial(rd, g) == is_Q_factorial(rd0, g0));
    CHECK(is_smooth(dp, rd, g) == is_smooth(dp0, rd0, g0));
  }
}
