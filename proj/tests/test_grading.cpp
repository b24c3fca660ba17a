#include <doctest.h>

#include "corpus.hpp"
#include "fanocpx/grading.hpp"

#include <numeric>
#include <random>

using namespace fanocpx;
using namespace corpus;

namespace {

// Unimodular U with U * A = B, if the two degree matrices differ by a change of basis.
std::optional<IntMatrix> basis_change(const IntMatrix& A, const IntMatrix& B) {
  const Eigen::Index k = A.rows();
  RatMatrix At = to_rational(IntMatrix(A.transpose()));
  IntMatrix U(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    auto sol = solve(At, to_rational(IntVector(B.row(i).transpose())));
    if (!sol) return std::nullopt;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (denom((*sol)(j)) != 1) return std::nullopt;
      U(i, j) = numer((*sol)(j));
    }
  }
  if (IntMatrix(U * A) != B) return std::nullopt;
  Rational det = determinant(to_rational(U));
  if (det != 1 && det != -1) return std::nullopt;
  return U;
}

bool matches_up_to_columns(const IntMatrix& A, const IntMatrix& B) {
  std::vector<int> perm(A.cols());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    IntMatrix Ap(A.rows(), A.cols());
    for (Eigen::Index c = 0; c < A.cols(); ++c) Ap.col(c) = A.col(perm[c]);
    if (basis_change(Ap, B)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Independent exceptional-column test: a nonzero linear form nonnegative on all other columns
// exists iff those columns do not generate the space. Searched over a small box.
bool has_small_witness(const IntMatrix& P, int skip, int bound) {
  const int d = static_cast<int>(P.rows());
  std::vector<int> phi(d, -bound);
  while (true) {
    bool nonzero = std::any_of(phi.begin(), phi.end(), [](int x) { return x != 0; });
    if (nonzero) {
      bool ok = true;
      for (int c = 0; c < P.cols() && ok; ++c) {
        if (c == skip) continue;
        Integer v = 0;
        for (int i = 0; i < d; ++i) v += phi[i] * P(i, c);
        if (v < 0) ok = false;
      }
      if (ok) return true;
    }
    int i = d - 1;
    while (i >= 0 && phi[i] == bound) phi[i] = -bound, --i;
    if (i < 0) return false;
    ++phi[i];
  }
}

}  // namespace

TEST_CASE("grading of 2.01") {
  DefiningPair dp = no_201();
  GradingData g = grading_of(dp);
  CHECK(g.K.free_rank == 2);
  CHECK(g.K.torsion.empty());
  IntMatrix target = int_matrix({{1, 0, 1, 0, 1, 0}, {0, 1, 0, 1, 0, 1}});
  auto U = basis_change(g.Q, target);
  REQUIRE(U);
  CHECK(IntVector(*U * g.mu.free) == int_vector({1, 1}));
  CHECK(IntVector(*U * g.kappa.free) == int_vector({2, 2}));
  CHECK(is_fano(g));
  CHECK(g.eff.rays().size() == 2);
  CHECK(same_cone(g.eff, g.mov));

  GradingData h = g;
  IntMatrix Uinv = unimodular_inverse(*U);
  h.kappa.free = Uinv * int_vector({1, 0});
  CHECK_FALSE(is_fano(h));
}

TEST_CASE("class groups of the table entries") {
  CHECK(grading_of(no_203()).K.torsion == std::vector<Integer>{3});
  CHECK(grading_of(no_204()).K.torsion == std::vector<Integer>{3});
  CHECK(grading_of(no_202()).K.torsion.empty());
  GradingData g5 = grading_of(no_205());
  CHECK(is_fano(g5));
  CHECK(matches_up_to_columns(g5.Q, int_matrix({{2, 0, 1, 0, 1, 1}, {0, 1, 0, 1, 0, 1}})));
  GradingData g6 = grading_of(no_206());
  CHECK(is_fano(g6));
  CHECK(matches_up_to_columns(g6.Q, int_matrix({{1, 1, 2, 0, 1, 0}, {1, 1, 0, 1, 0, 1}})));
}

TEST_CASE("homogeneity and anticanonical class on the corpus") {
  for (auto& [name, dp] : small_corpus()) {
    INFO(name);
    GradingData g = grading_of(dp);
    for (int i = 0; i <= dp.r; ++i) {
      KElement acc = g.K.zero();
      for (int j = 0; j < dp.ns[i]; ++j) acc = g.K.add(acc, g.K.scale(dp.l[i][j], g.weights[dp.column(i, j)]));
      CHECK(acc == g.mu);
    }
    CHECK(g.delta() == dp.columns() - dp.r - dp.s);
    IntVector x = IntVector::Ones(dp.columns());
    for (int j = 0; j < dp.ns[0]; ++j) x(dp.column(0, j)) -= (dp.r - 1) * dp.l[0][j];
    CHECK(g.K.project(x) == g.kappa);
  }
}

TEST_CASE("exceptional weights") {
  CHECK(exceptional_weights(no_201()).empty());
  CHECK(is_combinatorially_minimal(no_201()));
  // v02 = v01 + (new column), so v02 becomes exceptional as well
  CHECK(exceptional_weights(no_201_plus()) == std::vector<int>{1, 6});
  CHECK_FALSE(is_combinatorially_minimal(no_201_plus()));
  CHECK(is_combinatorially_minimal(no_206()));

  IntMatrix P = no_201().P();
  IntVector phi = int_vector({0, 1, 1, 0});
  for (int c = 1; c < 6; ++c) CHECK(dot(phi, IntVector(P.col(c))) >= 0);

  for (auto& [name, dp] : small_corpus()) {
    INFO(name);
    std::vector<int> ex = exceptional_weights(dp);
    CHECK(ex == exceptional_weights_from_grading(grading_of(dp)));
    IntMatrix Pd = dp.P();
    for (int c = 0; c < dp.columns(); ++c) {
      bool is_ex = std::find(ex.begin(), ex.end(), c) != ex.end();
      if (!is_ex) CHECK(has_small_witness(Pd, c, 6));
    }
  }
}

TEST_CASE("mu in the interior of Eff") {
  CHECK(mu_in_eff_interior(no_201()));
  DefiningPair line = make(2, {2, 2, 2}, 2,
                           {{-1, -1, 1, 1, 0, 0, 0, 0},
                            {-1, -1, 0, 0, 1, 1, 0, 0},
                            {0, 1, 0, 0, 0, -1, 1, -1},
                            {0, 0, 0, 1, 0, -1, 0, 0}});
  REQUIRE(validate(line).valid());
  CHECK_FALSE(mu_interior_free_column_criterion(line));
  CHECK_FALSE(mu_in_eff_interior(line));
  for (auto& [name, dp] : small_corpus()) {
    INFO(name);
    CHECK_NOTHROW(mu_in_eff_interior(dp));
  }
}

TEST_CASE("gale split") {
  std::vector<IntVector> v = {int_vector({1, 0, 0}), int_vector({0, 1, 0}), int_vector({0, 0, 1}), int_vector({1, 1, -1})};
  GaleSplit g = gale_split(v);
  CHECK(g.scalars == int_vector({1, 1, -1, -1}));
  CHECK(g.plus == std::vector<int>{0, 1});
  CHECK(g.minus == std::vector<int>{2, 3});
  CHECK(g.zero.empty());
  IntVector sum = zero_vector<Integer>(3);
  for (int i = 0; i < 4; ++i) sum += g.scalars(i) * v[i];
  CHECK(is_zero(sum));
  CHECK(relint_contains(g.sigma_minus, int_vector({1, 1, 0})));
  CHECK(relint_contains(g.sigma_plus, int_vector({1, 1, 0})));

  CHECK_THROWS_AS(gale_split({int_vector({1, 0}), int_vector({0, 1})}), GeometryError);
  CHECK_THROWS_AS(gale_split({int_vector({1, 0}), int_vector({-1, 0}), int_vector({0, 1})}), GeometryError);

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> val(-3, 3);
  int done = 0;
  while (done < 100) {
    std::vector<IntVector> gens;
    for (int i = 0; i < 4; ++i) {
      IntVector x = int_vector({val(rng), val(rng), val(rng)});
      if (is_zero(x)) continue;
      gens.push_back(primitive(x));
    }
    if (gens.size() != 4) continue;
    RationalCone C = RationalCone::from_generators(3, gens);
    if (!is_pointed(C) || !is_full_dimensional(C) || C.rays().size() != 4) continue;
    ++done;
    GaleSplit s = gale_split(gens);
    CHECK(s.plus.size() >= 2);
    CHECK(s.minus.size() >= 2);
    CHECK(s.plus.size() >= s.minus.size());
  }
}

TEST_CASE("bound predicates on 2.01") {
  DefiningPair dp = no_201();
  GradingData g = grading_of(dp);
  ClassificationStats st = classification_stats(dp, g);
  CHECK(st.delta == 2);
  CHECK(st.alpha == 0);
  CHECK(st.eta == 6);
  CHECK(st.zeta == 0);
  BoundInputs in;
  in.combinatorially_minimal = true;
  in.fano = true;
  in.log_terminal = true;
  in.q_factorial = true;
  in.terminal = true;
  in.mu_in_eff_interior = true;
  in.big_cone_exists = true;
  BoundReport rep = bound_predicates(dp, g, in);
  CHECK(rep.find("picard_bound_zeta")->status == BoundStatus::holds);
  CHECK(rep.find("picard_bound_threefold")->status == BoundStatus::holds);
  CHECK(rep.find("big_cone_exists")->status == BoundStatus::holds);
  CHECK_FALSE(rep.any_violated());

  in.big_cone_exists = false;
  CHECK(bound_predicates(dp, g, in).find("big_cone_exists")->status == BoundStatus::violated);

  // m >= dim: the big-cone statement has nothing to say
  DefiningPair many = make(2, {2, 2, 2}, 3,
                           {{-1, -1, 1, 1, 0, 0, 0, 0, 0},
                            {-1, -1, 0, 0, 1, 1, 0, 0, 0},
                            {0, 1, 0, 0, 0, -1, 1, 0, -1},
                            {0, 0, 0, 1, 0, -1, 0, 1, -1}});
  REQUIRE(validate(many).valid());
  BoundReport r2 = bound_predicates(many, grading_of(many), in);
  CHECK(r2.find("big_cone_exists")->status == BoundStatus::hypotheses_not_satisfied);
}

TEST_CASE("grading invariants under admissible operations") {
  std::mt19937 rng(99);
  for (auto& [name, dp0] : small_corpus()) {
    INFO(name);
    GradingData g0 = grading_of(dp0);
    DefiningPair dp = dp0;
    std::vector<int> total(dp.columns());
    for (int k = 0; k < dp.columns(); ++k) total[k] = k;
    for (int step = 0; step < 8; ++step) {
      AdmissibleOp o = random_op(dp, rng);
      std::vector<int> perm = column_permutation(dp, o);
      std::vector<int> next(total.size());
      for (size_t k = 0; k < total.size(); ++k) next[k] = total[perm[k]];
      total = next;
      dp = fanocpx::apply(dp, o);
    }
    GradingData g = grading_of(dp);
    CHECK(g.K.free_rank == g0.K.free_rank);
    CHECK(g.K.torsion == g0.K.torsion);
    CHECK(is_fano(g) == is_fano(g0));
    CHECK(exceptional_weights(dp).size() == exceptional_weights(dp0).size());
    CHECK(mu_in_eff_interior(dp) == mu_in_eff_interior(dp0));
    // Cones agree when pulled back to Z^(n+m).
    std::uniform_int_distribution<int> val(-2, 3);
    const int N = dp.columns();
    for (int t = 0; t < 20; ++t) {
      IntVector x(N), y(N);
      for (int k = 0; k < N; ++k) x(k) = val(rng);
      for (int k = 0; k < N; ++k) y(k) = x(total[k]);
      IntVector a = g0.Q * x, b = g.Q * y;
      CHECK(contains(g0.eff, a) == contains(g.eff, b));
      CHECK(contains(g0.mov, a) == contains(g.mov, b));
      CHECK(relint_contains(g0.mov, a) == relint_contains(g.mov, b));
    }
    ClassificationStats s0 = classification_stats(dp0, g0), s = classification_stats(dp, g);
    CHECK(s.alpha == s0.alpha);
    CHECK(s.eta == s0.eta);
  }
}
