#include <doctest.h>

#include "oracles.hpp"

#include "fanocpx/linalg.hpp"

#include <functional>
#include <random>
#include <set>

using namespace fanocpx;
using namespace oracles;

namespace {

bool is_unimodular(const IntMatrix& U) {
  Rational d = determinant(to_rational(U));
  return d == 1 || d == -1;
}

void check_snf(const IntMatrix& M) {
  SmithForm f = smith_normal_form(M);
  CHECK(IntMatrix(f.U * M * f.V) == f.D);
  CHECK(is_unimodular(f.U));
  CHECK(is_unimodular(f.V));
  for (Eigen::Index i = 0; i < f.D.rows(); ++i)
    for (Eigen::Index j = 0; j < f.D.cols(); ++j)
      if (i != j) CHECK(f.D(i, j) == 0);
  for (Eigen::Index i = 0; i + 1 < f.rank; ++i) CHECK(f.D(i + 1, i + 1) % f.D(i, i) == 0);
  std::vector<Integer> diag;
  for (Eigen::Index i = 0; i < f.rank; ++i) {
    CHECK(f.D(i, i) > 0);
    diag.push_back(f.D(i, i));
  }
  CHECK(diag == invariant_factors_oracle(M));
}

// Subgroup closure in Z/a1 x ... x Z/ak.
size_t closure_size(const std::vector<std::vector<long>>& gens, const std::vector<long>& mods) {
  std::set<std::vector<long>> seen;
  std::vector<std::vector<long>> stack{std::vector<long>(mods.size(), 0)};
  seen.insert(stack[0]);
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (auto& g : gens) {
      auto y = x;
      for (size_t i = 0; i < y.size(); ++i) y[i] = (y[i] + g[i]) % mods[i];
      if (seen.insert(y).second) stack.push_back(y);
    }
  }
  return seen.size();
}

const IntMatrix P201 = int_matrix({{-1, -1, 1, 1, 0, 0}, {-1, -1, 0, 0, 1, 1}, {0, 1, 0, 0, 0, -1}, {0, 0, 0, 1, 0, -1}});
const IntMatrix P203 = int_matrix({{-1, -1, 1, 1, 0, 0}, {-1, -1, 0, 0, 1, 1}, {0, 1, 0, 1, 0, -2}, {0, 0, 0, 3, 0, -3}});

}  // namespace

TEST_CASE("smith normal form examples") {
  SmithForm f = smith_normal_form(int_matrix({{2, 0}, {0, 3}}));
  CHECK(f.D == int_matrix({{1, 0}, {0, 6}}));
  check_snf(int_matrix({{2, 0}, {0, 3}}));

  SmithForm z = smith_normal_form(zeros<Integer>(2, 3));
  CHECK(z.U == identity<Integer>(2));
  CHECK(z.V == identity<Integer>(3));
  CHECK(z.rank == 0);

  SmithForm g = smith_normal_form(int_matrix({{2, 4}, {6, 8}}));
  CHECK(g.D == int_matrix({{2, 0}, {0, 4}}));
  CHECK(invariant_factors_oracle(int_matrix({{2, 4}, {6, 8}})) == std::vector<Integer>{2, 4});
}

TEST_CASE("smith normal form is deterministic") {
  IntMatrix M = int_matrix({{3, 5, 7}, {2, -4, 6}, {9, 1, 0}});
  SmithForm a = smith_normal_form(M), b = smith_normal_form(M);
  CHECK(a.U == b.U);
  CHECK(a.V == b.V);
  CHECK(a.D == b.D);
}

TEST_CASE("smith normal form postconditions on random matrices") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> dim(1, 4), val(-9, 9);
  for (int trial = 0; trial < 500; ++trial) {
    int r = dim(rng), c = dim(rng);
    IntMatrix M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = val(rng);
    check_snf(M);
  }
}

TEST_CASE("hermite normal form") {
  IntMatrix H = hermite_normal_form(int_matrix({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}));
  CHECK(H.rows() == 3);
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) CHECK(H(i, j) == 0);
  CHECK(same_row_lattice(H, int_matrix({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}})));
  IntMatrix T;
  IntMatrix M = int_matrix({{1, 2}, {2, 4}, {3, 7}});
  IntMatrix H2 = hermite_normal_form(M, &T);
  CHECK(H2 == int_matrix({{1, 0}, {0, 1}}));
  IntMatrix TM = T * M;
  CHECK(IntMatrix(TM.topRows(2)) == H2);
  CHECK(is_zero(IntVector(TM.row(2).transpose())));
}

TEST_CASE("kernels and saturation") {
  IntMatrix M = int_matrix({{1, 2, 3}, {4, 5, 6}});
  IntMatrix K = lattice_kernel(M);
  CHECK(K.cols() == 1);
  CHECK(is_zero(IntVector(M * K.col(0))));
  CHECK(content(K.col(0)) == 1);
  IntMatrix S = saturation(int_matrix({{2, 0}, {0, 2}}));
  CHECK(S == identity<Integer>(2));
  IntMatrix S2 = saturation(int_matrix({{2, 4, 6}}));
  CHECK(S2 == int_matrix({{1, 2, 3}}));
}

TEST_CASE("cokernel examples") {
  ClassGroup G = cokernel(P201.transpose());
  CHECK(G.free_rank == 2);
  CHECK(G.torsion.empty());
  ClassGroup G3 = cokernel(P203.transpose());
  CHECK(G3.free_rank == 2);
  CHECK(G3.torsion == std::vector<Integer>{3});
  ClassGroup T = cokernel(identity<Integer>(3));
  CHECK(T.trivial());
}

TEST_CASE("cokernel projection kills the image") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> dim(1, 5), val(-6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    int r = dim(rng), c = dim(rng);
    IntMatrix M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = val(rng);
    ClassGroup G = cokernel(M);
    CHECK(G.free_rank == r - rank(M));
    for (int j = 0; j < c; ++j) CHECK(G.project(M.col(j)) == G.zero());
    for (size_t i = 0; i + 1 < G.torsion.size(); ++i) CHECK(G.torsion[i + 1] % G.torsion[i] == 0);
    // surjectivity: images of unit vectors generate
    std::vector<KElement> units;
    for (int i = 0; i < r; ++i) {
      IntVector e = zero_vector<Integer>(r);
      e(i) = 1;
      units.push_back(G.project(e));
    }
    CHECK(generates_full_group(units, G));
    // kernel of projection equals the column lattice of M
    IntMatrix ker = G.kernel_lattice();
    if (rank(M) > 0)
      CHECK(same_row_lattice(ker, IntMatrix(M.transpose())));
    else
      CHECK(ker.rows() == 0);
  }
}

TEST_CASE("generates_full_group examples") {
  ClassGroup Z2 = cokernel(zeros<Integer>(2, 0));
  auto el = [&](long a, long b) { return Z2.reduce(int_vector({a, b}), {}); };
  CHECK(generates_full_group({el(1, 0), el(0, 1)}, Z2));
  CHECK_FALSE(generates_full_group({el(2, 0), el(0, 2)}, Z2));
  CHECK(generates_full_group({el(2, 0), el(0, 2), el(1, 1)}, Z2) == false);
  CHECK(generates_full_group({el(2, 0), el(0, 3), el(1, 1)}, Z2));
}

TEST_CASE("generates_full_group agrees with subgroup closure") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<long> mods = {2 + static_cast<long>(rng() % 9), 2 + static_cast<long>(rng() % 9)};
    if (mods[0] * mods[1] > 1000) continue;
    // Z/a x Z/b as cokernel of diag(a, b)
    IntMatrix M = int_matrix({{mods[0], 0}, {0, mods[1]}});
    ClassGroup G = cokernel(M);
    int k = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<long>> gens;
    std::vector<KElement> els;
    for (int i = 0; i < k; ++i) {
      std::vector<long> g = {static_cast<long>(rng() % mods[0]), static_cast<long>(rng() % mods[1])};
      gens.push_back(g);
      els.push_back(G.project(int_vector({g[0], g[1]})));
    }
    bool brute = closure_size(gens, mods) == static_cast<size_t>(mods[0] * mods[1]);
    CHECK(generates_full_group(els, G) == brute);
  }
}
