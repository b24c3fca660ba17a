#include "fanocpx/contract.hpp"

#include <algorithm>
#include <stdexcept>

namespace fanocpx {

namespace {

// Some x in Z^ambient with G.project(x) = k.
IntVector lift_class(const ClassGroup& G, const KElement& k) {
  const Eigen::Index rows = G.projection.rows(), N = G.ambient;
  const Eigen::Index t = static_cast<Eigen::Index>(G.torsion.size());
  IntMatrix A = IntMatrix::Zero(rows, N + t);
  A.leftCols(N) = G.projection;
  for (Eigen::Index i = 0; i < t; ++i) A(G.free_rank + i, N + i) = G.torsion[static_cast<std::size_t>(i)];
  IntVector b(rows);
  for (Eigen::Index i = 0; i < G.free_rank; ++i) b(i) = k.free(i);
  for (Eigen::Index i = 0; i < t; ++i) b(G.free_rank + i) = k.torsion[static_cast<std::size_t>(i)];
  SmithForm sf = smith_normal_form(A);
  IntVector ub = sf.U * b;
  IntVector w = IntVector::Zero(N + t);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (i < sf.rank) {
      if (ub(i) % sf.D(i, i) != 0) throw std::logic_error("class has no preimage");
      w(i) = ub(i) / sf.D(i, i);
    } else if (ub(i) != 0) {
      throw std::logic_error("class has no preimage");
    }
  }
  return IntVector((sf.V * w).head(N));
}

IntVector kappa_lift(const DefiningPair& dp) {
  IntVector x = IntVector::Ones(dp.columns());
  for (int j = 0; j < dp.ns[0]; ++j) x(dp.column(0, j)) -= Integer(dp.r - 1) * dp.l[0][static_cast<std::size_t>(j)];
  return x;
}

}  // namespace

KElement project_class(const ContractionStep& step, const KElement& k) {
  const ClassGroup Kin = grading_of(step.input).K;
  const ClassGroup Kout = grading_of(step.output).K;
  return Kout.project(step.pi * lift_class(Kin, k));
}

ContractionStep contract(const DefiningPair& dp, int column) {
  require_valid(dp);
  const int N = dp.columns();
  if (column < 0 || column >= N) throw std::out_of_range("column index out of range");
  const auto exc = exceptional_weights(dp);
  if (std::find(exc.begin(), exc.end(), column) == exc.end())
    throw PreconditionError("column " + std::to_string(column) +
                            " is not exceptional: the remaining columns of P do not generate the whole space as a cone");
  const int block = dp.block_of(column);
  if (block >= 0 && dp.ns[block] == 1)
    throw InvalidPair("column " + std::to_string(column) + " is the only variable of its relation block");

  ContractionStep step;
  step.input = dp;
  step.deleted = column;

  std::vector<int> ns = dp.ns;
  int m = dp.m;
  if (block >= 0) --ns[block];
  else --m;
  IntMatrix P = dp.P();
  IntMatrix Pd(P.rows(), N - 1);
  IntMatrix pi1 = IntMatrix::Zero(N - 1, N);
  for (int c = 0, k = 0; c < N; ++c) {
    if (c == column) continue;
    Pd.col(k) = P.col(c);
    pi1(k, c) = 1;
    ++k;
  }
  DefiningPair mid = from_P(dp.r, ns, m, Pd);
  mid.A = dp.A;

  const bool redundant = block >= 0 && ns[block] == 1 && mid.l[block][0] == 1;
  if (!redundant || dp.r < 2) {
    step.output = mid;
    step.pi = pi1;
    step.toric = redundant;
  } else {
    step.eliminated_block = block;
    DefiningPair cur = mid;
    std::vector<int> perm(mid.columns());
    for (int c = 0; c < mid.columns(); ++c) perm[c] = c;
    if (block != mid.r) {
      op::SwapBlocks sw{block, mid.r};
      perm = column_permutation(mid, sw);
      cur = apply(mid, sw);
    }
    step.output = eliminate_redundant_block(mid, block);
    const int red = cur.column(cur.r, 0);
    const int N2 = step.output.columns();
    IntMatrix pi2 = IntMatrix::Zero(N2, mid.columns());
    for (int c = 0; c < cur.columns(); ++c) {
      const int src = perm[c];
      if (c == red) {
        for (int j = 0; j < step.output.ns[0]; ++j) pi2(step.output.column(0, j), src) = step.output.l[0][j];
      } else {
        pi2(c < red ? c : c - 1, src) = 1;
      }
    }
    step.pi = pi2 * pi1;
  }

  ValidationReport vr = validate(step.output);
  if (!vr.valid()) throw InvalidPair("contraction output is invalid: " + vr.errors.front());

  const ClassGroup Kout = grading_of(step.output).K;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    if (Kout.project(step.pi * IntVector(P.row(i).transpose())) != Kout.zero())
      throw std::logic_error("projection does not descend to the class groups");
  if (Kout.project(step.pi * kappa_lift(dp)) != grading_of(step.output).kappa)
    throw std::logic_error("anticanonical classes do not correspond");
  return step;
}

std::vector<ContractionStep> contract_to_minimal(const DefiningPair& dp) {
  require_valid(dp);
  if (!is_fano(grading_of(dp))) throw PreconditionError("not Fano");
  std::vector<ContractionStep> steps;
  DefiningPair cur = dp;
  for (;;) {
    std::vector<int> order = exceptional_weights(cur);
    std::stable_partition(order.begin(), order.end(), [&](int c) { return cur.is_free(c); });
    bool done = true;
    for (int c : order) {
      if (!cur.is_free(c) && cur.ns[cur.block_of(c)] == 1) continue;
      steps.push_back(contract(cur, c));
      cur = steps.back().output;
      done = steps.back().toric;
      break;
    }
    if (done) break;
  }
  return steps;
}

}  // namespace fanocpx
