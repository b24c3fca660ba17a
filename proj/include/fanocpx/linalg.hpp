#pragma once

#include "fanocpx/scalar.hpp"

#include <optional>
#include <vector>

namespace fanocpx {

struct SmithForm {
  IntMatrix U;  // unimodular, rows x rows
  IntMatrix D;  // diagonal with divisibility chain, nonnegative
  IntMatrix V;  // unimodular, cols x cols
  Eigen::Index rank = 0;
};

// U * M * V = D. Pivot: smallest nonzero |entry|, ties broken by lowest (row, col).
SmithForm smith_normal_form(const IntMatrix& M);

// Row-style Hermite normal form of the lattice spanned by the rows of M.
// Zero rows are dropped; pivots are positive and entries above a pivot lie in [0, pivot).
// If `transform` is given it receives T with T * M = [H; 0].
IntMatrix hermite_normal_form(const IntMatrix& M, IntMatrix* transform = nullptr);

Eigen::Index rank(const IntMatrix& M);
Eigen::Index rank(const RatMatrix& M);

// Lattice basis (columns) of {x in Z^n : M x = 0}.
IntMatrix lattice_kernel(const IntMatrix& M);
// Basis (columns) of the rational kernel, scaled to primitive integer columns.
IntMatrix rational_kernel(const RatMatrix& M);

// Some solution of A x = b, if any.
std::optional<RatVector> solve(const RatMatrix& A, const RatVector& b);
Rational determinant(const RatMatrix& M);
IntMatrix unimodular_inverse(const IntMatrix& U);

// Saturation of the row lattice: (Q-span of rows) intersected with Z^n, as HNF rows.
IntMatrix saturation(const IntMatrix& rows);

bool same_row_lattice(const IntMatrix& a, const IntMatrix& b);

// Element of Z^free_rank + sum Z/t_i.
struct KElement {
  IntVector free;
  std::vector<Integer> torsion;

  bool operator==(const KElement& o) const;
  bool operator!=(const KElement& o) const { return !(*this == o); }
};

// Presentation of Z^ambient / im(M) with an explicit projection.
struct ClassGroup {
  Eigen::Index ambient = 0;
  Eigen::Index free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors d_1 | d_2 | ..., each >= 2
  // (free_rank + torsion.size()) x ambient; torsion rows reduced mod their factor.
  IntMatrix projection;

  KElement project(const IntVector& x) const;
  KElement reduce(const IntVector& free, std::vector<Integer> torsion) const;
  KElement zero() const;
  KElement add(const KElement& a, const KElement& b) const;
  KElement scale(const Integer& c, const KElement& a) const;
  // Lattice of x in Z^ambient with project(x) = 0, as HNF rows.
  IntMatrix kernel_lattice() const;
  bool trivial() const { return free_rank == 0 && torsion.empty(); }
};

ClassGroup cokernel(const IntMatrix& M);

// Builds a presentation from explicit free rows and torsion rows (mod factors),
// as used by tabulated degree matrices. Factors need not form a chain.
ClassGroup group_from_rows(const IntMatrix& free_rows, const IntMatrix& torsion_rows,
                           const std::vector<Integer>& factors);

bool generates_full_group(const std::vector<KElement>& vectors, const ClassGroup& G);

}  // namespace fanocpx
