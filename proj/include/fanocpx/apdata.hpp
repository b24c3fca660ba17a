#pragma once

#include "fanocpx/linalg.hpp"

#include <string>
#include <variant>
#include <vector>

namespace fanocpx {

// Defining data (A, P) of a rational variety with a torus action of complexity one.
// Columns of P are ordered v_{0,1..n0}, ..., v_{r,1..nr}, v_1..v_m (all indices 0-based here).
struct DefiningPair {
  int r = 1;
  std::vector<int> ns;                    // n_0..n_r
  int m = 0;
  int s = 0;
  std::vector<std::vector<Integer>> l;    // exponent tuples per block
  IntMatrix d;                            // s x n
  IntMatrix dprime;                       // s x m
  RatMatrix A;                            // 2 x (r+1)

  int n() const;
  int columns() const { return n() + m; }
  int offset(int block) const;
  int column(int block, int j) const { return offset(block) + j; }
  int free_column(int k) const { return n() + k; }
  // Block of a column, or -1 for free columns.
  int block_of(int col) const;
  int index_in_block(int col) const;
  Integer l_of(int col) const;  // 1 for free columns
  bool is_free(int col) const { return col >= n(); }
  int dim() const { return s + 1; }

  IntMatrix L() const;
  IntMatrix P() const;
  IntVector column_vector(int col) const;

  bool operator==(const DefiningPair& o) const;
};

RatMatrix default_A(int r);

// Builds a pair from a full (r+s) x (n+m) matrix P; the upper r rows must be the L-block.
DefiningPair from_P(int r, const std::vector<int>& ns, int m, const IntMatrix& P);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<int> redundant_blocks;

  bool valid() const { return errors.empty(); }
  bool irredundant() const { return redundant_blocks.empty(); }
};

ValidationReport validate(const DefiningPair& dp);

struct InvalidPair : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Throws InvalidPair with the first diagnostic.
void require_valid(const DefiningPair& dp);

namespace op {
struct SwapInBlock {
  int block, j1, j2;
};
struct SwapBlocks {
  int i1, i2;
};
// Adds factor * (upper row `upper`, 0-based among the r rows) to lower row `lower`.
struct AddUpperRowMultiple {
  int upper, lower;
  Integer factor;
};
// Replaces the lower rows by U * lower rows.
struct LowerRowOp {
  IntMatrix U;
};
struct SwapFreeColumns {
  int k1, k2;
};
}  // namespace op

using AdmissibleOp = std::variant<op::SwapInBlock, op::SwapBlocks, op::AddUpperRowMultiple, op::LowerRowOp, op::SwapFreeColumns>;

DefiningPair apply(const DefiningPair& dp, const AdmissibleOp& o);

// Column permutation taking dp to the result of an op: result column c is dp column perm[c].
std::vector<int> column_permutation(const DefiningPair& dp, const AdmissibleOp& o);

// Deterministic orbit representative; A is reset to the default.
DefiningPair canonical_form(const DefiningPair& dp);

// Pair with the given block structure whose P has the given row lattice (rows of any basis).
// The L rows must span a direct summand of the lattice.
DefiningPair pair_from_lattice(int r, const std::vector<int>& ns, int m, const std::vector<std::vector<Integer>>& l,
                               const IntMatrix& lattice);

// Removes a redundant block (n_i = 1, l_i1 = 1) together with one relation.
// Requires r >= 2.
DefiningPair eliminate_redundant_block(const DefiningPair& dp, int block);

}  // namespace fanocpx
