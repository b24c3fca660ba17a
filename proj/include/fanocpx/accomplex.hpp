#pragma once

#include "fanocpx/stratification.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fanocpx {

// Tropical variety: lambda = {0} x Q^s and leaves lambda_i = cone(e_i) + lambda with
// e_0 = -(e_1 + ... + e_r). Leaf coordinates (t, x) stand for t e_i + (0, x).
IntVector leaf_direction(int r, int i);
RatVector leaf_to_ambient(int r, int i, const RatVector& leaf_point);
IntVector leaf_to_ambient(int r, int i, const IntVector& leaf_point);
// Leaf index i with v in relint(lambda_i), -1 if v lies in lambda, -2 if outside trop(X).
int tropical_position(int r, const RatVector& v);

bool meets_leaf_interior(const DefiningPair& dp, FaceMask cone, int i);

enum class ConeType { big, elementary_big, leaf, other };
std::string to_string(ConeType t);

// Throws PreconditionError if the cone is not in Sigma.
ConeType classify_cone(const DefiningPair& dp, const RelevantData& rd, FaceMask cone);
bool has_big_cone(const DefiningPair& dp, const RelevantData& rd);

struct ExponentChecks {
  bool platonic = false;
  bool at_most_two_nontrivial = false;
};
ExponentChecks platonic_and_terminal_exponent_checks(std::vector<Integer> exponents);

struct PElementaryCone {
  std::vector<int> columns;  // one column per block, block order
  std::vector<Integer> exponents;
  std::vector<Integer> ell_rho;
  Integer ell;
  IntVector v_sigma;
  std::optional<RatVector> v_prime;  // present iff ell > 0

  FaceMask mask() const;
};

PElementaryCone elementary_invariants(const DefiningPair& dp, const std::vector<int>& columns);
// v'_sigma; throws PreconditionError if ell <= 0.
RatVector elementary_vertex(const DefiningPair& dp, const std::vector<int>& columns);

std::vector<PElementaryCone> all_elementary_cones(const DefiningPair& dp);
// P-elementary cones lying in a cone of Sigma.
std::vector<PElementaryCone> contributing_elementary_cones(const DefiningPair& dp, const RelevantData& rd);

struct LeafComplexOptions {
  bool restrict_to_sigma = true;
};

struct LeafComplex {
  std::vector<RatVector> lineality_points;  // generating points in Q^s
  RationalPolytope lineality;
  std::vector<RationalPolytope> leaves;  // in leaf coordinates Q^(1+s)
  std::vector<std::vector<IntVector>> allowed;  // per leaf: origin and the P-columns in that leaf
};

// Throws PreconditionError if some contributing cone has ell <= 0 (unbounded complex).
LeafComplex build_leaf_complex(const DefiningPair& dp, const RelevantData& rd, LeafComplexOptions opt = {});

std::optional<PElementaryCone> log_terminal_witness(const DefiningPair& dp, const RelevantData& rd);
bool is_log_terminal(const DefiningPair& dp, const RelevantData& rd);

struct LatticeWitness {
  int leaf = 0;
  bool in_lineality = false;
  IntVector leaf_point;  // (t, x)
  IntVector point;       // in Q^(r+s)
};

std::optional<LatticeWitness> terminal_witness(const DefiningPair& dp, const LeafComplex& lc);
bool is_terminal(const DefiningPair& dp, const RelevantData& rd);

// Lattice points of the leaf hulls, in Q^(r+s), sorted and unique.
std::vector<IntVector> leaf_complex_lattice_points(const DefiningPair& dp, const LeafComplex& lc);

// Lattice points of A_X on trop(X) and |Sigma|, computed from the dual of B_X.
// Throws PreconditionError for more than `max_columns` columns or if a leaf section is unbounded.
std::vector<IntVector> dual_polytope_oracle(const DefiningPair& dp, const GradingData& g, const RelevantData& rd,
                                            int max_columns = 8);

}  // namespace fanocpx
