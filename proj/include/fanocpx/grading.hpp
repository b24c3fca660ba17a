#pragma once

#include "fanocpx/apdata.hpp"
#include "fanocpx/polyhedral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fanocpx {

struct GradingData {
  ClassGroup K;
  std::vector<KElement> weights;  // one per column of P
  IntMatrix Q;                    // free parts of the weights as columns (delta x (n+m))
  KElement mu;                    // common degree of the relations
  KElement kappa;                 // anticanonical class
  RationalCone eff, mov;          // in K_Q

  int delta() const { return static_cast<int>(K.free_rank); }
  IntVector free_weight(int col) const { return Q.col(col); }
};

GradingData grading_of(const DefiningPair& dp);

bool is_fano(const GradingData& g);

// Columns i with cone(P columns except i) = Q^(r+s).
std::vector<int> exceptional_weights(const DefiningPair& dp);
// Same set, read off the weights: w_i spans an extremal ray of Eff carrying no other weight.
std::vector<int> exceptional_weights_from_grading(const GradingData& g);

bool is_combinatorially_minimal(const DefiningPair& dp);

bool mu_in_eff_interior(const DefiningPair& dp);
bool mu_in_eff_interior(const DefiningPair& dp, const GradingData& g);
// The free-column criterion: no nonempty set of free columns spans a cone that is a linear subspace.
bool mu_interior_free_column_criterion(const DefiningPair& dp);

struct GaleSplit {
  IntVector scalars;  // kernel vector of the generator matrix
  std::vector<int> minus, zero, plus;
  RationalCone sigma_minus, sigma_plus;
};

// Input: d+1 primitive generators of a pointed full-dimensional cone in Q^d.
GaleSplit gale_split(const std::vector<IntVector>& generators);

struct ClassificationStats {
  int delta = 0;
  int alpha = 0;
  int eta = 0;
  int zeta = 0;
};

ClassificationStats classification_stats(const DefiningPair& dp, const GradingData& g);

// Whether column `col` has its weight on an extremal ray of Eff.
bool is_extremal_variable(const GradingData& g, int col);

enum class BoundStatus { holds, violated, hypotheses_not_satisfied };
std::string to_string(BoundStatus s);

struct BoundCheck {
  std::string name;
  BoundStatus status;
  std::string statement;
};

// Geometric facts that the bounds take as hypotheses; computed elsewhere.
struct BoundInputs {
  bool combinatorially_minimal = false;
  bool fano = false;
  bool q_factorial = false;
  bool log_terminal = false;
  bool terminal = false;
  bool mu_in_eff_interior = false;
  bool big_cone_exists = false;
  bool irredundant = true;
};

struct BoundReport {
  ClassificationStats stats;
  int m = 0;
  int r = 0;
  int dim = 0;
  int n = 0;
  std::vector<BoundCheck> checks;

  const BoundCheck* find(const std::string& name) const;
  bool any_violated() const;
};

// Names: "picard_bound_general", "picard_bound_zeta", "big_cone_exists", "relation_count_bound",
// "picard_bound_alpha0", "picard_bound_alpha1", "picard_bound_threefold", "mu_interior_threefold".
BoundReport bound_predicates(const DefiningPair& dp, const GradingData& g, const BoundInputs& in);

}  // namespace fanocpx
