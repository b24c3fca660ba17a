#pragma once

#include "fanocpx/apdata.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fanocpx {

class Table;

struct Constellation {
  std::string name;  // "1a".."1e", "2a".."2j"
  int delta = 2;
  int m = 0;
  int r = 2;
  std::vector<int> ns;
};

// The fifteen constellations of terminal combinatorially minimal Fano threefolds, s = 2.
const std::vector<Constellation>& constellations();
// Throws std::invalid_argument for an unknown name.
const Constellation& constellation(const std::string& name);

// The search runs over degree matrices in a normal form of Eff and over the row lattices
// of P compatible with them.
struct SearchBudget {
  // Index of the row lattice of P in its saturation, i.e. the order of the torsion of Cl.
  int d_cap = 40;
  // Coordinates of the weights once Eff is cone((1,0),(p,q)) with 0 <= p < q.
  int weight_cap = 4;
  // Rank three: weights in the cube [0, weight_cap_rank3]^3.
  int weight_cap_rank3 = 2;
  int exponent_cap = 5;
  // Stop after this many degree matrices (0: no limit); the untouched work is the frontier.
  long long max_degree_matrices = 0;

  bool valid() const { return d_cap > 0 && weight_cap > 0 && weight_cap_rank3 > 0 && exponent_cap > 0 && max_degree_matrices >= 0; }
  // Default budget with d_cap taken from FANOCPX_BUDGET when set.
  static SearchBudget from_env();
};

// Optional restriction for the case n = (2,2,2), m = 0.
struct EnumerationFilter {
  std::optional<int> disposition;       // 1..5
  std::optional<char> configuration;    // 'A': some relation with all exponents one
};

// Disposition of a degree matrix in the case (2,2,2): 1 no interior weight, 2 one, 3 two of one
// relation off a common ray, 4 two of one relation on a common ray, 5 two from different relations.
// 0 otherwise.
int disposition_of(const std::vector<int>& ns, const IntMatrix& Q);

struct SearchCounters {
  long long exponent_tuples = 0;
  long long degree_matrices = 0;  // passing the grading filters
  long long pairs = 0;            // candidate P matrices
  long long survivors = 0;        // before deduplication
};

struct EnumerationResult {
  std::string constellation;
  std::vector<DefiningPair> classes;  // canonical forms, sorted
  bool exhausted = false;
  std::vector<std::string> frontier;  // unexplored work units when exhausted
  SearchCounters counters;
};

EnumerationResult enumerate_constellation(const Constellation& c, const SearchBudget& b,
                                          const EnumerationFilter& filter = {}, int jobs = 1);

struct TableComparison {
  std::vector<std::string> matched, missing;
  std::vector<DefiningPair> extra;
  std::vector<std::string> exhausted;  // constellations whose search ran out of budget
  std::vector<EnumerationResult> runs;
};

TableComparison compare_with_table(const std::vector<EnumerationResult>& runs, const Table& table);
TableComparison reproduce_table(const SearchBudget& b, const Table& table, int jobs = 1,
                                const std::vector<std::string>& names = {});

// The degree-matrix filters of the search applied to one grading Q (2 or 3 rows, columns in
// block order): minimality, generation, Fano, Q-factoriality, factorial positive strata on the
// free part and the exponent condition. Rank two gradings are first moved to Eff's normal form.
bool grading_admissible(const Constellation& c, const std::vector<std::vector<Integer>>& l, const IntMatrix& Q);

// Sort key used for deterministic output.
std::string class_signature(const DefiningPair& dp);

}  // namespace fanocpx
