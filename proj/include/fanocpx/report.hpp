#pragma once

#include "fanocpx/accomplex.hpp"
#include "fanocpx/grading.hpp"
#include "fanocpx/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fanocpx {

class Table;

// Everything `analyze` computes for one pair. Booleans that could not be decided
// (a precondition failed upstream) are empty and carry a "reason" witness.
struct VarietyReport {
  DefiningPair input;
  std::vector<std::string> errors, warnings;
  std::vector<int> redundant_blocks;
  bool valid = false;

  // Present when valid.
  int free_rank = 0;
  std::vector<Integer> torsion;
  IntMatrix degree_free;                     // delta x (n+m)
  std::vector<std::vector<Integer>> degree_torsion;  // per column
  KElement mu, kappa;
  std::vector<IntVector> eff_rays, mov_rays;
  ClassificationStats stats;
  int dim = 0;
  std::vector<int> exceptional;

  bool fano = false;
  bool combinatorially_minimal = false;
  bool mu_in_eff_interior = false;
  std::optional<bool> q_factorial, positive_strata_factorial, smooth, log_terminal, terminal, big_cone;

  std::vector<RatVector> lineality_vertices;       // in Q^s
  std::vector<std::vector<RatVector>> leaf_vertices;  // leaf coordinates (t, x)
  json witnesses = json::object();                 // keyed by predicate name
  std::vector<BoundCheck> bounds;
  std::optional<std::string> table_row;

  bool operator==(const VarietyReport& o) const;
};

VarietyReport analyze(const DefiningPair& dp, const Table* table = nullptr);

json report_to_json(const VarietyReport& rep);
VarietyReport report_from_json(const json& j);
// Matrices in block layout, one predicate per line.
std::string render_text(const VarietyReport& rep);
std::string render_P(const DefiningPair& dp);

}  // namespace fanocpx
