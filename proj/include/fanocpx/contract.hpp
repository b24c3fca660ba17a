#pragma once

#include "fanocpx/grading.hpp"

#include <optional>
#include <vector>

namespace fanocpx {

struct ContractionStep {
  DefiningPair input;
  int deleted = -1;  // column of input
  DefiningPair output;
  // Z^(n+m) -> Z^(n'+m') on the free generators; induces pi: K -> K'.
  IntMatrix pi;
  std::optional<int> eliminated_block;  // block of the intermediate pair that became redundant
  bool toric = false;                   // a redundant block remained with r = 1
};

// Image of a class of K(step.input) in K(step.output).
KElement project_class(const ContractionStep& step, const KElement& k);

// Throws PreconditionError if the column is not exceptional, and InvalidPair if the
// deletion does not leave a valid pair.
ContractionStep contract(const DefiningPair& dp, int column);

// Exceptional free columns first, then the lowest exceptional index; stops at a minimal
// or toric pair.
std::vector<ContractionStep> contract_to_minimal(const DefiningPair& dp);

}  // namespace fanocpx
