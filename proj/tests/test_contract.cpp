#include "corpus.hpp"
#include "fanocpx/contract.hpp"
#include "fanocpx/report.hpp"

#include <doctest.h>

using namespace fanocpx;
using namespace corpus;

namespace {

DefiningPair append_free(const DefiningPair& base, const std::vector<IntVector>& cols) {
  IntMatrix P = base.P();
  IntMatrix Q(P.rows(), P.cols() + static_cast<Eigen::Index>(cols.size()));
  Q.leftCols(P.cols()) = P;
  for (std::size_t k = 0; k < cols.size(); ++k) Q.col(P.cols() + static_cast<Eigen::Index>(k)) = cols[k];
  return from_P(base.r, base.ns, base.m + static_cast<int>(cols.size()), Q);
}

// Fano pairs with exceptional weights: table pairs with one or two random free columns.
std::vector<DefiningPair> exceptional_instances(int count, unsigned seed) {
  std::mt19937 rng(seed);
  const std::vector<DefiningPair> bases = {no_201(), no_202(), no_203(), no_205(), no_206()};
  std::vector<DefiningPair> out;
  while (static_cast<int>(out.size()) < count) {
    const auto& base = bases[rng() % bases.size()];
    std::vector<IntVector> cols;
    for (int a = 0, k = 1 + static_cast<int>(rng() % 2); a < k; ++a) {
      IntVector v = IntVector::Zero(4);
      v(2) = static_cast<long long>(rng() % 5) - 2;
      v(3) = static_cast<long long>(rng() % 5) - 2;
      if (v.isZero()) v(2) = 1;
      cols.push_back(v);
    }
    DefiningPair dp = append_free(base, cols);
    if (!validate(dp).valid() || !is_fano(grading_of(dp))) continue;
    if (exceptional_weights(dp).empty()) continue;
    out.push_back(dp);
  }
  return out;
}

}  // namespace

TEST_CASE("contracting the appended column of 2.01+ recovers 2.01") {
  ContractionStep st = contract(no_201_plus(), 6);
  CHECK(st.deleted == 6);
  CHECK(st.output == no_201());
  CHECK_FALSE(st.eliminated_block);
  CHECK_FALSE(st.toric);
  CHECK(project_class(st, grading_of(no_201_plus()).kappa) == grading_of(no_201()).kappa);
  CHECK(grading_of(no_201()).kappa.free == int_vector({2, 2}));
}

TEST_CASE("non-exceptional columns are rejected") {
  for (int c = 0; c < 6; ++c) {
    CHECK_THROWS_AS(contract(no_201(), c), PreconditionError);
    try {
      contract(no_201(), c);
    } catch (const PreconditionError& e) {
      CHECK(std::string(e.what()).find("generate") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(contract(no_201(), 9), std::out_of_range);
}

TEST_CASE("contract_to_minimal") {
  CHECK(contract_to_minimal(no_201()).empty());
  auto steps = contract_to_minimal(no_201_plus());
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].deleted == 6);
  CHECK(steps[0].output == no_201());
  CHECK(is_combinatorially_minimal(steps.back().output));
}

TEST_CASE("contracting a relation variable eliminates the redundant block") {
  // In 2.01+ the column v_02 is exceptional too; deleting it leaves T_1 alone in its relation.
  ContractionStep st = contract(no_201_plus(), 1);
  CHECK(st.eliminated_block == 0);
  CHECK(st.output.r == 1);
  CHECK(st.output.columns() == 5);
  CHECK(validate(st.output).valid());
  CHECK(project_class(st, grading_of(no_201_plus()).kappa) == grading_of(st.output).kappa);
}

TEST_CASE("two appended free columns contract in either order") {
  const DefiningPair dp = append_free(no_201(), {int_vector({0, 0, 1, 0}), int_vector({0, 0, 0, 1})});
  REQUIRE(validate(dp).valid());
  REQUIRE(is_fano(grading_of(dp)));
  auto exc = exceptional_weights(dp);
  REQUIRE(std::count(exc.begin(), exc.end(), 6) == 1);
  REQUIRE(std::count(exc.begin(), exc.end(), 7) == 1);
  auto steps = contract_to_minimal(dp);
  REQUIRE(steps.size() == 2);
  DefiningPair a = contract(contract(dp, 6).output, 6).output;
  DefiningPair b = contract(contract(dp, 7).output, 6).output;
  CHECK(canonical_form(a) == canonical_form(b));
  CHECK(canonical_form(steps.back().output) == canonical_form(a));
  CHECK(canonical_form(a) == canonical_form(no_201()));
}

TEST_CASE("contraction preserves Fano and terminal") {
  int q_lost = 0, checked_terminal = 0;
  for (const auto& dp : exceptional_instances(60, 11)) {
    const VarietyReport in = analyze(dp);
    for (int c : exceptional_weights(dp)) {
      if (!dp.is_free(c) && dp.ns[dp.block_of(c)] == 1) continue;
      ContractionStep st = contract(dp, c);
      CHECK(project_class(st, grading_of(dp).kappa) == grading_of(st.output).kappa);
      const VarietyReport out = analyze(st.output);
      CHECK(out.fano);
      if (in.q_factorial == true && out.q_factorial != true) ++q_lost;
      if (in.terminal == true && in.q_factorial == true && out.q_factorial == true) {
        ++checked_terminal;
        CHECK(out.terminal == true);
      }
    }
  }
  MESSAGE("terminal checks: " << checked_terminal << ", Q-factoriality lost: " << q_lost);
  CHECK(checked_terminal > 0);
}

TEST_CASE("contract_to_minimal terminates at a minimal or toric pair and is order independent on free columns") {
  for (const auto& dp : exceptional_instances(25, 3)) {
    auto steps = contract_to_minimal(dp);
    REQUIRE_FALSE(steps.empty());
    for (std::size_t k = 1; k < steps.size(); ++k) CHECK(steps[k].input == steps[k - 1].output);
    for (const auto& st : steps) CHECK(st.output.columns() < st.input.columns());
    const DefiningPair& last = steps.back().output;
    CHECK((steps.back().toric || exceptional_weights(last).empty() ||
           std::all_of(exceptional_weights(last).begin(), exceptional_weights(last).end(),
                       [&](int c) { return !last.is_free(c) && last.ns[last.block_of(c)] == 1; })));
    // All appended columns exceptional: deleting them in reverse order ends at the same class.
    if (dp.m == 2 && exceptional_weights(dp).size() >= 2) {
      auto exc = exceptional_weights(dp);
      if (std::count(exc.begin(), exc.end(), 6) && std::count(exc.begin(), exc.end(), 7)) {
        auto mid = contract(dp, 7).output;
        auto e2 = exceptional_weights(mid);
        if (std::count(e2.begin(), e2.end(), 6)) {
          auto alt = contract(mid, 6).output;
          auto fwd = contract(dp, 6).output;
          auto e3 = exceptional_weights(fwd);
          if (std::count(e3.begin(), e3.end(), 6)) CHECK(canonical_form(contract(fwd, 6).output) == canonical_form(alt));
        }
      }
    }
  }
}
