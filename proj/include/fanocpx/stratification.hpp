#pragma once

#include "fanocpx/grading.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fanocpx {

// Face gamma_0 of the positive orthant: bit c set iff e_c lies in gamma_0,
// i.e. the variable T_c does not vanish on the stratum.
using FaceMask = std::uint32_t;

inline bool has_column(FaceMask f, int c) { return (f >> c) & 1u; }
inline FaceMask full_mask(int columns) { return columns >= 32 ? ~FaceMask(0) : (FaceMask(1) << columns) - 1; }
std::vector<int> mask_columns(FaceMask f);

// Blocks i with e_ij in gamma_0 for all j (the monomials that do not vanish).
std::vector<int> nonvanishing_blocks(const DefiningPair& dp, FaceMask f);
bool is_F_face(const DefiningPair& dp, FaceMask f);

// Q(gamma_0): cone over the free parts of the weights in gamma_0.
RationalCone weight_cone(const GradingData& g, FaceMask f);
// Cone over the P-columns in the mask.
RationalCone column_cone(const DefiningPair& dp, FaceMask f);

struct RelevantData {
  int columns = 0;
  std::vector<FaceMask> f_faces;  // sorted
  std::vector<FaceMask> rlv;      // sorted
  std::vector<FaceMask> cov;      // inclusion-minimal members of rlv
  // Cones of Sigma as the sets of P-columns they contain, closed under faces, sorted.
  std::vector<FaceMask> sigma;
  std::vector<FaceMask> sigma_maximal;

  bool is_relevant(FaceMask f) const;
  bool in_sigma(FaceMask cone) const;
};

// Throws PreconditionError if not Fano.
RelevantData relevant_and_covering(const DefiningPair& dp, const GradingData& g);
// Fills cov, sigma_maximal and (optionally) sigma from columns and rlv.
void complete_relevant_data(const DefiningPair& dp, RelevantData& rd, bool with_faces = true);

// Columns of P lying in each face of cone(columns of `cone`).
std::vector<FaceMask> cone_faces(const DefiningPair& dp, FaceMask cone);

bool is_Q_factorial(const RelevantData& rd, const GradingData& g);
// First relevant face whose weight cone is not full-dimensional.
std::optional<FaceMask> non_Q_factorial_witness(const RelevantData& rd, const GradingData& g);

// Longest chain gamma_k < ... < gamma_0 inside rlv(X). Throws PreconditionError if f is not relevant.
int stratum_dimension(const RelevantData& rd, FaceMask f);

// Weights of the face generate the whole class group.
bool is_factorial_face(const GradingData& g, FaceMask f);

bool positive_strata_factorial(const RelevantData& rd, const GradingData& g);
std::optional<FaceMask> positive_strata_witness(const RelevantData& rd, const GradingData& g);

// Blocks whose monomial has vanishing gradient at every point of the stratum of f.
std::vector<int> critical_blocks(const DefiningPair& dp, FaceMask f);

struct SmoothnessFailure {
  FaceMask face = 0;
  bool factorial = true;
  std::vector<int> critical;  // more than two entries when the total coordinate space is singular there
};

bool is_smooth(const DefiningPair& dp, const RelevantData& rd, const GradingData& g);
std::optional<SmoothnessFailure> smoothness_witness(const DefiningPair& dp, const RelevantData& rd,
                                                    const GradingData& g);

}  // namespace fanocpx
