#pragma once

#include "fanocpx/linalg.hpp"

#include <stdexcept>
#include <vector>

namespace fanocpx {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal V-description of {x : A x >= 0, E x = 0}: a lineality basis and the
// extreme rays of the pointed part (both primitive integral, sorted).
struct ConeRays {
  std::vector<IntVector> lineality;
  std::vector<IntVector> rays;
};

// Double description conversion.
ConeRays rays_from_inequalities(Eigen::Index dim, const std::vector<IntVector>& inequalities,
                                const std::vector<IntVector>& equations = {});

// Polyhedral cone in Q^d. Generators and halfspaces are kept side by side.
class RationalCone {
 public:
  RationalCone() = default;

  static RationalCone from_generators(Eigen::Index dim, const std::vector<IntVector>& gens);
  static RationalCone from_generators(Eigen::Index dim, const std::vector<RatVector>& gens);
  static RationalCone from_inequalities(Eigen::Index dim, const std::vector<IntVector>& ineqs,
                                        const std::vector<IntVector>& eqs = {});

  Eigen::Index ambient_dim() const { return dim_; }
  // Canonical generators: +-lineality basis, then extreme rays, all primitive.
  std::vector<IntVector> generators() const;
  const std::vector<IntVector>& rays() const { return rays_; }
  const std::vector<IntVector>& lineality() const { return lineality_; }
  // a.x = 0 for a in equations(), a.x >= 0 for a in facets(); irredundant.
  const std::vector<IntVector>& equations() const { return equations_; }
  const std::vector<IntVector>& facets() const { return facets_; }
  Eigen::Index dimension() const { return dim_ - static_cast<Eigen::Index>(equations_.size()); }

 private:
  void finish_from_rays();
  Eigen::Index dim_ = 0;
  std::vector<IntVector> lineality_, rays_, equations_, facets_;
};

bool contains(const RationalCone& C, const RatVector& v);
bool contains(const RationalCone& C, const IntVector& v);
bool relint_contains(const RationalCone& C, const RatVector& v);
bool relint_contains(const RationalCone& C, const IntVector& v);
RationalCone dual(const RationalCone& C);
RationalCone intersect(const RationalCone& a, const RationalCone& b);
bool is_full_dimensional(const RationalCone& C);
bool is_all_of_space(const RationalCone& C);
bool is_pointed(const RationalCone& C);
bool same_cone(const RationalCone& a, const RationalCone& b);

// Bounded polyhedron in Q^d.
class RationalPolytope {
 public:
  RationalPolytope() = default;

  static RationalPolytope from_points(Eigen::Index dim, const std::vector<RatVector>& points);
  static RationalPolytope from_points(Eigen::Index dim, const std::vector<IntVector>& points);
  // Inequalities are (a0, a) meaning a0 + a.x >= 0; equations likewise with "= 0".
  // Throws GeometryError("unbounded") for unbounded input; may return an empty polytope.
  static RationalPolytope from_inequalities(Eigen::Index dim, const std::vector<IntVector>& ineqs,
                                            const std::vector<IntVector>& eqs = {});

  Eigen::Index ambient_dim() const { return dim_; }
  bool empty() const { return vertices_.empty(); }
  const std::vector<RatVector>& vertices() const { return vertices_; }
  const std::vector<IntVector>& inequalities() const { return inequalities_; }
  const std::vector<IntVector>& equations() const { return equations_; }
  Eigen::Index dimension() const;

 private:
  void build_from_homogeneous(const RationalCone& hc);
  Eigen::Index dim_ = 0;
  std::vector<RatVector> vertices_;
  std::vector<IntVector> inequalities_, equations_;
};

bool contains(const RationalPolytope& P, const RatVector& x);
bool contains(const RationalPolytope& P, const IntVector& x);
bool interior_contains(const RationalPolytope& P, const RatVector& x);

// All integral points, each once, sorted lexicographically.
std::vector<IntVector> lattice_points(const RationalPolytope& P);

// {u : <u, b> >= -1 for all b in P}; requires 0 in the interior of P.
RationalPolytope dual_polytope(const RationalPolytope& P);

// {x in Q^n_{>=0} : Q x = w} for the free part of a grading.
RationalPolytope fiber_polytope(const ClassGroup& Q, const KElement& w);
RationalPolytope fiber_polytope(const IntMatrix& Qfree, const IntVector& w);

}  // namespace fanocpx
