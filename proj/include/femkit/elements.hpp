#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "femkit/common.hpp"
#include "femkit/mesh.hpp"

namespace femkit {

enum class FeKind { P1_1D, P1_2D, P2_2D };

std::string to_string(FeKind kind);

struct FeSpaceTag {
  FeKind kind = FeKind::P1_2D;
  /// Marks the "zero on the Dirichlet boundary" subspace; dofs are still enumerated,
  /// elimination happens in the Dirichlet reduction.
  bool constrained = false;

  friend bool operator==(const FeSpaceTag&, const FeSpaceTag&) = default;
};

int dofs_per_element(FeKind kind);
int polynomial_degree(FeKind kind);

struct BasisValue {
  double value = 0.0;
  Vec2 grad;  // reference gradient
};

/// Reference basis function `local` at `ref`.
///  P1_1D on [0,1]: {1-t, t}.
///  P1_2D: {1-xi-eta, xi, eta}.
///  P2_2D, local order (v0, v1, v2, e01, e12, e02): l_i(2 l_i - 1) and 4 l_i l_j.
BasisValue eval_ref_basis(FeKind kind, int local, Point2 ref);

/// Reference coordinates of the element's nodes, in local dof order.
std::span<const Point2> reference_nodes(FeKind kind);

/// x = origin + J (xi, eta). In 1D, J = diag(h, 1) so the same code path maps gradients.
struct AffineMap {
  Point2 origin;
  Mat2 jacobian;
  double det = 0.0;
  Mat2 inverse_transpose;

  Point2 map(Point2 ref) const { return origin + jacobian * ref; }
  Vec2 physical_gradient(Vec2 ref_grad) const { return inverse_transpose * ref_grad; }
  Point2 to_reference(Point2 x) const { return jacobian.inverse() * (x - origin); }
};

AffineMap affine_map(const TriMesh& mesh, Index element);
AffineMap affine_map(const Mesh1D& mesh, Index element);

/// Boundary facet with its dofs ordered along the outward (counter-clockwise) orientation a -> b.
/// 2D P1: {a, b}; 2D P2: {a, midpoint, b}; 1D: the single endpoint dof (a == b).
struct BoundaryFacet {
  int label = 0;
  Index element = 0;
  std::vector<Index> dofs;
  Point2 a, b;
  Vec2 normal;  // outward unit normal
  double length = 0.0;
};

struct DofMap {
  FeSpaceTag space;
  int dim = 2;
  Index n_dofs = 0;
  Index vertex_count = 0;
  int per_element = 0;
  std::vector<Index> element_dofs;  // flat, per_element entries per element
  std::vector<AffineMap> maps;
  std::vector<Point2> dof_coords;
  /// Sorted unique (dof, label) pairs; a corner dof appears once per incident label.
  std::vector<std::pair<Index, int>> boundary_dofs;
  std::vector<BoundaryFacet> facets;

  Index element_count() const { return static_cast<Index>(maps.size()); }
  std::span<const Index> dofs(Index element) const {
    return {element_dofs.data() + static_cast<std::size_t>(element) * per_element,
            static_cast<std::size_t>(per_element)};
  }
  std::vector<Index> dofs_with_label(int label) const;
  std::vector<int> labels() const;
  bool has_label(int label) const;
  double measure() const;
};

/// Deterministic enumeration: vertex dofs in vertex order, then edge dofs in sorted-edge order.
DofMap build_dofmap(const TriMesh& mesh, FeSpaceTag space);
DofMap build_dofmap(const Mesh1D& mesh, FeSpaceTag space = {FeKind::P1_1D, false});

/// Finite element function: coefficient i multiplies global basis function i.
struct FemField {
  std::shared_ptr<const DofMap> dofmap;
  std::vector<double> coefficients;

  FemField() = default;
  FemField(std::shared_ptr<const DofMap> map, std::vector<double> coeffs);
  explicit FemField(std::shared_ptr<const DofMap> map);

  Index size() const { return static_cast<Index>(coefficients.size()); }
};

double eval_field(const FemField& field, Index element, Point2 ref);
Vec2 eval_field_gradient(const FemField& field, Index element, Point2 ref);

/// Locates `x` in the mesh (linear search); nullopt when outside every element.
std::optional<double> eval_field_at(const FemField& field, Point2 x);

/// Nodal interpolant of `f`.
FemField interpolate(std::shared_ptr<const DofMap> dofmap, const std::function<double(Point2)>& f);

}  // namespace femkit
