#include "femkit/elements.hpp"

#include <algorithm>
#include <map>

namespace femkit {

namespace {

constexpr std::array<Point2, 2> kP1Nodes1D{{{0.0, 0.0}, {1.0, 0.0}}};
constexpr std::array<Point2, 3> kP1Nodes2D{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
constexpr std::array<Point2, 6> kP2Nodes2D{
    {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}}};

// Local vertex pairs of the P2 edge dofs, in local order e01, e12, e02.
constexpr std::array<std::array<int, 2>, 3> kP2Edges{{{0, 1}, {1, 2}, {0, 2}}};

constexpr std::array<Vec2, 3> kBaryGrad{{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};

void check_local(FeKind kind, int local) {
  if (local < 0 || local >= dofs_per_element(kind)) {
    throw InputError("basis index " + std::to_string(local) + " out of range for " + to_string(kind));
  }
}

}  // namespace

std::string to_string(FeKind kind) {
  switch (kind) {
    case FeKind::P1_1D: return "P1_1D";
    case FeKind::P1_2D: return "P1_2D";
    case FeKind::P2_2D: return "P2_2D";
  }
  return "?";
}

int dofs_per_element(FeKind kind) {
  switch (kind) {
    case FeKind::P1_1D: return 2;
    case FeKind::P1_2D: return 3;
    case FeKind::P2_2D: return 6;
  }
  return 0;
}

int polynomial_degree(FeKind kind) { return kind == FeKind::P2_2D ? 2 : 1; }

BasisValue eval_ref_basis(FeKind kind, int local, Point2 ref) {
  check_local(kind, local);
  switch (kind) {
    case FeKind::P1_1D:
      return local == 0 ? BasisValue{1.0 - ref.x, {-1.0, 0.0}} : BasisValue{ref.x, {1.0, 0.0}};
    case FeKind::P1_2D: {
      const std::array<double, 3> lambda{1.0 - ref.x - ref.y, ref.x, ref.y};
      return {lambda[local], kBaryGrad[local]};
    }
    case FeKind::P2_2D: {
      const std::array<double, 3> lambda{1.0 - ref.x - ref.y, ref.x, ref.y};
      if (local < 3) {
        const double l = lambda[local];
        return {l * (2.0 * l - 1.0), (4.0 * l - 1.0) * kBaryGrad[local]};
      }
      const auto [i, j] = kP2Edges[local - 3];
      return {4.0 * lambda[i] * lambda[j], 4.0 * (lambda[j] * kBaryGrad[i] + lambda[i] * kBaryGrad[j])};
    }
  }
  return {};
}

std::span<const Point2> reference_nodes(FeKind kind) {
  switch (kind) {
    case FeKind::P1_1D: return kP1Nodes1D;
    case FeKind::P1_2D: return kP1Nodes2D;
    case FeKind::P2_2D: return kP2Nodes2D;
  }
  return {};
}

AffineMap affine_map(const TriMesh& mesh, Index element) {
  if (element < 0 || element >= mesh.element_count()) throw InputError("element index out of range");
  const auto [p0, p1, p2] = mesh.corners(element);
  AffineMap m;
  m.origin = p0;
  m.jacobian = {p1.x - p0.x, p2.x - p0.x, p1.y - p0.y, p2.y - p0.y};
  m.det = m.jacobian.det();
  if (!(m.det > 0.0)) {
    throw NumericalError("element " + std::to_string(element) + " is degenerate or clockwise (det J = " +
                         std::to_string(m.det) + ")");
  }
  m.inverse_transpose = m.jacobian.inverse().transposed();
  return m;
}

AffineMap affine_map(const Mesh1D& mesh, Index element) {
  if (element < 0 || element >= mesh.element_count()) throw InputError("element index out of range");
  const double x0 = mesh.vertices[element], x1 = mesh.vertices[element + 1];
  const double h = x1 - x0;
  if (!(h > 0.0)) throw NumericalError("element " + std::to_string(element) + " has non-positive length");
  AffineMap m;
  m.origin = {x0, 0.0};
  m.jacobian = {h, 0.0, 0.0, 1.0};
  m.det = h;
  m.inverse_transpose = {1.0 / h, 0.0, 0.0, 1.0};
  return m;
}

std::vector<Index> DofMap::dofs_with_label(int label) const {
  std::vector<Index> out;
  for (const auto& [dof, l] : boundary_dofs) {
    if (l == label) out.push_back(dof);
  }
  return out;
}

std::vector<int> DofMap::labels() const {
  std::vector<int> out;
  for (const auto& f : facets) out.push_back(f.label);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool DofMap::has_label(int label) const {
  return std::any_of(facets.begin(), facets.end(), [label](const auto& f) { return f.label == label; });
}

double DofMap::measure() const {
  const double ref = dim == 1 ? 1.0 : 0.5;
  double total = 0.0;
  for (const auto& m : maps) total += ref * m.det;
  return total;
}

DofMap build_dofmap(const TriMesh& mesh, FeSpaceTag space) {
  if (space.kind == FeKind::P1_1D) throw InputError("P1_1D space requires a 1D mesh");
  if (mesh.triangles.empty()) throw InputError("mesh has no elements");
  DofMap dm;
  dm.space = space;
  dm.dim = 2;
  dm.vertex_count = mesh.vertex_count();
  dm.per_element = dofs_per_element(space.kind);
  const Index ne = mesh.element_count();
  dm.maps.reserve(static_cast<std::size_t>(ne));
  for (Index e = 0; e < ne; ++e) dm.maps.push_back(affine_map(mesh, e));

  dm.dof_coords = mesh.vertices;
  std::map<std::pair<Index, Index>, Index> edge_dof;
  if (space.kind == FeKind::P2_2D) {
    for (const auto& t : mesh.triangles) {
      for (const auto& [i, j] : kP2Edges) edge_dof.emplace(std::minmax(t[i], t[j]), 0);
    }
    Index next = mesh.vertex_count();
    for (auto& [edge, dof] : edge_dof) {
      dof = next++;
      dm.dof_coords.push_back(0.5 * (mesh.vertices[edge.first] + mesh.vertices[edge.second]));
    }
  }
  dm.n_dofs = static_cast<Index>(dm.dof_coords.size());

  dm.element_dofs.reserve(static_cast<std::size_t>(ne * dm.per_element));
  for (const auto& t : mesh.triangles) {
    dm.element_dofs.insert(dm.element_dofs.end(), t.begin(), t.end());
    if (space.kind == FeKind::P2_2D) {
      for (const auto& [i, j] : kP2Edges) dm.element_dofs.push_back(edge_dof.at(std::minmax(t[i], t[j])));
    }
  }

  // Orient each boundary edge as its owning triangle traverses it (counter-clockwise).
  std::map<std::pair<Index, Index>, Index> directed_owner;
  for (Index e = 0; e < ne; ++e) {
    const auto& t = mesh.triangles[e];
    for (int k = 0; k < 3; ++k) directed_owner.emplace(std::pair{t[k], t[(k + 1) % 3]}, e);
  }
  for (const auto& be : mesh.boundary_edges) {
    auto [p, q] = be.vertices;
    auto it = directed_owner.find({p, q});
    if (it == directed_owner.end()) {
      std::swap(p, q);
      it = directed_owner.find({p, q});
    }
    if (it == directed_owner.end()) {
      throw InputError("boundary edge (" + std::to_string(p) + "," + std::to_string(q) + ") belongs to no triangle");
    }
    BoundaryFacet f;
    f.label = be.label;
    f.element = it->second;
    f.a = mesh.vertices[p];
    f.b = mesh.vertices[q];
    const Vec2 d = f.b - f.a;
    f.length = norm(d);
    f.normal = (1.0 / f.length) * Vec2{d.y, -d.x};
    f.dofs = {p};
    if (space.kind == FeKind::P2_2D) f.dofs.push_back(edge_dof.at(std::minmax(p, q)));
    f.dofs.push_back(q);
    dm.facets.push_back(std::move(f));
  }
  for (const auto& f : dm.facets) {
    for (Index d : f.dofs) dm.boundary_dofs.emplace_back(d, f.label);
  }
  std::sort(dm.boundary_dofs.begin(), dm.boundary_dofs.end());
  dm.boundary_dofs.erase(std::unique(dm.boundary_dofs.begin(), dm.boundary_dofs.end()), dm.boundary_dofs.end());
  return dm;
}

DofMap build_dofmap(const Mesh1D& mesh, FeSpaceTag space) {
  if (space.kind != FeKind::P1_1D) throw InputError("1D meshes support only the P1_1D space");
  if (mesh.vertices.size() < 2) throw InputError("mesh has no elements");
  DofMap dm;
  dm.space = space;
  dm.dim = 1;
  dm.vertex_count = mesh.vertex_count();
  dm.per_element = 2;
  dm.n_dofs = mesh.vertex_count();
  for (Index e = 0; e < mesh.element_count(); ++e) {
    dm.maps.push_back(affine_map(mesh, e));
    dm.element_dofs.push_back(e);
    dm.element_dofs.push_back(e + 1);
  }
  for (double x : mesh.vertices) dm.dof_coords.push_back({x, 0.0});
  const Index last = mesh.vertex_count() - 1;
  const Point2 left{mesh.vertices.front(), 0.0}, right{mesh.vertices.back(), 0.0};
  dm.facets.push_back({mesh.boundary_labels[0], 0, {0}, left, left, {-1.0, 0.0}, 1.0});
  dm.facets.push_back({mesh.boundary_labels[1], mesh.element_count() - 1, {last}, right, right, {1.0, 0.0}, 1.0});
  dm.boundary_dofs = {{0, mesh.boundary_labels[0]}, {last, mesh.boundary_labels[1]}};
  std::sort(dm.boundary_dofs.begin(), dm.boundary_dofs.end());
  return dm;
}

FemField::FemField(std::shared_ptr<const DofMap> map, std::vector<double> coeffs)
    : dofmap(std::move(map)), coefficients(std::move(coeffs)) {
  if (!dofmap) throw InputError("FemField requires a dof map");
  if (static_cast<Index>(coefficients.size()) != dofmap->n_dofs) {
    throw InputError("FemField: coefficient length " + std::to_string(coefficients.size()) +
                     " does not match dof count " + std::to_string(dofmap->n_dofs));
  }
}

FemField::FemField(std::shared_ptr<const DofMap> map)
    : FemField(map, std::vector<double>(map ? static_cast<std::size_t>(map->n_dofs) : 0, 0.0)) {}

double eval_field(const FemField& field, Index element, Point2 ref) {
  const auto& dm = *field.dofmap;
  const auto dofs = dm.dofs(element);
  double value = 0.0;
  for (int k = 0; k < dm.per_element; ++k) {
    value += field.coefficients[dofs[k]] * eval_ref_basis(dm.space.kind, k, ref).value;
  }
  return value;
}

Vec2 eval_field_gradient(const FemField& field, Index element, Point2 ref) {
  const auto& dm = *field.dofmap;
  const auto dofs = dm.dofs(element);
  Vec2 g;
  for (int k = 0; k < dm.per_element; ++k) {
    g = g + field.coefficients[dofs[k]] * eval_ref_basis(dm.space.kind, k, ref).grad;
  }
  return dm.maps[element].physical_gradient(g);
}

std::optional<double> eval_field_at(const FemField& field, Point2 x) {
  const auto& dm = *field.dofmap;
  constexpr double tol = 1e-12;
  for (Index e = 0; e < dm.element_count(); ++e) {
    Point2 ref = dm.maps[e].to_reference(x);
    if (dm.dim == 1) {
      if (ref.x < -tol || ref.x > 1.0 + tol || x.y != 0.0) continue;
      ref = {std::clamp(ref.x, 0.0, 1.0), 0.0};
    } else if (ref.x < -tol || ref.y < -tol || ref.x + ref.y > 1.0 + tol) {
      continue;
    }
    return eval_field(field, e, ref);
  }
  return std::nullopt;
}

FemField interpolate(std::shared_ptr<const DofMap> dofmap, const std::function<double(Point2)>& f) {
  std::vector<double> c(dofmap->dof_coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f(dofmap->dof_coords[i]);
  return FemField(std::move(dofmap), std::move(c));
}

}  // namespace femkit
