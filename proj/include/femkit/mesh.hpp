#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "femkit/common.hpp"

namespace femkit {

/// Boundary labels of a 1D partition.
inline constexpr int kLeftLabel = 1;
inline constexpr int kRightLabel = 2;

/// Partition a = x_0 < x_1 < ... < x_{M-1} = b of an interval; element i is (x_i, x_{i+1}).
struct Mesh1D {
  std::vector<double> vertices;
  std::array<int, 2> boundary_labels{kLeftLabel, kRightLabel};

  Index vertex_count() const { return static_cast<Index>(vertices.size()); }
  Index element_count() const { return vertex_count() - 1; }
  /// Largest element length.
  double h() const;

  friend bool operator==(const Mesh1D&, const Mesh1D&) = default;
};

struct BoundaryEdge {
  std::array<Index, 2> vertices;
  int label = 0;

  friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

/// Conforming triangulation; triangles are counter-clockwise vertex triples.
struct TriMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  Index vertex_count() const { return static_cast<Index>(vertices.size()); }
  Index element_count() const { return static_cast<Index>(triangles.size()); }
  std::array<Point2, 3> corners(Index t) const;
  double signed_area(Index t) const;
  double area() const;
  std::set<int> labels() const;

  friend bool operator==(const TriMesh&, const TriMesh&) = default;
};

struct IntervalSpec {
  double a = 0.0, b = 1.0;
  Index n = 1;
  friend bool operator==(const IntervalSpec&, const IntervalSpec&) = default;
};

/// Labels: 1 bottom, 2 right, 3 top, 4 left.
struct RectangleSpec {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  Index nx = 1, ny = 1;
  friend bool operator==(const RectangleSpec&, const RectangleSpec&) = default;
};

/// Disk centred at the origin; n_r rings, n_theta sectors. All boundary edges carry label 1.
struct DiskSpec {
  double radius = 1.0;
  Index n_r = 1, n_theta = 8;
  friend bool operator==(const DiskSpec&, const DiskSpec&) = default;
};

/// Channel between y = sin(x) - 1 and y = sin(x) + 1 over x in [-2pi, 2pi].
/// Labels: 1 bottom/top walls, 2 left inflow, 3 right outflow.
struct DikeSpec {
  Index nx = 1, ny = 1;
  friend bool operator==(const DikeSpec&, const DikeSpec&) = default;
};

using DomainSpec = std::variant<IntervalSpec, RectangleSpec, DiskSpec, DikeSpec>;

/// Throws InputError when counts or extents are invalid.
void validate_domain_spec(const DomainSpec& spec);
/// Canonical text form, e.g. "rectangle:0,1,0,1,4,4"; parse_domain_spec is its inverse.
std::string describe(const DomainSpec& spec);
DomainSpec parse_domain_spec(std::string_view text);

Mesh1D build_interval_mesh(double a, double b, Index n);

/// Deterministic mapped/structured triangulation of a 2D domain spec.
TriMesh build_structured_mesh(const DomainSpec& spec);

struct ConformityIssue {
  enum class Kind {
    index_out_of_range,
    non_positive_area,
    hanging_vertex,
    overshared_edge,
    unlabeled_boundary_edge,
    labeled_interior_edge,
    orphan_boundary_edge,
  };
  Kind kind;
  std::vector<Index> indices;
  std::string message;
};

struct ConformityReport {
  std::vector<ConformityIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(ConformityIssue::Kind kind) const;
  std::string to_string() const;
};

ConformityReport validate_conformity(const TriMesh& mesh);

struct MeshMetrics {
  double h = 0.0;                 // max element diameter (longest edge)
  double max_aspect = 0.0;        // max diam(K) / inradius(K)
  double quasi_uniformity = 0.0;  // h / min element diameter
};

/// Diameter-to-inradius ratio of a single triangle; throws NumericalError when degenerate.
double triangle_aspect(Point2 a, Point2 b, Point2 c);
MeshMetrics mesh_metrics(const TriMesh& mesh);

void write_mesh(const TriMesh& mesh, std::ostream& out);
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);
/// Parses the text format. With `check_conformity` the first conformity issue is a ParseError.
TriMesh read_mesh(std::istream& in, const std::string& source_name = "<stream>", bool check_conformity = true);
TriMesh read_mesh(const std::filesystem::path& path, bool check_conformity = true);

}  // namespace femkit
