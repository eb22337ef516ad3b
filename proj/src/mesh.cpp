#include "femkit/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace femkit {

namespace {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::pair<Index, Index> sorted_edge(Index a, Index b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

struct EdgeUse {
  int triangles = 0;
  int boundary_listings = 0;
};

}  // namespace

double Mesh1D::h() const {
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    h = std::max(h, vertices[i + 1] - vertices[i]);
  }
  return h;
}

std::array<Point2, 3> TriMesh::corners(Index t) const {
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
}

double TriMesh::signed_area(Index t) const {
  const auto [a, b, c] = corners(t);
  return 0.5 * cross(b - a, c - a);
}

double TriMesh::area() const {
  double total = 0.0;
  for (Index t = 0; t < element_count(); ++t) total += signed_area(t);
  return total;
}

std::set<int> TriMesh::labels() const {
  std::set<int> out;
  for (const auto& e : boundary_edges) out.insert(e.label);
  return out;
}

void validate_domain_spec(const DomainSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalSpec>) {
          if (!(s.a < s.b)) throw InputError("interval: need a < b");
          if (s.n < 1) throw InputError("interval: need n >= 1");
        } else if constexpr (std::is_same_v<T, RectangleSpec>) {
          if (!(s.x0 < s.x1) || !(s.y0 < s.y1)) throw InputError("rectangle: need x0 < x1 and y0 < y1");
          if (s.nx < 1 || s.ny < 1) throw InputError("rectangle: need nx, ny >= 1");
        } else if constexpr (std::is_same_v<T, DiskSpec>) {
          if (!(s.radius > 0.0)) throw InputError("disk: need radius > 0");
          if (s.n_r < 1) throw InputError("disk: need n_r >= 1");
          if (s.n_theta < 3) throw InputError("disk: need n_theta >= 3");
        } else {
          if (s.nx < 1 || s.ny < 1) throw InputError("dike: need nx, ny >= 1");
        }
      },
      spec);
}

std::string describe(const DomainSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        auto f = format_number;
        if constexpr (std::is_same_v<T, IntervalSpec>) {
          return "interval:" + f(s.a) + "," + f(s.b) + "," + std::to_string(s.n);
        } else if constexpr (std::is_same_v<T, RectangleSpec>) {
          return "rectangle:" + f(s.x0) + "," + f(s.x1) + "," + f(s.y0) + "," + f(s.y1) + "," +
                 std::to_string(s.nx) + "," + std::to_string(s.ny);
        } else if constexpr (std::is_same_v<T, DiskSpec>) {
          return "disk:" + f(s.radius) + "," + std::to_string(s.n_r) + "," + std::to_string(s.n_theta);
        } else {
          return "dike:" + std::to_string(s.nx) + "," + std::to_string(s.ny);
        }
      },
      spec);
}

Mesh1D build_interval_mesh(double a, double b, Index n) {
  validate_domain_spec(IntervalSpec{a, b, n});
  Mesh1D mesh;
  mesh.vertices.resize(static_cast<std::size_t>(n) + 1);
  for (Index i = 0; i <= n; ++i) {
    mesh.vertices[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  }
  mesh.vertices.back() = b;
  return mesh;
}

namespace {

// Tensor grid mapped through `map`; vertex (i, j) has index i + (nx+1) j.
// Cells are split along the lower-left to upper-right diagonal.
template <class Map>
TriMesh mapped_grid(Index nx, Index ny, Map map, std::array<int, 4> side_labels) {
  TriMesh mesh;
  const auto vid = [nx](Index i, Index j) { return i + (nx + 1) * j; };
  mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (Index j = 0; j <= ny; ++j) {
    for (Index i = 0; i <= nx; ++i) {
      mesh.vertices.push_back(map(static_cast<double>(i) / nx, static_cast<double>(j) / ny));
    }
  }
  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  const auto [bottom, right, top, left] = side_labels;
  for (Index i = 0; i < nx; ++i) mesh.boundary_edges.push_back({{vid(i, 0), vid(i + 1, 0)}, bottom});
  for (Index j = 0; j < ny; ++j) mesh.boundary_edges.push_back({{vid(nx, j), vid(nx, j + 1)}, right});
  for (Index i = nx; i > 0; --i) mesh.boundary_edges.push_back({{vid(i, ny), vid(i - 1, ny)}, top});
  for (Index j = ny; j > 0; --j) mesh.boundary_edges.push_back({{vid(0, j), vid(0, j - 1)}, left});
  return mesh;
}

TriMesh disk_mesh(const DiskSpec& s) {
  TriMesh mesh;
  const Index nr = s.n_r, nt = s.n_theta;
  const auto vid = [nt](Index ring, Index j) { return 1 + (ring - 1) * nt + (j % nt); };
  mesh.vertices.push_back({0.0, 0.0});
  for (Index k = 1; k <= nr; ++k) {
    const double r = s.radius * static_cast<double>(k) / nr;
    for (Index j = 0; j < nt; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / nt;
      mesh.vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  for (Index j = 0; j < nt; ++j) mesh.triangles.push_back({0, vid(1, j), vid(1, j + 1)});
  for (Index k = 1; k < nr; ++k) {
    for (Index j = 0; j < nt; ++j) {
      const Index a = vid(k, j), b = vid(k + 1, j), c = vid(k + 1, j + 1), d = vid(k, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  for (Index j = 0; j < nt; ++j) mesh.boundary_edges.push_back({{vid(nr, j), vid(nr, j + 1)}, 1});
  return mesh;
}

}  // namespace

TriMesh build_structured_mesh(const DomainSpec& spec) {
  validate_domain_spec(spec);
  return std::visit(
      [](const auto& s) -> TriMesh {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalSpec>) {
          throw InputError("interval domains are one-dimensional; use build_interval_mesh");
        } else if constexpr (std::is_same_v<T, RectangleSpec>) {
          auto map = [&s](double u, double v) -> Point2 {
            return {s.x0 + (s.x1 - s.x0) * u, s.y0 + (s.y1 - s.y0) * v};
          };
          return mapped_grid(s.nx, s.ny, map, {1, 2, 3, 4});
        } else if constexpr (std::is_same_v<T, DiskSpec>) {
          return disk_mesh(s);
        } else {
          constexpr double two_pi = 2.0 * std::numbers::pi;
          auto map = [](double u, double v) -> Point2 {
            const double x = -two_pi + 2.0 * two_pi * u;
            return {x, std::sin(x) - 1.0 + 2.0 * v};
          };
          return mapped_grid(s.nx, s.ny, map, {1, 3, 1, 2});
        }
      },
      spec);
}

bool ConformityReport::has(ConformityIssue::Kind kind) const {
  return std::any_of(issues.begin(), issues.end(), [kind](const auto& i) { return i.kind == kind; });
}

std::string ConformityReport::to_string() const {
  if (issues.empty()) return "conformity: pass\n";
  std::ostringstream os;
  os << "conformity: FAIL (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << ")\n";
  for (const auto& issue : issues) os << "  " << issue.message << '\n';
  return os.str();
}

ConformityReport validate_conformity(const TriMesh& mesh) {
  ConformityReport report;
  const Index nv = mesh.vertex_count();
  auto add = [&report](ConformityIssue::Kind kind, std::vector<Index> idx, std::string msg) {
    report.issues.push_back({kind, std::move(idx), std::move(msg)});
  };

  bool indices_ok = true;
  for (Index t = 0; t < mesh.element_count(); ++t) {
    for (Index v : mesh.triangles[t]) {
      if (v < 0 || v >= nv) {
        add(ConformityIssue::Kind::index_out_of_range, {t},
            "triangle " + std::to_string(t) + " references vertex " + std::to_string(v) + " out of range");
        indices_ok = false;
      }
    }
  }
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    for (Index v : mesh.boundary_edges[e].vertices) {
      if (v < 0 || v >= nv) {
        add(ConformityIssue::Kind::index_out_of_range, {static_cast<Index>(e)},
            "boundary edge " + std::to_string(e) + " references vertex " + std::to_string(v) + " out of range");
        indices_ok = false;
      }
    }
  }
  if (!indices_ok) return report;

  for (Index t = 0; t < mesh.element_count(); ++t) {
    if (!(mesh.signed_area(t) > 0.0)) {
      add(ConformityIssue::Kind::non_positive_area, {t},
          "triangle " + std::to_string(t) + " has non-positive signed area (clockwise or degenerate)");
    }
  }

  std::map<std::pair<Index, Index>, EdgeUse> edges;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) edges[sorted_edge(tri[k], tri[(k + 1) % 3])].triangles++;
  }
  for (const auto& be : mesh.boundary_edges) {
    auto key = sorted_edge(be.vertices[0], be.vertices[1]);
    auto it = edges.find(key);
    if (it == edges.end()) {
      add(ConformityIssue::Kind::orphan_boundary_edge, {key.first, key.second},
          "boundary edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
              ") belongs to no triangle");
    } else {
      it->second.boundary_listings++;
    }
  }
  for (const auto& [key, use] : edges) {
    const std::string name = "(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
    if (use.triangles > 2) {
      add(ConformityIssue::Kind::overshared_edge, {key.first, key.second},
          "edge " + name + " is shared by " + std::to_string(use.triangles) + " triangles");
    } else if (use.triangles == 1 && use.boundary_listings == 0) {
      add(ConformityIssue::Kind::unlabeled_boundary_edge, {key.first, key.second},
          "edge " + name + " belongs to one triangle but carries no boundary label");
    } else if (use.triangles == 2 && use.boundary_listings > 0) {
      add(ConformityIssue::Kind::labeled_interior_edge, {key.first, key.second},
          "interior edge " + name + " carries a boundary label");
    }
  }

  // Hanging vertices: a vertex strictly inside some edge. Vertices are bucketed on a grid.
  if (nv > 0 && !edges.empty()) {
    double xmin = mesh.vertices[0].x, xmax = xmin, ymin = mesh.vertices[0].y, ymax = ymin;
    for (const auto& p : mesh.vertices) {
      xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
    const Index cells = std::max<Index>(1, static_cast<Index>(std::sqrt(static_cast<double>(nv))));
    const double wx = std::max(xmax - xmin, 1e-300) / cells, wy = std::max(ymax - ymin, 1e-300) / cells;
    auto cell_of = [&](double v, double lo, double w) {
      return std::clamp(static_cast<Index>((v - lo) / w), Index{0}, cells - 1);
    };
    std::vector<std::vector<Index>> buckets(static_cast<std::size_t>(cells * cells));
    for (Index v = 0; v < nv; ++v) {
      const auto& p = mesh.vertices[v];
      buckets[cell_of(p.x, xmin, wx) + cells * cell_of(p.y, ymin, wy)].push_back(v);
    }
    std::set<Index> hanging;
    for (const auto& [key, use] : edges) {
      const Point2 a = mesh.vertices[key.first], b = mesh.vertices[key.second];
      const Vec2 d = b - a;
      const double len2 = dot(d, d);
      if (len2 == 0.0) continue;
      const Index cx0 = cell_of(std::min(a.x, b.x), xmin, wx), cx1 = cell_of(std::max(a.x, b.x), xmin, wx);
      const Index cy0 = cell_of(std::min(a.y, b.y), ymin, wy), cy1 = cell_of(std::max(a.y, b.y), ymin, wy);
      for (Index cy = cy0; cy <= cy1; ++cy) {
        for (Index cx = cx0; cx <= cx1; ++cx) {
          for (Index v : buckets[cx + cells * cy]) {
            if (v == key.first || v == key.second) continue;
            const Vec2 ap = mesh.vertices[v] - a;
            const double s = dot(ap, d) / len2;
            if (s <= 1e-12 || s >= 1.0 - 1e-12) continue;
            if (std::abs(cross(d, ap)) <= 1e-12 * len2) hanging.insert(v);
          }
        }
      }
    }
    for (Index v : hanging) {
      add(ConformityIssue::Kind::hanging_vertex, {v},
          "vertex " + std::to_string(v) + " lies in the interior of another triangle's edge (hanging node)");
    }
  }
  return report;
}

double triangle_aspect(Point2 a, Point2 b, Point2 c) {
  const double area = 0.5 * std::abs(cross(b - a, c - a));
  const double la = norm(b - c), lb = norm(c - a), lc = norm(a - b);
  if (!(area > 0.0)) throw NumericalError("degenerate (zero-area) triangle");
  const double inradius = 2.0 * area / (la + lb + lc);
  return std::max({la, lb, lc}) / inradius;
}

MeshMetrics mesh_metrics(const TriMesh& mesh) {
  if (mesh.triangles.empty()) throw InputError("mesh has no elements");
  MeshMetrics m;
  double min_diam = std::numeric_limits<double>::infinity();
  for (Index t = 0; t < mesh.element_count(); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    if (!(mesh.signed_area(t) > 0.0)) {
      throw NumericalError("triangle " + std::to_string(t) + " is degenerate or clockwise");
    }
    const double diam = std::max({norm(b - c), norm(c - a), norm(a - b)});
    m.h = std::max(m.h, diam);
    min_diam = std::min(min_diam, diam);
    m.max_aspect = std::max(m.max_aspect, triangle_aspect(a, b, c));
  }
  m.quasi_uniformity = m.h / min_diam;
  return m;
}

}  // namespace femkit
