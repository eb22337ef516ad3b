#include <doctest.h>

#include <sstream>

#include "femkit/output.hpp"
#include "femkit/stokes.hpp"

using namespace femkit;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> words(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool is_number(const std::string& w) {
  std::size_t used = 0;
  try {
    std::stod(w, &used);
  } catch (...) {
    return false;
  }
  return used == w.size();
}

struct VtkSummary {
  std::size_t points = 0, cells = 0;
  std::vector<std::string> scalars, vectors;
};

// Independent reader for the legacy ASCII unstructured-grid subset: checks every
// section header, count and row arity, and fails the test on any deviation.
VtkSummary check_vtk(const std::string& text) {
  const auto l = lines_of(text);
  VtkSummary s;
  REQUIRE(l.size() >= 7);
  CHECK(l[0] == "# vtk DataFile Version 3.0");
  CHECK(!l[1].empty());
  CHECK(l[1].size() <= 256);
  CHECK(l[2] == "ASCII");
  CHECK(l[3] == "DATASET UNSTRUCTURED_GRID");
  std::size_t i = 4;
  auto header = words(l[i++]);
  REQUIRE(header.size() == 3);
  CHECK(header[0] == "POINTS");
  CHECK(header[2] == "double");
  s.points = std::stoul(header[1]);
  for (std::size_t k = 0; k < s.points; ++k, ++i) {
    const auto w = words(l.at(i));
    REQUIRE(w.size() == 3);
    for (const auto& x : w) CHECK(is_number(x));
    CHECK(w[2] == "0");
  }
  header = words(l.at(i++));
  REQUIRE(header.size() == 3);
  CHECK(header[0] == "CELLS");
  s.cells = std::stoul(header[1]);
  CHECK(std::stoul(header[2]) == 4 * s.cells);
  for (std::size_t k = 0; k < s.cells; ++k, ++i) {
    const auto w = words(l.at(i));
    REQUIRE(w.size() == 4);
    CHECK(w[0] == "3");
    for (int j = 1; j < 4; ++j) CHECK(std::stoul(w[j]) < s.points);
  }
  header = words(l.at(i++));
  REQUIRE(header.size() == 2);
  CHECK(header[0] == "CELL_TYPES");
  CHECK(std::stoul(header[1]) == s.cells);
  for (std::size_t k = 0; k < s.cells; ++k, ++i) CHECK(l.at(i) == "5");
  if (i == l.size()) return s;
  header = words(l.at(i++));
  REQUIRE(header.size() == 2);
  CHECK(header[0] == "POINT_DATA");
  CHECK(std::stoul(header[1]) == s.points);
  while (i < l.size()) {
    header = words(l.at(i++));
    if (header.at(0) == "SCALARS") {
      REQUIRE(header.size() == 4);
      CHECK(header[2] == "double");
      CHECK(header[3] == "1");
      CHECK(l.at(i++) == "LOOKUP_TABLE default");
      s.scalars.push_back(header[1]);
      for (std::size_t k = 0; k < s.points; ++k, ++i) {
        const auto w = words(l.at(i));
        REQUIRE(w.size() == 1);
        CHECK(is_number(w[0]));
      }
    } else {
      REQUIRE(header.size() == 3);
      CHECK(header[0] == "VECTORS");
      CHECK(header[2] == "double");
      s.vectors.push_back(header[1]);
      for (std::size_t k = 0; k < s.points; ++k, ++i) {
        const auto w = words(l.at(i));
        REQUIRE(w.size() == 3);
        for (const auto& x : w) CHECK(is_number(x));
      }
    }
  }
  return s;
}

}  // namespace

TEST_CASE("CSV: header and one row per dof") {
  const Mesh1D m = build_interval_mesh(0.0, 1.0, 4);
  const auto dm = std::make_shared<const DofMap>(build_dofmap(m));
  const FemField u(dm, {1.0, 0.5, -0.25, 1e-20, 3.0});
  std::ostringstream out;
  write_field_csv(u, out);
  CHECK(out.str() == "x,value\n0,1\n0.25,0.5\n0.5,-0.25\n0.75,1e-20\n1,3\n");

  const TriMesh t = build_structured_mesh(RectangleSpec{0, 1, 0, 1, 1, 1});
  const auto d2 = std::make_shared<const DofMap>(build_dofmap(t, {FeKind::P2_2D, false}));
  const FemField v = interpolate(d2, [](Point2 p) { return p.x + 10 * p.y; });
  std::ostringstream out2;
  write_field_csv(v, out2);
  const auto rows = lines_of(out2.str());
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "x,y,value");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::istringstream in(rows[r]);
    double x, y, val;
    char c1, c2;
    in >> x >> c1 >> y >> c2 >> val;
    CHECK(val == doctest::Approx(x + 10 * y).epsilon(1e-15));
  }
}

TEST_CASE("CSV values round-trip exactly") {
  const Mesh1D m = build_interval_mesh(0.0, 1.0, 7);
  const auto dm = std::make_shared<const DofMap>(build_dofmap(m));
  const FemField u = interpolate(dm, [](Point2 p) { return std::exp(p.x) / 3.0; });
  std::ostringstream out;
  write_field_csv(u, out);
  const auto rows = lines_of(out.str());
  for (Index i = 0; i < u.size(); ++i) {
    const auto comma = rows[i + 1].find(',');
    CHECK(std::stod(rows[i + 1].substr(comma + 1)) == u.coefficients[i]);
  }
}

TEST_CASE("VTK: mesh only, scalar fields and a Stokes solution") {
  const TriMesh m = build_structured_mesh(DiskSpec{1.0, 2, 6});
  std::ostringstream plain;
  write_vtk(m, {}, plain);
  const VtkSummary a = check_vtk(plain.str());
  CHECK(a.points == m.vertices.size());
  CHECK(a.cells == m.triangles.size());
  CHECK(plain.str().find("POINT_DATA") == std::string::npos);

  StokesProblem p;
  p.mesh = build_structured_mesh(RectangleSpec{0, 1, 0, 1, 3, 3});
  for (int label : {1, 2, 3, 4}) p.dirichlet.push_back({label, [](Point2 x) { return Vec2{x.y, x.x}; }});
  p.f = [](Point2) { return Vec2{1.0, 1.0}; };
  const StokesSolution s = solve_stokes(p);
  std::ostringstream out;
  write_vtk(p.mesh, {{"velocity", {&s.u1, &s.u2}}, {"pressure", {&s.p}}}, out, "stokes");
  const VtkSummary b = check_vtk(out.str());
  CHECK(b.vectors == std::vector<std::string>{"velocity"});
  CHECK(b.scalars == std::vector<std::string>{"pressure"});
  CHECK(b.points == 16);
}

TEST_CASE("VTK: fields from another mesh or with bad names are rejected") {
  const TriMesh m = build_structured_mesh(RectangleSpec{0, 1, 0, 1, 2, 2});
  const TriMesh other = build_structured_mesh(RectangleSpec{0, 1, 0, 1, 3, 3});
  const FemField f = interpolate(std::make_shared<const DofMap>(build_dofmap(other, {FeKind::P1_2D, false})),
                                 [](Point2) { return 1.0; });
  std::ostringstream out;
  CHECK_THROWS_AS(write_vtk(m, {{"u", {&f}}}, out), InputError);
  CHECK_THROWS_AS(write_vtk(other, {{"two words", {&f}}}, out), InputError);
  CHECK_THROWS_AS(write_vtk(other, {{"u", {&f, &f, &f}}}, out), InputError);
}

TEST_CASE("output is deterministic") {
  auto render = [] {
    const TriMesh m = build_structured_mesh(DikeSpec{5, 2});
    const auto dm = std::make_shared<const DofMap>(build_dofmap(m, {FeKind::P2_2D, false}));
    const FemField u = interpolate(dm, [](Point2 p) { return std::sin(p.x) * p.y; });
    std::ostringstream out;
    write_field_csv(u, out);
    write_vtk(m, {{"u", {&u}}}, out);
    return out.str();
  };
  CHECK(render() == render());
}
