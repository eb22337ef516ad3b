#include <fstream>
#include <istream>
#include <ostream>

#include "femkit/mesh.hpp"
#include "text_util.hpp"

namespace femkit {

namespace {

constexpr std::string_view kMeshMagic = "femkit-mesh";

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

}  // namespace

void write_mesh(const TriMesh& mesh, std::ostream& out) {
  out << kMeshMagic << " 1\n";
  out << mesh.vertices.size() << ' ' << mesh.triangles.size() << ' ' << mesh.boundary_edges.size() << '\n';
  for (const auto& p : mesh.vertices) out << text::digits17(p.x) << ' ' << text::digits17(p.y) << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : mesh.boundary_edges) out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.label << '\n';
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write_mesh(mesh, out);
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

TriMesh read_mesh(std::istream& in, const std::string& source_name, bool check_conformity) {
  // Keep line storage alive: tokens are views into these strings.
  std::vector<std::string> storage;
  std::vector<Line> lines;
  {
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      storage.push_back(std::move(raw));
    }
    for (std::size_t i = 0; i < storage.size(); ++i) {
      auto tokens = text::split_whitespace(text::strip_comment(storage[i]));
      if (!tokens.empty()) lines.push_back({static_cast<int>(i + 1), std::move(tokens)});
    }
  }
  auto fail = [&](int line, const std::string& what) -> ParseError { return ParseError(source_name, line, what); };

  std::size_t cursor = 0;
  auto next = [&](const char* what) -> const Line& {
    if (cursor >= lines.size()) {
      throw fail(static_cast<int>(storage.size()), std::string("unexpected end of file, expected ") + what);
    }
    return lines[cursor++];
  };

  const Line& header = next("header");
  if (header.tokens.size() != 2 || header.tokens[0] != kMeshMagic || header.tokens[1] != "1") {
    throw fail(header.number, "malformed header, expected 'femkit-mesh 1'");
  }
  const Line& counts = next("counts");
  if (counts.tokens.size() != 3) throw fail(counts.number, "expected '<nv> <nt> <nb>'");
  const auto nv = text::parse_int<Index>(counts.tokens[0]);
  const auto nt = text::parse_int<Index>(counts.tokens[1]);
  const auto nb = text::parse_int<Index>(counts.tokens[2]);
  if (!nv || !nt || !nb || *nv < 0 || *nt < 0 || *nb < 0) throw fail(counts.number, "invalid counts");
  if (*nt == 0) throw fail(counts.number, "no elements");

  TriMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(*nv));
  for (Index i = 0; i < *nv; ++i) {
    const Line& l = next("vertex");
    if (l.tokens.size() != 2) throw fail(l.number, "expected 'x y'");
    const auto x = text::parse_double(l.tokens[0]), y = text::parse_double(l.tokens[1]);
    if (!x || !y) throw fail(l.number, "invalid coordinate");
    mesh.vertices.push_back({*x, *y});
  }
  auto vertex_index = [&](const Line& l, std::string_view tok) {
    const auto v = text::parse_int<Index>(tok);
    if (!v) throw fail(l.number, "invalid vertex index '" + std::string(tok) + "'");
    if (*v < 0 || *v >= *nv) {
      throw fail(l.number, "vertex index " + std::to_string(*v) + " out of range (vertex count " +
                               std::to_string(*nv) + ")");
    }
    return *v;
  };
  std::vector<int> triangle_lines;
  for (Index i = 0; i < *nt; ++i) {
    const Line& l = next("triangle");
    if (l.tokens.size() != 3) throw fail(l.number, "expected 'i j k'");
    mesh.triangles.push_back({vertex_index(l, l.tokens[0]), vertex_index(l, l.tokens[1]), vertex_index(l, l.tokens[2])});
    triangle_lines.push_back(l.number);
  }
  std::vector<int> edge_lines;
  for (Index i = 0; i < *nb; ++i) {
    const Line& l = next("boundary edge");
    if (l.tokens.size() != 3) throw fail(l.number, "expected 'i j label'");
    const auto label = text::parse_int<int>(l.tokens[2]);
    if (!label) throw fail(l.number, "invalid label");
    mesh.boundary_edges.push_back({{vertex_index(l, l.tokens[0]), vertex_index(l, l.tokens[1])}, *label});
    edge_lines.push_back(l.number);
  }
  if (cursor != lines.size()) throw fail(lines[cursor].number, "trailing data after boundary section");

  if (!check_conformity) return mesh;
  const auto report = validate_conformity(mesh);
  if (!report.ok()) {
    const auto& issue = report.issues.front();
    int line = counts.number;
    using K = ConformityIssue::Kind;
    if ((issue.kind == K::non_positive_area) && !issue.indices.empty()) {
      line = triangle_lines[static_cast<std::size_t>(issue.indices.front())];
    }
    throw fail(line, "non-conforming mesh: " + issue.message);
  }
  return mesh;
}

TriMesh read_mesh(const std::filesystem::path& path, bool check_conformity) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mesh file '" + path.string() + "'");
  return read_mesh(in, path.string(), check_conformity);
}

DomainSpec parse_domain_spec(std::string_view text_spec) {
  const auto colon = text_spec.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("domain spec '" + std::string(text_spec) + "' must look like kind:p1,p2,...");
  }
  const auto kind = text::trim(text_spec.substr(0, colon));
  const auto args = text::split_top_level(text_spec.substr(colon + 1));
  auto bad = [&]() { return InputError("invalid domain spec '" + std::string(text_spec) + "'"); };
  auto num = [&](std::size_t i) {
    auto v = text::parse_double(args[i]);
    if (!v) throw bad();
    return *v;
  };
  auto count = [&](std::size_t i) {
    auto v = text::parse_int<Index>(args[i]);
    if (!v) throw bad();
    return *v;
  };
  DomainSpec spec;
  if (kind == "interval" && args.size() == 3) {
    spec = IntervalSpec{num(0), num(1), count(2)};
  } else if (kind == "rectangle" && args.size() == 6) {
    spec = RectangleSpec{num(0), num(1), num(2), num(3), count(4), count(5)};
  } else if (kind == "disk" && args.size() == 3) {
    spec = DiskSpec{num(0), count(1), count(2)};
  } else if (kind == "dike" && args.size() == 2) {
    spec = DikeSpec{count(0), count(1)};
  } else {
    throw bad();
  }
  validate_domain_spec(spec);
  return spec;
}

}  // namespace femkit
