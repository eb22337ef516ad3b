#include "femkit/output.hpp"

#include <fstream>

#include "text_util.hpp"

namespace femkit {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

void write_field_csv(const FemField& field, std::ostream& out) {
  const DofMap& dm = *field.dofmap;
  out << (dm.dim == 1 ? "x,value\n" : "x,y,value\n");
  for (Index i = 0; i < dm.n_dofs; ++i) {
    const Point2 p = dm.dof_coords[i];
    out << text::shortest(p.x) << ',';
    if (dm.dim == 2) out << text::shortest(p.y) << ',';
    out << text::shortest(field.coefficients[i]) << '\n';
  }
}

void write_field_csv(const FemField& field, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_field_csv(field, out);
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

void write_vtk(const TriMesh& mesh, const std::vector<VtkField>& fields, std::ostream& out, const std::string& title) {
  const Index nv = static_cast<Index>(mesh.vertices.size());
  const Index nt = static_cast<Index>(mesh.triangles.size());
  for (const auto& f : fields) {
    if (f.components.size() != 1 && f.components.size() != 2) {
      throw InputError("VTK field '" + f.name + "' must have 1 or 2 components");
    }
    if (f.name.empty() || f.name.find_first_of(" \t\n") != std::string::npos) {
      throw InputError("VTK field name '" + f.name + "' must be a single word");
    }
    for (const FemField* c : f.components) {
      if (!c || c->dofmap->dim != 2 || c->dofmap->vertex_count != nv || c->dofmap->element_count() != nt) {
        throw InputError("VTK field '" + f.name + "' does not belong to the mesh");
      }
    }
  }
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& p : mesh.vertices) out << text::shortest(p.x) << ' ' << text::shortest(p.y) << " 0\n";
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (Index i = 0; i < nt; ++i) out << "5\n";
  if (fields.empty()) return;
  out << "POINT_DATA " << nv << '\n';
  for (const auto& f : fields) {
    if (f.components.size() == 1) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (Index i = 0; i < nv; ++i) out << text::shortest(f.components[0]->coefficients[i]) << '\n';
    } else {
      out << "VECTORS " << f.name << " double\n";
      for (Index i = 0; i < nv; ++i) {
        out << text::shortest(f.components[0]->coefficients[i]) << ' '
            << text::shortest(f.components[1]->coefficients[i]) << " 0\n";
      }
    }
  }
}

void write_vtk(const TriMesh& mesh, const std::vector<VtkField>& fields, const std::filesystem::path& path,
               const std::string& title) {
  auto out = open_output(path);
  write_vtk(mesh, fields, out, title);
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

}  // namespace femkit
