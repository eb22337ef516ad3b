#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "femkit/elements.hpp"
#include "femkit/mesh.hpp"

namespace femkit {

/// One row per dof in dof order: header `x,value` (1D) or `x,y,value` (2D),
/// shortest round-trip numbers, LF line endings.
void write_field_csv(const FemField& field, std::ostream& out);
void write_field_csv(const FemField& field, const std::filesystem::path& path);

struct VtkField {
  std::string name;
  std::vector<const FemField*> components;  // 1 for SCALARS, 2 for VECTORS (z written as 0)
};

/// Legacy ASCII VTK 3.0 unstructured grid of linear triangles. Fields are sampled at
/// the mesh vertices, which are the first dofs of every space built by build_dofmap.
void write_vtk(const TriMesh& mesh, const std::vector<VtkField>& fields, std::ostream& out,
               const std::string& title = "femkit output");
void write_vtk(const TriMesh& mesh, const std::vector<VtkField>& fields, const std::filesystem::path& path,
               const std::string& title = "femkit output");

/// Opens `path` for writing or throws InputError naming it.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace femkit
