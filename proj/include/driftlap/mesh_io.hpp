// Mesh file I/O: OFF and OBJ carry geometry only; legacy ASCII VTK PolyData
// and JSON additionally carry named per-vertex scalar fields. Coordinates are
// written with 17 significant digits so a round trip reproduces every double.
#pragma once

#include "driftlap/mesh.hpp"

#include <map>
#include <string>

namespace driftlap {

enum class MeshFormat { OFF, OBJ, VTK, JSON };

// Parses "off" | "obj" | "vtk" | "json" (case-insensitive).
MeshFormat parse_mesh_format(const std::string& name);
std::string mesh_format_name(MeshFormat format);
// Infers the format from a file extension; throws on unknown extensions.
MeshFormat format_from_path(const std::string& path);

using NamedFields = std::map<std::string, Eigen::VectorXd>;

// Writes the mesh (and fields, where the format supports them) to path.
// OFF/OBJ silently drop fields. Throws std::runtime_error on I/O failure.
void export_mesh(const TriangleMesh& mesh, const NamedFields& fields,
                 const std::string& path, MeshFormat format);
void export_mesh(const TriangleMesh& mesh, const std::string& path,
                 MeshFormat format);

struct ImportedMesh {
  TriangleMesh mesh;
  NamedFields fields;
};

// Reads a mesh previously written by export_mesh (any of the four formats,
// detected from the extension unless given). Validates via make_mesh.
ImportedMesh import_mesh(const std::string& path);
ImportedMesh import_mesh(const std::string& path, MeshFormat format);

// Polyline export as OBJ line elements (for nodal curves).
void export_polylines_obj(const std::vector<std::vector<Vec3>>& polylines,
                          const std::vector<bool>& closed,
                          const std::string& path);

}  // namespace driftlap
