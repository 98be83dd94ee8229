#include "driftlap/mesh_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace driftlap {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

void write_off(const TriangleMesh& mesh, std::ostream& out) {
  out << "OFF\n"
      << mesh.vertex_count() << ' ' << mesh.face_count() << ' '
      << mesh.edge_count() << '\n';
  for (const auto& p : mesh.vertices)
    out << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' '
        << fmt_double(p.z()) << '\n';
  for (const auto& f : mesh.faces)
    out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_obj(const TriangleMesh& mesh, std::ostream& out) {
  for (const auto& p : mesh.vertices)
    out << "v " << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' '
        << fmt_double(p.z()) << '\n';
  for (const auto& f : mesh.faces)
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void write_vtk(const TriangleMesh& mesh, const NamedFields& fields,
               std::ostream& out) {
  out << "# vtk DataFile Version 3.0\n"
      << "triangle mesh\n"
      << "ASCII\n"
      << "DATASET POLYDATA\n"
      << "POINTS " << mesh.vertex_count() << " double\n";
  for (const auto& p : mesh.vertices)
    out << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' '
        << fmt_double(p.z()) << '\n';
  out << "POLYGONS " << mesh.face_count() << ' ' << 4 * mesh.face_count()
      << '\n';
  for (const auto& f : mesh.faces)
    out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  if (!fields.empty()) {
    out << "POINT_DATA " << mesh.vertex_count() << '\n';
    for (const auto& [name, values] : fields) {
      out << "SCALARS " << name << " double 1\n"
          << "LOOKUP_TABLE default\n";
      for (Eigen::Index i = 0; i < values.size(); ++i)
        out << fmt_double(values[i]) << '\n';
    }
  }
}

void write_json(const TriangleMesh& mesh, const NamedFields& fields,
                std::ostream& out) {
  nlohmann::json doc;
  auto& verts = doc["vertices"] = nlohmann::json::array();
  for (const auto& p : mesh.vertices)
    verts.push_back({p.x(), p.y(), p.z()});
  auto& faces = doc["faces"] = nlohmann::json::array();
  for (const auto& f : mesh.faces) faces.push_back({f[0], f[1], f[2]});
  auto& flds = doc["fields"] = nlohmann::json::object();
  for (const auto& [name, values] : fields) {
    auto arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < values.size(); ++i) arr.push_back(values[i]);
    flds[name] = std::move(arr);
  }
  out << doc.dump(1) << '\n';
}

ImportedMesh read_off(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "OFF") throw std::runtime_error("not an OFF file");
  int nv = 0, nf = 0, ne = 0;
  in >> nv >> nf >> ne;
  std::vector<Vec3> vertices(nv);
  for (auto& p : vertices) in >> p.x() >> p.y() >> p.z();
  std::vector<std::array<int, 3>> faces(nf);
  for (auto& f : faces) {
    int k = 0;
    in >> k;
    if (k != 3) throw std::runtime_error("OFF: only triangles supported");
    in >> f[0] >> f[1] >> f[2];
  }
  if (!in) throw std::runtime_error("OFF: truncated file");
  return {make_mesh(std::move(vertices), std::move(faces)), {}};
}

ImportedMesh read_obj(std::istream& in) {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Vec3 p;
      ls >> p.x() >> p.y() >> p.z();
      vertices.push_back(p);
    } else if (tag == "f") {
      std::array<int, 3> f{};
      for (int k = 0; k < 3; ++k) {
        std::string tok;
        ls >> tok;
        f[k] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      faces.push_back(f);
    }
  }
  return {make_mesh(std::move(vertices), std::move(faces)), {}};
}

ImportedMesh read_vtk(std::istream& in) {
  std::string line;
  int nv = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "POINTS") {
      ls >> nv;
      break;
    }
  }
  if (nv <= 0) throw std::runtime_error("VTK: POINTS section not found");
  std::vector<Vec3> vertices(nv);
  for (auto& p : vertices) in >> p.x() >> p.y() >> p.z();

  int nf = 0, total = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "POLYGONS") {
      ls >> nf >> total;
      break;
    }
  }
  std::vector<std::array<int, 3>> faces(nf);
  for (auto& f : faces) {
    int k = 0;
    in >> k;
    if (k != 3) throw std::runtime_error("VTK: only triangles supported");
    in >> f[0] >> f[1] >> f[2];
  }
  if (!in) throw std::runtime_error("VTK: truncated file");

  NamedFields fields;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "SCALARS") {
      std::string name;
      ls >> name;
      std::getline(in, line);  // LOOKUP_TABLE
      Eigen::VectorXd values(nv);
      for (int i = 0; i < nv; ++i) in >> values[i];
      fields[name] = std::move(values);
    }
  }
  return {make_mesh(std::move(vertices), std::move(faces)), std::move(fields)};
}

ImportedMesh read_json(std::istream& in) {
  nlohmann::json doc;
  in >> doc;
  std::vector<Vec3> vertices;
  for (const auto& p : doc.at("vertices"))
    vertices.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(),
                          p.at(2).get<double>());
  std::vector<std::array<int, 3>> faces;
  for (const auto& f : doc.at("faces"))
    faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
  NamedFields fields;
  if (doc.contains("fields")) {
    for (const auto& [name, arr] : doc["fields"].items()) {
      Eigen::VectorXd values(arr.size());
      for (std::size_t i = 0; i < arr.size(); ++i)
        values[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
      fields[name] = std::move(values);
    }
  }
  return {make_mesh(std::move(vertices), std::move(faces)), std::move(fields)};
}

}  // namespace

MeshFormat parse_mesh_format(const std::string& name) {
  const std::string n = lower(name);
  if (n == "off") return MeshFormat::OFF;
  if (n == "obj") return MeshFormat::OBJ;
  if (n == "vtk") return MeshFormat::VTK;
  if (n == "json") return MeshFormat::JSON;
  throw std::invalid_argument("unknown mesh format: " + name);
}

std::string mesh_format_name(MeshFormat format) {
  switch (format) {
    case MeshFormat::OFF: return "off";
    case MeshFormat::OBJ: return "obj";
    case MeshFormat::VTK: return "vtk";
    case MeshFormat::JSON: return "json";
  }
  throw std::logic_error("unreachable");
}

MeshFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos)
    throw std::invalid_argument("cannot infer format, no extension: " + path);
  return parse_mesh_format(path.substr(dot + 1));
}

void export_mesh(const TriangleMesh& mesh, const NamedFields& fields,
                 const std::string& path, MeshFormat format) {
  for (const auto& [name, values] : fields) {
    if (values.size() != mesh.vertex_count())
      throw std::invalid_argument("field '" + name + "' length mismatch");
  }
  auto out = open_out(path);
  switch (format) {
    case MeshFormat::OFF: write_off(mesh, out); break;
    case MeshFormat::OBJ: write_obj(mesh, out); break;
    case MeshFormat::VTK: write_vtk(mesh, fields, out); break;
    case MeshFormat::JSON: write_json(mesh, fields, out); break;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void export_mesh(const TriangleMesh& mesh, const std::string& path,
                 MeshFormat format) {
  export_mesh(mesh, {}, path, format);
}

ImportedMesh import_mesh(const std::string& path) {
  return import_mesh(path, format_from_path(path));
}

ImportedMesh import_mesh(const std::string& path, MeshFormat format) {
  auto in = open_in(path);
  switch (format) {
    case MeshFormat::OFF: return read_off(in);
    case MeshFormat::OBJ: return read_obj(in);
    case MeshFormat::VTK: return read_vtk(in);
    case MeshFormat::JSON: return read_json(in);
  }
  throw std::logic_error("unreachable");
}

void export_polylines_obj(const std::vector<std::vector<Vec3>>& polylines,
                          const std::vector<bool>& closed,
                          const std::string& path) {
  if (closed.size() != polylines.size())
    throw std::invalid_argument("closed flags must match polyline count");
  auto out = open_out(path);
  int base = 1;
  for (const auto& line : polylines) {
    for (const auto& p : line)
      out << "v " << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' '
          << fmt_double(p.z()) << '\n';
  }
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    out << 'l';
    for (std::size_t k = 0; k < polylines[i].size(); ++k) out << ' ' << base + static_cast<int>(k);
    if (closed[i]) out << ' ' << base;
    out << '\n';
    base += static_cast<int>(polylines[i].size());
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace driftlap
