#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "monofem/error.hpp"
#include "monofem/mesh.hpp"

namespace monofem {

namespace {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Next line that is not blank; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void parse_fail(std::size_t lineno, const std::string& what) {
  throw InputError("line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const Point2 p = mesh.vertices()[i];
    out << format_g17(p.x) << ' ' << format_g17(p.y) << ' '
        << static_cast<int>(mesh.boundary_flags()[i]) << '\n';
  }
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

MeshPtr read_mesh(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) throw InputError("empty mesh file");
  long long nv = -1, nt = -1;
  {
    std::istringstream ls(line);
    if (!(ls >> nv >> nt) || nv < 3 || nt < 1) parse_fail(lineno, "expected header 'nv nt'");
  }
  std::vector<Point2> vertices(static_cast<std::size_t>(nv));
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(nv));
  for (auto& v : vertices) {
    if (!next_line(in, line, lineno)) throw InputError("mesh file truncated in vertex block");
    std::istringstream ls(line);
    int b = -1;
    if (!(ls >> v.x >> v.y >> b) || (b != 0 && b != 1)) parse_fail(lineno, "expected 'x y b'");
    flags[static_cast<std::size_t>(&v - vertices.data())] = static_cast<std::uint8_t>(b);
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles) {
    if (!next_line(in, line, lineno)) throw InputError("mesh file truncated in triangle block");
    std::istringstream ls(line);
    if (!(ls >> t[0] >> t[1] >> t[2])) parse_fail(lineno, "expected 'i j k'");
  }
  auto mesh = TriMesh::create(std::move(vertices), std::move(triangles));
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] != mesh->boundary_flags()[i]) {
      throw InputError("boundary flag of vertex " + std::to_string(i) +
                       " contradicts the triangle connectivity");
    }
  }
  return mesh;
}

Polygon read_polygon(std::istream& in) {
  Polygon poly;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Point2 p;
    std::string rest;
    if (!(ls >> p.x >> p.y) || (ls >> rest)) parse_fail(lineno, "expected 'x y'");
    poly.vertices.push_back(p);
  }
  return poly;
}

}  // namespace monofem
