#pragma once

// Gmsh ASCII import (MSH 2.2 and 4.1, quad meshes) and CSV export of mesh
// connectivity.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vpinn/core.hpp"
#include "vpinn/geometry.hpp"

namespace vpinn {

namespace detail {

struct GmshLines {
  std::vector<std::string> lines;
  // Returns the index of the line after the header "$name", or -1.
  int find_section(const std::string& name) const {
    const std::string header = "$" + name;
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (lines[i] == header) return static_cast<int>(i) + 1;
    return -1;
  }
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_one(std::istringstream& ss, int line_no, const char* what) {
  T v;
  if (!(ss >> v))
    throw MeshFileError("gmsh: line " + std::to_string(line_no + 1) +
                        ": expected " + what);
  return v;
}

struct RawGmsh {
  // node tag -> coordinate, in file order
  std::vector<std::pair<std::int64_t, Point2>> nodes;
  std::vector<std::array<std::int64_t, 4>> quads;
  std::vector<std::array<std::int64_t, 2>> boundary_lines;
  std::vector<std::int64_t> boundary_points;
  bool has_tagged_boundary() const {
    return !boundary_lines.empty() || !boundary_points.empty();
  }
};

inline void take_element(RawGmsh& raw, int type,
                         const std::vector<std::int64_t>& node_tags,
                         int line_no) {
  switch (type) {
    case 3:  // 4-node quadrangle
      if (node_tags.size() != 4)
        throw MeshFileError("gmsh: line " + std::to_string(line_no + 1) +
                            ": quad needs 4 nodes");
      raw.quads.push_back({node_tags[0], node_tags[1], node_tags[2],
                           node_tags[3]});
      break;
    case 1:  // 2-node line: boundary tag
      if (node_tags.size() != 2)
        throw MeshFileError("gmsh: line " + std::to_string(line_no + 1) +
                            ": line element needs 2 nodes");
      raw.boundary_lines.push_back({node_tags[0], node_tags[1]});
      break;
    case 15:  // 1-node point: boundary tag
      if (node_tags.empty())
        throw MeshFileError("gmsh: line " + std::to_string(line_no + 1) +
                            ": point element needs a node");
      raw.boundary_points.push_back(node_tags[0]);
      break;
    default:
      throw MeshFileError("gmsh: line " + std::to_string(line_no + 1) +
                          ": unsupported element type " + std::to_string(type) +
                          " (only quads, lines and points are accepted)");
  }
}

inline RawGmsh parse_v22(const GmshLines& f) {
  RawGmsh raw;
  int at = f.find_section("Nodes");
  if (at < 0) throw MeshFileError("gmsh: missing $Nodes section");
  {
    std::istringstream head(f.lines.at(at));
    const auto count = parse_one<std::int64_t>(head, at, "node count");
    for (std::int64_t i = 0; i < count; ++i) {
      const int ln = at + 1 + static_cast<int>(i);
      std::istringstream ss(f.lines.at(ln));
      const auto tag = parse_one<std::int64_t>(ss, ln, "node tag");
      const double x = parse_one<double>(ss, ln, "x");
      const double y = parse_one<double>(ss, ln, "y");
      parse_one<double>(ss, ln, "z");
      raw.nodes.push_back({tag, Point2{x, y}});
    }
  }
  at = f.find_section("Elements");
  if (at < 0) throw MeshFileError("gmsh: missing $Elements section");
  {
    std::istringstream head(f.lines.at(at));
    const auto count = parse_one<std::int64_t>(head, at, "element count");
    for (std::int64_t i = 0; i < count; ++i) {
      const int ln = at + 1 + static_cast<int>(i);
      std::istringstream ss(f.lines.at(ln));
      parse_one<std::int64_t>(ss, ln, "element tag");
      const int type = parse_one<int>(ss, ln, "element type");
      const int ntags = parse_one<int>(ss, ln, "tag count");
      for (int t = 0; t < ntags; ++t) parse_one<std::int64_t>(ss, ln, "tag");
      std::vector<std::int64_t> node_tags;
      std::int64_t v;
      while (ss >> v) node_tags.push_back(v);
      take_element(raw, type, node_tags, ln);
    }
  }
  return raw;
}

inline RawGmsh parse_v41(const GmshLines& f) {
  RawGmsh raw;
  int at = f.find_section("Nodes");
  if (at < 0) throw MeshFileError("gmsh: missing $Nodes section");
  {
    std::istringstream head(f.lines.at(at));
    const auto n_blocks = parse_one<std::int64_t>(head, at, "block count");
    int ln = at + 1;
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      std::istringstream bh(f.lines.at(ln));
      parse_one<int>(bh, ln, "entity dim");
      parse_one<std::int64_t>(bh, ln, "entity tag");
      parse_one<int>(bh, ln, "parametric flag");
      const auto in_block = parse_one<std::int64_t>(bh, ln, "node count");
      ++ln;
      std::vector<std::int64_t> tags(static_cast<std::size_t>(in_block));
      for (std::int64_t i = 0; i < in_block; ++i, ++ln) {
        std::istringstream ss(f.lines.at(ln));
        tags[static_cast<std::size_t>(i)] =
            parse_one<std::int64_t>(ss, ln, "node tag");
      }
      for (std::int64_t i = 0; i < in_block; ++i, ++ln) {
        std::istringstream ss(f.lines.at(ln));
        const double x = parse_one<double>(ss, ln, "x");
        const double y = parse_one<double>(ss, ln, "y");
        parse_one<double>(ss, ln, "z");
        raw.nodes.push_back({tags[static_cast<std::size_t>(i)], Point2{x, y}});
      }
    }
  }
  at = f.find_section("Elements");
  if (at < 0) throw MeshFileError("gmsh: missing $Elements section");
  {
    std::istringstream head(f.lines.at(at));
    const auto n_blocks = parse_one<std::int64_t>(head, at, "block count");
    int ln = at + 1;
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      std::istringstream bh(f.lines.at(ln));
      parse_one<int>(bh, ln, "entity dim");
      parse_one<std::int64_t>(bh, ln, "entity tag");
      const int type = parse_one<int>(bh, ln, "element type");
      const auto in_block = parse_one<std::int64_t>(bh, ln, "element count");
      ++ln;
      for (std::int64_t i = 0; i < in_block; ++i, ++ln) {
        std::istringstream ss(f.lines.at(ln));
        parse_one<std::int64_t>(ss, ln, "element tag");
        std::vector<std::int64_t> node_tags;
        std::int64_t v;
        while (ss >> v) node_tags.push_back(v);
        take_element(raw, type, node_tags, ln);
      }
    }
  }
  return raw;
}

}  // namespace detail

// Reads an ASCII gmsh mesh (format 2.2 or 4.1).  Quads become elements;
// 1D line elements and 0D point elements, when present, tag the boundary.
// Without tags the boundary is derived from edges incident to exactly one
// quad.  Element orientation is normalised to counter-clockwise.
inline Mesh read_gmsh_ascii(std::istream& in) {
  detail::GmshLines f;
  for (std::string line; std::getline(in, line);)
    f.lines.push_back(detail::trim(line));

  const int fmt = f.find_section("MeshFormat");
  if (fmt < 0) throw MeshFileError("gmsh: missing $MeshFormat section");
  std::istringstream fss(f.lines.at(fmt));
  std::string version;
  int file_type = 0, data_size = 0;
  if (!(fss >> version >> file_type >> data_size))
    throw MeshFileError("gmsh: malformed $MeshFormat line");
  if (file_type != 0)
    throw MeshFileError("gmsh: binary files are not supported");

  detail::RawGmsh raw;
  if (version == "2.2")
    raw = detail::parse_v22(f);
  else if (version == "4.1")
    raw = detail::parse_v41(f);
  else
    throw MeshFileError("gmsh: unsupported format version '" + version +
                        "' (supported: 2.2, 4.1)");

  if (raw.quads.empty())
    throw MeshFileError("gmsh: mesh contains no quadrilateral elements");

  Mesh mesh;
  std::map<std::int64_t, int> tag_to_index;
  mesh.nodes.reserve(raw.nodes.size());
  for (const auto& [tag, p] : raw.nodes) {
    if (tag_to_index.count(tag))
      throw MeshFileError("gmsh: duplicate node tag " + std::to_string(tag));
    tag_to_index[tag] = mesh.n_nodes();
    mesh.nodes.push_back(p);
  }
  const auto lookup = [&](std::int64_t tag) {
    const auto it = tag_to_index.find(tag);
    if (it == tag_to_index.end())
      throw MeshFileError("gmsh: element references unknown node tag " +
                          std::to_string(tag));
    return it->second;
  };

  mesh.elements.reserve(raw.quads.size());
  for (const auto& q : raw.quads) {
    QuadElement e;
    for (int i = 0; i < 4; ++i) e.vertex_ids[i] = lookup(q[i]);
    // Normalise to CCW, keeping the first vertex as the reference corner.
    if (signed_area(element_nodes_of(mesh, e)) < 0.0)
      std::swap(e.vertex_ids[1], e.vertex_ids[3]);
    mesh.elements.push_back(e);
  }

  std::vector<int> boundary;
  if (raw.has_tagged_boundary()) {
    for (const auto& l : raw.boundary_lines) {
      boundary.push_back(lookup(l[0]));
      boundary.push_back(lookup(l[1]));
    }
    for (const auto t : raw.boundary_points) boundary.push_back(lookup(t));
  } else {
    for (const auto& [a, b] : boundary_edges(mesh)) {
      boundary.push_back(a);
      boundary.push_back(b);
    }
  }
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()),
                 boundary.end());
  mesh.boundary_node_ids = std::move(boundary);
  return mesh;
}

inline Mesh read_gmsh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file: " + path);
  return read_gmsh_ascii(in);
}

// Connectivity export: one CSV of nodes (node_id,x,y) and one of elements
// (elem_id,v0,v1,v2,v3).  Coordinates round-trip exactly at 17 significant
// digits.
inline void write_mesh_csv(const Mesh& mesh, const std::string& nodes_path,
                           const std::string& elements_path) {
  {
    std::ofstream out(nodes_path);
    if (!out) throw IoError("cannot open for writing: " + nodes_path);
    out << "node_id,x,y\n";
    char buf[96];
    for (int i = 0; i < mesh.n_nodes(); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", i, mesh.nodes[i].x,
                    mesh.nodes[i].y);
      out << buf;
    }
    if (!out) throw IoError("write failed: " + nodes_path);
  }
  {
    std::ofstream out(elements_path);
    if (!out) throw IoError("cannot open for writing: " + elements_path);
    out << "elem_id,v0,v1,v2,v3\n";
    for (int k = 0; k < mesh.n_elements(); ++k) {
      const auto& v = mesh.elements[k].vertex_ids;
      out << k << ',' << v[0] << ',' << v[1] << ',' << v[2] << ',' << v[3]
          << '\n';
    }
    if (!out) throw IoError("write failed: " + elements_path);
  }
}

}  // namespace vpinn
