#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vpinn/mesh_io.hpp"
#include "test_util.hpp"

using namespace vpinn;

TEST_CASE("reads msh 2.2 and derives the boundary") {
  const auto mesh = read_gmsh_file(fixture("meshes/square_2x2_v22.msh"));
  REQUIRE(mesh.n_nodes() == 9);
  REQUIRE(mesh.n_elements() == 4);
  // No line elements in the file: boundary comes from single-incidence edges.
  CHECK(mesh.boundary_node_ids.size() == 8);
  CHECK(validate_mesh(mesh).ok());

  // Vertex ids are remapped to dense 0-based indices in file order.
  for (const auto& e : mesh.elements)
    for (int v : e.vertex_ids) CHECK((v >= 0 && v < mesh.n_nodes()));
}

TEST_CASE("reads msh 4.1 with tagged boundary lines") {
  const auto mesh = read_gmsh_file(fixture("meshes/square_1x1_v41.msh"));
  REQUIRE(mesh.n_nodes() == 4);
  REQUIRE(mesh.n_elements() == 1);
  CHECK(mesh.boundary_node_ids.size() == 4);
  CHECK(validate_mesh(mesh).ok());
}

TEST_CASE("reads the bundled skewed and gear-like meshes") {
  const auto skewed = read_gmsh_file(fixture("meshes/skewed_12x12_v22.msh"));
  CHECK(skewed.n_elements() == 144);
  CHECK(validate_mesh(skewed).ok());

  const auto gear = read_gmsh_file(fixture("meshes/gearlike_v41.msh"));
  CHECK(gear.n_elements() == 576);
  CHECK(validate_mesh(gear).ok());
  // Tagged rims: 96 nodes each.
  CHECK(gear.boundary_node_ids.size() == 192);
}

TEST_CASE("orientation is normalised on import") {
  // Clockwise quad in the file must come out counter-clockwise.
  const std::string text =
      "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
      "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n$EndNodes\n"
      "$Elements\n1\n1 3 2 0 2 1 4 3 2\n$EndElements\n";
  std::istringstream in(text);
  const auto mesh = read_gmsh_ascii(in);
  REQUIRE(mesh.n_elements() == 1);
  CHECK(signed_area(element_nodes(mesh, 0)) > 0.0);
  // First vertex is preserved as the reference corner.
  CHECK(mesh.elements[0].vertex_ids[0] == 0);
}

TEST_CASE("rejects unsupported and malformed mesh files") {
  CHECK_THROWS_AS(read_gmsh_file(fixture("meshes/bad_triangle_v22.msh")),
                  MeshFileError);
  CHECK_THROWS_AS(read_gmsh_file(fixture("meshes/bad_dangling_v22.msh")),
                  MeshFileError);
  CHECK_THROWS_AS(read_gmsh_file(fixture("meshes/bad_binary_v22.msh")),
                  MeshFileError);
  CHECK_THROWS_AS(read_gmsh_file("/nonexistent/path.msh"), IoError);

  std::istringstream v3("$MeshFormat\n3.0 0 8\n$EndMeshFormat\n");
  CHECK_THROWS_AS(read_gmsh_ascii(v3), MeshFileError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_gmsh_ascii(empty), MeshFileError);
}

TEST_CASE("mesh csv export round-trips") {
  const auto mesh = read_gmsh_file(fixture("meshes/skewed_12x12_v22.msh"));
  const std::string nodes_csv = "/tmp/vpinn_test_nodes.csv";
  const std::string elems_csv = "/tmp/vpinn_test_elems.csv";
  write_mesh_csv(mesh, nodes_csv, elems_csv);

  std::ifstream nf(nodes_csv);
  std::string line;
  REQUIRE(std::getline(nf, line));
  CHECK(line == "node_id,x,y");
  int count = 0;
  double last_x = 0.0;
  while (std::getline(nf, line)) {
    int id;
    double x, y;
    REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf", &id, &x, &y) == 3);
    CHECK(id == count);
    // Full-precision round trip.
    CHECK(x == mesh.nodes[id].x);
    CHECK(y == mesh.nodes[id].y);
    last_x = x;
    ++count;
  }
  (void)last_x;
  CHECK(count == mesh.n_nodes());

  std::ifstream ef(elems_csv);
  REQUIRE(std::getline(ef, line));
  CHECK(line == "elem_id,v0,v1,v2,v3");
  count = 0;
  while (std::getline(ef, line)) {
    int id, v0, v1, v2, v3;
    REQUIRE(std::sscanf(line.c_str(), "%d,%d,%d,%d,%d", &id, &v0, &v1, &v2,
                        &v3) == 5);
    CHECK(v0 == mesh.elements[id].vertex_ids[0]);
    CHECK(v3 == mesh.elements[id].vertex_ids[3]);
    ++count;
  }
  CHECK(count == mesh.n_elements());
  std::remove(nodes_csv.c_str());
  std::remove(elems_csv.c_str());
}
