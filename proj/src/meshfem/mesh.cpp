#include "fracstep/meshfem.hpp"

namespace fracstep::meshfem {

Mesh build_mesh(int M) {
  if (M < 2 || M % 2 != 0) throw ConfigError("mesh divisions must be even and positive");
  Mesh mesh;
  mesh.M = M;
  mesh.h = 1.0 / M;
  const int np = M + 1;
  mesh.nodes.reserve(static_cast<std::size_t>(np) * np);
  mesh.interior_map.assign(static_cast<std::size_t>(np) * np, kBoundary);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      // Grid coordinates i/M.
      mesh.nodes.push_back({static_cast<double>(i) / M, static_cast<double>(j) / M});
      if (i > 0 && i < M && j > 0 && j < M) {
        const auto node = static_cast<Index>(j * np + i);
        mesh.interior_map[static_cast<std::size_t>(node)] = static_cast<Index>(mesh.interior_nodes.size());
        mesh.interior_nodes.push_back(node);
      }
    }
  }
  auto id = [np](int i, int j) { return static_cast<Index>(j * np + i); };
  mesh.triangles.reserve(2 * static_cast<std::size_t>(M) * M);
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < M; ++i) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return mesh;
}

}  // namespace fracstep::meshfem
