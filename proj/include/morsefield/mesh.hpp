#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "morsefield/geometry.hpp"

namespace morsefield {

/// Result of point location: triangle index plus barycentric coordinates.
struct LocateResult {
  int triangle = -1;
  Eigen::Vector3d barycentric = Eigen::Vector3d::Zero();
};

/// Triangulation of a compact planar domain with a single smooth boundary
/// component.  Immutable after construction; safe to share read-only.
class Mesh {
 public:
  Mesh(Eigen::MatrixX2d vertices, Eigen::MatrixX3i triangles,
       Eigen::MatrixX2i boundary_edges, std::vector<double> boundary_params,
       BoundaryCurve curve);

  int num_vertices() const { return static_cast<int>(vertices_.rows()); }
  int num_triangles() const { return static_cast<int>(triangles_.rows()); }
  int num_boundary_edges() const {
    return static_cast<int>(boundary_edges_.rows());
  }

  const Eigen::MatrixX2d& vertices() const { return vertices_; }
  const Eigen::MatrixX3i& triangles() const { return triangles_; }
  /// Ordered boundary edge cycle (i, j) traversed counterclockwise.
  const Eigen::MatrixX2i& boundary_edges() const { return boundary_edges_; }
  /// Curve parameter of the first vertex of each boundary edge.
  const std::vector<double>& boundary_params() const {
    return boundary_params_;
  }
  const BoundaryCurve& curve() const { return curve_; }

  Vec2 vertex(int i) const { return vertices_.row(i).transpose(); }
  bool is_boundary_vertex(int i) const {
    return boundary_param_of_.count(i) > 0;
  }
  /// Curve parameter of a boundary vertex; throws UsageError otherwise.
  double boundary_param_of(int vertex) const;

  double h_max() const { return h_max_; }
  double diameter() const { return diameter_; }
  /// Chart-scale constant: min(inradius, min curvature radius) / 2.
  double r_domain() const { return r_domain_; }
  double triangle_area(int t) const { return areas_[t]; }
  double total_area() const { return total_area_; }

  /// Triangles incident to a vertex.
  const std::vector<int>& vertex_triangles(int v) const {
    return vertex_tris_[v];
  }

  /// Locate a point; std::nullopt means outside the triangulation.
  std::optional<LocateResult> locate(const Vec2& p) const;

  /// Nearest-triangle locate with clamped barycentrics.  Intended for points
  /// on the exact boundary curve, which can fall in the sliver between a
  /// boundary chord and the arc.  Throws GeometryError when no triangle is
  /// found in the neighborhood of p.
  LocateResult locate_clamped(const Vec2& p) const;

  /// Position reconstructed from barycentric coordinates.
  Vec2 point_at(const LocateResult& loc) const;

  /// Distance from p to the boundary curve (exact curve, not the polygon).
  double distance_to_boundary(const Vec2& p) const;

 private:
  void finalize();

  Eigen::MatrixX2d vertices_;
  Eigen::MatrixX3i triangles_;
  Eigen::MatrixX2i boundary_edges_;
  std::vector<double> boundary_params_;
  std::unordered_map<int, double> boundary_param_of_;
  BoundaryCurve curve_;

  std::vector<double> areas_;
  std::vector<std::vector<int>> vertex_tris_;
  double h_max_ = 0.0;
  double diameter_ = 0.0;
  double r_domain_ = 0.0;
  double total_area_ = 0.0;

  // uniform background grid for point location
  Vec2 grid_min_ = Vec2::Zero();
  double grid_cell_ = 1.0;
  int grid_nx_ = 1, grid_ny_ = 1;
  std::vector<std::vector<int>> grid_cells_;
};

/// Build a triangulation with h_max <= 2 * target_h.  The domain must be
/// star-shaped with respect to its centroid (true for every test domain).
std::shared_ptr<const Mesh> build_domain(const BoundaryCurve& curve,
                                         double target_h);

/// Uniform 1->4 refinement; new boundary vertices are placed on the curve at
/// the parameter midpoint of their edge.
std::shared_ptr<const Mesh> refine(const Mesh& mesh);

/// ASCII exchange format: "nv nt nb", nv lines "x y", nt lines "i j k",
/// nb lines "i j t_param" (17 significant digits, bit-exact round trip).
void write_mesh(std::ostream& os, const Mesh& mesh);
std::shared_ptr<const Mesh> read_mesh(std::istream& is,
                                      const BoundaryCurve& curve);

}  // namespace morsefield
