#include "morsefield/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace morsefield {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (b.y() - a.y()) * (c.x() - a.x()));
}

// guarded Laplacian smoothing of interior vertices; boundary fixed
void smooth_interior(Eigen::MatrixX2d& v, const Eigen::MatrixX3i& tris,
                     const std::vector<bool>& on_boundary, int passes) {
  const int nv = static_cast<int>(v.rows());
  std::vector<std::vector<int>> nbrs(nv);
  for (int t = 0; t < tris.rows(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const int a = tris(t, e), b = tris(t, (e + 1) % 3);
      nbrs[a].push_back(b);
      nbrs[b].push_back(a);
    }
  }
  std::vector<std::vector<int>> vtris(nv);
  for (int t = 0; t < tris.rows(); ++t)
    for (int e = 0; e < 3; ++e) vtris[tris(t, e)].push_back(t);

  for (int pass = 0; pass < passes; ++pass) {
    Eigen::MatrixX2d next = v;
    for (int i = 0; i < nv; ++i) {
      if (on_boundary[i] || nbrs[i].empty()) continue;
      Vec2 avg = Vec2::Zero();
      for (int j : nbrs[i]) avg += v.row(j).transpose();
      avg /= static_cast<double>(nbrs[i].size());
      next.row(i) = avg.transpose();
    }
    // revert moves that would invert an incident triangle
    for (int i = 0; i < nv; ++i) {
      if (on_boundary[i]) continue;
      bool ok = true;
      for (int t : vtris[i]) {
        Vec2 a = next.row(tris(t, 0)).transpose();
        Vec2 b = next.row(tris(t, 1)).transpose();
        Vec2 c = next.row(tris(t, 2)).transpose();
        if (signed_area(a, b, c) <= 0.0) {
          ok = false;
          break;
        }
      }
      if (!ok) next.row(i) = v.row(i);
    }
    v = next;
  }
}

struct RawMesh {
  Eigen::MatrixX2d vertices;
  Eigen::MatrixX3i triangles;
  Eigen::MatrixX2i boundary_edges;
  std::vector<double> boundary_params;
};

RawMesh refine_raw(const Mesh& mesh) {
  const auto& v = mesh.vertices();
  const auto& tris = mesh.triangles();
  const auto& curve = mesh.curve();

  std::map<std::pair<int, int>, int> midpoint;
  // boundary edge midpoints carry a curve parameter
  std::unordered_map<int, double> new_boundary_param;
  std::vector<Vec2> new_pts;
  new_pts.reserve(static_cast<size_t>(tris.rows()) * 3 / 2);
  const int nv = mesh.num_vertices();

  std::map<std::pair<int, int>, double> boundary_mid_param;
  for (int e = 0; e < mesh.num_boundary_edges(); ++e) {
    const int i = mesh.boundary_edges()(e, 0);
    const int j = mesh.boundary_edges()(e, 1);
    const double ti = mesh.boundary_params()[e];
    double tj = mesh.boundary_param_of(j);
    // walk the short way around the period
    if (std::fabs(tj - ti) > curve.period() / 2) {
      tj += (tj < ti) ? curve.period() : -curve.period();
    }
    boundary_mid_param[{std::min(i, j), std::max(i, j)}] =
        curve.wrap(0.5 * (ti + tj));
  }

  auto edge_midpoint = [&](int a, int b) -> int {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int idx = nv + static_cast<int>(new_pts.size());
    auto bit = boundary_mid_param.find(key);
    if (bit != boundary_mid_param.end()) {
      new_pts.push_back(curve.position(bit->second));
      new_boundary_param[idx] = bit->second;
    } else {
      new_pts.push_back(0.5 * (v.row(a).transpose() + v.row(b).transpose()));
    }
    midpoint[key] = idx;
    return idx;
  };

  Eigen::MatrixX3i new_tris(tris.rows() * 4, 3);
  for (int t = 0; t < tris.rows(); ++t) {
    const int a = tris(t, 0), b = tris(t, 1), c = tris(t, 2);
    const int ab = edge_midpoint(a, b);
    const int bc = edge_midpoint(b, c);
    const int ca = edge_midpoint(c, a);
    new_tris.row(4 * t + 0) << a, ab, ca;
    new_tris.row(4 * t + 1) << b, bc, ab;
    new_tris.row(4 * t + 2) << c, ca, bc;
    new_tris.row(4 * t + 3) << ab, bc, ca;
  }

  RawMesh out;
  out.vertices.resize(nv + static_cast<int>(new_pts.size()), 2);
  out.vertices.topRows(nv) = v;
  for (int i = 0; i < static_cast<int>(new_pts.size()); ++i)
    out.vertices.row(nv + i) = new_pts[i].transpose();
  out.triangles = std::move(new_tris);

  // split each boundary edge, preserving the cycle order
  const int nb = mesh.num_boundary_edges();
  out.boundary_edges.resize(2 * nb, 2);
  out.boundary_params.resize(2 * nb);
  for (int e = 0; e < nb; ++e) {
    const int i = mesh.boundary_edges()(e, 0);
    const int j = mesh.boundary_edges()(e, 1);
    const int m =
        midpoint.at(std::make_pair(std::min(i, j), std::max(i, j)));
    out.boundary_edges.row(2 * e + 0) << i, m;
    out.boundary_edges.row(2 * e + 1) << m, j;
    out.boundary_params[2 * e + 0] = mesh.boundary_params()[e];
    out.boundary_params[2 * e + 1] = new_boundary_param.at(m);
  }
  return out;
}

}  // namespace

Mesh::Mesh(Eigen::MatrixX2d vertices, Eigen::MatrixX3i triangles,
           Eigen::MatrixX2i boundary_edges, std::vector<double> boundary_params,
           BoundaryCurve curve)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)),
      boundary_params_(std::move(boundary_params)),
      curve_(std::move(curve)) {
  if (static_cast<int>(boundary_params_.size()) != boundary_edges_.rows())
    throw GeometryError("one boundary parameter per boundary edge expected");
  for (int e = 0; e < boundary_edges_.rows(); ++e)
    boundary_param_of_[boundary_edges_(e, 0)] = boundary_params_[e];
  finalize();
}

void Mesh::finalize() {
  const int nt = num_triangles();
  const int nv = num_vertices();
  areas_.resize(nt);
  vertex_tris_.assign(nv, {});
  h_max_ = 0.0;
  total_area_ = 0.0;
  for (int t = 0; t < nt; ++t) {
    const Vec2 a = vertex(triangles_(t, 0));
    const Vec2 b = vertex(triangles_(t, 1));
    const Vec2 c = vertex(triangles_(t, 2));
    const double area = signed_area(a, b, c);
    if (area <= 0.0)
      throw GeometryError("triangle with non-positive area in mesh");
    areas_[t] = area;
    total_area_ += area;
    h_max_ = std::max({h_max_, (a - b).norm(), (b - c).norm(), (c - a).norm()});
    for (int e = 0; e < 3; ++e) vertex_tris_[triangles_(t, e)].push_back(t);
  }

  const Vec2 lo = vertices_.colwise().minCoeff().transpose();
  const Vec2 hi = vertices_.colwise().maxCoeff().transpose();
  diameter_ = (hi - lo).norm();

  // chart-scale constant of the domain
  Vec2 centroid = vertices_.colwise().mean().transpose();
  double inradius_lb = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1024; ++i) {
    const Vec2 q = curve_.position(curve_.period() * i / 1024);
    inradius_lb = std::min(inradius_lb, (q - centroid).norm());
  }
  r_domain_ = 0.5 * std::min(inradius_lb, curve_.min_curvature_radius());

  // background grid: ~2 triangles per cell on average
  grid_min_ = lo;
  const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  const int target = std::max(1, static_cast<int>(std::sqrt(nt / 2.0)));
  grid_cell_ = span / target;
  grid_nx_ = static_cast<int>((hi.x() - lo.x()) / grid_cell_) + 1;
  grid_ny_ = static_cast<int>((hi.y() - lo.y()) / grid_cell_) + 1;
  grid_cells_.assign(static_cast<size_t>(grid_nx_) * grid_ny_, {});
  for (int t = 0; t < nt; ++t) {
    Vec2 tlo = vertex(triangles_(t, 0)), thi = tlo;
    for (int e = 1; e < 3; ++e) {
      const Vec2 p = vertex(triangles_(t, e));
      tlo = tlo.cwiseMin(p);
      thi = thi.cwiseMax(p);
    }
    const int x0 = std::clamp(
        static_cast<int>((tlo.x() - grid_min_.x()) / grid_cell_), 0,
        grid_nx_ - 1);
    const int x1 = std::clamp(
        static_cast<int>((thi.x() - grid_min_.x()) / grid_cell_), 0,
        grid_nx_ - 1);
    const int y0 = std::clamp(
        static_cast<int>((tlo.y() - grid_min_.y()) / grid_cell_), 0,
        grid_ny_ - 1);
    const int y1 = std::clamp(
        static_cast<int>((thi.y() - grid_min_.y()) / grid_cell_), 0,
        grid_ny_ - 1);
    for (int gx = x0; gx <= x1; ++gx)
      for (int gy = y0; gy <= y1; ++gy)
        grid_cells_[static_cast<size_t>(gx) * grid_ny_ + gy].push_back(t);
  }
}

double Mesh::boundary_param_of(int vtx) const {
  auto it = boundary_param_of_.find(vtx);
  if (it == boundary_param_of_.end())
    throw UsageError("vertex is not on the boundary");
  return it->second;
}

std::optional<LocateResult> Mesh::locate(const Vec2& p) const {
  const int gx = static_cast<int>((p.x() - grid_min_.x()) / grid_cell_);
  const int gy = static_cast<int>((p.y() - grid_min_.y()) / grid_cell_);
  if (gx < 0 || gy < 0 || gx >= grid_nx_ || gy >= grid_ny_)
    return std::nullopt;
  const double tol = -1e-12;
  LocateResult best;
  double best_min_coord = -std::numeric_limits<double>::infinity();
  for (int t : grid_cells_[static_cast<size_t>(gx) * grid_ny_ + gy]) {
    const Vec2 a = vertex(triangles_(t, 0));
    const Vec2 b = vertex(triangles_(t, 1));
    const Vec2 c = vertex(triangles_(t, 2));
    const double area = areas_[t];
    const double la = signed_area(p, b, c) / area;
    const double lb = signed_area(a, p, c) / area;
    const double lc = 1.0 - la - lb;
    const double mn = std::min({la, lb, lc});
    if (mn > best_min_coord) {
      best_min_coord = mn;
      best.triangle = t;
      best.barycentric = Eigen::Vector3d(la, lb, lc);
    }
  }
  if (best.triangle < 0 || best_min_coord < tol) return std::nullopt;
  // clamp away roundoff, renormalize
  Eigen::Vector3d l = best.barycentric.cwiseMax(0.0);
  best.barycentric = l / l.sum();
  return best;
}

LocateResult Mesh::locate_clamped(const Vec2& p) const {
  const int gx = std::clamp(
      static_cast<int>((p.x() - grid_min_.x()) / grid_cell_), 0, grid_nx_ - 1);
  const int gy = std::clamp(
      static_cast<int>((p.y() - grid_min_.y()) / grid_cell_), 0, grid_ny_ - 1);
  LocateResult best;
  double best_min_coord = -std::numeric_limits<double>::infinity();
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      const int cx = gx + dx, cy = gy + dy;
      if (cx < 0 || cy < 0 || cx >= grid_nx_ || cy >= grid_ny_) continue;
      for (int t : grid_cells_[static_cast<size_t>(cx) * grid_ny_ + cy]) {
        const Vec2 a = vertex(triangles_(t, 0));
        const Vec2 b = vertex(triangles_(t, 1));
        const Vec2 c = vertex(triangles_(t, 2));
        const double area = areas_[t];
        const double la = signed_area(p, b, c) / area;
        const double lb = signed_area(a, p, c) / area;
        const double lc = 1.0 - la - lb;
        const double mn = std::min({la, lb, lc});
        if (mn > best_min_coord) {
          best_min_coord = mn;
          best.triangle = t;
          best.barycentric = Eigen::Vector3d(la, lb, lc);
        }
      }
    }
  }
  if (best.triangle < 0)
    throw GeometryError("no triangle near the requested point");
  Eigen::Vector3d l = best.barycentric.cwiseMax(0.0);
  best.barycentric = l / l.sum();
  return best;
}

Vec2 Mesh::point_at(const LocateResult& loc) const {
  Vec2 p = Vec2::Zero();
  for (int e = 0; e < 3; ++e)
    p += loc.barycentric[e] * vertex(triangles_(loc.triangle, e));
  return p;
}

double Mesh::distance_to_boundary(const Vec2& p) const {
  const double t = curve_.closest_param(p);
  return (curve_.position(t) - p).norm();
}

std::shared_ptr<const Mesh> build_domain(const BoundaryCurve& curve_in,
                                         double target_h) {
  BoundaryCurve curve = curve_in;
  curve.validate();
  if (target_h <= 0.0 || target_h >= curve.diameter())
    throw GeometryError("target_h must lie in (0, curve diameter)");

  if (curve.enclosed_area() < 0.0) curve.reverse_orientation();

  // fan seed around the boundary centroid
  const int fan = 16;
  Eigen::MatrixX2d v(fan + 1, 2);
  Vec2 centroid = Vec2::Zero();
  for (int i = 0; i < fan; ++i) {
    const Vec2 p = curve.position(curve.period() * i / fan);
    v.row(i + 1) = p.transpose();
    centroid += p;
  }
  centroid /= fan;
  v.row(0) = centroid.transpose();

  Eigen::MatrixX3i tris(fan, 3);
  Eigen::MatrixX2i bedges(fan, 2);
  std::vector<double> bparams(fan);
  for (int i = 0; i < fan; ++i) {
    const int next = (i + 1) % fan + 1;
    tris.row(i) << 0, i + 1, next;
    bedges.row(i) << i + 1, next;
    bparams[i] = curve.period() * i / fan;
  }
  for (int i = 0; i < fan; ++i) {
    const Vec2 a = v.row(tris(i, 0)).transpose();
    const Vec2 b = v.row(tris(i, 1)).transpose();
    const Vec2 c = v.row(tris(i, 2)).transpose();
    if (signed_area(a, b, c) <= 0.0)
      throw GeometryError(
          "domain is not star-shaped around its centroid; cannot seed mesh");
  }

  auto mesh = std::make_shared<const Mesh>(std::move(v), std::move(tris),
                                           std::move(bedges),
                                           std::move(bparams), curve);
  const long long max_triangles = 3'000'000;
  while (mesh->h_max() > 2.0 * target_h) {
    if (4LL * mesh->num_triangles() > max_triangles)
      throw NumericalError("target_h too small for the memory budget");
    RawMesh raw = refine_raw(*mesh);
    std::vector<bool> on_boundary(raw.vertices.rows(), false);
    for (int e = 0; e < raw.boundary_edges.rows(); ++e) {
      on_boundary[raw.boundary_edges(e, 0)] = true;
      on_boundary[raw.boundary_edges(e, 1)] = true;
    }
    smooth_interior(raw.vertices, raw.triangles, on_boundary, 3);
    mesh = std::make_shared<const Mesh>(
        std::move(raw.vertices), std::move(raw.triangles),
        std::move(raw.boundary_edges), std::move(raw.boundary_params), curve);
  }
  return mesh;
}

std::shared_ptr<const Mesh> refine(const Mesh& mesh) {
  RawMesh raw = refine_raw(mesh);
  return std::make_shared<const Mesh>(
      std::move(raw.vertices), std::move(raw.triangles),
      std::move(raw.boundary_edges), std::move(raw.boundary_params),
      mesh.curve());
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  char buf[64];
  os << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' '
     << mesh.num_boundary_edges() << '\n';
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g", mesh.vertices()(i, 0),
                  mesh.vertices()(i, 1));
    os << buf << '\n';
  }
  for (int t = 0; t < mesh.num_triangles(); ++t)
    os << mesh.triangles()(t, 0) << ' ' << mesh.triangles()(t, 1) << ' '
       << mesh.triangles()(t, 2) << '\n';
  for (int e = 0; e < mesh.num_boundary_edges(); ++e) {
    std::snprintf(buf, sizeof buf, "%.17g", mesh.boundary_params()[e]);
    os << mesh.boundary_edges()(e, 0) << ' ' << mesh.boundary_edges()(e, 1)
       << ' ' << buf << '\n';
  }
}

std::shared_ptr<const Mesh> read_mesh(std::istream& is,
                                      const BoundaryCurve& curve) {
  int nv = 0, nt = 0, nb = 0;
  if (!(is >> nv >> nt >> nb))
    throw UsageError("mesh header 'nv nt nb' expected");
  Eigen::MatrixX2d v(nv, 2);
  for (int i = 0; i < nv; ++i)
    if (!(is >> v(i, 0) >> v(i, 1))) throw UsageError("bad vertex line");
  Eigen::MatrixX3i tris(nt, 3);
  for (int t = 0; t < nt; ++t)
    if (!(is >> tris(t, 0) >> tris(t, 1) >> tris(t, 2)))
      throw UsageError("bad triangle line");
  Eigen::MatrixX2i be(nb, 2);
  std::vector<double> bp(nb);
  for (int e = 0; e < nb; ++e)
    if (!(is >> be(e, 0) >> be(e, 1) >> bp[e]))
      throw UsageError("bad boundary edge line");
  return std::make_shared<const Mesh>(std::move(v), std::move(tris),
                                      std::move(be), std::move(bp), curve);
}

}  // namespace morsefield
