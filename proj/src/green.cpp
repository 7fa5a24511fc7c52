#include "morsefield/green.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "gauss.hpp"

namespace morsefield {

namespace {

// 7-point degree-5 triangle rule (barycentric points, weights sum to 1)
struct TriRule {
  double l[7][3];
  double w[7];
};

const TriRule& tri7() {
  static const TriRule rule = [] {
    TriRule r{};
    const double a = 0.0597158717897698;
    const double b = 0.4701420641051151;
    const double wa = 0.1259391805448271;
    const double wb = 0.1323941527885062;
    const double third = 1.0 / 3.0;
    int k = 0;
    r.l[k][0] = third; r.l[k][1] = third; r.l[k][2] = third; r.w[k] = 9.0 / 40.0; ++k;
    const double pa[3] = {a, a, 1.0 - 2.0 * a};
    const double pb[3] = {b, b, 1.0 - 2.0 * b};
    for (int rot = 0; rot < 3; ++rot) {
      for (int e = 0; e < 3; ++e) r.l[k][e] = pa[(e + rot) % 3];
      r.w[k] = wa; ++k;
    }
    for (int rot = 0; rot < 3; ++rot) {
      for (int e = 0; e < 3; ++e) r.l[k][e] = pb[(e + rot) % 3];
      r.w[k] = wb; ++k;
    }
    return r;
  }();
  return rule;
}

// smooth part of Delta(chi log r): supported on the cutoff annulus
double annulus_volume_data(const SourcePoint& s, double r) {
  const double t = r / s.delta;
  const double c1 = cutoff_d1(t);
  const double c2 = cutoff_d2(t);
  if (c1 == 0.0 && c2 == 0.0) return 0.0;
  const double lap_chi = c2 / (s.delta * s.delta) + c1 / (s.delta * r);
  return lap_chi * std::log(r) + 2.0 * c1 / (s.delta * r);
}

// d_nu (chi log r) on the exact boundary curve
double boundary_flux_data(const SourcePoint& s, const Vec2& x,
                          const Vec2& outward_normal) {
  const Vec2 dvec = x - s.position;
  const double r = dvec.norm();
  if (r >= 2.0 * s.delta) return 0.0;
  const double t = r / s.delta;
  const double radial = outward_normal.dot(dvec) / r;
  double out = cutoff(t) * radial / r;
  const double c1 = cutoff_d1(t);
  if (c1 != 0.0) out += (c1 / s.delta) * radial * std::log(r);
  return out;
}

}  // namespace

double singular_part(const SourcePoint& source, const Vec2& x) {
  const double r = (x - source.position).norm();
  if (r == 0.0)
    throw GeometryError("singular part evaluated at the source point");
  const double c = cutoff(r / source.delta);
  if (c == 0.0) return 0.0;
  return -c * std::log(r) / source.kappa;
}

Vec2 singular_part_gradient(const SourcePoint& source, const Vec2& x) {
  const Vec2 dvec = x - source.position;
  const double r = dvec.norm();
  if (r == 0.0)
    throw GeometryError("singular gradient evaluated at the source point");
  const double t = r / source.delta;
  const double c = cutoff(t);
  const double c1 = cutoff_d1(t);
  if (c == 0.0 && c1 == 0.0) return Vec2::Zero();
  const double radial =
      c1 / source.delta * std::log(r) + c / r;  // d/dr of chi log r
  return (-radial / source.kappa) * (dvec / r);
}

PatchRecovery patch_recover(const ScalarField& field, const Vec2& p) {
  const Mesh& mesh = *field.mesh;
  const LocateResult loc = mesh.locate_clamped(p);

  // vertex patch: vertices of all triangles incident to the containing
  // triangle's vertices; one more ring if the patch is too small
  std::unordered_set<int> patch;
  auto add_ring = [&](const std::unordered_set<int>& seed) {
    std::unordered_set<int> grown = seed;
    for (int v : seed)
      for (int t : mesh.vertex_triangles(v))
        for (int e = 0; e < 3; ++e) grown.insert(mesh.triangles()(t, e));
    return grown;
  };
  std::unordered_set<int> seed;
  for (int e = 0; e < 3; ++e) seed.insert(mesh.triangles()(loc.triangle, e));
  patch = add_ring(seed);
  if (patch.size() < 10) patch = add_ring(patch);

  std::vector<int> ids(patch.begin(), patch.end());
  std::sort(ids.begin(), ids.end());  // determinism

  double scale = 0.0;
  for (int v : ids) scale = std::max(scale, (mesh.vertex(v) - p).norm());
  if (scale == 0.0) scale = 1.0;

  Eigen::MatrixXd A(ids.size(), 6);
  Eigen::VectorXd rhs(ids.size());
  for (size_t k = 0; k < ids.size(); ++k) {
    const Vec2 d = (mesh.vertex(ids[k]) - p) / scale;
    A(k, 0) = 1.0;
    A(k, 1) = d.x();
    A(k, 2) = d.y();
    A(k, 3) = d.x() * d.x();
    A(k, 4) = d.x() * d.y();
    A(k, 5) = d.y() * d.y();
    rhs[k] = field.values[ids[k]];
  }
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(rhs);
  PatchRecovery out;
  out.value = coef[0];
  out.gradient = Vec2(coef[1], coef[2]) / scale;
  return out;
}

GreenSolver::GreenSolver(std::shared_ptr<const Mesh> mesh,
                         ConformalMetric metric)
    : mesh_(mesh), solver_(assemble(mesh, std::move(metric))) {
  delta_ = 0.5 * mesh_->r_domain();
}

SourcePoint GreenSolver::interior_source(const Vec2& p) const {
  if (!mesh_->locate(p))
    throw GeometryError("interior source outside the domain");
  SourcePoint s;
  s.position = p;
  s.location = SourcePoint::Location::interior;
  s.kappa = 2.0 * std::numbers::pi;
  s.delta = delta_;
  return s;
}

SourcePoint GreenSolver::boundary_source(double t) const {
  SourcePoint s;
  s.boundary_param = mesh_->curve().wrap(t);
  s.position = mesh_->curve().position(s.boundary_param);
  s.location = SourcePoint::Location::boundary;
  s.kappa = std::numbers::pi;
  s.delta = delta_;
  return s;
}

Eigen::VectorXd GreenSolver::assemble_load(const SourcePoint& s) const {
  const Mesh& mesh = *mesh_;
  const OperatorBundle& ops = solver_.ops();

  Eigen::VectorXd load = -(1.0 / ops.area_g) * ops.lumped_mass;

  // annulus volume term: -(1/kappa) int q phi_i dx, 7-point rule
  const TriRule& rule = tri7();
  const double rmin = s.delta, rmax = 2.0 * s.delta;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const int i0 = mesh.triangles()(t, 0);
    const int i1 = mesh.triangles()(t, 1);
    const int i2 = mesh.triangles()(t, 2);
    const Vec2 a = mesh.vertex(i0), b = mesh.vertex(i1), c = mesh.vertex(i2);
    // quick reject against the annulus band
    const double h_t =
        std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
    const double r0 = (a - s.position).norm();
    if (r0 + 2.0 * h_t < rmin || r0 - 2.0 * h_t > rmax) continue;
    const double area = mesh.triangle_area(t);
    const int idx[3] = {i0, i1, i2};
    for (int q = 0; q < 7; ++q) {
      const Vec2 x = rule.l[q][0] * a + rule.l[q][1] * b + rule.l[q][2] * c;
      const double vq = annulus_volume_data(s, (x - s.position).norm());
      if (vq == 0.0) continue;
      const double f = -(1.0 / s.kappa) * area * rule.w[q] * vq;
      for (int e = 0; e < 3; ++e) load[idx[e]] += f * rule.l[q][e];
    }
  }

  // boundary flux term: +(1/kappa) int b phi_i ds over the exact curve,
  // hat functions composed with the boundary parametrization
  const BoundaryCurve& curve = mesh.curve();
  const auto& gl3 = detail::gauss_legendre(3);
  const int nb = mesh.num_boundary_edges();
  for (int e = 0; e < nb; ++e) {
    const int i = mesh.boundary_edges()(e, 0);
    const int j = mesh.boundary_edges()(e, 1);
    double ti = mesh.boundary_params()[e];
    double tj = mesh.boundary_param_of(j);
    if (tj < ti) tj += curve.period();
    // skip segments entirely outside the cutoff support
    const double chord_dist =
        std::min((mesh.vertex(i) - s.position).norm(),
                 (mesh.vertex(j) - s.position).norm());
    const double seg_len = (mesh.vertex(i) - mesh.vertex(j)).norm();
    if (chord_dist > 2.0 * s.delta + 2.0 * seg_len) continue;
    for (int q = 0; q < 3; ++q) {
      const double tq = 0.5 * (ti + tj) + 0.5 * (tj - ti) * gl3.x[q];
      const Vec2 x = curve.position(tq);
      const double bq = boundary_flux_data(s, x, curve.outward_normal(tq));
      if (bq == 0.0) continue;
      const double speed = curve.velocity(tq).norm();
      const double wq = 0.5 * (tj - ti) * gl3.w[q] * speed / s.kappa;
      const double lam = (tq - ti) / (tj - ti);
      load[i] += wq * bq * (1.0 - lam);
      load[j] += wq * bq * lam;
    }
  }
  return load;
}

GreenBundle GreenSolver::make_bundle(const SourcePoint& s) const {
  GreenBundle bundle;
  bundle.source = s;
  const auto& metric = solver_.ops().metric;
  auto psi = [&](const Vec2& z) { return metric.psi_at(z); };
  bundle.constraint_value =
      cutoff_log_integral(s, psi, QuadResolution::standard());
  bundle.regular_part =
      solver_.solve_load(assemble_load(s), bundle.constraint_value);
  return bundle;
}

double GreenSolver::green_value(const GreenBundle& bundle,
                                const Vec2& x) const {
  double h;
  if (auto loc = mesh_->locate(x)) {
    h = 0.0;
    for (int e = 0; e < 3; ++e)
      h += loc->barycentric[e] *
           bundle.regular_part.values[mesh_->triangles()(loc->triangle, e)];
  } else {
    // allow points on the exact curve, just outside the inscribed polygon
    const double t = mesh_->curve().closest_param(x);
    const Vec2 q = mesh_->curve().position(t);
    const double outside = (x - q).dot(mesh_->curve().outward_normal(t));
    if (outside > 1e-6 * mesh_->diameter())
      throw GeometryError("green_value outside the domain");
    h = bundle.regular_part.eval_clamped(x);
  }
  return singular_part(bundle.source, x) + h;
}

Vec2 GreenSolver::green_gradient(const GreenBundle& bundle,
                                 const Vec2& x) const {
  const PatchRecovery rec = patch_recover(bundle.regular_part, x);
  return singular_part_gradient(bundle.source, x) + rec.gradient;
}

double GreenSolver::robin(const SourcePoint& s) const {
  const GreenBundle bundle = make_bundle(s);
  const PatchRecovery rec = patch_recover(bundle.regular_part, s.position);
  const double psi = solver_.ops().metric.psi_at(s.position);
  return rec.value + std::log(psi) / (2.0 * s.kappa);
}

double GreenSolver::cutoff_log_integral(
    const SourcePoint& s, const std::function<double(const Vec2&)>& w,
    const QuadResolution& res) const {
  SourceQuadrature quad(mesh_->curve(), s.position, s.is_boundary(),
                        s.boundary_param, s.delta, res);
  return quad.integrate(w) / s.kappa;
}

double GreenSolver::singular_mean(const SourcePoint& s,
                                  const QuadResolution& res) const {
  const auto& metric = solver_.ops().metric;
  auto psi = [&](const Vec2& z) { return metric.psi_at(z); };
  return -cutoff_log_integral(s, psi, res);
}

}  // namespace morsefield
