#include "s3flow/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <utility>

namespace s3flow {

Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
  auto det3 = [](double a0, double a1, double a2, double b0, double b1, double b2, double c0,
                 double c1, double c2) {
    return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0);
  };
  // Cofactors of the last row of [a; b; c; e_l].
  const double m0 = det3(a[1], a[2], a[3], b[1], b[2], b[3], c[1], c[2], c[3]);
  const double m1 = det3(a[0], a[2], a[3], b[0], b[2], b[3], c[0], c[2], c[3]);
  const double m2 = det3(a[0], a[1], a[3], b[0], b[1], b[3], c[0], c[1], c[3]);
  const double m3 = det3(a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]);
  return Vec4(-m0, m1, -m2, m3);
}

double spherical_triangle_area(const Vec4& a, const Vec4& b, const Vec4& c) {
  const double vol = cross4(a, b, c).norm();
  return 2.0 * std::atan2(vol, 1.0 + a.dot(b) + b.dot(c) + c.dot(a));
}

std::optional<std::string> manifold_diagnostic(std::size_t vertex_count,
                                               const std::vector<Triangle>& triangles) {
  if (triangles.empty()) return "mesh has no triangles";
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    const Triangle& t = triangles[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || static_cast<std::size_t>(t[k]) >= vertex_count) {
        return "triangle " + std::to_string(f) + " references vertex " + std::to_string(t[k]) +
               " out of range";
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      return "triangle " + std::to_string(f) + " has a repeated vertex";
    }
    for (int k = 0; k < 3; ++k) {
      const auto e = std::make_pair(t[k], t[(k + 1) % 3]);
      if (directed.count(e) != 0) {
        return "edge (" + std::to_string(e.first) + ", " + std::to_string(e.second) +
               ") is used twice with the same direction: non-manifold or inconsistent winding";
      }
      directed[e] = static_cast<int>(f);
    }
  }
  for (const auto& [e, f] : directed) {
    if (directed.count({e.second, e.first}) == 0) {
      return "boundary edge (" + std::to_string(e.first) + ", " + std::to_string(e.second) +
             ") of triangle " + std::to_string(f) + " has no opposite half-edge";
    }
  }
  // The link of every vertex must be one cycle.
  std::vector<std::map<int, int>> link(vertex_count);
  for (const Triangle& t : triangles) {
    for (int k = 0; k < 3; ++k) link[t[k]][t[(k + 1) % 3]] = t[(k + 2) % 3];
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (link[v].empty()) return "vertex " + std::to_string(v) + " is not used by any triangle";
    const int start = link[v].begin()->first;
    int cur = start;
    std::size_t steps = 0;
    do {
      auto it = link[v].find(cur);
      if (it == link[v].end()) return "vertex " + std::to_string(v) + " has an open fan";
      cur = it->second;
      ++steps;
    } while (cur != start && steps <= link[v].size());
    if (steps != link[v].size()) {
      return "vertex " + std::to_string(v) + " is a pinch point (fan is not a single cycle)";
    }
  }
  return std::nullopt;
}

SurfaceMesh::SurfaceMesh(std::vector<S3Point> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (auto diag = manifold_diagnostic(vertices_.size(), triangles_)) {
    throw MeshError("SurfaceMesh: " + *diag);
  }
  build_adjacency();
  compute_normals();
}

int SurfaceMesh::euler_characteristic() const {
  return static_cast<int>(vertices_.size()) - static_cast<int>(edges_.size()) +
         static_cast<int>(triangles_.size());
}

void SurfaceMesh::build_adjacency() {
  const std::size_t n = vertices_.size();
  std::vector<std::set<int>> nbrs(n);
  vertex_faces_.assign(n, {});
  std::set<std::pair<int, int>> edge_set;
  for (std::size_t f = 0; f < triangles_.size(); ++f) {
    const Triangle& t = triangles_[f];
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      nbrs[a].insert(b);
      nbrs[b].insert(a);
      edge_set.insert({std::min(a, b), std::max(a, b)});
      vertex_faces_[a].push_back(static_cast<int>(f));
    }
  }
  edges_.clear();
  edges_.reserve(edge_set.size());
  for (const auto& [a, b] : edge_set) edges_.push_back({a, b});
  one_ring_.assign(n, {});
  two_ring_.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    one_ring_[v].assign(nbrs[v].begin(), nbrs[v].end());
    std::set<int> ring2(nbrs[v].begin(), nbrs[v].end());
    for (int w : nbrs[v]) ring2.insert(nbrs[w].begin(), nbrs[w].end());
    ring2.erase(static_cast<int>(v));
    two_ring_[v].assign(ring2.begin(), ring2.end());
  }
}

void SurfaceMesh::compute_normals() {
  std::vector<Vec4> acc(vertices_.size(), Vec4::Zero());
  for (const Triangle& t : triangles_) {
    const Vec4 n = cross4(vertices_[t[0]].coords(), vertices_[t[1]].coords(),
                          vertices_[t[2]].coords());
    for (int k = 0; k < 3; ++k) acc[t[k]] += n;
  }
  normals_.resize(vertices_.size());
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const Vec4& x = vertices_[v].coords();
    Vec4 d = acc[v] - acc[v].dot(x) * x;
    const double len = d.norm();
    if (!(len > 0.0)) throw MeshError("SurfaceMesh: vanishing normal at vertex " + std::to_string(v));
    normals_[v] = TangentVector{vertices_[v], d / len};
  }
}

void SurfaceMesh::set_vertices(std::vector<S3Point> vertices) {
  if (vertices.size() != vertices_.size()) {
    throw MeshError("SurfaceMesh::set_vertices: vertex count changed");
  }
  vertices_ = std::move(vertices);
  compute_normals();
}

void SurfaceMesh::flip_orientation() {
  for (Triangle& t : triangles_) std::swap(t[1], t[2]);
  build_adjacency();
  compute_normals();
}

double mesh_area(const SurfaceMesh& mesh) {
  double area = 0.0;
  const auto& x = mesh.vertices();
  for (const Triangle& t : mesh.triangles()) {
    area += spherical_triangle_area(x[t[0]].coords(), x[t[1]].coords(), x[t[2]].coords());
  }
  return area;
}

MeshQualityReport mesh_quality(const SurfaceMesh& mesh) {
  MeshQualityReport r;
  r.vertex_count = mesh.vertex_count();
  r.edge_count = mesh.edge_count();
  r.triangle_count = mesh.triangle_count();
  r.euler_characteristic = mesh.euler_characteristic();
  const auto& x = mesh.vertices();
  r.min_edge = kPi;
  r.max_edge = 0.0;
  for (const auto& e : mesh.edges()) {
    const double len = distance(x[e[0]], x[e[1]]);
    r.min_edge = std::min(r.min_edge, len);
    r.max_edge = std::max(r.max_edge, len);
  }
  double min_angle = kPi;
  for (const Triangle& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const Vec4& a = x[t[k]].coords();
      const Vec4 u = log_map(a, x[t[(k + 1) % 3]].coords());
      const Vec4 w = log_map(a, x[t[(k + 2) % 3]].coords());
      const double denom = u.norm() * w.norm();
      const double ang = denom > 0.0 ? std::acos(std::clamp(u.dot(w) / denom, -1.0, 1.0)) : 0.0;
      min_angle = std::min(min_angle, ang);
    }
  }
  r.min_angle_deg = min_angle * 180.0 / kPi;
  return r;
}

// Generators ----------------------------------------------------------------

namespace {

struct UnitSphereMesh {
  std::vector<Vec3> points;
  std::vector<Triangle> triangles;
};

UnitSphereMesh icosphere(int level) {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  UnitSphereMesh m;
  m.points = {Vec3(-1, p, 0), Vec3(1, p, 0),  Vec3(-1, -p, 0), Vec3(1, -p, 0),
              Vec3(0, -1, p), Vec3(0, 1, p),  Vec3(0, -1, -p), Vec3(0, 1, -p),
              Vec3(p, 0, -1), Vec3(p, 0, 1),  Vec3(-p, 0, -1), Vec3(-p, 0, 1)};
  for (Vec3& v : m.points) v.normalize();
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.points.push_back((m.points[a] + m.points[b]).normalized());
      const int idx = static_cast<int>(m.points.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(m.triangles.size() * 4);
    for (const Triangle& t : m.triangles) {
      const int a = midpoint(t[0], t[1]);
      const int b = midpoint(t[1], t[2]);
      const int c = midpoint(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    m.triangles = std::move(next);
  }
  return m;
}

// Makes the mesh normal at vertex 0 agree with `expected`.
void orient_like(SurfaceMesh& mesh, const Vec4& expected) {
  if (mesh.normals()[0].dir.dot(expected) < 0.0) mesh.flip_orientation();
}

SurfaceMesh sphere_from_radii(const UnitSphereMesh& unit, const std::vector<double>& radii,
                              const S3Point& center) {
  const Vec4& c = center.coords();
  std::vector<S3Point> verts;
  verts.reserve(unit.points.size());
  for (std::size_t i = 0; i < unit.points.size(); ++i) {
    const Vec4 dir = quat_mul(c, pure(unit.points[i]));
    verts.push_back(S3Point::normalized(std::cos(radii[i]) * c + std::sin(radii[i]) * dir));
  }
  SurfaceMesh mesh(std::move(verts), unit.triangles);
  const Vec4 outward = -std::sin(radii[0]) * c + std::cos(radii[0]) * quat_mul(c, pure(unit.points[0]));
  orient_like(mesh, outward);
  return mesh;
}

std::vector<Triangle> grid_triangles(int nu, int nv) {
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * nu * nv));
  auto id = [nv](int i, int j) { return i * nv + j; };
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const int i1 = (i + 1) % nu;
      const int j1 = (j + 1) % nv;
      tris.push_back({id(i, j), id(i1, j), id(i1, j1)});
      tris.push_back({id(i, j), id(i1, j1), id(i, j1)});
    }
  }
  return tris;
}

}  // namespace

SurfaceMesh make_geodesic_sphere(double r, int level, const S3Point& center) {
  if (!(r > 0.0 && r < kPi)) {
    throw std::invalid_argument("make_geodesic_sphere: radius must lie in (0, pi)");
  }
  if (level < 0) throw std::invalid_argument("make_geodesic_sphere: level must be >= 0");
  const UnitSphereMesh unit = icosphere(level);
  return sphere_from_radii(unit, std::vector<double>(unit.points.size(), r), center);
}

SurfaceMesh make_perturbed_sphere(double r, int level, double amplitude, std::uint64_t seed,
                                  const S3Point& center) {
  if (!(r > 0.0 && r < kPi)) {
    throw std::invalid_argument("make_perturbed_sphere: radius must lie in (0, pi)");
  }
  if (level < 0) throw std::invalid_argument("make_perturbed_sphere: level must be >= 0");
  const UnitSphereMesh unit = icosphere(level);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  // Monomials u^a v^b w^c of total degree 2 and 3.
  std::vector<std::array<int, 3>> powers;
  for (int deg = 2; deg <= 3; ++deg) {
    for (int a = deg; a >= 0; --a) {
      for (int b = deg - a; b >= 0; --b) powers.push_back({a, b, deg - a - b});
    }
  }
  std::vector<double> c(powers.size());
  for (double& ci : c) ci = coeff(rng);
  std::vector<double> field(unit.points.size(), 0.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < unit.points.size(); ++i) {
    const Vec3& u = unit.points[i];
    double val = 0.0;
    for (std::size_t k = 0; k < powers.size(); ++k) {
      val += c[k] * std::pow(u[0], powers[k][0]) * std::pow(u[1], powers[k][1]) *
             std::pow(u[2], powers[k][2]);
    }
    field[i] = val;
    peak = std::max(peak, std::abs(val));
  }
  std::vector<double> radii(unit.points.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    radii[i] = r + (peak > 0.0 ? amplitude * field[i] / peak : 0.0);
    if (!(radii[i] > 0.0 && radii[i] < kPi)) {
      throw std::invalid_argument("make_perturbed_sphere: perturbation leaves (0, pi)");
    }
  }
  return sphere_from_radii(unit, radii, center);
}

SurfaceMesh make_product_torus(double angle, int nu, int nv) {
  if (nu < 8 || nv < 8) throw std::invalid_argument("make_product_torus: need nu, nv >= 8");
  if (!(angle > 0.0 && angle < kPi / 2.0)) {
    throw std::invalid_argument("make_product_torus: angle must lie in (0, pi/2)");
  }
  const double a = std::cos(angle);
  const double b = std::sin(angle);
  std::vector<S3Point> verts;
  verts.reserve(static_cast<std::size_t>(nu * nv));
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * kPi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = 2.0 * kPi * j / nv;
      verts.push_back(S3Point::normalized(
          Vec4(a * std::cos(u), a * std::sin(u), b * std::cos(v), b * std::sin(v))));
    }
  }
  SurfaceMesh mesh(std::move(verts), grid_triangles(nu, nv));
  orient_like(mesh, Vec4(-b, 0.0, a, 0.0));
  return mesh;
}

SurfaceMesh make_clifford_torus(int nu, int nv) {
  return make_product_torus(kPi / 4.0, nu, nv);
}

HopfTorus make_hopf_torus_with_info(const S2Curve& curve, int n_fiber) {
  if (n_fiber < 8) throw std::invalid_argument("make_hopf_torus: need n_fiber >= 8");
  const int n = static_cast<int>(curve.size());
  const Vec3 axis = Vec3::UnitX();
  const Vec4 unit_i(0.0, 1.0, 0.0, 0.0);

  // Rotate the lift of p within its fiber to the point closest to `prev`.
  auto horizontal = [&](const S2Point& p, const Vec4& prev, int k) {
    const Vec4 q = hopf_lift(p).coords();
    const double c = q.dot(prev);
    const double s = quat_mul(unit_i, q).dot(prev);
    if (std::hypot(c, s) < 1e-8) {
      throw MeshError("make_hopf_torus: lift cannot be continued at sample " + std::to_string(k));
    }
    return quat_mul(quat_exp(axis, std::atan2(s, c)), q);
  };

  std::vector<Vec4> lift(static_cast<std::size_t>(n));
  lift[0] = hopf_lift(curve[0]).coords();
  for (int k = 1; k < n; ++k) lift[k] = horizontal(curve[k], lift[k - 1], k);
  const Vec4 closing = horizontal(curve[0], lift[n - 1], n);
  const double holonomy =
      std::atan2(closing.dot(quat_mul(unit_i, lift[0])), closing.dot(lift[0]));
  const Vec4 expected = quat_mul(quat_exp(axis, holonomy), lift[0]);
  if ((closing - expected).norm() > 1e-9) {
    throw MeshError("make_hopf_torus: lift does not close (holonomy angle " +
                    std::to_string(holonomy) + ")");
  }

  // Close the seam by an integer shift of the fiber index and spread only the
  // remaining fraction of a fiber cell over the rows, which keeps the grid
  // nearly unsheared.
  const double cell = 2.0 * kPi / n_fiber;
  const int shift = static_cast<int>(std::lround(holonomy / cell));
  const double residual = holonomy - shift * cell;

  std::vector<S3Point> verts;
  verts.reserve(static_cast<std::size_t>(n * n_fiber));
  for (int k = 0; k < n; ++k) {
    const Vec4 base = quat_mul(quat_exp(axis, -residual * k / n), lift[k]);
    for (int m = 0; m < n_fiber; ++m) {
      verts.push_back(S3Point::normalized(quat_mul(quat_exp(axis, cell * m), base)));
    }
  }
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * n * n_fiber));
  auto id = [n_fiber](int k, int m) { return k * n_fiber + ((m % n_fiber) + n_fiber) % n_fiber; };
  for (int k = 0; k < n; ++k) {
    const int k1 = (k + 1) % n;
    const int offset = k + 1 == n ? shift : 0;
    for (int m = 0; m < n_fiber; ++m) {
      tris.push_back({id(k, m), id(k1, m + offset), id(k1, m + 1 + offset)});
      tris.push_back({id(k, m), id(k1, m + 1 + offset), id(k, m + 1)});
    }
  }
  return HopfTorus{SurfaceMesh(std::move(verts), std::move(tris)), holonomy, n, n_fiber};
}

SurfaceMesh make_hopf_torus(const S2Curve& curve, int n_fiber) {
  return make_hopf_torus_with_info(curve, n_fiber).mesh;
}

}  // namespace s3flow
