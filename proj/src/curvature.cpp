#include "s3flow/curvature.hpp"

#include "s3flow/parallel.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace s3flow {
namespace {

struct VertexFit {
  Eigen::Matrix2d shape = Eigen::Matrix2d::Zero();
  Vec4 e1 = Vec4::Zero();
  Vec4 e2 = Vec4::Zero();
  Vec4 normal = Vec4::Zero();
  bool ok = false;
  std::string why;
};

struct StencilPoint {
  double a, b, z;
};

template <int K>
bool solve_fit(const std::vector<StencilPoint>& pts, double max_condition,
               Eigen::Matrix<double, K, 1>& coef, double& condition) {
  using Mat = Eigen::Matrix<double, K, K>;
  using Vec = Eigen::Matrix<double, K, 1>;
  Mat normal = Mat::Zero();
  Vec rhs = Vec::Zero();
  Vec row;
  for (const StencilPoint& p : pts) {
    row[0] = p.a;
    row[1] = p.b;
    row[2] = 0.5 * p.a * p.a;
    row[3] = p.a * p.b;
    row[4] = 0.5 * p.b * p.b;
    if constexpr (K == 6) {
      const double rho2 = p.a * p.a + p.b * p.b;
      row[5] = rho2 * rho2;
    }
    normal.noalias() += row * row.transpose();
    rhs.noalias() += row * p.z;
  }
  Eigen::LDLT<Mat> ldlt(normal);
  if (ldlt.info() != Eigen::Success) return false;
  const double rcond = ldlt.rcond();
  // cond(A)^2 = cond(A^T A)
  condition = rcond > 0.0 ? std::sqrt(1.0 / rcond) : INFINITY;
  if (!(condition <= max_condition)) return false;
  coef = ldlt.solve(rhs);
  return coef.allFinite();
}

VertexFit fit_vertex(const SurfaceMesh& mesh, std::size_t v, const CurvatureOptions& opt) {
  VertexFit fit;
  const Vec4& x = mesh.vertices()[v].coords();
  const Vec4& nu = mesh.normals()[v].dir;
  const std::vector<int>& stencil = opt.rings >= 2 ? mesh.two_ring(v) : mesh.one_ring(v);

  // Frame: e1 along the first neighbor, e2 completing (x, nu, e1, e2).
  const Vec4 l0 = log_map(x, mesh.vertices()[stencil.front()].coords());
  Vec4 e1 = l0 - l0.dot(nu) * nu;
  e1.normalize();
  Vec4 e2 = cross4(x, nu, e1);
  e2.normalize();
  fit.e1 = e1;
  fit.e2 = e2;
  fit.normal = nu;

  std::vector<StencilPoint> pts;
  pts.reserve(stencil.size());
  double scale = 0.0;
  for (int w : stencil) {
    const Vec4 l = log_map(x, mesh.vertices()[w].coords());
    const StencilPoint p{l.dot(e1), l.dot(e2), l.dot(nu)};
    scale += std::hypot(p.a, p.b);
    pts.push_back(p);
  }
  if (pts.size() < opt.min_neighbors) {
    fit.why = "vertex " + std::to_string(v) + ": only " + std::to_string(pts.size()) +
              " usable neighbors";
    return fit;
  }
  scale /= static_cast<double>(pts.size());
  for (StencilPoint& p : pts) {
    p.a /= scale;
    p.b /= scale;
    p.z /= scale;
  }

  double condition = 0.0;
  double da = 0.0, db = 0.0, haa = 0.0, hab = 0.0, hbb = 0.0;
  bool solved = false;
  if (pts.size() >= opt.quartic_min_points) {
    Eigen::Matrix<double, 6, 1> c;
    solved = solve_fit<6>(pts, opt.max_condition, c, condition);
    if (solved) da = c[0], db = c[1], haa = c[2], hab = c[3], hbb = c[4];
  }
  if (!solved) {
    Eigen::Matrix<double, 5, 1> c;
    solved = solve_fit<5>(pts, opt.max_condition, c, condition);
    if (solved) da = c[0], db = c[1], haa = c[2], hab = c[3], hbb = c[4];
  }
  if (!solved) {
    fit.why = "vertex " + std::to_string(v) + ": ill-conditioned fit (condition " +
              std::to_string(condition) + ")";
    return fit;
  }
  // Height z = -(1/2) II(a, b) + O(3): the shape operator is minus the
  // Hessian. Undo the coordinate scaling (Hessian scales as 1/scale).
  fit.shape << -haa, -hab, -hab, -hbb;
  fit.shape /= scale;
  fit.normal = (nu - da * e1 - db * e2).normalized();
  fit.ok = true;
  return fit;
}

}  // namespace

CurvatureData estimate_curvature(const SurfaceMesh& mesh, const CurvatureOptions& options) {
  if (options.rings != 1 && options.rings != 2) {
    throw std::invalid_argument("estimate_curvature: rings must be 1 or 2");
  }
  const std::size_t n = mesh.vertex_count();
  std::vector<VertexFit> fits(n);
  parallel_for(n, [&](std::size_t v) { fits[v] = fit_vertex(mesh, v, options); });

  CurvatureData out;
  out.shape.resize(n);
  out.e1.resize(n);
  out.e2.resize(n);
  out.dir1.resize(n);
  out.dir2.resize(n);
  out.normal.resize(n);
  out.kappa1.resize(n);
  out.kappa2.resize(n);
  out.H.resize(n);
  out.normA2.resize(n);
  out.G.resize(n);
  out.flagged.assign(n, 0);

  parallel_for(n, [&](std::size_t v) {
    const VertexFit& f = fits[v];
    out.e1[v] = f.e1;
    out.e2[v] = f.e2;
    out.normal[v] = f.normal;
    if (!f.ok) return;
    out.shape[v] = f.shape;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig;
    eig.computeDirect(f.shape);
    const Vec2 lam = eig.eigenvalues();  // ascending
    const Eigen::Matrix2d vec = eig.eigenvectors();
    out.kappa1[v] = lam[1];
    out.kappa2[v] = lam[0];
    out.dir1[v] = vec(0, 1) * f.e1 + vec(1, 1) * f.e2;
    out.dir2[v] = vec(0, 0) * f.e1 + vec(1, 0) * f.e2;
  });

  // Degenerate fits inherit the mean principal curvatures of good neighbors.
  for (std::size_t v = 0; v < n; ++v) {
    if (fits[v].ok) continue;
    out.flagged[v] = 1;
    ++out.flagged_count;
    out.diagnostics.push_back(fits[v].why);
    double k1 = 0.0, k2 = 0.0;
    int count = 0;
    for (int w : mesh.one_ring(v)) {
      if (!fits[w].ok) continue;
      k1 += out.kappa1[w];
      k2 += out.kappa2[w];
      ++count;
    }
    if (count > 0) {
      k1 /= count;
      k2 /= count;
    }
    out.kappa1[v] = k1;
    out.kappa2[v] = k2;
    out.shape[v] << k1, 0.0, 0.0, k2;
    out.dir1[v] = out.e1[v];
    out.dir2[v] = out.e2[v];
  }

  for (std::size_t v = 0; v < n; ++v) {
    const double k1 = out.kappa1[v];
    const double k2 = out.kappa2[v];
    out.H[v] = k1 + k2;
    out.normA2[v] = k1 * k1 + k2 * k2;
    out.G[v] = 1.0 + k1 * k2;
  }
  return out;
}

}  // namespace s3flow
