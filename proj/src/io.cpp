#include "s3flow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace s3flow {
namespace {

std::string fmt(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::vector<double> split_numbers(const std::string& line, const std::filesystem::path& path, int lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
    }
  }
  return out;
}

std::string pole_comment(const Vec4& pole) {
  return fmt(pole[0], 3) + " " + fmt(pole[1], 3) + " " + fmt(pole[2], 3) + " " + fmt(pole[3], 3);
}

}  // namespace

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "raw4") return MeshFormat::Raw4;
  if (name == "obj3") return MeshFormat::Obj3;
  if (name == "vtk") return MeshFormat::Vtk;
  throw IoError("unknown mesh format '" + name + "' (expected raw4, obj3 or vtk)");
}

const char* to_string(MeshFormat format) {
  switch (format) {
    case MeshFormat::Raw4: return "raw4";
    case MeshFormat::Obj3: return "obj3";
    case MeshFormat::Vtk: return "vtk";
  }
  return "unknown";
}

Vec4 choose_projection_pole(const SurfaceMesh& mesh) {
  for (int k = 0; k < 8; ++k) {
    Vec4 pole = Vec4::Zero();
    pole[k / 2] = (k % 2 == 0) ? -1.0 : 1.0;
    bool clear = true;
    for (const S3Point& x : mesh.vertices()) {
      if ((x.coords() - pole).norm() < 1e-6) {
        clear = false;
        break;
      }
    }
    if (clear) return pole;
  }
  throw IoError("no stereographic pole candidate is clear of the mesh");
}

Vec3 stereographic(const Vec4& x, const Vec4& pole) {
  int axis = 0;
  pole.cwiseAbs().maxCoeff(&axis);
  const double denom = 1.0 - x.dot(pole);
  Vec3 y;
  for (int i = 0, j = 0; i < 4; ++i) {
    if (i != axis) y[j++] = x[i] / denom;
  }
  return y;
}

void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::filesystem::path& path,
                 const CurvatureData* curvature) {
  std::ofstream out = open_out(path);
  const auto& verts = mesh.vertices();
  const auto& tris = mesh.triangles();
  if (format == MeshFormat::Raw4) {
    out << "# raw4 vertices " << verts.size() << " triangles " << tris.size() << "\n";
    for (const S3Point& p : verts) {
      out << fmt(p.w(), 17) << "," << fmt(p.x(), 17) << "," << fmt(p.y(), 17) << "," << fmt(p.z(), 17) << "\n";
    }
    for (const Triangle& t : tris) out << t[0] << "," << t[1] << "," << t[2] << "\n";
    return;
  }

  const Vec4 pole = choose_projection_pole(mesh);
  if (format == MeshFormat::Obj3) {
    out << "# stereographic projection from pole " << pole_comment(pole) << "\n";
    for (const S3Point& p : verts) {
      const Vec3 y = stereographic(p.coords(), pole);
      out << "v " << fmt(y[0], 9) << " " << fmt(y[1], 9) << " " << fmt(y[2], 9) << "\n";
    }
    for (const Triangle& t : tris) out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    return;
  }

  CurvatureData owned;
  if (curvature == nullptr) {
    owned = estimate_curvature(mesh);
    curvature = &owned;
  }
  if (curvature->size() != verts.size()) throw IoError("export_mesh: curvature does not match the mesh");
  out << "# vtk DataFile Version 3.0\n";
  out << "s3flow surface, stereographic projection from pole " << pole_comment(pole) << "\n";
  out << "ASCII\nDATASET POLYDATA\n";
  out << "POINTS " << verts.size() << " double\n";
  for (const S3Point& p : verts) {
    const Vec3 y = stereographic(p.coords(), pole);
    out << fmt(y[0], 9) << " " << fmt(y[1], 9) << " " << fmt(y[2], 9) << "\n";
  }
  out << "POLYGONS " << tris.size() << " " << 4 * tris.size() << "\n";
  for (const Triangle& t : tris) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "POINT_DATA " << verts.size() << "\n";
  auto field = [&](const char* name, const std::vector<double>& values) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) out << fmt(v, 17) << "\n";
  };
  field("G", curvature->G);
  field("H", curvature->H);
  field("A2", curvature->normA2);
}

SurfaceMesh import_raw4(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  int lineno = 0;
  std::size_t nv = 0, nt = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("# raw4", 0) == 0) {
      std::istringstream hs(line.substr(6));
      std::string a, b;
      if (!(hs >> a >> nv >> b >> nt) || a != "vertices" || b != "triangles") {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed raw4 header");
      }
      break;
    }
    if (!line.empty() && line[0] != '#') {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": missing raw4 header");
    }
  }
  if (lineno == 0 || nv == 0) throw IoError(path.string() + ": missing raw4 header");
  std::vector<S3Point> verts;
  std::vector<Triangle> tris;
  verts.reserve(nv);
  tris.reserve(nt);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<double> v = split_numbers(line, path, lineno);
    if (verts.size() < nv) {
      if (v.size() != 4) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 4 coordinates");
      try {
        verts.push_back(S3Point::checked(Vec4(v[0], v[1], v[2], v[3])));
      } catch (const std::exception& e) {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    } else {
      if (v.size() != 3) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 3 indices");
      tris.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])});
    }
  }
  if (verts.size() != nv || tris.size() != nt) {
    throw IoError(path.string() + ": expected " + std::to_string(nv) + " vertices and " +
                  std::to_string(nt) + " triangles");
  }
  return SurfaceMesh(std::move(verts), std::move(tris));
}

void write_points_csv(std::span<const S2Point> points, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "x,y,z\n";
  for (const S2Point& p : points) {
    out << fmt(p.coords()[0], 17) << "," << fmt(p.coords()[1], 17) << "," << fmt(p.coords()[2], 17) << "\n";
  }
}

std::vector<S2Point> read_points_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  int lineno = 0;
  std::vector<S2Point> pts;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || (lineno == 1 && line == "x,y,z")) continue;
    const std::vector<double> v = split_numbers(line, path, lineno);
    if (v.size() != 3) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected x,y,z");
    const Vec3 p(v[0], v[1], v[2]);
    if (std::abs(p.norm() - 1.0) > 1e-8) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": point is not on the unit sphere");
    }
    pts.push_back(S2Point::normalized(p));
  }
  return pts;
}

void write_curve_csv(const S2Curve& curve, const std::filesystem::path& path) {
  write_points_csv(curve.samples(), path);
}

S2Curve read_curve_csv(const std::filesystem::path& path) {
  return S2Curve(read_points_csv(path));
}

void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, StopReason reason,
                          const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "t,min_G,max_A2,max_speed,area,epsilon_star,flags\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const PinchingReport& r = rows[i].report;
    out << fmt(rows[i].t, 17) << "," << fmt(r.min_G, 17) << "," << fmt(r.max_A2, 17) << ","
        << fmt(r.max_speed, 17) << "," << fmt(r.area, 17) << "," << fmt(r.epsilon_star, 17) << ","
        << "simons=" << fmt(r.simons_fraction, 6) << ";okumura=" << fmt(r.okumura_fraction, 6)
        << ";huisken2d=" << fmt(r.huisken2d_fraction, 6);
    if (i + 1 == rows.size()) out << ";stop=" << to_string(reason);
    out << "\n";
  }
}

}  // namespace s3flow
