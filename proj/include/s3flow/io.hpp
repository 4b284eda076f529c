#pragma once

// File formats: raw4 meshes (exact round trip), stereographic OBJ and legacy
// VTK for viewing, and CSV point lists for curves and Gauss images.

#include "s3flow/curvature.hpp"
#include "s3flow/flow.hpp"
#include "s3flow/mesh.hpp"
#include "s3flow/s2curves.hpp"

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace s3flow {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MeshFormat { Raw4, Obj3, Vtk };

MeshFormat parse_mesh_format(const std::string& name);
const char* to_string(MeshFormat format);

/// Projection pole for the stereographic formats: the first of
/// -e0, +e0, -e1, +e1, ... with every vertex farther than 1e-6 from it.
Vec4 choose_projection_pole(const SurfaceMesh& mesh);

/// Stereographic projection from pole p = +-e_k: drops coordinate k and
/// divides by 1 - <x, p>.
Vec3 stereographic(const Vec4& x, const Vec4& pole);

/// raw4: 17 significant digits. obj3 and vtk: points with 9 digits; the vtk
/// scalar fields G, H, A2 use 17 digits so that they can be compared with
/// trajectory data. `curvature` is required for vtk and recomputed if null.
void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::filesystem::path& path,
                 const CurvatureData* curvature = nullptr);

SurfaceMesh import_raw4(const std::filesystem::path& path);

/// One sample per row as x,y,z.
void write_points_csv(std::span<const S2Point> points, const std::filesystem::path& path);
std::vector<S2Point> read_points_csv(const std::filesystem::path& path);
void write_curve_csv(const S2Curve& curve, const std::filesystem::path& path);
S2Curve read_curve_csv(const std::filesystem::path& path);

/// Column order t,min_G,max_A2,max_speed,area,epsilon_star,flags.
void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, StopReason reason,
                          const std::filesystem::path& path);

}  // namespace s3flow
