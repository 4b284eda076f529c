#include "s3flow/config.hpp"
#include "s3flow/io.hpp"
#include "s3flow/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace s3flow {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("s3flow_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

using IoTest = TempDir;
using ConfigTest = TempDir;

TEST_F(IoTest, Raw4RoundTripIsExact) {
  const SurfaceMesh m = make_perturbed_sphere(1.2, 2, 0.03, 4);
  export_mesh(m, MeshFormat::Raw4, dir_ / "m.raw4");
  const SurfaceMesh back = import_raw4(dir_ / "m.raw4");
  ASSERT_EQ(back.vertex_count(), m.vertex_count());
  EXPECT_EQ(back.triangles(), m.triangles());
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    ASSERT_LE((back.vertices()[v].coords() - m.vertices()[v].coords()).cwiseAbs().maxCoeff(), 1e-16);
  }
  EXPECT_EQ(lines_of(dir_ / "m.raw4").front(), "# raw4 vertices 162 triangles 320");
}

TEST_F(IoTest, Raw4Errors) {
  EXPECT_THROW(import_raw4(dir_ / "missing.raw4"), IoError);
  EXPECT_THROW(import_raw4(write("a.raw4", "1,0,0,0\n")), IoError);
  EXPECT_THROW(import_raw4(write("b.raw4", "# raw4 vertices 1 triangles 0\n2,0,0,0\n")), IoError);
  try {
    import_raw4(write("c.raw4", "# raw4 vertices 3 triangles 1\n1,0,0,0\n0,1,0,0\n"));
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("expected 3 vertices"), std::string::npos) << e.what();
  }
}

TEST_F(IoTest, ObjUsesOneBasedFaces) {
  const SurfaceMesh m = make_geodesic_sphere(1.0, 1);
  export_mesh(m, MeshFormat::Obj3, dir_ / "m.obj");
  int v = 0, f = 0, lo = 1 << 30, hi = 0;
  for (const std::string& l : lines_of(dir_ / "m.obj")) {
    std::istringstream ss(l);
    std::string tag;
    ss >> tag;
    if (tag == "v") ++v;
    if (tag == "f") {
      ++f;
      for (int i = 0, k; i < 3; ++i) {
        ss >> k;
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
    }
  }
  EXPECT_EQ(v, static_cast<int>(m.vertex_count()));
  EXPECT_EQ(f, static_cast<int>(m.triangle_count()));
  EXPECT_EQ(lo, 1);
  EXPECT_EQ(hi, static_cast<int>(m.vertex_count()));
}

TEST_F(IoTest, PoleAvoidsVertices) {
  EXPECT_EQ(choose_projection_pole(make_geodesic_sphere(1.0, 1)), Vec4(-1, 0, 0, 0));
  // A tetrahedron with a vertex at -e0 forces the next candidate.
  const std::vector<S3Point> verts{S3Point::normalized(Vec4(-1, 0, 0, 0)), S3Point::normalized(Vec4(0, 1, 0, 0)),
                                   S3Point::normalized(Vec4(0, 0, 1, 0)),
                                   S3Point::normalized(Vec4(0.2, -1, -1, 0.3))};
  const SurfaceMesh tet(verts, {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}});
  EXPECT_EQ(choose_projection_pole(tet), Vec4(1, 0, 0, 0));
  const Vec3 y = stereographic(Vec4(0, 1, 0, 0), Vec4(-1, 0, 0, 0));
  EXPECT_LT((y - Vec3(1, 0, 0)).norm(), 1e-15);
}

TEST_F(IoTest, VtkScalarsRoundTripCurvature) {
  const SurfaceMesh m = make_perturbed_sphere(1.0, 2, 0.02, 9);
  const CurvatureData c = estimate_curvature(m);
  export_mesh(m, MeshFormat::Vtk, dir_ / "m.vtk", &c);
  const auto lines = lines_of(dir_ / "m.vtk");
  EXPECT_EQ(lines[0], "# vtk DataFile Version 3.0");
  std::size_t i = 0;
  while (i < lines.size() && lines[i] != "SCALARS G double 1") ++i;
  ASSERT_LT(i + 2 + m.vertex_count(), lines.size());
  double g_min = 1e300;
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    const double g = std::stod(lines[i + 2 + v]);
    ASSERT_EQ(g, c.G[v]);
    g_min = std::min(g_min, g);
  }
  EXPECT_EQ(g_min, *std::min_element(c.G.begin(), c.G.end()));
  // without curvature the exporter re-estimates and writes the same numbers
  export_mesh(m, MeshFormat::Vtk, dir_ / "n.vtk");
  EXPECT_EQ(lines_of(dir_ / "n.vtk"), lines);
}

TEST_F(IoTest, FormatNames) {
  EXPECT_EQ(parse_mesh_format("vtk"), MeshFormat::Vtk);
  EXPECT_STREQ(to_string(MeshFormat::Obj3), "obj3");
  EXPECT_THROW(parse_mesh_format("ply"), IoError);
}

TEST_F(IoTest, CurveCsv) {
  const S2Curve c = make_latitude_circle(0.9, 32);
  write_curve_csv(c, dir_ / "c.csv");
  const S2Curve back = read_curve_csv(dir_ / "c.csv");
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(back[i].coords(), c[i].coords());
  EXPECT_EQ(lines_of(dir_ / "c.csv").front(), "x,y,z");
  EXPECT_THROW(read_points_csv(write("bad.csv", "x,y,z\n1,1,0\n")), IoError);
  EXPECT_THROW(read_points_csv(write("bad2.csv", "x,y,z\n1,zero,0\n")), IoError);
}

TEST_F(IoTest, TrajectoryCsvLayout) {
  TrajectoryRow a, b;
  a.report.min_G = 1.5;
  b.t = 0.25;
  b.report.epsilon_star = kEpsilonUnbounded;
  write_trajectory_csv({a, b}, StopReason::Extinct, dir_ / "t.csv");
  const auto l = lines_of(dir_ / "t.csv");
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "t,min_G,max_A2,max_speed,area,epsilon_star,flags");
  EXPECT_EQ(l[1].rfind("0,1.5,", 0), 0u) << l[1];
  EXPECT_EQ(l[1].find("stop="), std::string::npos);
  EXPECT_NE(l[2].find("inf"), std::string::npos);
  EXPECT_NE(l[2].find(";stop=Extinct"), std::string::npos);
}

TEST(ConfigParse, SectionsAndEntries) {
  std::istringstream in("# comment\n; also\n\n[scenario a]\nx = 1\ny=two words \n[scenario b]\n");
  const ConfigFile f = parse_config(in, "mem.cfg");
  ASSERT_EQ(f.sections.size(), 2u);
  EXPECT_EQ(f.sections[0].name, "a");
  EXPECT_EQ(f.sections[0].entries.at("y").value, "two words");
  EXPECT_EQ(f.sections[0].entries.at("y").line, 6);
  EXPECT_TRUE(f.sections[1].entries.empty());
}

void expect_config_error(const std::string& text, const std::string& fragment) {
  std::istringstream in(text);
  try {
    parse_config(in, "mem.cfg");
    FAIL() << "accepted: " << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(ConfigParse, SyntaxErrorsCarryLineNumbers) {
  expect_config_error("x = 1\n", "mem.cfg:1: entry 'x' outside");
  expect_config_error("[scenario a]\n\nnot an entry\n", "mem.cfg:3:");
  expect_config_error("[scenario a\n", "mem.cfg:1: unterminated");
  expect_config_error("[scenario]\n", "needs a kind and a name");
  expect_config_error("[scenario a]\nx = 1\nx = 2\n", "mem.cfg:3: duplicate key 'x' (first set on line 2)");
  expect_config_error("[scenario a]\n[scenario a]\n", "mem.cfg:2: duplicate scenario 'a'");
}

TEST(ConfigParse, TypedReaders) {
  std::istringstream in("[s t]\nd = 0.5\ni = 12\nb = yes\nl = 1, 2.5 ,3\nbad = 1x\n");
  const ConfigFile f = parse_config(in, "mem.cfg");
  SectionReader r(f.sections[0], f.path);
  EXPECT_EQ(r.get_double("d", 0), 0.5);
  EXPECT_EQ(r.get_int("i", 0), 12);
  EXPECT_TRUE(r.get_bool("b", false));
  EXPECT_EQ(r.get_doubles("l"), (std::vector<double>{1, 2.5, 3}));
  EXPECT_EQ(r.get_double("absent", 7), 7);
  try {
    r.get_double("bad", 0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("mem.cfg:6: bad: expected a number"), std::string::npos) << e.what();
  }
  r.reject_unused();
}

TEST_F(ConfigTest, EmptyFileHasNoScenarios) {
  EXPECT_TRUE(load_scenarios(write("e.cfg", "# nothing\n")).empty());
  EXPECT_THROW(load_scenarios(dir_ / "absent.cfg"), ConfigError);
}

TEST_F(ConfigTest, ScenarioValidation) {
  auto err = [&](const std::string& body) -> std::string {
    try {
      load_scenarios(write("s.cfg", "[scenario s]\n" + body));
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(err("surface = sphere\namplitude = 0.02\n").find("s.cfg:3: amplitude: a seed is required"),
            std::string::npos);
  EXPECT_NE(err("surface = sphere\nradius = 4\n").find("s.cfg:3: radius"), std::string::npos);
  EXPECT_NE(err("surface = cube\n").find("s.cfg:2: surface"), std::string::npos);
  EXPECT_NE(err("surface = sphere\nspeeed = mcf\n").find("s.cfg:3: speeed: key is unknown"), std::string::npos);
  EXPECT_NE(err("surface = sphere\nspeed = mcff\n").find("unknown speed"), std::string::npos);
  EXPECT_NE(err("surface = clifford_torus\nnu = 4\n").find("nu: must be >= 8"), std::string::npos);
  EXPECT_NE(err("kind = curve\ncurve = latitude\nsamples = 4\n").find("samples"), std::string::npos);
  EXPECT_NE(err("surface = sphere\nformats = raw4, ply\n").find("formats"), std::string::npos);
  EXPECT_THROW(load_scenarios(write("k.cfg", "[recipe s]\n")), ConfigError);
}

TEST_F(ConfigTest, ScenarioFields) {
  const auto list = load_scenarios(write("ok.cfg",
                                         "[scenario p]\ndescription = perturbed\nsurface = sphere\n"
                                         "amplitude = 0.02\nseed = 3\nspeed = affine_arctan\n"
                                         "speed_params = 0.3, 2.5\nformats = raw4, vtk\ncadence = 10\n"
                                         "[scenario c]\nkind = curve\ncurve = latitude\ncolatitude = 0.5\n"));
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0].description, "perturbed");
  EXPECT_EQ(list[0].surface.seed, std::optional<std::uint64_t>(3));
  EXPECT_EQ(list[0].flow.speed_params, (std::vector<double>{0.3, 2.5}));
  EXPECT_EQ(list[0].exports.formats, (std::vector<MeshFormat>{MeshFormat::Raw4, MeshFormat::Vtk}));
  EXPECT_EQ(list[0].exports.cadence, 10u);
  EXPECT_EQ(list[1].kind, ScenarioKind::Curve);
  EXPECT_EQ(list[1].curve.colatitude, 0.5);
}

TEST(BundledConfig, ListsTheRequiredScenarios) {
  const auto list = load_scenarios(fs::path(S3FLOW_SOURCE_DIR) / "config" / "examples.cfg");
  EXPECT_GE(list.size(), 8u);
  for (const char* name : {"great-sphere-arctan", "sphere-mcf-shrink", "clifford-stationary",
                           "hopf-flat-preservation", "hopf-gaussmap-vs-csf", "perturbed-sphere-theorem1",
                           "latitude-csf", "weiner-check-demo"}) {
    EXPECT_TRUE(std::any_of(list.begin(), list.end(), [&](const Scenario& s) { return s.name == name; })) << name;
  }
}

}  // namespace
}  // namespace s3flow
