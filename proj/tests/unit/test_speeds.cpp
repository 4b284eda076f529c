#include "s3flow/speeds.hpp"

#include "s3flow/s3core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace s3flow {
namespace {

constexpr double kQuarterPi = kPi / 4.0;

TEST(SpeedsTest, McfValues) {
  EXPECT_EQ(speed_mcf(0, 0), 0.0);
  EXPECT_EQ(speed_mcf(1, -1), 0.0);
  const double c = 1.0 / std::tan(0.7);
  EXPECT_DOUBLE_EQ(speed_mcf(c, c), 2 * c);
}

TEST(SpeedsTest, ArctanValues) {
  EXPECT_EQ(speed_arctan(0, 0), 0.0);
  EXPECT_NEAR(speed_arctan(1, 1), kPi / 2, 1e-15);
  EXPECT_NEAR(std::atan(1.0) + std::atan(1.0), kQuarterPi * 2, 1e-15);
  EXPECT_NEAR(speed_arctan(2, 1), 3 * kPi / 4, 1e-15);
  EXPECT_NEAR(speed_arctan(1, -1), 0.0, 1e-15);
  EXPECT_NEAR(speed_arctan(-2, -1), -3 * kPi / 4, 1e-15);
}

TEST(SpeedsTest, HuiskenMonitor) {
  ConditionFlags f = speed_huisken_monitor(0, 0);
  EXPECT_TRUE(f.simons && f.huisken2d && f.okumura);
  f = speed_huisken_monitor(1, -1);
  EXPECT_FALSE(f.simons);
  EXPECT_FALSE(f.okumura);
  f = speed_huisken_monitor(1.2, 0.5);
  EXPECT_TRUE(f.simons);
  EXPECT_TRUE(f.huisken2d);
  EXPECT_TRUE(f.okumura);
  // |A|^2 = 1.69 and 3/4 H^2 + 4/3 = 3.5008...
  EXPECT_NEAR(0.75 * 1.7 * 1.7 + 4.0 / 3.0, 3.5008, 1e-4);
}

TEST(SpeedsTest, ArctanDomainFlag) {
  const SpeedFunction s = SpeedFunction::arctan();
  EXPECT_TRUE(s.evaluate(1, -1).in_domain);
  EXPECT_FALSE(s.evaluate(2, -1).in_domain);
  EXPECT_NEAR(s.evaluate(2, -1).value, std::atan(2.0) - std::atan(1.0), 1e-15);
}

std::vector<SpeedFunction> builtin_speeds() {
  return {SpeedFunction::mcf(), SpeedFunction::arctan(), SpeedFunction::affine_arctan(0.3, 2.5),
          SpeedFunction::custom_fH({{-4, -3}, {-1, -1}, {0, 0.2}, {2, 1}, {5, 1.5}})};
}

TEST(SpeedsTest, SymmetricAndMonotone) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (const SpeedFunction& s : builtin_speeds()) {
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
      const double a = u(rng), b = u(rng);
      ASSERT_NEAR(s(a, b), s(b, a), 1e-12) << s.name();
      if (!s.in_domain(a, b)) continue;
      const SpeedPartials p = s.partials(a, b);
      ASSERT_GE(p.d1, -1e-12) << s.name() << " " << a << " " << b;
      ASSERT_GE(p.d2, -1e-12) << s.name() << " " << a << " " << b;
      ++checked;
    }
    EXPECT_GT(checked, 1000) << s.name();
  }
}

TEST(SpeedsTest, PartialsMatchCentralDifferences) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-5, 5);
  for (const SpeedFunction& s : builtin_speeds()) {
    if (!s.has_closed_form_partials()) continue;
    for (int i = 0; i < 2000; ++i) {
      const double a = u(rng), b = u(rng);
      if (std::abs(a * b - 1) < 1e-3) continue;  // kink of the arctan speed
      const SpeedPartials p = s.partials(a, b);
      const SpeedPartials q = s.finite_difference_partials(a, b);
      ASSERT_NEAR(p.d1, q.d1, std::max(1e-6, 1e-4 * std::abs(p.d1))) << s.name();
      ASSERT_NEAR(p.d2, q.d2, std::max(1e-6, 1e-4 * std::abs(p.d2))) << s.name();
    }
  }
}

TEST(SpeedsTest, ArctanContinuousAcrossProductBoundary) {
  double jump = 0;
  for (int i = 0; i < 1000; ++i) {
    const double k = std::exp(-4.0 + 8.0 * i / 999.0);
    for (double sign : {1.0, -1.0}) {
      const double a = sign * k, b = sign / k;
      const double inside = speed_arctan(a * (1 - 1e-13), b);
      const double outside = speed_arctan(a * (1 + 1e-13), b);
      jump = std::max(jump, std::abs(inside - outside));
    }
  }
  EXPECT_LE(jump, 1e-9);
}

TEST(SpeedsTest, ArctanIsOdd) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(rng), b = u(rng);
    ASSERT_NEAR(speed_arctan(-a, -b), -speed_arctan(a, b), 1e-14);
  }
}

TEST(SpeedsTest, FromName) {
  EXPECT_EQ(SpeedFunction::from_name("mcf").name(), "mcf");
  const std::vector<double> c{0.3, 2.5};
  const SpeedFunction aff = SpeedFunction::from_name("affine_arctan", c);
  EXPECT_NEAR(aff(1, 1), 0.3 + 2.5 * std::atan(1.0), 1e-15);
  EXPECT_THROW(SpeedFunction::from_name("nope"), std::invalid_argument);
  EXPECT_THROW(SpeedFunction::from_name("affine_arctan", std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(SpeedFunction::from_name("affine_arctan", std::vector<double>{1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(SpeedFunction::from_name("custom_fH", std::vector<double>{0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(SpeedFunction::from_name("custom_fH", std::vector<double>{0, 1, 0, 2}), std::invalid_argument);
}

TEST(SpeedsTest, SplineSpeed) {
  // A natural spline reproduces linear data exactly, and extends it linearly.
  const SpeedFunction lin = SpeedFunction::custom_fH({{2, 1}, {-1, -0.5}, {0, 0}, {4, 2}});
  EXPECT_NEAR(lin(0.3, 0.9), 0.6, 1e-14);
  EXPECT_NEAR(lin(5, 5), 5.0, 1e-12);
  EXPECT_NEAR(lin.partials(1, 1).d1, 0.5, 1e-12);
  // Dense knots of 2 arctan(H/2) track the closed form.
  std::vector<std::pair<double, double>> t;
  for (int i = 0; i <= 400; ++i) {
    const double h = -10 + 0.05 * i;
    t.emplace_back(h, 2 * std::atan(h / 2));
  }
  const SpeedFunction sp = SpeedFunction::custom_fH(t);
  for (double h = -9.5; h < 9.5; h += 0.37) EXPECT_NEAR(sp(h / 2, h / 2), 2 * std::atan(h / 2), 1e-6);
}

TEST(SpeedsTest, GFormPinchedIsIntrinsicCurvature) {
  const PhiProfile phi = PhiProfile::pinched();
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-6, 6);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    ASSERT_NEAR(g_form(phi, a, b), -4 * (1 + a * b), 1e-10 * (1 + a * a + b * b));
  }
}

/// Form A built from central differences of g_form and of F = f(H, G(k1, k2)).
double form_a_oracle(const HGSpeed& f, const PhiProfile& phi, double k1, double k2) {
  const double h = 1e-5;
  auto G = [&](double a, double b) { return g_form(phi, a, b); };
  auto F = [&](double a, double b) { return f.f(a + b, G(a, b)); };
  const double g1 = (G(k1 + h, k2) - G(k1 - h, k2)) / (2 * h);
  const double g2 = (G(k1, k2 + h) - G(k1, k2 - h)) / (2 * h);
  const double f1 = (F(k1 + h, k2) - F(k1 - h, k2)) / (2 * h);
  const double f2 = (F(k1, k2 + h) - F(k1, k2 - h)) / (2 * h);
  return F(k1, k2) * (g1 * (1 + k1 * k1) + g2 * (1 + k2 * k2)) +
         (1 + k1 * k2) * (k2 - k1) * (g1 * f2 - f1 * g2);
}

TEST(ZTermTest, FormAMatchesDifferenceOracle) {
  const HGSpeed f = HGSpeed::from_profile(HProfile::affine_arctan(0.3, 2.5));
  const PhiProfile phi = PhiProfile::pinched();
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), b = u(rng);
    const ZTerm z = z_term(f, phi, a, b);
    const double oracle = form_a_oracle(f, phi, a, b);
    ASSERT_NEAR(z.form_a, oracle, 1e-6 * std::max(1.0, std::abs(oracle)));
    ASSERT_NEAR(z.form_a, z.form_b_exact, 1e-8 * std::max(1.0, std::abs(z.form_a)));
  }
}

TEST(ZTermTest, FrozenUmbilicValues) {
  // f = 2 arctan(H/2) at (1, 1): G = -8 from the phi form, H = 2, f = pi/2,
  // f_H = 1/2, phi^2 = 8.
  const HGSpeed f = HGSpeed::from_profile(HProfile::affine_arctan(0.0, 2.0));
  const ZTerm z = z_term(f, PhiProfile::pinched(), 1, 1);
  EXPECT_NEAR(z.g, -8.0, 1e-14);
  EXPECT_NEAR(z.form_a, -8 * kPi, 1e-12);
  EXPECT_NEAR(z.form_b, -8 * (kPi + 4), 1e-12);
  EXPECT_NEAR(z.form_b_exact, -8 * kPi, 1e-12);
  EXPECT_FALSE(z.singular);
}

TEST(ZTermTest, PrintedFormsDisagreeOffTheZeroSet) {
  // Recorded behaviour: away from G = 0 the printed simplified form differs
  // from form A by G f_H (phi^2 - (k1 - k2)^2) = -G^2 f_H.
  const HGSpeed f = HGSpeed::from_profile(HProfile::affine_arctan(0.0, 2.0));
  const ZTerm z = z_term(f, PhiProfile::pinched(), 3, -0.8);
  const double fh = 4.0 / (4.0 + 2.2 * 2.2);
  EXPECT_GT(z.g, 0.0);
  EXPECT_NEAR(z.form_b - z.form_a, -z.g * z.g * fh, 1e-9 * z.g * z.g);
}

TEST(ZTermTest, VanishesOnZeroSet) {
  const PhiProfile phi = PhiProfile::pinched();
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-2, 2);
  std::bernoulli_distribution sign;
  for (const HProfile& p : {HProfile::affine_arctan(0.3, 2.5), HProfile::affine_arctan(-1, 0.7)}) {
    const HGSpeed f = HGSpeed::from_profile(p);
    EXPECT_NEAR(z_term(f, phi, 1, -1).form_a, 0.0, 1e-10);
    for (int i = 0; i < 1000; ++i) {
      const double a = (sign(rng) ? 1 : -1) * std::exp(u(rng));
      const ZTerm z = z_term(f, phi, a, -1 / a);
      ASSERT_LE(std::abs(z.form_a), 1e-10) << a;
      ASSERT_LE(std::abs(z.form_b), 1e-10) << a;
    }
  }
}

TEST(ZTermTest, UmbilicSecondSummandVanishes) {
  const HGSpeed f = HGSpeed::from_profile(HProfile::mean_curvature());
  const PhiProfile phi = PhiProfile::pinched();
  for (double k : {-2.0, -0.3, 0.0, 0.5, 3.0}) {
    const ZTerm z = z_term(f, phi, k, k);
    const double g1 = -2 * phi.phi(2 * k) * phi.dphi(2 * k);
    EXPECT_NEAR(z.form_a, f.f(2 * k, z.g) * g1 * 2 * (1 + k * k), 1e-12 * (1 + std::abs(z.form_a)));
  }
  EXPECT_TRUE(z_term(f, PhiProfile::constant(1.0), 0.4, 0.4).singular);
  EXPECT_FALSE(z_term(f, PhiProfile::constant(1.0), 0.4, 0.3).singular);
}

TEST(AdmissibilityTest, BoundExamples) {
  const PhiProfile phi = PhiProfile::pinched();
  AdmissibilityBounds b = admissibility_bounds(phi, 0);
  EXPECT_NEAR(b.lower, 0, 1e-15);
  EXPECT_NEAR(b.upper, 0, 1e-15);
  b = admissibility_bounds(phi, 2);
  EXPECT_NEAR(b.lower, -0.5, 1e-15);
  EXPECT_NEAR(b.upper, -0.5, 1e-15);
  b = admissibility_bounds(PhiProfile::constant(2.0), 0.7);
  EXPECT_DOUBLE_EQ(b.lower, -0.5);
  EXPECT_DOUBLE_EQ(b.upper, 0.5);
  EXPECT_FALSE(b.lower_degenerate || b.upper_degenerate);
}

TEST(AdmissibilityTest, SlopeOneIsUnbounded) {
  PhiProfile phi{[](double h) { return 1 + h; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
  const AdmissibilityBounds b = admissibility_bounds(phi, 1.0);
  EXPECT_TRUE(b.upper_degenerate);
  EXPECT_EQ(b.upper, std::numeric_limits<double>::infinity());
  EXPECT_FALSE(b.lower_degenerate);
  EXPECT_NEAR(b.lower, -1.0, 1e-15);
}

TEST(AdmissibilityTest, PinchedBoundsCoincide) {
  const PhiProfile phi = PhiProfile::pinched();
  for (int i = 0; i < 10000; ++i) {
    const double h = -50 + 100.0 * i / 9999.0;
    const AdmissibilityBounds b = admissibility_bounds(phi, h);
    ASSERT_NEAR(b.lower, -2 * h / (4 + h * h), 1e-12);
    ASSERT_NEAR(b.upper, -2 * h / (4 + h * h), 1e-12);
  }
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
  return g;
}

TEST(AdmissibilityTest, ArctanFamilyPasses) {
  const std::vector<double> hs = grid(-10, 10, 2001);
  const AdmissibilityReport r = check_admissible(HProfile::affine_arctan(0, 2), PhiProfile::pinched(), hs);
  EXPECT_TRUE(r.verdict);
  EXPECT_TRUE(r.monotone);
  EXPECT_TRUE(r.matches_pinched_ratio);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double h = hs[i];
    const double fp = 4 / (4 + h * h), fpp = -8 * h / ((4 + h * h) * (4 + h * h));
    ASSERT_NEAR(r.ratio[i], fpp / fp, 1e-9);
  }
  EXPECT_TRUE(check_admissible(HProfile::affine_arctan(0.3, 2.5), PhiProfile::pinched(), hs).verdict);
}

TEST(AdmissibilityTest, OtherProfilesFail) {
  const std::vector<double> hs = grid(-10, 10, 2001);
  const PhiProfile phi = PhiProfile::pinched();
  for (const HProfile& p : {HProfile::mean_curvature(), HProfile::cubic(), HProfile::exponential()}) {
    const AdmissibilityReport r = check_admissible(p, phi, hs);
    EXPECT_FALSE(r.verdict);
    EXPECT_LT(r.worst_margin, 0.0);
  }
  const std::vector<double> at2{2.0};
  const AdmissibilityReport r = check_admissible(HProfile::mean_curvature(), phi, at2);
  EXPECT_EQ(r.ratio[0], 0.0);
  EXPECT_NEAR(r.upper[0], -0.5, 1e-15);
  EXPECT_FALSE(r.verdict);
}

}  // namespace
}  // namespace s3flow
