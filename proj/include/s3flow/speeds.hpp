#pragma once

// Normal speeds F(kappa1, kappa2) for curvature flows in S^3, the f(H, G)
// decomposition along the zero set of G(k1, k2) = (k1 - k2)^2 - phi(k1 + k2)^2,
// the zeroth-order reaction term Z, and the admissibility bounds on f''/f'.

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace s3flow {

struct SpeedPartials {
  double d1 = 0.0;  // dF/dkappa1
  double d2 = 0.0;  // dF/dkappa2
};

struct SpeedEvaluation {
  double value = 0.0;
  bool in_domain = true;  // false signals a domain warning
};

double speed_mcf(double k1, double k2);

/// arctan k1 + arctan k2 when k1 k2 <= 1, (pi/4)(k1 k2 + 1) when k1 k2 > 1 and
/// k1 + k2 > 0, and the odd reflection -(pi/4)(k1 k2 + 1) when k1 k2 > 1 and
/// k1 + k2 < 0. Lipschitz, monotone and odd.
double speed_arctan(double k1, double k2);
SpeedPartials speed_arctan_partials(double k1, double k2);

struct ConditionFlags {
  bool simons = false;     // |A|^2 < 2
  bool huisken2d = false;  // |A|^2 < (3/4) H^2 + 4/3
  bool okumura = false;    // |A|^2 < H^2 + 2, i.e. 1 + k1 k2 > 0
};

ConditionFlags speed_huisken_monitor(double k1, double k2);

/// Symmetric speed with derivative access. Immutable once built.
class SpeedFunction {
 public:
  using Eval = std::function<double(double, double)>;
  using Partials = std::function<SpeedPartials(double, double)>;
  using Domain = std::function<bool(double, double)>;

  /// `partials` may be empty, in which case central differences with step
  /// 1e-5 * max(1, |kappa|) are used.
  SpeedFunction(std::string name, Eval eval, Partials partials = {}, Domain domain = {});

  static SpeedFunction mcf();
  static SpeedFunction arctan();
  /// C1 + C2 arctan(H / 2).
  static SpeedFunction affine_arctan(double c1, double c2);
  /// f(H) given by a natural cubic spline through (H_i, f_i).
  static SpeedFunction custom_fH(std::vector<std::pair<double, double>> table);

  /// Builds a speed from its configuration name: `mcf`, `arctan`,
  /// `affine_arctan` (C1, C2) or `custom_fH` (H0, f0, H1, f1, ...).
  static SpeedFunction from_name(const std::string& name, std::span<const double> params = {});

  const std::string& name() const { return name_; }
  double operator()(double k1, double k2) const { return eval_(k1, k2); }
  SpeedEvaluation evaluate(double k1, double k2) const;
  SpeedPartials partials(double k1, double k2) const;
  SpeedPartials finite_difference_partials(double k1, double k2) const;
  bool in_domain(double k1, double k2) const { return !domain_ || domain_(k1, k2); }
  bool has_closed_form_partials() const { return static_cast<bool>(partials_); }

 private:
  std::string name_;
  Eval eval_;
  Partials partials_;
  Domain domain_;
};

// f(H) profiles and phi profiles ---------------------------------------------

/// A scalar function of H with its first two derivatives.
struct HProfile {
  std::function<double(double)> f, df, d2f;

  static HProfile affine_arctan(double c1, double c2);  // C1 + C2 arctan(H/2)
  static HProfile mean_curvature();                     // H
  static HProfile cubic();                              // H^3 + H
  static HProfile exponential();                        // e^H
  /// Natural cubic spline through the table (sorted by H internally).
  static HProfile spline(std::vector<std::pair<double, double>> table);
};

/// phi(H) in G = (k1 - k2)^2 - phi(k1 + k2)^2, with two derivatives.
struct PhiProfile {
  std::function<double(double)> phi, dphi, d2phi;

  static PhiProfile pinched();  // sqrt(4 + H^2)
  static PhiProfile constant(double c);
};

/// G(k1, k2) = (k1 - k2)^2 - phi(k1 + k2)^2. For phi = sqrt(4 + H^2) this is
/// -4 (1 + k1 k2).
double g_form(const PhiProfile& phi, double k1, double k2);

/// Speed written as f(H, G) with G = g_form(phi, k1, k2).
struct HGSpeed {
  std::function<double(double, double)> f, f_H, f_G;

  /// f(H, G) = profile(H).
  static HGSpeed from_profile(const HProfile& profile);
};

struct ZTerm {
  double form_a = 0.0;  // F (G^1 (1 + k1^2) + G^2 (1 + k2^2)) + (1 + k1 k2)(k2 - k1)(G^1 F^2 - F^1 G^2)
  double form_b = 0.0;  // G (f H + f_H phi^2)
  /// G (f H + f_H (k1 - k2)^2): the exact reduction of form_a when
  /// phi phi' = H. Coincides with form_b on {G = 0}.
  double form_b_exact = 0.0;
  double g = 0.0;       // g_form at the point
  /// Both dG/dkappa_i vanish (umbilic point with phi' = 0): the (H, G)
  /// coordinates are singular and the forms are not comparable there.
  bool singular = false;
};

ZTerm z_term(const HGSpeed& f, const PhiProfile& phi, double k1, double k2);

// Admissibility -------------------------------------------------------------

struct AdmissibilityBounds {
  double lower = 0.0;  // phi''/(1 + phi') - (1 + phi')/phi, -inf when phi' = -1
  double upper = 0.0;  // (1 - phi')/phi - phi''/(1 - phi'), +inf when phi' = 1
  bool lower_degenerate = false;
  bool upper_degenerate = false;
};

AdmissibilityBounds admissibility_bounds(const PhiProfile& phi, double H);

struct AdmissibilityReport {
  std::vector<double> H;
  std::vector<double> lower, upper, ratio;
  bool verdict = false;
  double worst_margin = 0.0;  // min over samples of min(ratio - lower, upper - ratio)
  bool monotone = true;       // f' > 0 at every sample
  /// ratio == -2H/(4 + H^2) at every sample (the pinched case).
  bool matches_pinched_ratio = false;
  static constexpr double kTolerance = 1e-9;
};

AdmissibilityReport check_admissible(const HProfile& f, const PhiProfile& phi,
                                     std::span<const double> H_samples);

}  // namespace s3flow
